//! On-demand placement of a single UAV base station.
//!
//! A placement is a horizontal center and a coverage radius at a fixed
//! altitude. Users inside the disk are admitted at their demanded rate
//! until the UAV capacity is exhausted. Three solvers share the same
//! candidate evaluation:
//!
//! * [`density_aware_placement`]: iterative circumcircle search driven by
//!   the spread of user distances around the current center, `O(mN)`.
//! * [`brute_force_placement`]: exhaustive enumeration of every circle
//!   determined by up to three users; the reference oracle for small `N`.
//! * [`max_coverage_placement`]: fixed-radius disk covering the most users,
//!   sharing the capacity equally with no per-user rate floor.

use std::cmp::Ordering;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{self, ChannelEnv, ChannelError};
use crate::geometry::{circumcircle, diameter_circle, distance, Circle, Point2D};

/// Resampling attempts for a non-degenerate seed triple.
pub const MAX_SEED_ATTEMPTS: usize = 100;

/// Iterations without improvement before the search re-seeds.
pub const STALL_LIMIT: usize = 3;

/// Largest population accepted by [`brute_force_placement`].
pub const BRUTE_FORCE_MAX_USERS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlacementError {
    #[error("need at least {needed} users, got {got}")]
    TooFewUsers { needed: usize, got: usize },
    #[error("brute force is limited to {limit} users, got {got}")]
    TooManyUsers { limit: usize, got: usize },
    #[error("no feasible candidate found")]
    NoFeasibleCandidate,
    #[error("could not sample a non-degenerate user triple in {0} attempts")]
    DegenerateSampling(usize),
    #[error("iteration count must be at least 1")]
    ZeroIterations,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("noise density must be finite")]
    NonFiniteNoise,
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// A ground user with its guaranteed-rate demand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct User {
    pub position: Point2D,
    pub demand_bps: f64,
}

impl User {
    pub fn new(x: f64, y: f64, demand_bps: f64) -> Self {
        Self { position: Point2D::new(x, y), demand_bps }
    }
}

/// Order in which covered users are admitted when their total demand
/// exceeds the capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "seed")]
pub enum AdmissionPolicy {
    #[default]
    NearestFirst,
    RandomSeeded(u64),
}

/// How the total bandwidth is divided among served users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandwidthSplit {
    /// `b_i = B * c_i / C`, so every user sees the same spectral efficiency.
    #[default]
    Proportional,
    /// `b_i = B / |served|`.
    Equal,
}

/// Raw UAV parameters before validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UavParams {
    pub altitude_m: f64,
    pub capacity_bps: f64,
    pub bandwidth_hz: f64,
    pub noise_density_dbm_hz: f64,
    pub loss_budget_db: f64,
    pub env: ChannelEnv,
    pub admission: AdmissionPolicy,
    pub bandwidth_split: BandwidthSplit,
}

impl Default for UavParams {
    fn default() -> Self {
        Self {
            altitude_m: 30.0,
            capacity_bps: 2.0e8,
            bandwidth_hz: 2.0e7,
            noise_density_dbm_hz: -174.0,
            loss_budget_db: 100.0,
            env: ChannelEnv::SUBURBAN,
            admission: AdmissionPolicy::NearestFirst,
            bandwidth_split: BandwidthSplit::Proportional,
        }
    }
}

/// Validated UAV configuration with its maximum coverage radius resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "UavParams", into = "UavParams")]
pub struct UavConfig {
    params: UavParams,
    r_max: f64,
}

impl UavConfig {
    pub fn new(params: UavParams) -> Result<Self, ConfigError> {
        let positive = [
            ("altitude", params.altitude_m),
            ("capacity", params.capacity_bps),
            ("bandwidth", params.bandwidth_hz),
            ("loss budget", params.loss_budget_db),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if !params.noise_density_dbm_hz.is_finite() {
            return Err(ConfigError::NonFiniteNoise);
        }
        params.env.validate()?;
        let r_max = channel::max_radius(params.altitude_m, params.loss_budget_db, &params.env)?;
        Ok(Self { params, r_max })
    }

    pub fn params(&self) -> &UavParams {
        &self.params
    }

    /// Largest radius whose average path loss stays within the budget.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn altitude(&self) -> f64 {
        self.params.altitude_m
    }

    pub fn capacity(&self) -> f64 {
        self.params.capacity_bps
    }

    pub fn bandwidth(&self) -> f64 {
        self.params.bandwidth_hz
    }

    pub fn noise_density_dbm_hz(&self) -> f64 {
        self.params.noise_density_dbm_hz
    }

    pub fn env(&self) -> &ChannelEnv {
        &self.params.env
    }
}

impl Default for UavConfig {
    fn default() -> Self {
        Self::new(UavParams::default()).expect("default parameters are valid")
    }
}

impl TryFrom<UavParams> for UavConfig {
    type Error = ConfigError;

    fn try_from(params: UavParams) -> Result<Self, Self::Error> {
        Self::new(params)
    }
}

impl From<UavConfig> for UavParams {
    fn from(config: UavConfig) -> Self {
        config.params
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Proposed,
    Baseline,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Baseline => "baseline",
            Method::Oracle => "oracle",
        }
    }

    /// Whether served users must receive at least their demanded rate.
    pub fn enforces_demand(&self) -> bool {
        !matches!(self, Method::Baseline)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "proposed" => Ok(Method::Proposed),
            "baseline" => Ok(Method::Baseline),
            "oracle" => Ok(Method::Oracle),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Rate and bandwidth granted to one served user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub user: usize,
    pub rate_bps: f64,
    pub bandwidth_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub method: Method,
    pub center: Point2D,
    pub radius_m: f64,
    /// Served users in ascending index order.
    pub served: Vec<Allocation>,
}

impl Placement {
    pub fn served_count(&self) -> usize {
        self.served.len()
    }

    pub fn served_indices(&self) -> Vec<usize> {
        self.served.iter().map(|a| a.user).collect()
    }

    pub fn circle(&self) -> Circle {
        Circle::new(self.center, self.radius_m)
    }
}

/// One evaluated circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub center: Point2D,
    pub radius: f64,
    pub served_count: usize,
    pub feasible: bool,
    /// Admitted users in admission order.
    pub served: Vec<usize>,
}

impl Candidate {
    /// Total order used to pick the best candidate: more users served, then
    /// smaller radius, then the lexicographically smaller center.
    pub fn rank(&self, other: &Candidate) -> Ordering {
        other
            .served_count
            .cmp(&self.served_count)
            .then(self.radius.total_cmp(&other.radius))
            .then(self.center.x.total_cmp(&other.center.x))
            .then(self.center.y.total_cmp(&other.center.y))
    }

    fn beats(&self, other: &Candidate) -> bool {
        self.rank(other) == Ordering::Less
    }
}

/// Evaluates a circle against the placement constraints.
///
/// Covered users are admitted at exactly their demanded rate in the order
/// given by the configured [`AdmissionPolicy`], stopping at the first user
/// whose demand no longer fits in the remaining capacity. The candidate is
/// feasible when its radius does not exceed `r_max`.
pub fn evaluate_candidate(center: Point2D, radius: f64, users: &[User], config: &UavConfig) -> Candidate {
    let mut covered: Vec<(f64, usize)> = users
        .iter()
        .enumerate()
        .filter_map(|(i, u)| {
            let d = distance(&center, &u.position);
            (d <= radius).then_some((d, i))
        })
        .collect();

    let capacity = config.capacity();
    let total: f64 = covered.iter().map(|&(_, i)| users[i].demand_bps).sum();
    if total > capacity {
        match config.params.admission {
            AdmissionPolicy::NearestFirst => {
                let min_demand = covered
                    .iter()
                    .map(|&(_, i)| users[i].demand_bps)
                    .fold(f64::INFINITY, f64::min);
                // No admitted prefix is longer than floor(C / min demand).
                let bound = ((capacity / min_demand).floor() as usize).saturating_add(1);
                let by_distance = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
                if bound < covered.len() {
                    covered.select_nth_unstable_by(bound, by_distance);
                    covered.truncate(bound);
                }
                covered.sort_unstable_by(by_distance);
            }
            AdmissionPolicy::RandomSeeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                covered.shuffle(&mut rng);
            }
        }
    }

    let mut used = 0.0;
    let mut served = Vec::new();
    for &(_, i) in &covered {
        let demand = users[i].demand_bps;
        if used + demand > capacity {
            break;
        }
        used += demand;
        served.push(i);
    }

    Candidate {
        center,
        radius,
        served_count: served.len(),
        feasible: radius <= config.r_max() && center.is_finite(),
        served,
    }
}

fn allocate(candidate: &Candidate, users: &[User], config: &UavConfig, method: Method) -> Placement {
    let n = candidate.served.len() as f64;
    let mut served: Vec<Allocation> = candidate
        .served
        .iter()
        .map(|&i| {
            let rate = users[i].demand_bps;
            let bandwidth = match config.params.bandwidth_split {
                BandwidthSplit::Proportional => config.bandwidth() * rate / config.capacity(),
                BandwidthSplit::Equal => config.bandwidth() / n,
            };
            Allocation { user: i, rate_bps: rate, bandwidth_hz: bandwidth }
        })
        .collect();
    served.sort_by_key(|a| a.user);
    Placement { method, center: candidate.center, radius_m: candidate.radius, served }
}

/// A broken placement constraint.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("radius {radius} m exceeds maximum {r_max} m")]
    RadiusExceedsMax { radius: f64, r_max: f64 },
    #[error("allocated sum rate {total} bps exceeds capacity {capacity} bps")]
    CapacityExceeded { total: f64, capacity: f64 },
    #[error("user {user} allocated {rate} bps below its demand {demand} bps")]
    RateBelowDemand { user: usize, rate: f64, demand: f64 },
    #[error("user {user} is {distance} m from the center, outside radius {radius} m")]
    NotCovered { user: usize, distance: f64, radius: f64 },
    #[error("allocated bandwidth {total} Hz exceeds {bandwidth} Hz")]
    BandwidthExceeded { total: f64, bandwidth: f64 },
    #[error("served list references unknown user {0}")]
    UnknownUser(usize),
    #[error("user {0} is served more than once")]
    DuplicateUser(usize),
    #[error("non-finite or negative value in placement")]
    NonFinite,
}

/// Relative slack on summed allocations, covering rounding in `C / n` splits.
const SUM_RTOL: f64 = 1.0e-9;

/// Checks a placement against every constraint of the placement problem.
///
/// The per-user rate floor is skipped for [`Method::Baseline`], which
/// shares capacity equally without a floor.
pub fn validate(placement: &Placement, users: &[User], config: &UavConfig) -> Result<(), Violation> {
    let radius = placement.radius_m;
    if !(placement.center.is_finite() && radius.is_finite() && radius >= 0.0) {
        return Err(Violation::NonFinite);
    }
    if radius > config.r_max() {
        return Err(Violation::RadiusExceedsMax { radius, r_max: config.r_max() });
    }
    let mut seen = vec![false; users.len()];
    let (mut rate_sum, mut band_sum) = (0.0, 0.0);
    for a in &placement.served {
        let user = users.get(a.user).ok_or(Violation::UnknownUser(a.user))?;
        if std::mem::replace(&mut seen[a.user], true) {
            return Err(Violation::DuplicateUser(a.user));
        }
        if !(a.rate_bps.is_finite() && a.rate_bps >= 0.0 && a.bandwidth_hz.is_finite() && a.bandwidth_hz > 0.0) {
            return Err(Violation::NonFinite);
        }
        if placement.method.enforces_demand() && a.rate_bps < user.demand_bps {
            return Err(Violation::RateBelowDemand { user: a.user, rate: a.rate_bps, demand: user.demand_bps });
        }
        let d = distance(&placement.center, &user.position);
        if d > radius {
            return Err(Violation::NotCovered { user: a.user, distance: d, radius });
        }
        rate_sum += a.rate_bps;
        band_sum += a.bandwidth_hz;
    }
    if rate_sum > config.capacity() * (1.0 + SUM_RTOL) {
        return Err(Violation::CapacityExceeded { total: rate_sum, capacity: config.capacity() });
    }
    if band_sum > config.bandwidth() * (1.0 + SUM_RTOL) {
        return Err(Violation::BandwidthExceeded { total: band_sum, bandwidth: config.bandwidth() });
    }
    Ok(())
}

/// Result of a density-aware search together with its progress history.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub placement: Placement,
    /// Best served count over all stored candidates after each iteration.
    pub best_by_iteration: Vec<usize>,
    /// Number of candidates stored as feasible.
    pub stored: usize,
    pub reseeds: usize,
}

#[derive(Debug, Clone, Copy)]
struct Triple {
    users: [usize; 3],
    circle: Circle,
}

fn triple_circle(users: &[User], mut ids: [usize; 3]) -> Option<Triple> {
    // Fixed point order makes the circle bit-identical wherever the same
    // triple shows up.
    ids.sort_unstable();
    let [a, b, c] = ids;
    circumcircle(&users[a].position, &users[b].position, &users[c].position)
        .ok()
        .map(|circle| Triple { users: ids, circle })
}

fn sample_triple(users: &[User], rng: &mut ChaCha8Rng) -> Option<Triple> {
    (0..MAX_SEED_ATTEMPTS).find_map(|_| {
        let picked = index::sample(rng, users.len(), 3);
        triple_circle(users, [picked.index(0), picked.index(1), picked.index(2)])
    })
}

struct Archive {
    best: Option<Candidate>,
    stored: usize,
}

impl Archive {
    /// Stores the candidate if it is feasible and serves someone; returns
    /// whether it became the new best.
    fn offer(&mut self, candidate: &Candidate) -> bool {
        if !candidate.feasible || candidate.served_count == 0 {
            return false;
        }
        self.stored += 1;
        let improves = self.best.as_ref().is_none_or(|b| candidate.beats(b));
        if improves {
            self.best = Some(candidate.clone());
        }
        improves
    }

    fn best_count(&self) -> usize {
        self.best.as_ref().map_or(0, |b| b.served_count)
    }
}

/// Density-aware circumcircle search.
///
/// Starts from the circumcircle of three random users. Each iteration
/// measures every user's distance from the current center, picks the user
/// whose distance is nearest the midpoint of the distance range, and
/// evaluates the four circumcircles formed by three of the four users. The
/// best of those becomes the current circle; after [`STALL_LIMIT`]
/// iterations without a new overall best the search restarts from a fresh
/// random triple. Returns the best stored candidate.
pub fn density_aware_placement(
    users: &[User],
    config: &UavConfig,
    iterations: usize,
    seed: u64,
) -> Result<Placement, PlacementError> {
    density_aware_trace(users, config, iterations, seed).map(|t| t.placement)
}

/// [`density_aware_placement`] returning the search history as well.
pub fn density_aware_trace(
    users: &[User],
    config: &UavConfig,
    iterations: usize,
    seed: u64,
) -> Result<SearchTrace, PlacementError> {
    if users.len() < 3 {
        return Err(PlacementError::TooFewUsers { needed: 3, got: users.len() });
    }
    if iterations == 0 {
        return Err(PlacementError::ZeroIterations);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = sample_triple(users, &mut rng).ok_or(PlacementError::DegenerateSampling(MAX_SEED_ATTEMPTS))?;

    let mut archive = Archive { best: None, stored: 0 };
    archive.offer(&evaluate_candidate(current.circle.center, current.circle.radius, users, config));

    let mut distances = vec![0.0; users.len()];
    let mut best_by_iteration = Vec::with_capacity(iterations);
    let mut stall = 0;
    let mut reseeds = 0;

    for _ in 0..iterations {
        let center = current.circle.center;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (d, u) in distances.iter_mut().zip(users) {
            *d = distance(&center, &u.position);
            lo = lo.min(*d);
            hi = hi.max(*d);
        }
        let target = 0.5 * (lo + hi);
        let fourth = distances
            .iter()
            .enumerate()
            .filter(|(i, _)| !current.users.contains(i))
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()).then(a.0.cmp(&b.0)))
            .map(|(i, _)| i);

        let mut improved = false;
        let mut next: Option<(Candidate, Triple)> = None;
        if let Some(u4) = fourth {
            let [u1, u2, u3] = current.users;
            for ids in [[u1, u2, u3], [u1, u2, u4], [u1, u3, u4], [u2, u3, u4]] {
                let Some(triple) = triple_circle(users, ids) else { continue };
                let candidate = evaluate_candidate(triple.circle.center, triple.circle.radius, users, config);
                improved |= archive.offer(&candidate);
                let replace = match &next {
                    None => true,
                    Some((held, _)) => match (candidate.feasible, held.feasible) {
                        (true, false) => true,
                        (false, true) => false,
                        (true, true) => candidate.beats(held),
                        (false, false) => candidate.radius < held.radius,
                    },
                };
                if replace {
                    next = Some((candidate, triple));
                }
            }
        }

        stall = if improved { 0 } else { stall + 1 };
        match next {
            Some((_, triple)) if stall < STALL_LIMIT => current = triple,
            _ => {
                stall = 0;
                if let Some(fresh) = sample_triple(users, &mut rng) {
                    reseeds += 1;
                    current = fresh;
                    archive.offer(&evaluate_candidate(current.circle.center, current.circle.radius, users, config));
                }
            }
        }
        best_by_iteration.push(archive.best_count());
    }

    let stored = archive.stored;
    let best = archive.best.ok_or(PlacementError::NoFeasibleCandidate)?;
    Ok(SearchTrace {
        placement: allocate(&best, users, config, Method::Proposed),
        best_by_iteration,
        stored,
        reseeds,
    })
}

/// Exhaustive search over every circle defined by one, two or three users.
///
/// Any set of users that fits in a disk of radius `r_max` has its minimum
/// enclosing circle in this family, so the result is optimal for equal
/// demands. Radii above `r_max` are clipped to `r_max`. Runs in `O(N^4)`.
pub fn brute_force_placement(users: &[User], config: &UavConfig) -> Result<Placement, PlacementError> {
    if users.is_empty() {
        return Err(PlacementError::TooFewUsers { needed: 1, got: 0 });
    }
    if users.len() > BRUTE_FORCE_MAX_USERS {
        return Err(PlacementError::TooManyUsers { limit: BRUTE_FORCE_MAX_USERS, got: users.len() });
    }
    let n = users.len();
    let mut archive = Archive { best: None, stored: 0 };
    let mut consider = |circle: Circle| {
        let radius = circle.radius.min(config.r_max());
        archive.offer(&evaluate_candidate(circle.center, radius, users, config));
    };
    for i in 0..n {
        consider(Circle::new(users[i].position, 0.0));
        for j in i + 1..n {
            consider(diameter_circle(&users[i].position, &users[j].position));
            for k in j + 1..n {
                if let Some(t) = triple_circle(users, [i, j, k]) {
                    consider(t.circle);
                }
            }
        }
    }
    let best = archive.best.ok_or(PlacementError::NoFeasibleCandidate)?;
    Ok(allocate(&best, users, config, Method::Oracle))
}

/// Shrink factor applied to the sweep radius so users placed on the sweep
/// boundary stay strictly inside the full-radius disk.
const SWEEP_SHRINK: f64 = 1.0 - 1.0e-9;

/// Disk of radius `r_max` covering the most users, with the capacity
/// shared equally among everyone covered.
///
/// Centers are found with an angular sweep: for each user, the disk is
/// rotated around that user on its boundary and the count of users entering
/// and leaving is tracked. Each user's own position is also tried as a
/// center. `O(N^2 log N)`.
pub fn max_coverage_placement(users: &[User], config: &UavConfig) -> Result<Placement, PlacementError> {
    if users.is_empty() {
        return Err(PlacementError::TooFewUsers { needed: 1, got: 0 });
    }
    let radius = config.r_max();
    let sweep_radius = radius * SWEEP_SHRINK;
    let count_at = |c: &Point2D| users.iter().filter(|u| distance(c, &u.position) <= radius).count();

    let mut best_center = users[0].position;
    let mut best_count = count_at(&best_center);
    let mut try_center = |c: Point2D| {
        if !c.is_finite() {
            return;
        }
        let count = count_at(&c);
        if count > best_count {
            best_count = count;
            best_center = c;
        }
    };

    let two_pi = std::f64::consts::TAU;
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * users.len());
    for (i, pivot) in users.iter().enumerate() {
        try_center(pivot.position);
        events.clear();
        let mut active = 1i64;
        for (j, other) in users.iter().enumerate() {
            if i == j {
                continue;
            }
            let (dx, dy) = (other.position.x - pivot.position.x, other.position.y - pivot.position.y);
            let d = dx.hypot(dy);
            if d == 0.0 {
                active += 1;
                continue;
            }
            if d > 2.0 * sweep_radius {
                continue;
            }
            let phi = dy.atan2(dx);
            let half = (d / (2.0 * sweep_radius)).min(1.0).acos();
            let enter = (phi - half).rem_euclid(two_pi);
            let exit = (phi + half).rem_euclid(two_pi);
            if enter > exit {
                active += 1;
            }
            events.push((enter, 1));
            events.push((exit, -1));
        }
        if events.is_empty() {
            continue;
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));

        // The count after each event holds on the open arc up to the next one.
        let mut best_arc = (active, 0.5 * events[0].0);
        for (k, &(angle, delta)) in events.iter().enumerate() {
            active += delta as i64;
            let next = events.get(k + 1).map_or(events[0].0 + two_pi, |e| e.0);
            if active > best_arc.0 {
                best_arc = (active, 0.5 * (angle + next));
            }
        }
        let theta = best_arc.1;
        try_center(Point2D::new(
            pivot.position.x + sweep_radius * theta.cos(),
            pivot.position.y + sweep_radius * theta.sin(),
        ));
    }

    let served: Vec<usize> = users
        .iter()
        .enumerate()
        .filter(|(_, u)| distance(&best_center, &u.position) <= radius)
        .map(|(i, _)| i)
        .collect();
    let n = served.len() as f64;
    let share = config.capacity() / n;
    let band = config.bandwidth() / n;
    Ok(Placement {
        method: Method::Baseline,
        center: best_center,
        radius_m: radius,
        served: served
            .into_iter()
            .map(|user| Allocation { user, rate_bps: share, bandwidth_hz: band })
            .collect(),
    })
}
