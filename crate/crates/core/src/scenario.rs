//! User populations and experiment scenarios.
//!
//! Users are drawn over a rectangular region either from a homogeneous
//! Poisson point process or from a Thomas-style cluster process. Every user
//! in a scenario carries the same demand tier.
//!
//! Scenario files are flat `key = value` documents:
//!
//! ```text
//! region_width_m = 600.0
//! region_height_m = 600.0
//! origin_x_m = 0.0
//! origin_y_m = 0.0
//! lambda = 0.0018
//! distribution = "clustered"   # or "uniform"
//! clusters = 3
//! cluster_sigma_m = 50.0
//! tier = "s4"                  # s1..s4
//! tier_rate_bps = 500000.0     # optional, overrides the named tier rate
//! seed = 42
//! ```

use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Poisson};
use statrs::distribution::{ContinuousCDF, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2D;
use crate::placement::User;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("density sweep needs at least one density")]
    EmptySweep,
    #[error("density must be non-negative and finite, got {0}")]
    InvalidDensity(f64),
    #[error("unknown demand tier `{0}`")]
    UnknownTier(String),
    #[error("user ids must run 0..n in order; found {found} at row {row}")]
    BadUserId { row: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub width: f64,
    pub height: f64,
    pub origin: Point2D,
}

impl Region {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height, origin: Point2D::default() }
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn contains(&self, p: &Point2D) -> bool {
        p.x >= self.origin.x
            && p.x <= self.origin.x + self.width
            && p.y >= self.origin.y
            && p.y <= self.origin.y + self.height
    }

    pub fn center(&self) -> Point2D {
        Point2D::new(self.origin.x + 0.5 * self.width, self.origin.y + 0.5 * self.height)
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Point2D {
        Point2D::new(
            self.origin.x + self.width * rng.random::<f64>(),
            self.origin.y + self.height * rng.random::<f64>(),
        )
    }
}

impl Default for Region {
    fn default() -> Self {
        Self::new(600.0, 600.0)
    }
}

/// Guaranteed per-user rate class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandTier {
    pub name: &'static str,
    pub rate_bps: f64,
}

impl DemandTier {
    /// Full HD video streaming.
    pub const S1: DemandTier = DemandTier { name: "s1", rate_bps: 4.0e6 };
    /// Online gaming.
    pub const S2: DemandTier = DemandTier { name: "s2", rate_bps: 2.0e6 };
    /// Web surfing.
    pub const S3: DemandTier = DemandTier { name: "s3", rate_bps: 1.0e6 };
    /// VoIP.
    pub const S4: DemandTier = DemandTier { name: "s4", rate_bps: 5.0e5 };

    pub const ALL: [DemandTier; 4] = [Self::S1, Self::S2, Self::S3, Self::S4];

    pub fn by_name(name: &str) -> Result<DemandTier, ScenarioError> {
        Self::ALL
            .into_iter()
            .find(|t| t.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| ScenarioError::UnknownTier(name.to_string()))
    }

    pub fn custom(rate_bps: f64) -> DemandTier {
        DemandTier { name: "custom", rate_bps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum UserDistribution {
    /// Homogeneous Poisson point process.
    Uniform,
    /// Parents placed uniformly, users scattered around a random parent with
    /// isotropic Gaussian offsets conditioned on landing inside the region.
    Clustered { clusters: usize, sigma_m: f64 },
}

impl Default for UserDistribution {
    fn default() -> Self {
        UserDistribution::Clustered { clusters: 3, sigma_m: 50.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub region: Region,
    /// Mean user density (users/m²).
    pub lambda: f64,
    pub distribution: UserDistribution,
    #[serde(with = "tier_serde")]
    pub tier: DemandTier,
    pub seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            region: Region::default(),
            lambda: 0.0018,
            distribution: UserDistribution::default(),
            tier: DemandTier::S4,
            seed: 0,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let r = &self.region;
        if !(r.width.is_finite() && r.width > 0.0 && r.height.is_finite() && r.height > 0.0) {
            return Err(ScenarioError::Invalid("region width and height must be positive".into()));
        }
        if !r.origin.is_finite() {
            return Err(ScenarioError::Invalid("region origin must be finite".into()));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(ScenarioError::InvalidDensity(self.lambda));
        }
        if !(self.tier.rate_bps.is_finite() && self.tier.rate_bps > 0.0) {
            return Err(ScenarioError::Invalid("tier rate must be positive".into()));
        }
        if let UserDistribution::Clustered { clusters, sigma_m } = self.distribution {
            if clusters == 0 {
                return Err(ScenarioError::Invalid("cluster count must be at least 1".into()));
            }
            if !(sigma_m.is_finite() && sigma_m > 0.0) {
                return Err(ScenarioError::Invalid("cluster spread must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn expected_users(&self) -> f64 {
        self.lambda * self.region.area()
    }

    /// Draws the user population. Deterministic in the scenario seed.
    pub fn generate_users(&self) -> Result<Vec<User>, ScenarioError> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mean = self.expected_users();
        if mean == 0.0 {
            return Ok(Vec::new());
        }
        let count = Poisson::new(mean)
            .map_err(|e| ScenarioError::Invalid(e.to_string()))?
            .sample(&mut rng) as usize;
        let rate = self.tier.rate_bps;
        let region = self.region;
        let users = match self.distribution {
            UserDistribution::Uniform => (0..count)
                .map(|_| {
                    let p = region.sample(&mut rng);
                    User { position: p, demand_bps: rate }
                })
                .collect(),
            UserDistribution::Clustered { clusters, sigma_m } => {
                let parents: Vec<Point2D> = (0..clusters).map(|_| region.sample(&mut rng)).collect();
                let offset = Normal::new(0.0, sigma_m).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
                let (x0, x1) = (region.origin.x, region.origin.x + region.width);
                let (y0, y1) = (region.origin.y, region.origin.y + region.height);
                (0..count)
                    .map(|_| {
                        let parent = parents[rng.random_range(0..clusters)];
                        let x = parent.x + truncated(&offset, x0 - parent.x, x1 - parent.x, &mut rng);
                        let y = parent.y + truncated(&offset, y0 - parent.y, y1 - parent.y, &mut rng);
                        User { position: Point2D::new(x.clamp(x0, x1), y.clamp(y0, y1)), demand_bps: rate }
                    })
                    .collect()
            }
        };
        Ok(users)
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;
        let scenario = file.try_into()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        let (distribution, clusters, sigma) = match self.distribution {
            UserDistribution::Uniform => ("uniform", None, None),
            UserDistribution::Clustered { clusters, sigma_m } => ("clustered", Some(clusters), Some(sigma_m)),
        };
        let mut out = String::new();
        out.push_str(&format!("region_width_m = {:?}\n", self.region.width));
        out.push_str(&format!("region_height_m = {:?}\n", self.region.height));
        out.push_str(&format!("origin_x_m = {:?}\n", self.region.origin.x));
        out.push_str(&format!("origin_y_m = {:?}\n", self.region.origin.y));
        out.push_str(&format!("lambda = {:?}\n", self.lambda));
        out.push_str(&format!("distribution = \"{distribution}\"\n"));
        if let (Some(k), Some(s)) = (clusters, sigma) {
            out.push_str(&format!("clusters = {k}\n"));
            out.push_str(&format!("cluster_sigma_m = {s:?}\n"));
        }
        out.push_str(&format!("tier = \"{}\"\n", self.tier.name));
        if self.tier.name == "custom" {
            out.push_str(&format!("tier_rate_bps = {:?}\n", self.tier.rate_bps));
        }
        out.push_str(&format!("seed = {}\n", self.seed));
        out
    }
}

/// Draw from `dist` conditioned on `[lo, hi]` by inverting the CDF.
///
/// The region is a rectangle, so rejecting 2D offsets outside it is the same
/// as conditioning each axis separately.
fn truncated<R: Rng>(dist: &Normal, lo: f64, hi: f64, rng: &mut R) -> f64 {
    let (a, b) = (dist.cdf(lo), dist.cdf(hi));
    let u: f64 = rng.random();
    dist.inverse_cdf(a + u * (b - a)).clamp(lo, hi)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    region_width_m: Option<f64>,
    region_height_m: Option<f64>,
    origin_x_m: Option<f64>,
    origin_y_m: Option<f64>,
    lambda: f64,
    distribution: Option<String>,
    clusters: Option<usize>,
    cluster_sigma_m: Option<f64>,
    tier: Option<String>,
    tier_rate_bps: Option<f64>,
    seed: Option<u64>,
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = ScenarioError;

    fn try_from(f: ScenarioFile) -> Result<Self, Self::Error> {
        let defaults = Scenario::default();
        let region = Region {
            width: f.region_width_m.unwrap_or(defaults.region.width),
            height: f.region_height_m.unwrap_or(defaults.region.height),
            origin: Point2D::new(f.origin_x_m.unwrap_or(0.0), f.origin_y_m.unwrap_or(0.0)),
        };
        let (default_k, default_sigma) = match UserDistribution::default() {
            UserDistribution::Clustered { clusters, sigma_m } => (clusters, sigma_m),
            UserDistribution::Uniform => unreachable!("default distribution is clustered"),
        };
        let distribution = match f.distribution.as_deref().unwrap_or("clustered") {
            "uniform" => UserDistribution::Uniform,
            "clustered" => UserDistribution::Clustered {
                clusters: f.clusters.unwrap_or(default_k),
                sigma_m: f.cluster_sigma_m.unwrap_or(default_sigma),
            },
            other => return Err(ScenarioError::Invalid(format!("unknown distribution `{other}`"))),
        };
        let tier = match (f.tier.as_deref(), f.tier_rate_bps) {
            (_, Some(rate)) => DemandTier::custom(rate),
            (Some(name), None) => DemandTier::by_name(name)?,
            (None, None) => defaults.tier,
        };
        let scenario = Scenario { region, lambda: f.lambda, distribution, tier, seed: f.seed.unwrap_or(0) };
        scenario.validate()?;
        Ok(scenario)
    }
}

mod tier_serde {
    use super::DemandTier;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        name: String,
        rate_bps: f64,
    }

    pub fn serialize<S: Serializer>(tier: &DemandTier, s: S) -> Result<S::Ok, S::Error> {
        Repr { name: tier.name.to_string(), rate_bps: tier.rate_bps }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DemandTier, D::Error> {
        let repr = Repr::deserialize(d)?;
        Ok(match DemandTier::by_name(&repr.name) {
            Ok(t) if t.rate_bps == repr.rate_bps => t,
            _ => DemandTier::custom(repr.rate_bps),
        })
    }
}

/// Seed for the `stream`-th derived experiment of a root seed.
pub fn derive_seed(root: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(stream);
    rng.next_u64()
}

/// One scenario per density, each with its own derived seed.
pub fn density_sweep(base: &Scenario, lambdas: &[f64]) -> Result<Vec<Scenario>, ScenarioError> {
    if lambdas.is_empty() {
        return Err(ScenarioError::EmptySweep);
    }
    lambdas
        .iter()
        .enumerate()
        .map(|(i, &lambda)| {
            if !(lambda.is_finite() && lambda >= 0.0) {
                return Err(ScenarioError::InvalidDensity(lambda));
            }
            Ok(Scenario { lambda, seed: derive_seed(base.seed, i as u64), ..base.clone() })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct UserRow {
    id: usize,
    x_m: f64,
    y_m: f64,
    demand_bps: f64,
}

/// Writes users as CSV with header `id,x_m,y_m,demand_bps`.
pub fn write_users_csv<W: Write>(writer: W, users: &[User]) -> Result<(), ScenarioError> {
    let mut w = csv::Writer::from_writer(writer);
    for (id, u) in users.iter().enumerate() {
        w.serialize(UserRow { id, x_m: u.position.x, y_m: u.position.y, demand_bps: u.demand_bps })?;
    }
    if users.is_empty() {
        w.write_record(["id", "x_m", "y_m", "demand_bps"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_users_csv<R: Read>(reader: R) -> Result<Vec<User>, ScenarioError> {
    let mut r = csv::Reader::from_reader(reader);
    let mut users = Vec::new();
    for (row, record) in r.deserialize::<UserRow>().enumerate() {
        let rec = record?;
        if rec.id != row {
            return Err(ScenarioError::BadUserId { row, found: rec.id });
        }
        if !(rec.demand_bps.is_finite() && rec.demand_bps > 0.0 && rec.x_m.is_finite() && rec.y_m.is_finite()) {
            return Err(ScenarioError::Invalid(format!("bad user row {row}")));
        }
        users.push(User::new(rec.x_m, rec.y_m, rec.demand_bps));
    }
    Ok(users)
}
