//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uav_placement::channel::{avg_path_loss, fspl, max_radius, p_los, p_nlos, ChannelEnv};
use uav_placement::power::{expected_tx_power, per_user_tx_power};
use uav_placement::{
    brute_force_placement, density_aware_placement, evaluate_candidate, max_coverage_placement, validate,
    DemandTier, Method, PlacementError, Point2D, Scenario, UavConfig, User,
};
use uav_placement_cli::{sweep, ExperimentResult, RunOptions};

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn min_time<T>(reps: usize, mut f: impl FnMut() -> T) -> (Duration, T) {
    let mut best = Duration::MAX;
    let mut last = None;
    for _ in 0..reps {
        let start = Instant::now();
        let v = f();
        best = best.min(start.elapsed());
        last = Some(v);
    }
    (best, last.expect("at least one repetition"))
}

fn random_users(rng: &mut ChaCha8Rng, n: usize, side: f64, demand: f64) -> Vec<User> {
    (0..n)
        .map(|_| User::new(side * rng.random::<f64>(), side * rng.random::<f64>(), demand))
        .collect()
}

fn ac1() -> Outcome {
    let env = ChannelEnv::SUBURBAN;
    let (elapsed, r) = min_time(5, || max_radius(30.0, 100.0, &env));
    let r = r.map_err(|e| e.to_string())?;
    check(
        (r - 241.87).abs() <= 0.5 && elapsed < Duration::from_millis(1),
        format!("R_max = {r:.3} m (target 241.87 +/- 0.5), {:.1} us", elapsed.as_secs_f64() * 1e6),
    )
}

fn ac2() -> Outcome {
    let env = ChannelEnv::SUBURBAN;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut bad = Vec::new();
    for i in 0..10_000 {
        let h = rng.random_range(10.0..500.0);
        let r = rng.random_range(0.0..10_000.0);
        let dr = rng.random_range(1e-3..100.0);
        let los = p_los(h, r, &env).unwrap();
        let nlos = p_nlos(h, r, &env).unwrap();
        if los + nlos != 1.0 {
            bad.push(format!("sample {i}: P_LoS + P_NLoS = {}", los + nlos));
        }
        let loss = avg_path_loss(h, r, &env).unwrap();
        if avg_path_loss(h, r + dr, &env).unwrap() <= loss {
            bad.push(format!("sample {i}: loss not increasing at H={h} r={r}"));
        }
        let free = fspl(h, r, env.carrier_hz).unwrap();
        let slack = 1e-12 * free;
        if loss < free + env.eta_los - slack || loss > free + env.eta_nlos + slack {
            bad.push(format!("sample {i}: sandwich bound broken"));
        }
    }
    let elapsed = start.elapsed();
    check(
        bad.is_empty() && elapsed < Duration::from_secs(1),
        format!("10000 samples, {} violations, {:.1} ms{}", bad.len(), elapsed.as_secs_f64() * 1e3, first(&bad)),
    )
}

fn first(problems: &[String]) -> String {
    problems.first().map(|p| format!("; first: {p}")).unwrap_or_default()
}

fn ac3() -> Outcome {
    let cfg = UavConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut problems = Vec::new();
    let (mut checked, mut empty) = (0, 0);
    for case in 0..1000u64 {
        let n = rng.random_range(3..=200);
        let tier = DemandTier::ALL[(case % 4) as usize];
        let users = random_users(&mut rng, n, 600.0, tier.rate_bps);
        let proposed = density_aware_placement(&users, &cfg, 100, case);
        let baseline = max_coverage_placement(&users, &cfg);
        for (name, result) in [("proposed", proposed), ("baseline", baseline)] {
            checked += 1;
            match result {
                Ok(p) => {
                    if let Err(v) = validate(&p, &users, &cfg) {
                        problems.push(format!("case {case} {name}: {v}"));
                    }
                }
                // No circle the search visited fits within R_max, so no
                // placement is returned.
                Err(PlacementError::NoFeasibleCandidate) if name == "proposed" => empty += 1,
                Err(e) => problems.push(format!("case {case} {name}: {e}")),
            }
        }
    }
    check(
        problems.is_empty(),
        format!(
            "{} placements checked, {} violations, {empty} proposed runs with no feasible candidate{}",
            checked - empty,
            problems.len(),
            first(&problems)
        ),
    )
}

fn ac4() -> Outcome {
    let cfg = UavConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut equal, mut worse, mut empty, mut slowest) = (0, 0, 0, Duration::ZERO);
    let mut problems = Vec::new();
    for case in 0..200u64 {
        let n = rng.random_range(3..=20);
        let tier = DemandTier::ALL[(case % 4) as usize];
        let users = random_users(&mut rng, n, 600.0, tier.rate_bps);
        let start = Instant::now();
        let oracle = brute_force_placement(&users, &cfg);
        slowest = slowest.max(start.elapsed());
        let proposed = density_aware_placement(&users, &cfg, 100, case);
        match (proposed, oracle) {
            (Ok(p), Ok(o)) => {
                if p.served_count() > o.served_count() {
                    worse += 1;
                    problems.push(format!("case {case}: proposed {} > oracle {}", p.served_count(), o.served_count()));
                }
                equal += usize::from(p.served_count() == o.served_count());
            }
            // An empty candidate list serves nobody, which the oracle never
            // does worse than.
            (Err(PlacementError::NoFeasibleCandidate), Ok(_)) => empty += 1,
            (p, o) => problems.push(format!("case {case}: proposed {:?} / oracle {:?}", p.err(), o.err())),
        }
    }
    check(
        problems.is_empty() && slowest < Duration::from_secs(5),
        format!(
            "200 instances, dominance violations {worse}, equality {equal}/200 ({:.1}%), {empty} with no feasible candidate, slowest oracle {:.2} ms{}",
            equal as f64 / 2.0,
            slowest.as_secs_f64() * 1e3,
            first(&problems)
        ),
    )
}

/// Users packed uniformly inside a disk of radius `radius` around `center`.
fn packed(rng: &mut ChaCha8Rng, n: usize, center: Point2D, radius: f64, demand: f64) -> Vec<User> {
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let phi = std::f64::consts::TAU * rng.random::<f64>();
            User::new(center.x + r * phi.cos(), center.y + r * phi.sin(), demand)
        })
        .collect()
}

fn ac5() -> Outcome {
    let cfg = UavConfig::default();
    let center = Point2D::new(300.0, 300.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut details = Vec::new();
    let mut ok = true;
    for (tier, expected) in DemandTier::ALL.iter().zip([50usize, 100, 200, 400]) {
        let cap = (cfg.capacity() / tier.rate_bps).floor() as usize;
        ok &= cap == expected;

        // Admission on a disk holding cap + 10 users.
        let users = packed(&mut rng, cap + 10, center, 100.0, tier.rate_bps);
        let cand = evaluate_candidate(center, 100.0, &users, &cfg);
        ok &= cand.served_count == expected && cand.feasible;

        // Full search on a disk holding twice the cap.
        let (mut hits, mut hits_tight) = (0, 0);
        for seed in 0..20 {
            let users = packed(&mut rng, 2 * cap, center, 100.0, tier.rate_bps);
            let p = density_aware_placement(&users, &cfg, 100, seed).map_err(|e| e.to_string())?;
            ok &= validate(&p, &users, &cfg).is_ok();
            hits += usize::from(p.served_count() == expected);

            let users = packed(&mut rng, cap + 10, center, 100.0, tier.rate_bps);
            let p = density_aware_placement(&users, &cfg, 100, seed).map_err(|e| e.to_string())?;
            hits_tight += usize::from(p.served_count() == expected);
        }
        ok &= hits == 20;
        details.push(format!(
            "{}: admit {}/{} of {}, search {hits}/20 at 2x (info: {hits_tight}/20 at +10)",
            tier.name,
            cand.served_count,
            expected,
            cap + 10
        ));
    }
    check(ok, details.join("; "))
}

struct SweepStats {
    lambdas: Vec<f64>,
    proposed_rate_ok: bool,
    baseline_rate: Vec<f64>,
    proposed_power: Vec<f64>,
    baseline_power: Vec<f64>,
    failures: usize,
    elapsed: Duration,
}

const SWEEP_LAMBDAS: [f64; 6] = [0.0003, 0.0006, 0.0009, 0.0012, 0.0015, 0.0018];

fn run_sweep() -> Result<SweepStats, String> {
    let cfg = UavConfig::default();
    let base = Scenario { tier: DemandTier::S4, seed: 2024, ..Scenario::default() };
    let start = Instant::now();
    let res = sweep(&base, &SWEEP_LAMBDAS, &[Method::Proposed, Method::Baseline], 20, &cfg, &RunOptions::default())
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let rows = |lambda: f64, method: Method| -> Vec<&ExperimentResult> {
        res.runs.iter().map(|r| &r.row).filter(|r| r.lambda == lambda && r.method == method).collect()
    };
    let mean = |v: &[&ExperimentResult], f: fn(&ExperimentResult) -> f64| v.iter().map(|r| f(r)).sum::<f64>() / v.len() as f64;
    let s4 = DemandTier::S4.rate_bps;
    let mut stats = SweepStats {
        lambdas: SWEEP_LAMBDAS.to_vec(),
        proposed_rate_ok: true,
        baseline_rate: vec![],
        proposed_power: vec![],
        baseline_power: vec![],
        failures: res.failures.len(),
        elapsed,
    };
    for &lambda in &SWEEP_LAMBDAS {
        let p = rows(lambda, Method::Proposed);
        let b = rows(lambda, Method::Baseline);
        stats.proposed_rate_ok &= !p.is_empty()
            && p.iter().all(|r| (r.rate_min_bps - s4).abs() <= 1e-9 * s4 && (r.rate_mean_bps - s4).abs() <= 1e-9 * s4);
        stats.baseline_rate.push(mean(&b, |r| r.rate_min_bps));
        stats.proposed_power.push(mean(&p, |r| r.power_expected_w));
        stats.baseline_power.push(mean(&b, |r| r.power_expected_w));
    }
    Ok(stats)
}

fn ac6(stats: &SweepStats) -> Outcome {
    let s4 = DemandTier::S4.rate_bps;
    let decreasing = stats.baseline_rate.windows(2).all(|w| w[1] < w[0]);
    let crossover = stats.baseline_rate.iter().position(|&r| r < s4);
    let rates: Vec<String> = stats.baseline_rate.iter().map(|r| format!("{:.3e}", r)).collect();
    check(
        stats.proposed_rate_ok && decreasing && crossover.is_some() && stats.failures == 0 && stats.elapsed < Duration::from_secs(120),
        format!(
            "proposed rate = s4 everywhere: {}; baseline mean C/N [{}] strictly decreasing: {decreasing}; below s4 from lambda = {}; {} failed runs; {:.1} s",
            stats.proposed_rate_ok,
            rates.join(", "),
            crossover.map(|i| stats.lambdas[i].to_string()).unwrap_or_else(|| "never".into()),
            stats.failures,
            stats.elapsed.as_secs_f64()
        ),
    )
}

fn ac7(stats: &SweepStats) -> Outcome {
    let s4 = DemandTier::S4.rate_bps;
    let Some(cross) = stats.baseline_rate.iter().position(|&r| r < s4) else {
        return Err("baseline rate never falls below s4, no crossover point".into());
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for i in 0..stats.lambdas.len() {
        let (p, b) = (stats.proposed_power[i], stats.baseline_power[i]);
        if i >= cross {
            ok &= p < b;
        }
        parts.push(format!("{}: {:.4}/{:.4} W ({:.0}% lower)", stats.lambdas[i], p, b, 100.0 * (1.0 - p / b)));
    }
    check(ok, format!("proposed/baseline expected power {}", parts.join(", ")))
}

/// Stratified Monte Carlo over the disk: one uniform draw per equal-area
/// annulus.
fn monte_carlo_power(h: f64, radius: f64, density: f64, c: f64, b: f64, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let cfg = UavConfig::default();
    let mut sum = 0.0;
    for k in 0..samples {
        let u = (k as f64 + rng.random::<f64>()) / samples as f64;
        sum += per_user_tx_power(h, radius * u.sqrt(), c, b, cfg.noise_density_dbm_hz(), cfg.env()).unwrap();
    }
    sum / samples as f64 * density * std::f64::consts::PI * radius * radius
}

fn ac8() -> Outcome {
    let cfg = UavConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let h = rng.random_range(20.0..200.0);
        let radius = rng.random_range(10.0..400.0);
        let c = rng.random_range(2e5..5e6);
        let b = c / rng.random_range(0.5..8.0);
        let density = rng.random_range(1e-4..3e-3);
        let quad = expected_tx_power(h, radius, density, c, b, &cfg).map_err(|e| e.to_string())?;
        let mc = monte_carlo_power(h, radius, density, c, b, 200_000, &mut rng);
        worst = worst.max(((quad - mc) / mc).abs());
    }
    let elapsed = start.elapsed();
    check(
        worst < 5e-3 && elapsed < Duration::from_secs(30),
        format!("50 tuples, worst relative error {:.2e}, {:.2} s", worst, elapsed.as_secs_f64()),
    )
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_uavplace")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).into_owned())
    }
}

fn dir_bytes(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let bytes = std::fs::read(entry.path()).map_err(|e| e.to_string())?;
        files.push((entry.file_name().to_string_lossy().into_owned(), bytes));
    }
    files.sort();
    Ok(files)
}

fn ac9() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut identical = true;
    for run in ["a", "b"] {
        let place = tmp.path().join(format!("place-{run}"));
        let sweep_dir = tmp.path().join(format!("sweep-{run}"));
        run_cli(&["place", "--seed", "9", "--lambda", "0.0012", "--out", place.to_str().unwrap()])?;
        run_cli(&["sweep", "--seed", "9", "--lambdas", "0.0006,0.0018", "--reps", "4", "--out", sweep_dir.to_str().unwrap()])?;
    }
    for kind in ["place", "sweep"] {
        identical &= dir_bytes(&tmp.path().join(format!("{kind}-a")))? == dir_bytes(&tmp.path().join(format!("{kind}-b")))?;
    }

    let cfg = UavConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let small = random_users(&mut rng, 1_000, 600.0, DemandTier::S4.rate_bps);
    let large = random_users(&mut rng, 10_000, 600.0, DemandTier::S4.rate_bps);
    let m = 100;
    let (t_small, _) = min_time(7, || density_aware_placement(&small, &cfg, m, 1).unwrap());
    let (t_large, _) = min_time(7, || density_aware_placement(&large, &cfg, m, 1).unwrap());
    let ratio = t_large.as_secs_f64() / t_small.as_secs_f64();
    check(
        identical && ratio <= 15.0,
        format!(
            "CLI outputs byte-identical: {identical}; m={m}: N=1e3 {:.2} ms, N=1e4 {:.2} ms, ratio {ratio:.2} (limit 15)",
            t_small.as_secs_f64() * 1e3,
            t_large.as_secs_f64() * 1e3
        ),
    )
}

fn main() {
    let sweep_stats = run_sweep();
    type Criterion<'a> = (&'a str, &'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("AC1", "channel inversion", Box::new(ac1)),
        ("AC2", "channel identities", Box::new(ac2)),
        ("AC3", "constraint validator", Box::new(ac3)),
        ("AC4", "oracle dominance", Box::new(ac4)),
        ("AC5", "capacity quantization", Box::new(ac5)),
        ("AC6", "rate trend over density", Box::new(|| sweep_stats.as_ref().map_err(String::clone).and_then(ac6))),
        ("AC7", "power trend over density", Box::new(|| sweep_stats.as_ref().map_err(String::clone).and_then(ac7))),
        ("AC8", "power quadrature", Box::new(ac8)),
        ("AC9", "determinism and complexity", Box::new(ac9)),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
