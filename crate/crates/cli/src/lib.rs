//! Experiment runner behind the `uavplace` binary.
//!
//! A run draws one user population from a [`Scenario`], places the UAV with
//! one method and records the placement, the allocated rates and the
//! transmit power. Sweeps repeat that over densities and repetitions and
//! write long-format CSV with one row per `(lambda, rep, method)`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use uav_placement::power::placement_power_report;
use uav_placement::scenario::{density_sweep, derive_seed};
use uav_placement::{
    brute_force_placement, density_aware_placement, max_coverage_placement, validate, Method, Placement,
    PlacementError, Scenario, UavConfig, User,
};

/// Seed stream reserved for the placement search of a run.
const SEARCH_STREAM: u64 = 1 << 32;

pub const CSV_HEADER: [&str; 12] = [
    "lambda",
    "rep",
    "method",
    "x_m",
    "y_m",
    "R_m",
    "served",
    "rate_min_bps",
    "rate_mean_bps",
    "power_served_w",
    "power_expected_w",
    "wall_ms",
];

pub const SUMMARY_HEADER: [&str; 12] = [
    "lambda",
    "method",
    "reps",
    "served_mean",
    "served_std",
    "R_mean_m",
    "rate_min_mean_bps",
    "rate_min_std_bps",
    "power_served_mean_w",
    "power_expected_mean_w",
    "power_expected_std_w",
    "failures",
];

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub lambda: f64,
    pub rep: u64,
    pub method: Method,
    pub x_m: f64,
    pub y_m: f64,
    #[serde(rename = "R_m")]
    pub r_m: f64,
    pub served: usize,
    pub rate_min_bps: f64,
    pub rate_mean_bps: f64,
    pub power_served_w: f64,
    pub power_expected_w: f64,
    pub wall_ms: f64,
}

/// Everything needed to reproduce and re-check one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub scenario: Scenario,
    pub search_seed: u64,
    pub row: ExperimentResult,
    pub placement: Placement,
}

/// A run that did not produce a placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub lambda: f64,
    pub rep: u64,
    pub method: Method,
    pub error: String,
}

/// JSON result document written by `place` and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub config: UavConfig,
    pub iterations: usize,
    pub runs: Vec<Run>,
    #[serde(default)]
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub iterations: usize,
    pub record_timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { iterations: 100, record_timing: false }
    }
}

pub fn solve(method: Method, users: &[User], config: &UavConfig, iterations: usize, seed: u64) -> Result<Placement, PlacementError> {
    match method {
        Method::Proposed => density_aware_placement(users, config, iterations, seed),
        Method::Baseline => max_coverage_placement(users, config),
        Method::Oracle => brute_force_placement(users, config),
    }
}

/// Search seed used for a scenario.
pub fn search_seed(scenario: &Scenario) -> u64 {
    derive_seed(scenario.seed, SEARCH_STREAM)
}

/// Draws the scenario's users and places the UAV with `method`.
pub fn run_once(
    scenario: &Scenario,
    rep: u64,
    method: Method,
    config: &UavConfig,
    opts: &RunOptions,
) -> Result<Run> {
    let users = scenario.generate_users()?;
    let seed = search_seed(scenario);
    let start = Instant::now();
    let placement = solve(method, &users, config, opts.iterations, seed)?;
    let elapsed = start.elapsed();
    let wall_ms = if opts.record_timing { elapsed.as_secs_f64() * 1e3 } else { 0.0 };
    let row = summarize_placement(&placement, &users, config, scenario.lambda, rep, wall_ms)?;
    Ok(Run { scenario: scenario.clone(), search_seed: seed, row, placement })
}

fn summarize_placement(
    placement: &Placement,
    users: &[User],
    config: &UavConfig,
    lambda: f64,
    rep: u64,
    wall_ms: f64,
) -> Result<ExperimentResult> {
    let report = placement_power_report(placement, users, config, lambda)?;
    let rates: Vec<f64> = placement.served.iter().map(|a| a.rate_bps).collect();
    let (rate_min, rate_mean) = if rates.is_empty() {
        (0.0, 0.0)
    } else {
        (rates.iter().copied().fold(f64::INFINITY, f64::min), rates.iter().sum::<f64>() / rates.len() as f64)
    };
    Ok(ExperimentResult {
        lambda,
        rep,
        method: placement.method,
        x_m: placement.center.x,
        y_m: placement.center.y,
        r_m: placement.radius_m,
        served: placement.served_count(),
        rate_min_bps: rate_min,
        rate_mean_bps: rate_mean,
        power_served_w: report.total_served,
        power_expected_w: report.expected_total,
        wall_ms,
    })
}

/// Scenario for repetition `rep` of a sweep point.
pub fn rep_scenario(point: &Scenario, rep: u64) -> Scenario {
    Scenario { seed: derive_seed(point.seed, rep), ..point.clone() }
}

/// Runs every `(lambda, rep, method)` combination. Rows come back sorted by
/// lambda, then rep, then method, whatever order they ran in.
pub fn sweep(
    base: &Scenario,
    lambdas: &[f64],
    methods: &[Method],
    reps: u64,
    config: &UavConfig,
    opts: &RunOptions,
) -> Result<ResultFile> {
    ensure!(!methods.is_empty(), "at least one method is required");
    ensure!(reps >= 1, "at least one repetition is required");
    let points = density_sweep(base, lambdas)?;
    let jobs: Vec<(Scenario, u64, Method)> = points
        .iter()
        .flat_map(|p| (0..reps).flat_map(move |rep| methods.iter().map(move |&m| (rep_scenario(p, rep), rep, m))))
        .collect();
    let outcomes: Vec<std::result::Result<Run, Failure>> = jobs
        .par_iter()
        .map(|(scenario, rep, method)| {
            run_once(scenario, *rep, *method, config, opts).map_err(|e| Failure {
                lambda: scenario.lambda,
                rep: *rep,
                method: *method,
                error: format!("{e:#}"),
            })
        })
        .collect();
    let (mut runs, mut failures) = (Vec::new(), Vec::new());
    for outcome in outcomes {
        match outcome {
            Ok(run) => runs.push(run),
            Err(f) => failures.push(f),
        }
    }
    runs.sort_by(|a, b| sort_key(&a.row).partial_cmp(&sort_key(&b.row)).expect("finite lambdas"));
    failures.sort_by(|a, b| (a.lambda, a.rep, a.method as u8).partial_cmp(&(b.lambda, b.rep, b.method as u8)).expect("finite lambdas"));
    Ok(ResultFile { config: *config, iterations: opts.iterations, runs, failures })
}

fn sort_key(row: &ExperimentResult) -> (f64, u64, u8) {
    (row.lambda, row.rep, row.method as u8)
}

/// Mean and standard deviation of every metric per `(lambda, method)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub lambda: f64,
    pub method: Method,
    pub reps: usize,
    pub served_mean: f64,
    pub served_std: f64,
    #[serde(rename = "R_mean_m")]
    pub r_mean_m: f64,
    pub rate_min_mean_bps: f64,
    pub rate_min_std_bps: f64,
    pub power_served_mean_w: f64,
    pub power_expected_mean_w: f64,
    pub power_expected_std_w: f64,
    pub failures: usize,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(results: &ResultFile) -> Vec<SummaryRow> {
    let mut keys: Vec<(f64, Method)> = results
        .runs
        .iter()
        .map(|r| (r.row.lambda, r.row.method))
        .chain(results.failures.iter().map(|f| (f.lambda, f.method)))
        .collect();
    keys.sort_by(|a, b| (a.0, a.1 as u8).partial_cmp(&(b.0, b.1 as u8)).expect("finite lambdas"));
    keys.dedup();
    keys.into_iter()
        .map(|(lambda, method)| {
            let rows: Vec<&ExperimentResult> = results
                .runs
                .iter()
                .map(|r| &r.row)
                .filter(|r| r.lambda == lambda && r.method == method)
                .collect();
            let pick = |f: fn(&ExperimentResult) -> f64| rows.iter().map(|r| f(r)).collect::<Vec<_>>();
            let served = mean_std(&pick(|r| r.served as f64));
            let rate = mean_std(&pick(|r| r.rate_min_bps));
            let expected = mean_std(&pick(|r| r.power_expected_w));
            SummaryRow {
                lambda,
                method,
                reps: rows.len(),
                served_mean: served.0,
                served_std: served.1,
                r_mean_m: mean_std(&pick(|r| r.r_m)).0,
                rate_min_mean_bps: rate.0,
                rate_min_std_bps: rate.1,
                power_served_mean_w: mean_std(&pick(|r| r.power_served_w)).0,
                power_expected_mean_w: expected.0,
                power_expected_std_w: expected.1,
                failures: results.failures.iter().filter(|f| f.lambda == lambda && f.method == method).count(),
            }
        })
        .collect()
}

fn write_csv<T: Serialize, W: Write>(writer: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows_csv<W: Write>(writer: W, rows: &[ExperimentResult]) -> Result<()> {
    write_csv(writer, &CSV_HEADER, rows)
}

pub fn write_summary_csv<W: Write>(writer: W, rows: &[SummaryRow]) -> Result<()> {
    write_csv(writer, &SUMMARY_HEADER, rows)
}

pub fn read_rows_csv<R: std::io::Read>(reader: R) -> Result<Vec<ExperimentResult>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    ensure!(header == CSV_HEADER, "unexpected CSV header {header:?}");
    r.deserialize().map(|row| row.context("bad CSV row")).collect()
}

pub fn write_json(path: &Path, results: &ResultFile) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, results)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<ResultFile> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(std::io::BufReader::new(file)).with_context(|| format!("parsing {}", path.display()))
}

/// Outcome of re-checking a result file.
#[derive(Debug, Default)]
pub struct ValidationReport {
    pub checked: usize,
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Regenerates every run's users and re-checks its placement, its CSV row
/// and, for rate-guaranteeing methods, the per-user rate floor. With
/// `rerun`, the placement is also recomputed and compared.
pub fn validate_results(results: &ResultFile, rerun: bool) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    for run in &results.runs {
        report.checked += 1;
        let tag = format!("lambda={} rep={} method={}", run.row.lambda, run.row.rep, run.row.method);
        let users = run.scenario.generate_users()?;
        if let Err(v) = validate(&run.placement, &users, &results.config) {
            report.problems.push(format!("{tag}: {v}"));
            continue;
        }
        let expected = summarize_placement(&run.placement, &users, &results.config, run.scenario.lambda, run.row.rep, run.row.wall_ms)?;
        if expected != run.row {
            report.problems.push(format!("{tag}: row does not match placement"));
        }
        if run.row.method.enforces_demand() && run.row.served > 0 && run.row.rate_min_bps < run.scenario.tier.rate_bps {
            report.problems.push(format!("{tag}: allocated rate below tier rate"));
        }
        if rerun {
            let again = solve(run.row.method, &users, &results.config, results.iterations, run.search_seed)?;
            if again != run.placement {
                report.problems.push(format!("{tag}: placement not reproducible"));
            }
        }
    }
    Ok(report)
}

/// Parses a comma-separated density list.
pub fn parse_lambdas(text: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad density `{s}`")))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        bail!("density list is empty");
    }
    if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        bail!("density must be non-negative, got {bad}");
    }
    Ok(values)
}
