use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use uav_placement::channel::{max_radius, ChannelEnv};
use uav_placement::scenario::write_users_csv;
use uav_placement::{Method, Scenario, UavConfig, UavParams};
use uav_placement_cli::{
    parse_lambdas, read_json, run_once, summarize, sweep, validate_results, write_json, write_rows_csv,
    write_summary_csv, ResultFile, RunOptions,
};

/// Energy-aware single-UAV placement experiments.
#[derive(Parser)]
#[command(name = "uavplace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place the UAV once for one user population.
    Place(PlaceArgs),
    /// Run every method over a list of user densities.
    Sweep(SweepArgs),
    /// Re-check a JSON result file against regenerated users.
    Validate(ValidateArgs),
    /// Print the maximum coverage radius for an altitude and loss budget.
    Rmax(RmaxArgs),
}

#[derive(Args)]
struct UavArgs {
    /// UAV altitude in meters.
    #[arg(long, default_value_t = 30.0)]
    altitude: f64,
    /// Maximum tolerable average path loss in dB.
    #[arg(long, default_value_t = 100.0)]
    budget_db: f64,
    /// Backhaul capacity in bit/s.
    #[arg(long, default_value_t = 2e8)]
    capacity: f64,
    /// Total access bandwidth in Hz.
    #[arg(long, default_value_t = 2e7)]
    bandwidth: f64,
    /// Noise power spectral density in dBm/Hz.
    #[arg(long, default_value_t = -174.0, allow_hyphen_values = true)]
    noise_dbm_hz: f64,
}

impl UavArgs {
    fn config(&self) -> Result<UavConfig> {
        let params = UavParams {
            altitude_m: self.altitude,
            loss_budget_db: self.budget_db,
            capacity_bps: self.capacity,
            bandwidth_hz: self.bandwidth,
            noise_density_dbm_hz: self.noise_dbm_hz,
            ..UavParams::default()
        };
        UavConfig::new(params).context("invalid UAV configuration")
    }
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (TOML). Defaults apply when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Root seed. Overrides the scenario file's seed.
    #[arg(long)]
    seed: Option<u64>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario> {
        let mut scenario = match &self.scenario {
            Some(path) => Scenario::load(path).with_context(|| format!("loading {}", path.display()))?,
            None => Scenario::default(),
        };
        if let Some(seed) = self.seed {
            scenario.seed = seed;
        }
        Ok(scenario)
    }
}

#[derive(Args)]
struct PlaceArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    uav: UavArgs,
    /// User density per square meter. Overrides the scenario file.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value = "proposed")]
    method: Method,
    /// Iterations of the density-aware search.
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Record wall-clock time in the output (breaks byte-identical reruns).
    #[arg(long)]
    record_timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    uav: UavArgs,
    /// Comma-separated user densities per square meter.
    #[arg(long, required = true, value_parser = lambda_list)]
    lambdas: Lambdas,
    /// Comma-separated methods.
    #[arg(long = "method", value_delimiter = ',', default_values = ["proposed", "baseline"])]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 20)]
    reps: u64,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    record_timing: bool,
}

#[derive(Clone)]
struct Lambdas(Vec<f64>);

fn lambda_list(text: &str) -> Result<Lambdas, String> {
    parse_lambdas(text).map(Lambdas).map_err(|e| e.to_string())
}

#[derive(Args)]
struct ValidateArgs {
    /// JSON result file written by `place` or `sweep`.
    result: PathBuf,
    /// Also recompute every placement and compare.
    #[arg(long)]
    rerun: bool,
}

#[derive(Args)]
struct RmaxArgs {
    #[arg(long, default_value_t = 30.0)]
    altitude: f64,
    #[arg(long, default_value_t = 100.0)]
    budget_db: f64,
    #[arg(long, default_value_t = ChannelEnv::SUBURBAN.a)]
    env_a: f64,
    #[arg(long, default_value_t = ChannelEnv::SUBURBAN.b)]
    env_b: f64,
    #[arg(long, default_value_t = ChannelEnv::SUBURBAN.eta_los)]
    eta_los: f64,
    #[arg(long, default_value_t = ChannelEnv::SUBURBAN.eta_nlos)]
    eta_nlos: f64,
    #[arg(long, default_value_t = ChannelEnv::SUBURBAN.carrier_hz)]
    carrier_hz: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Place(args) => place(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Validate(args) => validate(args),
        Command::Rmax(args) => rmax(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn place(args: PlaceArgs) -> Result<ExitCode> {
    let config = args.uav.config()?;
    let mut scenario = args.scenario.load()?;
    if let Some(lambda) = args.lambda {
        scenario.lambda = lambda;
    }
    scenario.validate()?;
    let opts = RunOptions { iterations: args.iterations, record_timing: args.record_timing };
    let run = run_once(&scenario, 0, args.method, &config, &opts)?;

    prepare_dir(&args.out)?;
    write_users_csv(create(&args.out.join("users.csv"))?, &scenario.generate_users()?)?;
    write_rows_csv(create(&args.out.join("place.csv"))?, std::slice::from_ref(&run.row))?;
    let row = run.row.clone();
    let results = ResultFile { config, iterations: args.iterations, runs: vec![run], failures: vec![] };
    write_json(&args.out.join("place.json"), &results)?;
    println!(
        "{}: center ({:.2}, {:.2}) m, R {:.2} m, {} served, expected power {:.6} W",
        row.method, row.x_m, row.y_m, row.r_m, row.served, row.power_expected_w
    );
    Ok(ExitCode::SUCCESS)
}

fn run_sweep(args: SweepArgs) -> Result<ExitCode> {
    let config = args.uav.config()?;
    let base = args.scenario.load()?;
    let lambdas = args.lambdas.0;
    let opts = RunOptions { iterations: args.iterations, record_timing: args.record_timing };
    let results = sweep(&base, &lambdas, &args.methods, args.reps, &config, &opts)?;

    prepare_dir(&args.out)?;
    let rows: Vec<_> = results.runs.iter().map(|r| r.row.clone()).collect();
    write_rows_csv(create(&args.out.join("sweep.csv"))?, &rows)?;
    write_summary_csv(create(&args.out.join("summary.csv"))?, &summarize(&results))?;
    write_json(&args.out.join("sweep.json"), &results)?;
    for f in &results.failures {
        eprintln!("warning: lambda={} rep={} method={}: {}", f.lambda, f.rep, f.method, f.error);
    }
    println!("{} runs, {} failed, written to {}", rows.len(), results.failures.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let results = read_json(&args.result)?;
    let report = validate_results(&results, args.rerun)?;
    for p in &report.problems {
        eprintln!("invalid: {p}");
    }
    println!("{} runs checked, {} problems", report.checked, report.problems.len());
    Ok(if report.is_ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn rmax(args: RmaxArgs) -> Result<ExitCode> {
    let env = ChannelEnv {
        a: args.env_a,
        b: args.env_b,
        eta_los: args.eta_los,
        eta_nlos: args.eta_nlos,
        carrier_hz: args.carrier_hz,
    };
    let r = max_radius(args.altitude, args.budget_db, &env)?;
    println!("{r:.2}");
    Ok(ExitCode::SUCCESS)
}
