use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use iab_sched::config::ConfigFile;
use iab_sched::harness::{self, BaseConfig};
use iab_sched::report;
use iab_sched::scenario::generate_scenario;
use iab_sched::schedulers::{materialize_timeline, Algorithm};
use iab_sched::Error;

/// Joint user association and slot scheduling for mmWave access /
/// terahertz backhaul networks.
#[derive(Parser)]
#[command(name = "iab-sched", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule one random scenario and print a per-UE report.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo sweep and write aggregated metrics as CSV.
    Sweep(SweepArgs),
    /// Compare the heuristics against the exact optimum on tiny instances.
    OracleCheck(OracleArgs),
    /// List the built-in sweep presets.
    Presets,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "mqr")]
    algorithm: String,
    /// Scenario seed; also seeds the random baseline.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the per-UE CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Restrict to these algorithms (repeatable).
    #[arg(long)]
    algorithm: Vec<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<u32>,
    #[arg(long)]
    threads: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, visible_alias = "runs", default_value_t = 200)]
    instances: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => Failure::Violation(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Failure::Usage(format!("cannot create {}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn load(path: Option<&Path>) -> Result<ConfigFile, Failure> {
    Ok(match path {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    })
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let file = load(args.config.as_deref())?;
    let algorithm: Algorithm = args.algorithm.parse()?;
    let mut base = file.apply_base(&BaseConfig::default())?;
    base.scenario.seed = args.seed;

    let scenario = generate_scenario(&base.scenario)?;
    let result = algorithm.schedule(&scenario, &base.radio, &base.frame, harness::riab_seed(args.seed))?;
    result.check_invariants()?;
    materialize_timeline(&result, &base.frame)?;

    match &args.out {
        Some(path) => {
            report::write_schedule_summary(io::stdout().lock(), &result)?;
            let mut w = output(Some(path))?;
            report::write_schedule_csv(&mut w, &result)?;
            w.flush()?;
        }
        None => {
            report::write_schedule_summary(io::stderr().lock(), &result)?;
            let mut w = output(None)?;
            report::write_schedule_csv(&mut w, &result)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let mut experiment = match (&args.preset, &args.config) {
        (Some(name), None) => harness::preset(name)
            .ok_or_else(|| Failure::Usage(format!("unknown preset `{name}` (try `iab-sched presets`)")))?,
        (None, Some(path)) => ConfigFile::load(path)?.experiment_config(None)?,
        _ => return Err(Failure::Usage("exactly one of --preset or --config is required".into())),
    };
    if !args.algorithm.is_empty() {
        experiment.algorithms = args.algorithm.iter().map(|a| a.parse()).collect::<Result<_, Error>>()?;
    }
    if let Some(seed) = args.seed {
        experiment.master_seed = seed;
    }
    if let Some(runs) = args.runs {
        experiment.runs_per_point = runs;
    }
    experiment.threads = args.threads.map(|t| t as usize);

    let records = harness::run_experiment(&experiment)?;
    let mut w = output(args.out.as_deref())?;
    report::write_metrics_csv(&mut w, &records)?;
    w.flush()?;
    Ok(())
}

fn oracle_check(args: OracleArgs) -> Result<(), Failure> {
    let file = load(args.config.as_deref())?;
    let base = file.apply_base(&harness::tiny_base())?;
    let rows = harness::oracle_check(&base, args.instances, args.seed)?;

    let mut w = output(args.out.as_deref())?;
    report::write_oracle_csv(&mut w, &rows)?;
    w.flush()?;

    if !rows.is_empty() {
        let ratio = |f: fn(&harness::OracleRow) -> usize| {
            let (num, den) = rows
                .iter()
                .fold((0usize, 0usize), |(n, d), r| (n + f(r), d + r.optimum));
            if den == 0 {
                1.0
            } else {
                num as f64 / den as f64
            }
        };
        eprintln!(
            "instances={} served/optimum: mqr={:.4} msnr={:.4} riab={:.4} mqr_optimal={}",
            rows.len(),
            ratio(|r| r.mqr),
            ratio(|r| r.msnr),
            ratio(|r| r.riab),
            rows.iter().filter(|r| r.mqr == r.optimum).count()
        );
    }
    if let Some(bad) = rows.iter().find(|r| !r.dominated()) {
        return Err(Failure::Violation(format!(
            "instance {} (seed {}): a heuristic serves more UEs than the optimum {}",
            bad.instance, bad.seed, bad.optimum
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::OracleCheck(a) => oracle_check(a),
        Command::Presets => {
            for name in harness::PRESETS {
                let p = harness::preset(name).expect("listed preset exists");
                println!("{name}: sweep {} over {:?}", p.sweep_variable, p.sweep_values);
            }
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
