//! `crsim`: run one experiment and write its CSV table and gnuplot script.
//!
//! Exit status: 0 on success, 2 for configuration or usage errors, 3 when
//! the allocation problem is infeasible, 4 on a numeric failure.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use crsim_core::experiments::{
    load_config, run, write_outputs, Experiment, ExperimentSpec, RunConfig, FULL_TRIALS, SMOKE_TRIALS,
};
use crsim_core::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Profile {
    /// 500 Monte Carlo trials.
    Smoke,
    /// 10 000 Monte Carlo trials.
    Full,
}

#[derive(Debug, Parser)]
#[command(name = "crsim", version, about = "Cognitive-radio learning/training/transmission experiments")]
struct Args {
    /// it-vs-learning, beta-vs-learning, power-vs-nt, cal-surface,
    /// optimal-time-vs-chi, capacity-vs-chi or optimize
    experiment: String,

    /// key = value system configuration (default: the built-in reference system)
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo trials; overrides the profile and the config file
    #[arg(long)]
    trials: Option<usize>,

    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Omit the timestamp so identical inputs give byte-identical output
    #[arg(long)]
    deterministic: bool,

    #[arg(long, value_enum, default_value_t = Profile::Full)]
    profile: Profile,
}

const DEFAULT_SEED: u64 = 1;

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("CRSIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("CRSIM_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot size the worker pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<(), Error> {
    Ok(())
}

fn main_inner(args: Args) -> Result<(), Error> {
    configure_threads()?;
    let experiment: Experiment = args.experiment.parse()?;
    let config = match &args.config {
        Some(path) => load_config(path).map_err(|e| match e {
            Error::Io(io) => Error::Usage(format!("cannot read config {}: {io}", path.display())),
            other => other,
        })?,
        None => RunConfig::default(),
    };
    let profile_trials = match args.profile {
        Profile::Smoke => SMOKE_TRIALS,
        Profile::Full => FULL_TRIALS,
    };
    let trials = args.trials.or(config.trials).unwrap_or(profile_trials);
    let seed = args.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
    let mut spec = ExperimentSpec::new(experiment, config, trials, seed);
    spec.out_dir = args.out;

    let mut table = run(&spec)?;
    if !args.deterministic {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        table.set_meta("timestamp", now);
    }
    let (csv, gp) = write_outputs(&spec, &table)?;
    log::info!("wrote {} and {}", csv.display(), gp.display());

    if experiment == Experiment::Optimize {
        for (name, value) in table.columns.iter().zip(&table.rows[0]) {
            println!("{name}={value}");
        }
        if let Some(s) = table.meta("subcase") {
            println!("subcase_label={s}");
        }
    } else {
        println!("{}", csv.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match main_inner(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crsim: {e}");
            if matches!(e, Error::Usage(_)) {
                eprintln!("run `crsim --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
