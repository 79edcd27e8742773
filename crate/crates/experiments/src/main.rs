use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bessel_experiments::{run_scenario, ScenarioConfig, SCENARIOS};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bessel-exp", version, about = "Numerical checks of weighted estimates in the Bessel setting")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Scenario config (TOML); defaults to the shipped config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print scenarios and the estimates they check.
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    PowerSweep,
    SparseScaling,
    CommutatorBound,
    Endpoint,
    Counterexample,
    BmoEquivalence,
    /// Every scenario with its shipped config.
    All,
}

impl Command {
    fn scenario(self) -> Option<&'static str> {
        Some(match self {
            Self::PowerSweep => "power-sweep",
            Self::SparseScaling => "sparse-scaling",
            Self::CommutatorBound => "commutator-bound",
            Self::Endpoint => "endpoint",
            Self::Counterexample => "counterexample",
            Self::BmoEquivalence => "bmo-equivalence",
            Self::All => return None,
        })
    }
}

fn config_for(cli: &Cli, name: &str) -> Result<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default_for(name)?,
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    let command = cli.command.context("no scenario given (see --help or --list)")?;
    let names: Vec<&str> = match command.scenario() {
        Some(name) => vec![name],
        None => {
            if cli.config.is_some() {
                anyhow::bail!("--config applies to a single scenario, not `all`");
            }
            SCENARIOS.iter().map(|s| s.name).collect()
        }
    };
    let mut ok = true;
    for name in names {
        let cfg = config_for(cli, name)?;
        let out = cli.out.clone().or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("results"));
        let verdict = run_scenario(name, &cfg, &out.join(name)).with_context(|| format!("scenario {name}"))?;
        print!("{verdict}");
        ok &= verdict.passed();
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for s in SCENARIOS {
            println!("{:<18} {}", s.name, s.anchor);
        }
        return ExitCode::SUCCESS;
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
