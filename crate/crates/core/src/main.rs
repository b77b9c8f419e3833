use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use log::{error, info};

use strainsim::experiments::config::ScenarioConfig;
use strainsim::experiments::{run, write_outputs, Scenario};
use strainsim::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Fringe,
    Crosstalk,
    Hom,
    Transient,
    Field,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Fringe => Scenario::Fringe,
            ScenarioArg::Crosstalk => Scenario::Crosstalk,
            ScenarioArg::Hom => Scenario::Hom,
            ScenarioArg::Transient => Scenario::Transient,
            ScenarioArg::Field => Scenario::Field,
        }
    }
}

/// Regenerate a strain-optic data set from a TOML config.
#[derive(Debug, Parser)]
#[command(name = "strainsim", version)]
struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    scenario: ScenarioArg,
    /// Scenario config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; files go to <out>/<scenario>/.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Write SVG plots as well (also enabled by `[output] svg = true`).
    #[arg(long)]
    svg: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParameter { .. } => 2,
        e if e.is_numerical_guard() => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let scenario = Scenario::from(cli.scenario);

    let result = ScenarioConfig::load(&cli.config).and_then(|(config, hash)| {
        let output = run(scenario, &config)?;
        let svg = cli.svg || config.output().svg;
        write_outputs(scenario, &output, &hash, &cli.out, svg)
    });
    match result {
        Ok(manifest) => {
            info!("{scenario}: wrote {} files", manifest.files.len());
            ExitCode::SUCCESS
        }
        Err(e) => {
            error!("{e}");
            eprintln!("strainsim: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
