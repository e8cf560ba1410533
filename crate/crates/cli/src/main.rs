//! `dqke`: seeded batch runner for the simulation laboratory.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 the
//! experiment itself failed.

mod config;
mod experiments;
mod output;
mod report;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dqke_core::Seed;
use serde::de::DeserializeOwned;

use config::{AttackParams, Bb84Params, CovertParams, DistillParams, RunConfig, UeParamsConfig};
use experiments::CliError;
use output::{write_rows, Format, Row};

#[derive(Debug, Parser)]
#[command(name = "dqke", version, about = "Deniable QKE simulation laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Repeated BB84 sessions over a bit-flip channel.
    Bb84(Common),
    /// Judge detection rate of naive BB84 denial under decoy interception.
    AttackDeny(Common),
    /// Uncloneable-encryption round trips and fake-key openings.
    Ue(Common),
    /// Covert-QKE warden game.
    Covert(Common),
    /// Covert game, DC-QKE deniability game and the reduction, on paired seeds.
    Dcqke(Common),
    /// Procrustean filtering of partially entangled pairs (`--trials` = pairs).
    Distill(Common),
    /// Aggregate the CSVs in the `--out` directory into one row per experiment.
    Report(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run config: {"experiment", "params", optional "seed", "trials", "out"}.
    #[arg(long)]
    config: Option<PathBuf>,
    /// 128-bit master seed as 32 hex characters.
    #[arg(long)]
    seed: Option<Seed>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

struct Resolved<P> {
    params: P,
    seed: Seed,
    trials: Option<u64>,
    out: Option<PathBuf>,
}

fn resolve<P: DeserializeOwned + Default>(name: &str, c: &Common) -> Result<Resolved<P>, CliError> {
    let file = match &c.config {
        Some(path) => Some(RunConfig::load(path).map_err(CliError::Config)?),
        None => None,
    };
    if let Some(f) = &file {
        if f.experiment != name {
            return Err(CliError::Config(format!(
                "config is for experiment `{}`, not `{name}`",
                f.experiment
            )));
        }
    }
    let params = match &file {
        Some(f) => f.params().map_err(CliError::Config)?,
        None => P::default(),
    };
    Ok(Resolved {
        params,
        seed: c.seed.or(file.as_ref().and_then(|f| f.seed)).unwrap_or_default(),
        trials: c.trials.or(file.as_ref().and_then(|f| f.trials)),
        out: c.out.clone().or(file.and_then(|f| f.out)),
    })
}

fn emit(rows: &[Row], format: Format, out: Option<&PathBuf>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(io)?;
            }
            let mut w = BufWriter::new(File::create(path).map_err(io)?);
            write_rows(rows, format, &mut w).map_err(CliError::Io)?;
            w.flush().map_err(io)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write_rows(rows, format, &mut lock).map_err(CliError::Io)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (common, rows, out) = match &cli.command {
        Command::Bb84(c) => {
            let r = resolve::<Bb84Params>("bb84", c)?;
            (c, experiments::bb84(&r.params, r.trials.unwrap_or(1000), r.seed)?, r.out)
        }
        Command::AttackDeny(c) => {
            let r = resolve::<AttackParams>("attack-deny", c)?;
            (c, experiments::attack_deny(&r.params, r.trials.unwrap_or(20_000), r.seed)?, r.out)
        }
        Command::Ue(c) => {
            let r = resolve::<UeParamsConfig>("ue", c)?;
            (c, experiments::ue(&r.params, r.trials.unwrap_or(1000), r.seed)?, r.out)
        }
        Command::Covert(c) => {
            let r = resolve::<CovertParams>("covert", c)?;
            (c, experiments::covert(&r.params, r.trials.unwrap_or(10_000), r.seed)?, r.out)
        }
        Command::Dcqke(c) => {
            let r = resolve::<CovertParams>("dcqke", c)?;
            (c, experiments::dcqke(&r.params, r.trials.unwrap_or(5000), r.seed)?, r.out)
        }
        Command::Distill(c) => {
            let mut r = resolve::<DistillParams>("distill", c)?;
            if let Some(t) = r.trials {
                r.params.n = usize::try_from(t).map_err(|e| CliError::Config(e.to_string()))?;
            }
            (c, experiments::distill(&r.params, r.seed)?, r.out)
        }
        Command::Report(c) => {
            let dir = c
                .out
                .clone()
                .ok_or_else(|| CliError::Config("report needs --out <dir>".into()))?;
            let rows = report::aggregate(&dir)?;
            let target = dir.join(format!("{}.{}", report::REPORT_STEM, c.format.extension()));
            (c, rows, Some(target))
        }
    };
    emit(&rows, common.format, out.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dqke: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
