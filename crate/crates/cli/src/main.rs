//! `biborate`: GVM photon-pair design CLI.
//!
//! Subcommands: `crystals list`, `tables`, `jsa`, `hom`, `manifest replay`.
//! Every run that writes files also writes a `<out>.manifest.toml` recording
//! the resolved parameters, the crystal-data checksum, and the output file
//! hashes; `manifest replay` re-runs the computation and verifies the
//! outputs byte-for-byte.
//!
//! Exit codes: 0 success (including "not satisfied" table cells), 2 invalid
//! input or configuration, 3 no solution (phase matching or dip not found),
//! 4 I/O failure.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biborate::error::Error as CoreError;

/// Environment variable overriding the crystal data file.
pub const DATA_ENV_VAR: &str = "BIBORATE_CRYSTAL_DATA";

#[derive(Parser)]
#[command(name = "biborate", version, about = "Design spectrally uncorrelated photon pairs from borate crystals")]
struct Cli {
    /// Crystal data file (TOML). Defaults to $BIBORATE_CRYSTAL_DATA or the
    /// embedded data set.
    #[arg(long, global = true)]
    data: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the crystal database.
    Crystals {
        #[command(subcommand)]
        action: CrystalsAction,
    },
    /// Solve GVM operating points and emit them as a table.
    Tables(commands::tables::TablesArgs),
    /// Build a joint spectral amplitude, compute purity, export CSV.
    Jsa(commands::jsa::JsaArgs),
    /// Simulate a Hong-Ou-Mandel dip from JSA file(s).
    Hom(commands::hom::HomArgs),
    /// Re-run a recorded manifest and verify outputs.
    Manifest {
        #[command(subcommand)]
        action: ManifestAction,
    },
}

#[derive(Subcommand)]
enum CrystalsAction {
    /// List the crystals with their key properties.
    List(commands::crystals::ListArgs),
}

#[derive(Subcommand)]
enum ManifestAction {
    /// Recompute from a manifest and compare output hashes.
    Replay(commands::replay::ReplayArgs),
}

/// Output format for tabular commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Markdown,
    Csv,
}

#[derive(Args)]
pub struct CommonOut {
    /// Write the result to a file (stdout otherwise).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Output format for tables.
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: Format,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(core) = err.downcast_ref::<CoreError>() {
        return match core {
            CoreError::NoPhaseMatching { .. } | CoreError::RootFind(_) => 3,
            CoreError::Interference(msg) if msg.contains("not resolved") => 3,
            CoreError::Io(_) => 4,
            _ => 2,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 4;
    }
    if let Some(msg) = err.downcast_ref::<String>() {
        if msg.contains("no solution") {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let data = commands::load_data(cli.data.as_deref())?;
    match cli.command {
        Command::Crystals { action: CrystalsAction::List(args) } => {
            commands::crystals::run(&data, &args)
        }
        Command::Tables(args) => commands::tables::run(&data, &args),
        Command::Jsa(args) => commands::jsa::run(&data, &args),
        Command::Hom(args) => commands::hom::run(&data, &args),
        Command::Manifest { action: ManifestAction::Replay(args) } => {
            commands::replay::run(cli.data.as_deref(), &args)
        }
    }
}
