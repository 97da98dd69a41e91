//! `hom`: simulate a HOM dip from one or two exported JSA files.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use biborate::interference::{hom_independent, hom_same_source, DEFAULT_TAU_SAMPLES};
use biborate::io::{hom_to_csv, jsa_from_csv};

use super::LoadedData;
use crate::manifest::{sha256_hex, write_outputs_with_manifest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomMode {
    /// Signal and idler from one source (two-fold dip).
    SameSource,
    /// Two heralded photons from independent sources (four-fold dip).
    Independent,
}

#[derive(Args)]
pub struct HomArgs {
    /// Interference mode.
    #[arg(long, value_enum)]
    pub mode: HomMode,
    /// Input JSA CSV file(s): one for same-source, two for independent
    /// (a single file is used for both sources).
    pub inputs: Vec<PathBuf>,
    /// Half-range of the delay window (fs); auto-sized when omitted.
    #[arg(long)]
    pub tau_range_fs: Option<f64>,
    /// Number of delay samples.
    #[arg(long, default_value_t = DEFAULT_TAU_SAMPLES)]
    pub tau_samples: usize,
    /// Output CSV path (default derived from the input name).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResolvedHom {
    pub mode: HomMode,
    pub inputs: Vec<String>,
    pub inputs_sha256: Vec<String>,
    pub tau_range_fs: Option<f64>,
    pub tau_samples: usize,
    pub out: String,
}

pub fn run(data: &LoadedData, args: &HomArgs) -> anyhow::Result<()> {
    if args.inputs.is_empty() {
        bail!("at least one JSA file is required");
    }
    if args.mode == HomMode::SameSource && args.inputs.len() != 1 {
        bail!("same-source mode takes exactly one JSA file");
    }
    if args.inputs.len() > 2 {
        bail!("at most two JSA files");
    }
    let inputs_sha256 = args
        .inputs
        .iter()
        .map(|p| {
            let bytes =
                std::fs::read(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(sha256_hex(&bytes))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let out = args.out.clone().unwrap_or_else(|| {
        let stem = args.inputs[0]
            .file_stem()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "jsa".into());
        PathBuf::from(format!(
            "hom_{}_{stem}.csv",
            match args.mode {
                HomMode::SameSource => "same",
                HomMode::Independent => "indep",
            }
        ))
    });
    let resolved = ResolvedHom {
        mode: args.mode,
        inputs: args.inputs.iter().map(|p| p.display().to_string()).collect(),
        inputs_sha256,
        tau_range_fs: args.tau_range_fs,
        tau_samples: args.tau_samples,
        out: out.display().to_string(),
    };
    let (csv, report) = execute(data, &resolved)?;
    write_outputs_with_manifest("hom", &resolved, data.checksum.clone(), &[(out, csv)])?;
    print!("{report}");
    Ok(())
}

pub fn execute(_data: &LoadedData, params: &ResolvedHom) -> anyhow::Result<(String, String)> {
    let mut grids = Vec::new();
    for path in &params.inputs {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading JSA file {path}"))?;
        let (grid, _header) =
            jsa_from_csv(&text).with_context(|| format!("parsing JSA file {path}"))?;
        grids.push(grid);
    }
    let curve = match params.mode {
        HomMode::SameSource => {
            hom_same_source(&grids[0], params.tau_range_fs, params.tau_samples)?
        }
        HomMode::Independent => {
            let second = if grids.len() == 2 { &grids[1] } else { &grids[0] };
            hom_independent(&grids[0], second, params.tau_range_fs, params.tau_samples)?
        }
    };
    let mode_name = match params.mode {
        HomMode::SameSource => "same-source",
        HomMode::Independent => "independent",
    };
    let csv = hom_to_csv(
        &curve,
        &[
            ("mode".to_string(), mode_name.to_string()),
            ("inputs".to_string(), params.inputs.join(";")),
        ],
    );
    let report = format!(
        "{mode_name} HOM dip: visibility = {:.4} ({:.2}%), FWHM = {:.2} fs, baseline = {:.4}\nwrote {}\n",
        curve.visibility,
        100.0 * curve.visibility,
        curve.fwhm_fs,
        curve.baseline,
        params.out,
    );
    Ok((csv, report))
}
