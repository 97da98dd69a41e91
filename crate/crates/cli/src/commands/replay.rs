//! `manifest replay`: re-run a recorded command and verify the outputs
//! reproduce byte-for-byte (hash comparison against the manifest).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;

use super::{hom, jsa, load_data, tables};
use crate::manifest::{sha256_hex, RunManifest};

#[derive(Args)]
pub struct ReplayArgs {
    /// Manifest file written by a previous run.
    pub manifest: PathBuf,
    /// Recompute only; do not rewrite the output files.
    #[arg(long)]
    pub check_only: bool,
}

pub fn run(data_flag: Option<&Path>, args: &ReplayArgs) -> anyhow::Result<()> {
    let manifest = RunManifest::load(&args.manifest)?;
    let data = load_data(data_flag)?;
    if data.checksum != manifest.crystal_data_sha256 {
        bail!(
            "crystal data checksum mismatch: manifest has {}, loaded {} from {}",
            &manifest.crystal_data_sha256[..16],
            &data.checksum[..16],
            data.source
        );
    }
    let recomputed: Vec<(String, String)> = match manifest.command.as_str() {
        "tables" => {
            let params: tables::ResolvedTables = manifest.parameters_as()?;
            let text = tables::execute(&data, &params)?;
            let path = params.out.clone().context("tables manifest without output path")?;
            vec![(path, text)]
        }
        "jsa" => {
            let params: jsa::ResolvedJsa = manifest.parameters_as()?;
            let (csv, _report) = jsa::execute(&data, &params)?;
            vec![(params.out.clone(), csv)]
        }
        "hom" => {
            let params: hom::ResolvedHom = manifest.parameters_as()?;
            for (path, expected) in params.inputs.iter().zip(&params.inputs_sha256) {
                let bytes = std::fs::read(path)
                    .with_context(|| format!("reading input {path}"))?;
                if sha256_hex(&bytes) != *expected {
                    bail!("input {path} changed since the manifest was recorded");
                }
            }
            let (csv, _report) = hom::execute(&data, &params)?;
            vec![(params.out.clone(), csv)]
        }
        other => bail!("manifest for unknown command '{other}'"),
    };

    let mut all_ok = true;
    for (path, content) in &recomputed {
        let hash = sha256_hex(content.as_bytes());
        let recorded = manifest.outputs.iter().find(|o| &o.path == path);
        match recorded {
            Some(record) if record.sha256 == hash => {
                println!("REPRODUCED {path} ({})", &hash[..16]);
            }
            Some(record) => {
                all_ok = false;
                println!(
                    "MISMATCH {path}: recomputed {} vs recorded {}",
                    &hash[..16],
                    &record.sha256[..16]
                );
            }
            None => {
                all_ok = false;
                println!("UNRECORDED {path}");
            }
        }
        if !args.check_only {
            std::fs::write(path, content)
                .with_context(|| format!("writing {path}"))?;
        }
    }
    if !all_ok {
        bail!("replay did not reproduce all outputs");
    }
    Ok(())
}
