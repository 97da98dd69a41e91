//! Subcommand implementations. Each file-producing command is split into a
//! serializable "resolved parameters" struct plus a pure `execute` that maps
//! resolved parameters to output text, so `manifest replay` can re-run it.

pub mod crystals;
pub mod hom;
pub mod jsa;
pub mod replay;
pub mod tables;

use std::path::Path;

use anyhow::Context;

use biborate::crystal::{self, CrystalSet};

use crate::DATA_ENV_VAR;

/// Crystal data plus the checksum of the exact text it was loaded from.
pub struct LoadedData {
    pub set: CrystalSet,
    pub checksum: String,
    pub source: String,
}

/// Resolution order: `--data` flag, then `$BIBORATE_CRYSTAL_DATA`, then the
/// embedded default set.
pub fn load_data(flag: Option<&Path>) -> anyhow::Result<LoadedData> {
    let env_path = std::env::var_os(DATA_ENV_VAR).map(std::path::PathBuf::from);
    let path = flag.map(Path::to_path_buf).or(env_path);
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading crystal data {}", path.display()))?;
            let set = crystal::load_from_str(&text)?;
            Ok(LoadedData {
                set,
                checksum: crystal::data_sha256(&text),
                source: path.display().to_string(),
            })
        }
        None => Ok(LoadedData {
            set: crystal::load_default()?,
            checksum: crystal::data_sha256(crystal::DEFAULT_DATA),
            source: "<embedded>".to_string(),
        }),
    }
}

/// Minimal table renderer shared by `crystals list` and `tables`.
pub struct TableDoc {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl TableDoc {
    pub fn render(&self, format: crate::Format) -> String {
        match format {
            crate::Format::Markdown => {
                let mut out = String::new();
                out.push_str(&format!("| {} |\n", self.columns.join(" | ")));
                out.push_str(&format!(
                    "|{}\n",
                    self.columns.iter().map(|_| " --- |").collect::<String>()
                ));
                for row in &self.rows {
                    out.push_str(&format!("| {} |\n", row.join(" | ")));
                }
                out
            }
            crate::Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Print to stdout or write to a file.
pub fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
