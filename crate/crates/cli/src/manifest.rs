//! Run manifests: every file-producing command records its resolved
//! parameters, the crystal-data checksum, and SHA-256 hashes of the outputs.
//! `manifest replay` re-executes the command from the manifest and verifies
//! the recomputed bytes hash identically.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub engine_version: String,
    pub command: String,
    pub crystal_data_sha256: String,
    pub parameters: toml::Value,
    #[serde(rename = "output", default)]
    pub outputs: Vec<OutputRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new<P: Serialize>(
        command: &str,
        parameters: &P,
        crystal_data_sha256: String,
        outputs: &[(PathBuf, String)],
    ) -> anyhow::Result<Self> {
        Ok(Self {
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            crystal_data_sha256,
            parameters: toml::Value::try_from(parameters)
                .context("serializing manifest parameters")?,
            outputs: outputs
                .iter()
                .map(|(path, content)| OutputRecord {
                    path: path.display().to_string(),
                    sha256: sha256_hex(content.as_bytes()),
                })
                .collect(),
        })
    }

    pub fn manifest_path(primary_out: &Path) -> PathBuf {
        let mut name = primary_out.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.toml");
        primary_out.with_file_name(name)
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let text = toml::to_string_pretty(self).context("serializing manifest")?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).context("parsing manifest")
    }

    pub fn parameters_as<T: for<'de> Deserialize<'de>>(&self) -> anyhow::Result<T> {
        self.parameters.clone().try_into().context("decoding manifest parameters")
    }
}

/// Write outputs and the accompanying manifest next to the primary output.
pub fn write_outputs_with_manifest<P: Serialize>(
    command: &str,
    parameters: &P,
    crystal_data_sha256: String,
    outputs: &[(PathBuf, String)],
) -> anyhow::Result<()> {
    for (path, content) in outputs {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
        }
        std::fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some((primary, _)) = outputs.first() {
        let manifest = RunManifest::new(command, parameters, crystal_data_sha256, outputs)?;
        manifest.write(&RunManifest::manifest_path(primary))?;
    }
    Ok(())
}
