//! TOML (de)serialization for crystal data files.
//!
//! The on-disk format is documented in `data/SCHEMA.md`; one `[[crystal]]`
//! document per crystal, fields mirroring [`Crystal`]. The shipped default
//! set is embedded in the library so the engine works without any file
//! present; `load_from_path` accepts an external file with the same schema.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Crystal, CrystalSet};
use crate::error::{Error, Result};

/// Embedded default data set.
pub const DEFAULT_DATA: &str = include_str!("../../data/crystals.toml");

#[derive(Debug, Serialize, Deserialize)]
struct DataFile {
    schema_version: u32,
    #[serde(rename = "crystal")]
    crystals: Vec<Crystal>,
}

/// Load and validate a crystal data file.
pub fn load_from_path(path: impl AsRef<Path>) -> Result<CrystalSet> {
    let text = std::fs::read_to_string(path.as_ref())?;
    load_from_str(&text)
}

/// Load and validate crystal data from TOML text.
pub fn load_from_str(text: &str) -> Result<CrystalSet> {
    let file: DataFile = toml::from_str(text).map_err(|e| Error::DataParse(e.to_string()))?;
    if file.schema_version != 1 {
        return Err(Error::DataParse(format!(
            "unsupported schema_version {}",
            file.schema_version
        )));
    }
    CrystalSet::from_crystals(file.crystals)
}

/// Load the embedded default data set.
pub fn load_default() -> Result<CrystalSet> {
    load_from_str(DEFAULT_DATA)
}

/// Serialize a set back to the file format (crystals in name order).
pub fn to_toml_string(set: &CrystalSet) -> Result<String> {
    let file = DataFile {
        schema_version: 1,
        crystals: set.iter().cloned().collect(),
    };
    toml::to_string_pretty(&file).map_err(|e| Error::DataParse(e.to_string()))
}

/// SHA-256 of the raw data text, hex-encoded. Used by run manifests to pin
/// the exact data a result was computed from.
pub fn data_sha256(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
