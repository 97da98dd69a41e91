//! Immutable optical data for the shipped borate crystal set.
//!
//! Each crystal carries per-axis Sellmeier models, point-group and d-tensor
//! data, a transparency window, and (for point groups without a closed-form
//! effective nonlinearity) a table of tabulated d_eff values keyed by
//! phase-matching scenario. The set is loaded once from the TOML format
//! documented in `data/SCHEMA.md` and is immutable afterwards.

mod loader;
mod sellmeier;

pub use loader::{
    data_sha256, load_default, load_from_path, load_from_str, to_toml_string, DEFAULT_DATA,
};
pub use sellmeier::{SellmeierForm, SellmeierModel};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniaxial crystals carry `o`/`e` models; biaxial carry `x`/`y`/`z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisClass {
    Uniaxial,
    Biaxial,
}

impl AxisClass {
    pub fn axis_labels(&self) -> &'static [&'static str] {
        match self {
            AxisClass::Uniaxial => &["o", "e"],
            AxisClass::Biaxial => &["x", "y", "z"],
        }
    }
}

/// One named optical medium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crystal {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub axis_class: AxisClass,
    /// Crystallographic point group symbol, e.g. "3m", "-42m", "mm2".
    pub point_group: String,
    /// Transparency window in nm.
    pub transparency_nm: (f64, f64),
    /// Map from axis label to dispersion model.
    pub sellmeier: BTreeMap<String, SellmeierModel>,
    /// Nonzero d-tensor entries in pm/V, keyed like "d22". Values are
    /// referenced to 1064 nm second-harmonic generation.
    pub d_coefficients: BTreeMap<String, f64>,
    /// Tabulated d_eff (pm/V) keyed by scenario ("plane:condition" or
    /// "plane:condition:fixed_nm") for point groups without a formula path.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub deff_table: BTreeMap<String, f64>,
    /// Free-text source note for the crystal as a whole.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

impl Crystal {
    /// Dispersion model for an axis label ("o", "e", "x", "y", "z").
    pub fn axis(&self, label: &str) -> Result<&SellmeierModel> {
        self.sellmeier.get(label).ok_or_else(|| Error::DataValidation {
            crystal: self.name.clone(),
            reason: format!("missing Sellmeier model for axis '{label}'"),
        })
    }

    /// Principal index on one axis with range checking.
    pub fn principal_index(&self, label: &str, lambda_um: f64) -> Result<f64> {
        let model = self.axis(label)?;
        if !model.contains(lambda_um) {
            return Err(Error::WavelengthOutOfRange {
                crystal: self.name.clone(),
                axis: label.to_string(),
                lambda_um,
                min_um: model.valid_range_um.0,
                max_um: model.valid_range_um.1,
            });
        }
        Ok(model.index_unchecked(lambda_um))
    }

    /// Intersection of the valid ranges of all axes, in µm.
    pub fn common_valid_range_um(&self) -> (f64, f64) {
        let mut lo = f64::MIN;
        let mut hi = f64::MAX;
        for model in self.sellmeier.values() {
            lo = lo.max(model.valid_range_um.0);
            hi = hi.min(model.valid_range_um.1);
        }
        (lo, hi)
    }

    /// Transparency window in µm.
    pub fn transparency_um(&self) -> (f64, f64) {
        (self.transparency_nm.0 * 1e-3, self.transparency_nm.1 * 1e-3)
    }

    /// Full validation: axis set, structural model checks, and the physical
    /// ordering/positivity invariants sampled across the valid ranges.
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Error::DataValidation {
            crystal: self.name.clone(),
            reason,
        };

        let expected = self.axis_class.axis_labels();
        let actual: Vec<&str> = self.sellmeier.keys().map(String::as_str).collect();
        let mut expected_sorted: Vec<&str> = expected.to_vec();
        expected_sorted.sort_unstable();
        if actual != expected_sorted {
            return Err(fail(format!(
                "axis set {actual:?} does not match {expected:?} for {:?} crystal",
                self.axis_class
            )));
        }

        let (tlo, thi) = self.transparency_nm;
        if !(tlo.is_finite() && thi.is_finite() && 0.0 < tlo && tlo < thi) {
            return Err(fail(format!("invalid transparency window [{tlo}, {thi}] nm")));
        }

        for (label, model) in &self.sellmeier {
            model
                .validate()
                .map_err(|reason| fail(format!("axis '{label}': {reason}")))?;
            let (lo, hi) = model.valid_range_um;
            let (tlo_um, thi_um) = self.transparency_um();
            if lo < tlo_um - 1e-9 || hi > thi_um + 1e-9 {
                return Err(fail(format!(
                    "axis '{label}' valid range [{lo}, {hi}] um outside transparency [{tlo_um}, {thi_um}] um"
                )));
            }
            // n must stay real, finite and above 1 across the fit interval.
            for k in 0..=SAMPLES {
                let lambda = lo + (hi - lo) * k as f64 / SAMPLES as f64;
                let n2 = model.n_squared(lambda);
                if !n2.is_finite() || n2 <= 1.0 {
                    return Err(fail(format!(
                        "axis '{label}': n^2 = {n2} at {lambda:.4} um is not a physical index"
                    )));
                }
            }
        }

        // Index ordering across the common range: n_e < n_o (negative
        // uniaxial) or n_x < n_y < n_z (biaxial).
        let (lo, hi) = self.common_valid_range_um();
        if lo >= hi {
            return Err(fail("axis valid ranges do not overlap".into()));
        }
        let ordering: &[(&str, &str)] = match self.axis_class {
            AxisClass::Uniaxial => &[("e", "o")],
            AxisClass::Biaxial => &[("x", "y"), ("y", "z")],
        };
        for (low_label, high_label) in ordering {
            let low = self.axis(low_label)?;
            let high = self.axis(high_label)?;
            for k in 0..=SAMPLES {
                let lambda = lo + (hi - lo) * k as f64 / SAMPLES as f64;
                let n_low = low.index_unchecked(lambda);
                let n_high = high.index_unchecked(lambda);
                if n_low >= n_high {
                    return Err(fail(format!(
                        "index ordering violated at {lambda:.4} um: n_{low_label} = {n_low:.6} >= n_{high_label} = {n_high:.6}"
                    )));
                }
            }
        }
        Ok(())
    }
}

const SAMPLES: usize = 96;

/// Immutable set of crystals keyed by case-insensitive name.
#[derive(Debug, Clone, Default)]
pub struct CrystalSet {
    crystals: BTreeMap<String, Crystal>,
}

impl PartialEq for CrystalSet {
    fn eq(&self, other: &Self) -> bool {
        self.crystals == other.crystals
    }
}

impl CrystalSet {
    pub fn from_crystals(crystals: Vec<Crystal>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for crystal in crystals {
            crystal.validate()?;
            let key = crystal.name.to_lowercase();
            if map.insert(key, crystal).is_some() {
                return Err(Error::DataParse("duplicate crystal name".into()));
            }
        }
        Ok(Self { crystals: map })
    }

    /// Case-insensitive lookup. Unknown names report the nearest matches.
    pub fn get(&self, name: &str) -> Result<&Crystal> {
        let key = name.to_lowercase();
        self.crystals.get(&key).ok_or_else(|| {
            let mut names: Vec<&String> = self.crystals.keys().collect();
            names.sort_by_key(|candidate| edit_distance(&key, candidate));
            Error::UnknownCrystal {
                name: name.to_string(),
                nearest: names
                    .into_iter()
                    .take(3)
                    .map(|k| self.crystals[k].name.clone())
                    .collect(),
            }
        })
    }

    /// Canonical names in deterministic (alphabetical) order.
    pub fn names(&self) -> Vec<&str> {
        self.crystals.values().map(|c| c.name.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Crystal> {
        self.crystals.values()
    }

    pub fn len(&self) -> usize {
        self.crystals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crystals.is_empty()
    }

    /// Source citations per crystal, assembled from the crystal citation and
    /// the per-axis Sellmeier provenance strings.
    pub fn provenance(&self) -> BTreeMap<String, String> {
        self.crystals
            .values()
            .map(|c| {
                let mut parts = Vec::new();
                if let Some(citation) = &c.citation {
                    parts.push(citation.clone());
                }
                for (axis, model) in &c.sellmeier {
                    parts.push(format!("{axis}: {}", model.provenance));
                }
                (c.name.clone(), parts.join("; "))
            })
            .collect()
    }
}

/// Plain Levenshtein distance, used only for "did you mean" suggestions.
fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("bbo", "bbo"), 0);
        assert_eq!(edit_distance("kdp", "ktp"), 1);
        assert_eq!(edit_distance("bibo", "bbo"), 1);
    }
}
