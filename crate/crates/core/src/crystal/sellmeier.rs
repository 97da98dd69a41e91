//! Dispersion-equation forms and their evaluation.
//!
//! The cited handbooks do not agree on a single functional form, so the data
//! file selects one per axis via `form`. All coefficients take the wavelength
//! in micrometres and return n².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported dispersion-equation forms.
///
/// | form       | n²(λ) =                                   | coefficients           |
/// |------------|-------------------------------------------|------------------------|
/// | `pole`     | A + B/(λ² − C) − Dλ²                      | `[A, B, C, D]`         |
/// | `pole4`    | A + B/(λ² − C) − Dλ² − Eλ⁴                | `[A, B, C, D, E]`      |
/// | `two_pole` | A + B/(λ² − C) + D/(λ² − E) − Fλ²         | `[A, B, C, D, E, F]`   |
/// | `ratio`    | A + Bλ²/(λ² − C) − Dλ²                    | `[A, B, C, D]`         |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SellmeierForm {
    Pole,
    Pole4,
    TwoPole,
    Ratio,
}

impl SellmeierForm {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pole" => Ok(Self::Pole),
            "pole4" => Ok(Self::Pole4),
            "two_pole" => Ok(Self::TwoPole),
            "ratio" => Ok(Self::Ratio),
            other => Err(Error::UnknownSellmeierForm(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pole => "pole",
            Self::Pole4 => "pole4",
            Self::TwoPole => "two_pole",
            Self::Ratio => "ratio",
        }
    }

    pub fn coefficient_count(&self) -> usize {
        match self {
            Self::Pole | Self::Ratio => 4,
            Self::Pole4 => 5,
            Self::TwoPole => 6,
        }
    }
}

/// One dispersion model: a form, its coefficients, a validity interval and a
/// mandatory source citation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SellmeierModel {
    pub form: SellmeierForm,
    /// Coefficients in the order documented for the form, λ in µm.
    pub coefficients: Vec<f64>,
    /// Wavelength interval (µm) over which the fit is trusted.
    pub valid_range_um: (f64, f64),
    /// Literature source (or derivation note) for the coefficients.
    pub provenance: String,
}

impl SellmeierModel {
    /// n² at `lambda_um`, without range checking.
    pub fn n_squared(&self, lambda_um: f64) -> f64 {
        let l2 = lambda_um * lambda_um;
        let c = &self.coefficients;
        match self.form {
            SellmeierForm::Pole => c[0] + c[1] / (l2 - c[2]) - c[3] * l2,
            SellmeierForm::Pole4 => c[0] + c[1] / (l2 - c[2]) - c[3] * l2 - c[4] * l2 * l2,
            SellmeierForm::TwoPole => c[0] + c[1] / (l2 - c[2]) + c[3] / (l2 - c[4]) - c[5] * l2,
            SellmeierForm::Ratio => c[0] + c[1] * l2 / (l2 - c[2]) - c[3] * l2,
        }
    }

    /// Refractive index at `lambda_um`; errors outside `valid_range_um`.
    pub fn index(&self, lambda_um: f64) -> Result<f64> {
        self.check_range(lambda_um)?;
        Ok(self.n_squared(lambda_um).sqrt())
    }

    /// Refractive index without the range check. The phase-matching scan
    /// relies on this staying finite slightly past the fit interval.
    pub fn index_unchecked(&self, lambda_um: f64) -> f64 {
        self.n_squared(lambda_um).sqrt()
    }

    pub fn contains(&self, lambda_um: f64) -> bool {
        lambda_um >= self.valid_range_um.0 && lambda_um <= self.valid_range_um.1
    }

    fn check_range(&self, lambda_um: f64) -> Result<()> {
        if !self.contains(lambda_um) {
            return Err(Error::WavelengthOutOfRange {
                crystal: String::new(),
                axis: String::new(),
                lambda_um,
                min_um: self.valid_range_um.0,
                max_um: self.valid_range_um.1,
            });
        }
        Ok(())
    }

    /// Structural validation: coefficient count, finite values, and a sane
    /// validity interval. Physical checks live on `Crystal`.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.coefficients.len() != self.form.coefficient_count() {
            return Err(format!(
                "form '{}' expects {} coefficients, got {}",
                self.form.name(),
                self.form.coefficient_count(),
                self.coefficients.len()
            ));
        }
        if self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err("non-finite Sellmeier coefficient".into());
        }
        let (lo, hi) = self.valid_range_um;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(format!("invalid valid_range_um [{lo}, {hi}]"));
        }
        if self.provenance.trim().is_empty() {
            return Err("missing provenance".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(form: SellmeierForm, coefficients: Vec<f64>) -> SellmeierModel {
        SellmeierModel {
            form,
            coefficients,
            valid_range_um: (0.3, 3.0),
            provenance: "test".into(),
        }
    }

    #[test]
    fn pole_form_evaluates() {
        // n² = 2.25 at any λ for B = D = 0.
        let m = model(SellmeierForm::Pole, vec![2.25, 0.0, 0.01, 0.0]);
        assert_eq!(m.index(1.0).unwrap(), 1.5);
    }

    #[test]
    fn range_is_enforced() {
        let m = model(SellmeierForm::Pole, vec![2.25, 0.0, 0.01, 0.0]);
        assert!(m.index(0.2).is_err());
        assert!(m.index(3.5).is_err());
    }

    #[test]
    fn coefficient_count_is_checked() {
        let m = model(SellmeierForm::TwoPole, vec![2.25, 0.0, 0.01, 0.0]);
        assert!(m.validate().is_err());
    }

    #[test]
    fn unknown_form_is_rejected() {
        assert!(matches!(
            SellmeierForm::parse("cauchy"),
            Err(Error::UnknownSellmeierForm(_))
        ));
    }
}
