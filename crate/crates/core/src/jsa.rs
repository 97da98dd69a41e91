//! Joint spectral amplitude construction, Schmidt analysis, and pump
//! bandwidth optimization.
//!
//! The JSA is the product of the Gaussian pump-envelope function (energy
//! conservation) and the sinc phase-matching function (momentum
//! conservation), evaluated on a rectangular wavelength grid with the
//! crystal angle frozen at the solved phase-matching angle. Under the
//! flat-phase assumption the amplitude is real; it is stored complex so a
//! chirped pump can be added without changing the format.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{golden_section_max, singular_values, singular_values_complex, trapezoid_weights};
use crate::phasematch::{phase_mismatch, pump_wavelength_nm, GvmSolution, PhotonRole, SpdcConfig};

/// Gaussian pump envelope parameters in wavelength variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    /// Central wavelength of the pump (λ₀/2 in the degenerate convention), nm.
    pub pump_center_nm: f64,
    /// Bandwidth parameter Δλ, nm.
    pub delta_lambda_nm: f64,
}

impl PumpSpec {
    pub fn from_config(config: &SpdcConfig) -> Self {
        Self { pump_center_nm: config.lambda_p_nm, delta_lambda_nm: config.pump_bandwidth_nm }
    }

    /// Width of the envelope in inverse-wavelength units (1/nm): the offsets
    /// λ_p ± Δλ/2 map to ±1 standard deviation of the Gaussian exponent.
    fn sigma_inverse_nm(&self) -> f64 {
        let half = 0.5 * self.delta_lambda_nm;
        self.delta_lambda_nm / (self.pump_center_nm * self.pump_center_nm - half * half)
    }

    /// Intensity-level FWHM of the pump spectrum in wavelength, nm:
    /// the exact width of exp(−(x/σ)²) mapped back from inverse-wavelength
    /// to wavelength. Approaches 2√(ln 2)·Δλ ≈ 1.67·Δλ for Δλ ≪ λ_p.
    pub fn fwhm_nm(&self) -> f64 {
        let a = (2.0_f64.ln()).sqrt() * self.sigma_inverse_nm();
        let lp2 = self.pump_center_nm * self.pump_center_nm;
        // λ± = λ_p/(1 ∓ aλ_p) ⇒ FWHM = 2aλ_p²/(1 − (aλ_p)²).
        2.0 * a * lp2 / (1.0 - a * a * lp2).max(f64::MIN_POSITIVE)
    }
}

/// Pump-envelope amplitude α(λ_s, λ_i) ∈ (0, 1].
pub fn pump_envelope(lambda_s_nm: f64, lambda_i_nm: f64, pump: &PumpSpec) -> f64 {
    let detuning = 1.0 / lambda_s_nm + 1.0 / lambda_i_nm - 1.0 / pump.pump_center_nm;
    let x = detuning / pump.sigma_inverse_nm();
    (-0.5 * x * x).exp()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Phase-matching amplitude sinc(ΔkL/2) at the configuration's frozen angle,
/// with the pump wavelength following from energy conservation.
pub fn phase_matching_amplitude(
    config: &SpdcConfig,
    lambda_s_nm: f64,
    lambda_i_nm: f64,
) -> Result<f64> {
    let mut point = config.clone();
    point.lambda_s_nm = lambda_s_nm;
    point.lambda_i_nm = lambda_i_nm;
    point.lambda_p_nm = pump_wavelength_nm(lambda_s_nm, lambda_i_nm);
    let delta_k_per_um = phase_mismatch(&point)?;
    // Δk L / 2 with L in µm.
    let arg = 0.5 * delta_k_per_um * config.length_mm * 1e3;
    Ok(sinc(arg))
}

/// Discretized joint spectral amplitude on strictly increasing wavelength
/// axes, normalized so that Σ|f|²·ΔA = 1 under trapezoidal weights.
#[derive(Debug, Clone, PartialEq)]
pub struct JsaGrid {
    pub signal_axis_nm: Vec<f64>,
    pub idler_axis_nm: Vec<f64>,
    /// Amplitude indexed [signal, idler].
    pub amplitude: Array2<Complex64>,
    /// Σ|f|²·ΔA recorded after normalization (unity to rounding).
    pub norm: f64,
    /// The scenario the grid was built from, when it came from the engine.
    pub config: Option<SpdcConfig>,
}

impl JsaGrid {
    /// Wrap an externally supplied amplitude (synthetic kernels, file
    /// imports) and normalize it.
    pub fn from_amplitude(
        signal_axis_nm: Vec<f64>,
        idler_axis_nm: Vec<f64>,
        amplitude: Array2<Complex64>,
    ) -> Result<Self> {
        let mut grid =
            Self { signal_axis_nm, idler_axis_nm, amplitude, norm: 0.0, config: None };
        grid.check_axes()?;
        grid.normalize()?;
        Ok(grid)
    }

    fn check_axes(&self) -> Result<()> {
        let (ns, ni) = self.amplitude.dim();
        if self.signal_axis_nm.len() != ns || self.idler_axis_nm.len() != ni {
            return Err(Error::Grid(format!(
                "axis lengths ({}, {}) do not match amplitude {:?}",
                self.signal_axis_nm.len(),
                self.idler_axis_nm.len(),
                self.amplitude.dim()
            )));
        }
        for axis in [&self.signal_axis_nm, &self.idler_axis_nm] {
            if axis.len() < 2 || axis.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Grid("axes must be strictly increasing".into()));
            }
        }
        Ok(())
    }

    /// Quadrature weights of both axes (trapezoid).
    pub fn weights(&self) -> (Vec<f64>, Vec<f64>) {
        (trapezoid_weights(&self.signal_axis_nm), trapezoid_weights(&self.idler_axis_nm))
    }

    /// Σ|f|²·ΔA under the grid's quadrature weights.
    pub fn squared_norm(&self) -> f64 {
        let (ws, wi) = self.weights();
        let mut total = 0.0;
        for (s, &w_s) in ws.iter().enumerate() {
            for (i, &w_i) in wi.iter().enumerate() {
                total += self.amplitude[[s, i]].norm_sqr() * w_s * w_i;
            }
        }
        total
    }

    fn normalize(&mut self) -> Result<()> {
        let total = self.squared_norm();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::Grid(format!("cannot normalize grid with Σ|f|²ΔA = {total}")));
        }
        let scale = total.sqrt().recip();
        self.amplitude.mapv_inplace(|a| a * scale);
        self.norm = self.squared_norm();
        Ok(())
    }

    /// Exchange the two axes (transpose the amplitude).
    pub fn transposed(&self) -> Self {
        Self {
            signal_axis_nm: self.idler_axis_nm.clone(),
            idler_axis_nm: self.signal_axis_nm.clone(),
            amplitude: self.amplitude.t().to_owned(),
            norm: self.norm,
            config: self.config.clone(),
        }
    }

    /// True when every stored amplitude is real (flat-phase model).
    pub fn is_real(&self) -> bool {
        self.amplitude.iter().all(|a| a.im == 0.0)
    }
}

/// Schmidt-mode analysis of a normalized grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtAnalysis {
    /// Heralded single-photon spectral purity P = Σ c_k⁴.
    pub purity: f64,
    /// Schmidt number K = 1/P.
    pub schmidt_number: f64,
    /// Leading normalized Schmidt coefficients c_k (descending).
    pub coefficients: Vec<f64>,
}

/// Schmidt decomposition via SVD of the (quadrature-weighted) amplitude.
///
/// Singular values are normalized to c_k = s_k/√(Σ s_j²); the purity is
/// Σ c_k⁴ and the Schmidt number its reciprocal.
pub fn schmidt_purity(grid: &JsaGrid) -> Result<SchmidtAnalysis> {
    let total = grid.squared_norm();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::Grid("degenerate all-zero grid".into()));
    }
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Grid(format!("grid not normalized: Σ|f|²ΔA = {total}")));
    }
    // Schmidt modes of the continuous kernel require folding the quadrature
    // weights into the matrix: G = √W_s · F · √W_i.
    let (ws, wi) = grid.weights();
    let (ns, ni) = grid.amplitude.dim();
    let singular = if grid.is_real() {
        let mut weighted = Array2::<f64>::zeros((ns, ni));
        for s in 0..ns {
            for i in 0..ni {
                weighted[[s, i]] = grid.amplitude[[s, i]].re * (ws[s] * wi[i]).sqrt();
            }
        }
        singular_values(&weighted)
    } else {
        let mut weighted = Array2::<Complex64>::zeros((ns, ni));
        for s in 0..ns {
            for i in 0..ni {
                weighted[[s, i]] = grid.amplitude[[s, i]] * (ws[s] * wi[i]).sqrt();
            }
        }
        singular_values_complex(&weighted)
    };
    let sum_sq: f64 = singular.iter().map(|s| s * s).sum();
    if sum_sq <= 0.0 {
        return Err(Error::Grid("degenerate all-zero grid".into()));
    }
    let purity = singular.iter().map(|s| (s * s / sum_sq).powi(2)).sum::<f64>();
    let coefficients: Vec<f64> =
        singular.iter().take(24).map(|s| s / sum_sq.sqrt()).collect();
    Ok(SchmidtAnalysis { purity, schmidt_number: 1.0 / purity, coefficients })
}

/// Default number of grid nodes per axis.
pub const DEFAULT_GRID: usize = 201;
/// Span policy: this many pump-intensity FWHMs mapped onto each axis.
const SPAN_FWHM_FACTOR: f64 = 8.0;
/// Cap on the span in units of the sinc main-lobe width: keeps the
/// phase-matching ridge resolved when a group-velocity-matched axis makes it
/// much narrower than the pump footprint.
const SPAN_SINC_CAP: f64 = 3.0;

/// Per-axis spans (nm): 8× the pump FWHM mapped through energy conservation
/// onto each photon axis, but no more than 3× the sinc main-lobe width on
/// that axis (so the dominant ridge of GVM₁/GVM₂ states stays resolved on a
/// fixed grid). Callers clip to the usable window.
pub fn default_spans_nm(config: &SpdcConfig) -> (f64, f64) {
    let pump = PumpSpec::from_config(config);
    let fwhm = pump.fwhm_nm();
    let pump_mapped = |lambda_nm: f64| {
        let ratio = lambda_nm / config.lambda_p_nm;
        SPAN_FWHM_FACTOR * fwhm * ratio * ratio
    };
    // First sinc zero along each axis from the linearized phase mismatch:
    // |dΔk/dλ|·δλ·L/2 = π.
    let length_um = config.length_mm * 1e3;
    let sinc_zero = |axis: PhotonRole| -> f64 {
        let h = 0.05;
        let dk_at = |ds: f64, di: f64| {
            let mut point = config.clone();
            point.lambda_s_nm += ds;
            point.lambda_i_nm += di;
            point.lambda_p_nm = pump_wavelength_nm(point.lambda_s_nm, point.lambda_i_nm);
            phase_mismatch(&point)
        };
        let slope = match axis {
            PhotonRole::Signal => (dk_at(h, 0.0), dk_at(-h, 0.0)),
            PhotonRole::Idler => (dk_at(0.0, h), dk_at(0.0, -h)),
        };
        match slope {
            (Ok(hi), Ok(lo)) => {
                let d = ((hi - lo) / (2.0 * h)).abs();
                if d < 1e-12 {
                    f64::INFINITY
                } else {
                    2.0 * std::f64::consts::PI / (length_um * d)
                }
            }
            _ => f64::INFINITY,
        }
    };
    let span = |lambda_nm: f64, axis: PhotonRole| {
        let from_pump = pump_mapped(lambda_nm);
        let cap = SPAN_FWHM_FACTOR * SPAN_SINC_CAP * sinc_zero(axis);
        from_pump.min(cap)
    };
    (
        span(config.lambda_s_nm, PhotonRole::Signal),
        span(config.lambda_i_nm, PhotonRole::Idler),
    )
}

fn clipped_axis(center_nm: f64, span_nm: f64, window_nm: (f64, f64), n: usize) -> Vec<f64> {
    let lo = (center_nm - 0.5 * span_nm).max(window_nm.0);
    let hi = (center_nm + 0.5 * span_nm).min(window_nm.1);
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Build the JSA grid for a configuration whose angle is already set.
///
/// `span_nm` overrides the default span policy on both axes when given.
pub fn compute_jsa_grid(
    config: &SpdcConfig,
    grid_size: usize,
    span_nm: Option<f64>,
) -> Result<JsaGrid> {
    config.validate()?;
    if grid_size < 64 {
        return Err(Error::Grid(format!("grid_size {grid_size} below the minimum of 64")));
    }
    let (span_s, span_i) = match span_nm {
        Some(s) if s > 0.0 => (s, s),
        Some(s) => return Err(Error::Grid(format!("span {s} nm must be positive"))),
        None => default_spans_nm(config),
    };
    let (lo_v, hi_v) = config.crystal.common_valid_range_um();
    let (lo_t, hi_t) = config.crystal.transparency_um();
    let window = ((lo_v.max(lo_t)) * 1e3, (hi_v.min(hi_t)) * 1e3);
    let signal_axis = clipped_axis(config.lambda_s_nm, span_s, window, grid_size);
    let idler_axis = clipped_axis(config.lambda_i_nm, span_i, window, grid_size);

    let pump = PumpSpec::from_config(config);
    let mut amplitude = Array2::<Complex64>::zeros((grid_size, grid_size));
    for (s, &lambda_s) in signal_axis.iter().enumerate() {
        for (i, &lambda_i) in idler_axis.iter().enumerate() {
            let alpha = pump_envelope(lambda_s, lambda_i, &pump);
            let phi = phase_matching_amplitude(config, lambda_s, lambda_i)?;
            amplitude[[s, i]] = Complex64::new(alpha * phi, 0.0);
        }
    }
    let mut grid = JsaGrid {
        signal_axis_nm: signal_axis,
        idler_axis_nm: idler_axis,
        amplitude,
        norm: 0.0,
        config: Some(config.clone()),
    };
    grid.check_axes()?;
    grid.normalize()?;
    Ok(grid)
}

/// Grid for a solved non-degenerate operating point, centered on its
/// signal/idler wavelengths.
pub fn nondegenerate_jsa(
    solution: &GvmSolution,
    grid_size: usize,
    span_nm: Option<f64>,
) -> Result<JsaGrid> {
    compute_jsa_grid(&solution.config, grid_size, span_nm)
}

/// Result of the pump-bandwidth search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthOptimum {
    /// Δλ* maximizing purity, nm.
    pub delta_lambda_nm: f64,
    /// Purity at Δλ* on the full requested grid.
    pub purity: f64,
    /// (Δλ, purity) samples evaluated during the search, ascending in Δλ.
    pub samples: Vec<(f64, f64)>,
    /// Set when the optimum landed on a bracket edge.
    pub at_boundary: bool,
}

/// Default Δλ bracket for the optimizer, nm.
pub const DEFAULT_BANDWIDTH_BRACKET_NM: (f64, f64) = (0.05, 40.0);

/// Golden-section search over Δλ (log-spaced) maximizing Schmidt purity at
/// fixed crystal length. The search runs on a coarser grid for speed; the
/// returned purity is re-evaluated on the full `grid_size`.
pub fn optimize_bandwidth(
    config: &SpdcConfig,
    grid_size: usize,
    bracket_nm: Option<(f64, f64)>,
) -> Result<BandwidthOptimum> {
    let (lo, hi) = bracket_nm.unwrap_or(DEFAULT_BANDWIDTH_BRACKET_NM);
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::InvalidConfig(format!("bad bandwidth bracket [{lo}, {hi}] nm")));
    }
    let search_grid = if grid_size > 121 { (grid_size / 2) | 1 } else { grid_size };
    let purity_at = |delta_ln: f64, n: usize| -> f64 {
        let delta = delta_ln.exp();
        let mut cfg = config.clone();
        cfg.pump_bandwidth_nm = delta;
        compute_jsa_grid(&cfg, n, None)
            .and_then(|grid| schmidt_purity(&grid))
            .map(|s| s.purity)
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (ln_best, _, ln_samples) =
        golden_section_max(|x| purity_at(x, search_grid), lo.ln(), hi.ln(), 44);
    let delta_best = ln_best.exp();
    let mut cfg = config.clone();
    cfg.pump_bandwidth_nm = delta_best;
    let final_purity = schmidt_purity(&compute_jsa_grid(&cfg, grid_size, None)?)?.purity;
    let samples: Vec<(f64, f64)> =
        ln_samples.into_iter().map(|(x, p)| (x.exp(), p)).collect();
    let at_boundary =
        (ln_best - lo.ln()).abs() < 0.02 || (ln_best - hi.ln()).abs() < 0.02;
    Ok(BandwidthOptimum {
        delta_lambda_nm: delta_best,
        purity: final_purity,
        samples,
        at_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn envelope_peaks_on_energy_conservation() {
        let pump = PumpSpec { pump_center_nm: 763.0, delta_lambda_nm: 2.0 };
        assert_eq!(pump_envelope(1526.0, 1526.0, &pump), 1.0);
        // Perturbing one photon decreases the envelope, matching the direct
        // formula evaluation.
        let alpha = pump_envelope(1536.0, 1526.0, &pump);
        assert!(alpha < 1.0);
        let detuning = 1.0 / 1536.0 + 1.0 / 1526.0 - 1.0 / 763.0;
        let sigma = 2.0 / (763.0_f64.powi(2) - 1.0);
        let direct = (-0.5 * (detuning / sigma).powi(2)).exp();
        assert_relative_eq!(alpha, direct, max_relative = 1e-12);
    }

    #[test]
    fn envelope_is_symmetric() {
        let pump = PumpSpec { pump_center_nm: 763.0, delta_lambda_nm: 2.0 };
        assert_eq!(
            pump_envelope(1500.0, 1560.0, &pump),
            pump_envelope(1560.0, 1500.0, &pump)
        );
    }

    #[test]
    fn fwhm_approaches_small_bandwidth_limit() {
        for (center, delta) in [(763.0, 1.0), (406.0, 0.5), (1042.0, 3.0)] {
            let pump = PumpSpec { pump_center_nm: center, delta_lambda_nm: delta };
            let expect = 2.0 * (2.0_f64.ln()).sqrt() * delta;
            assert!(
                (pump.fwhm_nm() - expect).abs() / expect < 0.01,
                "FWHM {} vs 1.67Δλ {}",
                pump.fwhm_nm(),
                expect
            );
        }
    }

    #[test]
    fn sinc_limits() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rank_one_kernel_has_unit_purity() {
        let n = 64;
        let axis: Vec<f64> = (0..n).map(|k| 1500.0 + k as f64).collect();
        let mut amplitude = Array2::<Complex64>::zeros((n, n));
        for s in 0..n {
            for i in 0..n {
                let a = (-((s as f64 - 32.0) / 10.0).powi(2)).exp();
                let b = (-((i as f64 - 30.0) / 14.0).powi(2)).exp();
                amplitude[[s, i]] = Complex64::new(a * b, 0.0);
            }
        }
        let grid = JsaGrid::from_amplitude(axis.clone(), axis, amplitude).unwrap();
        let schmidt = schmidt_purity(&grid).unwrap();
        assert!((schmidt.purity - 1.0).abs() < 1e-12);
        assert!((schmidt.schmidt_number - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_equal_modes_give_half_purity() {
        let n = 32;
        let axis: Vec<f64> = (0..n).map(|k| 1000.0 + k as f64).collect();
        let mut amplitude = Array2::<Complex64>::zeros((n, n));
        // Two orthogonal rank-1 pieces with equal weight.
        amplitude[[4, 7]] = Complex64::new(1.0, 0.0);
        amplitude[[20, 25]] = Complex64::new(1.0, 0.0);
        let grid = JsaGrid::from_amplitude(axis.clone(), axis, amplitude).unwrap();
        let schmidt = schmidt_purity(&grid).unwrap();
        assert!((schmidt.purity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn transpose_leaves_purity_unchanged() {
        let n = 48;
        let axis: Vec<f64> = (0..n).map(|k| 1200.0 + 0.7 * k as f64).collect();
        let mut amplitude = Array2::<Complex64>::zeros((n, n));
        for s in 0..n {
            for i in 0..n {
                let x = s as f64 - 24.0;
                let y = i as f64 - 22.0;
                amplitude[[s, i]] =
                    Complex64::new((-(x * x + 0.6 * x * y + y * y) / 90.0).exp(), 0.0);
            }
        }
        let grid = JsaGrid::from_amplitude(axis.clone(), axis, amplitude).unwrap();
        let p1 = schmidt_purity(&grid).unwrap().purity;
        let p2 = schmidt_purity(&grid.transposed()).unwrap().purity;
        assert!((p1 - p2).abs() < 1e-10);
    }

    #[test]
    fn normalization_holds_after_construction() {
        let n = 64;
        let axis: Vec<f64> = (0..n).map(|k| 900.0 + 2.0 * k as f64).collect();
        let amplitude = Array2::<Complex64>::from_elem((n, n), Complex64::new(0.3, 0.0));
        let grid = JsaGrid::from_amplitude(axis.clone(), axis, amplitude).unwrap();
        assert!((grid.norm - 1.0).abs() < 1e-10);
        assert!((grid.squared_norm() - 1.0).abs() < 1e-10);
    }
}
