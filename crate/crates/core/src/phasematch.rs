//! Collinear Type-II phase matching and group-velocity matching.
//!
//! The solvers mirror the intersection construction of the phase-matching
//! curve with the GVM curves: an inner 1-D bracketing solve finds the angle
//! where Δk = k_p − k_s − k_i vanishes at fixed wavelengths, and an outer
//! 1-D solve scans the (pump or degenerate) wavelength until the selected
//! GVM residual changes sign, then refines it by Brent's method.
//!
//! Conditions, with k′ = dk/dω the inverse group velocity:
//!
//! - GVM₁: k′_p = k′_s
//! - GVM₂: k′_p = k′_i
//! - GVM₃: 2k′_p = k′_s + k′_i
//!
//! "Not satisfied" (no intersection inside the usable window) is a
//! first-class outcome, not an error.

use serde::{Deserialize, Serialize};

use crate::crystal::Crystal;
use crate::error::{Error, Result};
use crate::numeric::{brent, scan_sign_changes, Bracket};
use crate::refraction::{
    effective_nonlinearity_for, Plane, PolarizationAssignment, PropagationGeometry,
};

/// The three group-velocity matching conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GvmCondition {
    Gvm1,
    Gvm2,
    Gvm3,
}

impl GvmCondition {
    pub const ALL: [GvmCondition; 3] = [GvmCondition::Gvm1, GvmCondition::Gvm2, GvmCondition::Gvm3];

    pub fn name(&self) -> &'static str {
        match self {
            GvmCondition::Gvm1 => "gvm1",
            GvmCondition::Gvm2 => "gvm2",
            GvmCondition::Gvm3 => "gvm3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "gvm1" | "1" => Ok(GvmCondition::Gvm1),
            "gvm2" | "2" => Ok(GvmCondition::Gvm2),
            "gvm3" | "3" => Ok(GvmCondition::Gvm3),
            other => Err(Error::InvalidConfig(format!("unknown GVM condition '{other}'"))),
        }
    }
}

/// Which down-converted photon a non-degenerate solve holds fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhotonRole {
    Signal,
    Idler,
}

/// Pump wavelength from energy conservation, nm.
pub fn pump_wavelength_nm(lambda_s_nm: f64, lambda_i_nm: f64) -> f64 {
    1.0 / (1.0 / lambda_s_nm + 1.0 / lambda_i_nm)
}

/// Partner photon wavelength from energy conservation, nm.
pub fn partner_wavelength_nm(lambda_p_nm: f64, lambda_fixed_nm: f64) -> f64 {
    1.0 / (1.0 / lambda_p_nm - 1.0 / lambda_fixed_nm)
}

/// One collinear SPDC scenario: crystal, propagation plane and angle,
/// polarization assignment, the wavelength triple, crystal length, and pump
/// bandwidth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpdcConfig {
    pub crystal: Crystal,
    pub geometry: PropagationGeometry,
    pub polarization: PolarizationAssignment,
    pub lambda_p_nm: f64,
    pub lambda_s_nm: f64,
    pub lambda_i_nm: f64,
    /// Crystal length L in mm.
    pub length_mm: f64,
    /// Pump bandwidth Δλ in nm (the Gaussian envelope parameter).
    pub pump_bandwidth_nm: f64,
}

impl SpdcConfig {
    /// Wavelength-degenerate scenario 2λ_p = λ_s = λ_i.
    pub fn degenerate(
        crystal: Crystal,
        geometry: PropagationGeometry,
        polarization: PolarizationAssignment,
        lambda_dc_nm: f64,
        length_mm: f64,
        pump_bandwidth_nm: f64,
    ) -> Self {
        Self {
            crystal,
            geometry,
            polarization,
            lambda_p_nm: lambda_dc_nm / 2.0,
            lambda_s_nm: lambda_dc_nm,
            lambda_i_nm: lambda_dc_nm,
            length_mm,
            pump_bandwidth_nm,
        }
    }

    /// Non-degenerate scenario; the pump follows from energy conservation.
    pub fn nondegenerate(
        crystal: Crystal,
        geometry: PropagationGeometry,
        polarization: PolarizationAssignment,
        lambda_s_nm: f64,
        lambda_i_nm: f64,
        length_mm: f64,
        pump_bandwidth_nm: f64,
    ) -> Self {
        Self {
            crystal,
            geometry,
            polarization,
            lambda_p_nm: pump_wavelength_nm(lambda_s_nm, lambda_i_nm),
            lambda_s_nm,
            lambda_i_nm,
            length_mm,
            pump_bandwidth_nm,
        }
    }

    /// Energy conservation, Type-II pattern, and geometry checks.
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.geometry.check_crystal(&self.crystal)?;
        for (label, lambda) in
            [("pump", self.lambda_p_nm), ("signal", self.lambda_s_nm), ("idler", self.lambda_i_nm)]
        {
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(Error::InvalidConfig(format!("{label} wavelength {lambda} nm")));
            }
        }
        let lhs = 1.0 / self.lambda_p_nm;
        let rhs = 1.0 / self.lambda_s_nm + 1.0 / self.lambda_i_nm;
        if ((lhs - rhs) / lhs).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "energy conservation violated: 1/{} != 1/{} + 1/{} (relative error {:.3e})",
                self.lambda_p_nm,
                self.lambda_s_nm,
                self.lambda_i_nm,
                ((lhs - rhs) / lhs).abs()
            )));
        }
        if !self.polarization.is_type2() {
            return Err(Error::InvalidConfig(
                "Type-II requires signal and idler on different branches".into(),
            ));
        }
        if self.length_mm <= 0.0 {
            return Err(Error::InvalidConfig(format!("length {} mm", self.length_mm)));
        }
        Ok(())
    }

    /// Swap signal and idler together with their branches.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        std::mem::swap(&mut out.lambda_s_nm, &mut out.lambda_i_nm);
        out.polarization = PolarizationAssignment {
            pump: self.polarization.pump,
            signal: self.polarization.idler,
            idler: self.polarization.signal,
        };
        out
    }

    fn wavelengths_um(&self) -> (f64, f64, f64) {
        (self.lambda_p_nm * 1e-3, self.lambda_s_nm * 1e-3, self.lambda_i_nm * 1e-3)
    }
}

/// Borrow-based evaluator for one (crystal, plane, assignment) triple; the
/// scan loops run entirely through it so no per-sample allocation happens.
#[derive(Clone, Copy)]
pub(crate) struct WaveSet<'a> {
    pub crystal: &'a Crystal,
    pub plane: Plane,
    pub assignment: PolarizationAssignment,
}

impl<'a> WaveSet<'a> {
    fn geometry(&self, angle_deg: f64) -> PropagationGeometry {
        PropagationGeometry::in_plane(self.plane, angle_deg)
    }

    /// Δk in rad/µm; wavelengths in µm.
    pub(crate) fn delta_k(
        &self,
        angle_deg: f64,
        lp_um: f64,
        ls_um: f64,
        li_um: f64,
    ) -> Result<f64> {
        let geometry = self.geometry(angle_deg);
        let n_p =
            crate::refraction::index_unvalidated(self.crystal, &geometry, self.assignment.pump, lp_um)?;
        let n_s = crate::refraction::index_unvalidated(
            self.crystal,
            &geometry,
            self.assignment.signal,
            ls_um,
        )?;
        let n_i = crate::refraction::index_unvalidated(
            self.crystal,
            &geometry,
            self.assignment.idler,
            li_um,
        )?;
        let two_pi = 2.0 * std::f64::consts::PI;
        Ok(two_pi * (n_p / lp_um - n_s / ls_um - n_i / li_um))
    }

    /// GVM residual in 1/c; wavelengths in µm.
    pub(crate) fn residual(
        &self,
        condition: GvmCondition,
        angle_deg: f64,
        lp_um: f64,
        ls_um: f64,
        li_um: f64,
    ) -> Result<f64> {
        let geometry = self.geometry(angle_deg);
        let step = crate::refraction::GROUP_VELOCITY_FD_STEP;
        let ng = |branch, lambda| {
            crate::refraction::group_index_unvalidated(self.crystal, &geometry, branch, lambda, step)
        };
        let ng_p = ng(self.assignment.pump, lp_um)?;
        match condition {
            GvmCondition::Gvm1 => Ok(ng_p - ng(self.assignment.signal, ls_um)?),
            GvmCondition::Gvm2 => Ok(ng_p - ng(self.assignment.idler, li_um)?),
            GvmCondition::Gvm3 => Ok(2.0 * ng_p
                - ng(self.assignment.signal, ls_um)?
                - ng(self.assignment.idler, li_um)?),
        }
    }
}

impl SpdcConfig {
    pub(crate) fn waves(&self) -> WaveSet<'_> {
        WaveSet {
            crystal: &self.crystal,
            plane: self.geometry.plane,
            assignment: self.polarization,
        }
    }
}

/// Δk = k_p − k_s − k_i in rad/µm at the configuration's angle.
pub fn phase_mismatch(config: &SpdcConfig) -> Result<f64> {
    let (lp, ls, li) = config.wavelengths_um();
    config.geometry.validate()?;
    config.geometry.check_crystal(&config.crystal)?;
    config.waves().delta_k(config.geometry.tuning_angle_deg(), lp, ls, li)
}

/// Selected GVM residual in units of 1/c.
pub fn gvm_residual(config: &SpdcConfig, condition: GvmCondition) -> Result<f64> {
    let (lp, ls, li) = config.wavelengths_um();
    config.geometry.validate()?;
    config.geometry.check_crystal(&config.crystal)?;
    config.waves().residual(condition, config.geometry.tuning_angle_deg(), lp, ls, li)
}

/// Result of the Δk = 0 angle solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSolution {
    /// Chosen root (the smallest), degrees.
    pub angle_deg: f64,
    /// Every root found in the scanned interval, ascending.
    pub all_deg: Vec<f64>,
}

/// Convergence target for |Δk| at a solved angle, rad/µm.
pub const DELTA_K_TOL: f64 = 1e-6;
/// Convergence target for the GVM residual at a solved wavelength, 1/c.
pub const GVM_RESIDUAL_TOL: f64 = 1e-6;

const ANGLE_SCAN_LO: f64 = 0.05;
const ANGLE_SCAN_HI: f64 = 89.95;

#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN-safe residual guards
fn solve_angle_core(
    waves: &WaveSet<'_>,
    lp_um: f64,
    ls_um: f64,
    li_um: f64,
    angle_step_deg: f64,
) -> Result<AngleSolution> {
    let dk_at = |angle: f64| -> Option<f64> { waves.delta_k(angle, lp_um, ls_um, li_um).ok() };
    let steps = ((ANGLE_SCAN_HI - ANGLE_SCAN_LO) / angle_step_deg).ceil() as usize;
    // Single pass: collect sign-change brackets and the Δk range together.
    let mut brackets = Vec::new();
    let mut dk_min = f64::INFINITY;
    let mut dk_max = f64::NEG_INFINITY;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=steps.max(16) {
        let x = ANGLE_SCAN_LO
            + (ANGLE_SCAN_HI - ANGLE_SCAN_LO) * k as f64 / steps.max(16) as f64;
        let Some(y) = dk_at(x).filter(|v| v.is_finite()) else {
            prev = None;
            continue;
        };
        dk_min = dk_min.min(y);
        dk_max = dk_max.max(y);
        if let Some((xp, yp)) = prev {
            if yp != 0.0 && (y == 0.0 || yp.signum() != y.signum()) {
                brackets.push(Bracket { a: xp, b: x, fa: yp, fb: y });
            }
        }
        prev = Some((x, y));
    }
    if brackets.is_empty() {
        return Err(Error::NoPhaseMatching {
            lo_deg: ANGLE_SCAN_LO,
            hi_deg: ANGLE_SCAN_HI,
            dk_min,
            dk_max,
        });
    }
    let mut roots = Vec::with_capacity(brackets.len());
    for bracket in brackets {
        let f = |angle: f64| dk_at(angle).unwrap_or(f64::NAN);
        let root = brent(f, bracket, 1e-10, 200)?;
        let residual = dk_at(root).unwrap_or(f64::NAN);
        // NaN-safe: a non-finite residual must also be rejected.
        if !(residual.abs() < DELTA_K_TOL) {
            return Err(Error::RootFind(format!(
                "angle root at {root:.4} deg left |dk| = {residual:.3e} rad/um"
            )));
        }
        roots.push(root);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    Ok(AngleSolution { angle_deg: roots[0], all_deg: roots })
}

/// Find the tuning angle(s) where Δk vanishes for the configuration's
/// wavelengths, ignoring the angle it currently carries.
pub fn solve_angle(config: &SpdcConfig, angle_step_deg: f64) -> Result<AngleSolution> {
    config.validate()?;
    let (lp, ls, li) = config.wavelengths_um();
    solve_angle_core(&config.waves(), lp, ls, li, angle_step_deg)
}

/// [`solve_angle`] with a warm start: a bracket around `guess_deg` is tried
/// before the full scan. Useful when sweeping wavelengths along a
/// phase-matching curve.
pub fn solve_angle_with_guess(
    config: &SpdcConfig,
    angle_step_deg: f64,
    guess_deg: Option<f64>,
) -> Result<AngleSolution> {
    config.validate()?;
    let (lp, ls, li) = config.wavelengths_um();
    solve_angle_warm(&config.waves(), lp, ls, li, angle_step_deg, guess_deg)
}

/// Angle solve that tries a local bracket around `guess_deg` before falling
/// back to the full scan; the outer wavelength scans use it for warm starts.
fn solve_angle_warm(
    waves: &WaveSet<'_>,
    lp_um: f64,
    ls_um: f64,
    li_um: f64,
    angle_step_deg: f64,
    guess_deg: Option<f64>,
) -> Result<AngleSolution> {
    if let Some(guess) = guess_deg {
        let window = (4.0 * angle_step_deg).max(0.5);
        let lo = (guess - window).max(ANGLE_SCAN_LO);
        let hi = (guess + window).min(ANGLE_SCAN_HI);
        let dk_at = |angle: f64| -> Option<f64> { waves.delta_k(angle, lp_um, ls_um, li_um).ok() };
        if let (Some(f_lo), Some(f_hi)) = (dk_at(lo), dk_at(hi)) {
            if f_lo.is_finite() && f_hi.is_finite() && f_lo.signum() != f_hi.signum() {
                let bracket = Bracket { a: lo, b: hi, fa: f_lo, fb: f_hi };
                let root = brent(|a| dk_at(a).unwrap_or(f64::NAN), bracket, 1e-10, 200)?;
                if dk_at(root).map(f64::abs).unwrap_or(f64::INFINITY) < DELTA_K_TOL {
                    return Ok(AngleSolution { angle_deg: root, all_deg: vec![root] });
                }
            }
        }
    }
    solve_angle_core(waves, lp_um, ls_um, li_um, angle_step_deg)
}

/// How the d_eff attached to a solution was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeffSource {
    /// Closed-form point-group expression (Miller-scaled).
    Formula,
    /// Tabulated per-scenario value from the crystal data file.
    Table,
    /// Neither available.
    Unavailable,
}

/// A solved GVM operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GvmSolution {
    pub condition: GvmCondition,
    /// Configuration with the solved wavelengths and angle filled in.
    pub config: SpdcConfig,
    pub d_eff_pmv: Option<f64>,
    pub d_eff_source: DeffSource,
    /// |Δk| left at the solution, rad/µm.
    pub delta_k_rad_per_um: f64,
    /// GVM residual left at the solution, 1/c.
    pub gvm_residual_inv_c: f64,
    /// Additional phase-matching angles at the solved wavelengths, if any.
    pub other_angles_deg: Vec<f64>,
}

impl GvmSolution {
    /// The tuning angle (θ, or φ in the xy plane), degrees.
    pub fn angle_deg(&self) -> f64 {
        self.config.geometry.tuning_angle_deg()
    }
}

/// Outcome of a GVM solve: operating points, or a first-class
/// "not satisfied" with the window that was scanned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GvmOutcome {
    /// At least one intersection; ordered by pump wavelength.
    Solved(Vec<GvmSolution>),
    NotSatisfied {
        /// Wavelength window scanned (of the degenerate photon wavelength,
        /// or of the pump for non-degenerate solves), nm.
        scanned_nm: (f64, f64),
    },
}

impl GvmOutcome {
    pub fn solutions(&self) -> &[GvmSolution] {
        match self {
            GvmOutcome::Solved(v) => v,
            GvmOutcome::NotSatisfied { .. } => &[],
        }
    }

    pub fn is_satisfied(&self) -> bool {
        matches!(self, GvmOutcome::Solved(_))
    }

    pub fn best(&self) -> Option<&GvmSolution> {
        self.solutions().first()
    }
}

/// Scan and refinement controls for the GVM solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Coarse wavelength scan step, nm.
    pub lambda_step_nm: f64,
    /// Coarse angle scan step, degrees.
    pub angle_step_deg: f64,
    /// Crystal length carried into solved configurations, mm.
    pub length_mm: f64,
    /// Pump bandwidth carried into solved configurations, nm.
    pub pump_bandwidth_nm: f64,
    /// Exchange the default signal/idler branch assignment.
    pub swap_signal_idler: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            lambda_step_nm: 1.0,
            angle_step_deg: 0.1,
            length_mm: 10.0,
            pump_bandwidth_nm: 1.0,
            swap_signal_idler: false,
        }
    }
}

/// Candidate pump-branch assignments for a plane. In a negative uniaxial
/// crystal only an extraordinary pump can phase match; in biaxial principal
/// planes the fast branch may be either one (it switches across the
/// optic-axis angle in xz), so both are scanned.
fn candidate_assignments(plane: Plane, swap: bool) -> Vec<PolarizationAssignment> {
    match plane {
        Plane::Uniaxial => vec![PolarizationAssignment::type2(swap)],
        _ => vec![
            PolarizationAssignment::type2(swap),
            PolarizationAssignment::type2_ordinary_pump(swap),
        ],
    }
}

/// Usable wavelength window for a down-converted photon, nm: the common
/// Sellmeier validity intersected with transparency, shrunk enough that the
/// group-velocity stencil stays inside.
fn photon_window_nm(crystal: &Crystal) -> (f64, f64) {
    let (lo_v, hi_v) = crystal.common_valid_range_um();
    let (lo_t, hi_t) = crystal.transparency_um();
    let lo = lo_v.max(lo_t) * 1e3;
    let hi = hi_v.min(hi_t) * 1e3;
    (lo * 1.002, hi * 0.998)
}

fn solution_for(
    condition: GvmCondition,
    config: &SpdcConfig,
    angle: AngleSolution,
) -> Result<GvmSolution> {
    let mut config = config.clone();
    config.geometry = config.geometry.with_tuning_angle_deg(angle.angle_deg);
    let delta_k = phase_mismatch(&config)?;
    let residual = gvm_residual(&config, condition)?;
    let (lp, ls, li) = config.wavelengths_um();
    let (d_eff_pmv, d_eff_source) =
        match effective_nonlinearity_for(&config.crystal, &config.geometry, lp, ls, li) {
            Ok(value) => (Some(value), DeffSource::Formula),
            Err(Error::UnsupportedDeff { .. }) => {
                let degenerate = (config.lambda_s_nm - config.lambda_i_nm).abs() < 1e-6;
                let key = if degenerate {
                    format!("{}:{}", config.geometry.plane.name(), condition.name())
                } else {
                    // Non-degenerate entries are keyed by the telecom-side
                    // (longer) photon wavelength, rounded to nm.
                    let fixed = config.lambda_s_nm.max(config.lambda_i_nm);
                    format!(
                        "{}:{}:{}",
                        config.geometry.plane.name(),
                        condition.name(),
                        fixed.round() as i64
                    )
                };
                match config.crystal.deff_table.get(&key) {
                    Some(value) => (Some(*value), DeffSource::Table),
                    None => (None, DeffSource::Unavailable),
                }
            }
            Err(e) => return Err(e),
        };
    Ok(GvmSolution {
        condition,
        config,
        d_eff_pmv,
        d_eff_source,
        delta_k_rad_per_um: delta_k,
        gvm_residual_inv_c: residual,
        other_angles_deg: angle.all_deg,
    })
}

/// Solve the wavelength-degenerate GVM problem (2λ_p = λ_s = λ_i) for one
/// crystal, plane, and condition.
pub fn solve_gvm_degenerate(
    crystal: &Crystal,
    plane: Plane,
    condition: GvmCondition,
    options: &SolveOptions,
) -> Result<GvmOutcome> {
    let geometry = PropagationGeometry::in_plane(plane, 45.0);
    geometry.check_crystal(crystal)?;
    let (window_lo, window_hi) = photon_window_nm(crystal);
    // The pump must also stay inside the window: λ ≥ 2·window_lo.
    let lo = 2.0 * window_lo;
    let hi = window_hi;
    if lo >= hi {
        return Err(Error::InvalidConfig(format!(
            "empty degenerate scan window for {}",
            crystal.name
        )));
    }
    let steps = ((hi - lo) / options.lambda_step_nm).ceil() as usize;

    let mut solutions = Vec::new();
    for assignment in candidate_assignments(plane, options.swap_signal_idler) {
        let waves = WaveSet { crystal, plane, assignment };
        // Warm-started residual sampler along the phase-matching curve.
        let last_angle = std::cell::Cell::new(None::<f64>);
        let residual_at = |lambda_nm: f64| -> Option<f64> {
            let (lp, ls, li) = (lambda_nm * 5e-4, lambda_nm * 1e-3, lambda_nm * 1e-3);
            let angle =
                solve_angle_warm(&waves, lp, ls, li, options.angle_step_deg, last_angle.get())
                    .ok()?;
            last_angle.set(Some(angle.angle_deg));
            waves.residual(condition, angle.angle_deg, lp, ls, li).ok()
        };
        let brackets = scan_sign_changes(residual_at, lo, hi, steps.max(8));
        for bracket in brackets {
            let eval = |lambda: f64| residual_at(lambda).unwrap_or(f64::NAN);
            let Ok(lambda_root) = brent(eval, bracket, 1e-7, 200) else { continue };
            let config = SpdcConfig::degenerate(
                crystal.clone(),
                geometry,
                assignment,
                lambda_root,
                options.length_mm,
                options.pump_bandwidth_nm,
            );
            let (lp, ls, li) = (lambda_root * 5e-4, lambda_root * 1e-3, lambda_root * 1e-3);
            let Ok(angle) =
                solve_angle_warm(&waves, lp, ls, li, options.angle_step_deg, last_angle.get())
            else {
                continue;
            };
            let solution = solution_for(condition, &config, angle)?;
            if solution.gvm_residual_inv_c.abs() < GVM_RESIDUAL_TOL
                && solution.delta_k_rad_per_um.abs() < DELTA_K_TOL
            {
                solutions.push(solution);
            }
        }
    }
    solutions.sort_by(|a, b| a.config.lambda_p_nm.total_cmp(&b.config.lambda_p_nm));
    solutions.dedup_by(|a, b| {
        (a.config.lambda_p_nm - b.config.lambda_p_nm).abs() < 0.5
            && (a.angle_deg() - b.angle_deg()).abs() < 0.05
    });
    if solutions.is_empty() {
        Ok(GvmOutcome::NotSatisfied { scanned_nm: (lo, hi) })
    } else {
        Ok(GvmOutcome::Solved(solutions))
    }
}

/// Solve the non-degenerate GVM problem with one photon's wavelength held
/// fixed; the outer scan runs over the pump wavelength, with the partner
/// photon following from energy conservation.
pub fn solve_gvm_nondegenerate(
    crystal: &Crystal,
    plane: Plane,
    fixed_photon: PhotonRole,
    fixed_lambda_nm: f64,
    condition: GvmCondition,
    options: &SolveOptions,
) -> Result<GvmOutcome> {
    let geometry = PropagationGeometry::in_plane(plane, 45.0);
    geometry.check_crystal(crystal)?;
    let (window_lo, window_hi) = photon_window_nm(crystal);
    if !(window_lo..=window_hi).contains(&fixed_lambda_nm) {
        return Err(Error::InvalidConfig(format!(
            "fixed wavelength {fixed_lambda_nm} nm outside usable window [{window_lo:.0}, {window_hi:.0}] nm of {}",
            crystal.name
        )));
    }
    let lo = window_lo;
    let hi = window_hi.min(fixed_lambda_nm * 0.999);
    if lo >= hi {
        return Err(Error::InvalidConfig("empty non-degenerate scan window".into()));
    }
    let steps = ((hi - lo) / options.lambda_step_nm).ceil() as usize;

    let mut solutions = Vec::new();
    for assignment in candidate_assignments(plane, options.swap_signal_idler) {
        let waves = WaveSet { crystal, plane, assignment };
        let photons_at = |lambda_p_nm: f64| -> Option<(f64, f64)> {
            let partner = partner_wavelength_nm(lambda_p_nm, fixed_lambda_nm);
            if !partner.is_finite() || !(window_lo..=window_hi).contains(&partner) {
                return None;
            }
            Some(match fixed_photon {
                PhotonRole::Signal => (fixed_lambda_nm, partner),
                PhotonRole::Idler => (partner, fixed_lambda_nm),
            })
        };
        let last_angle = std::cell::Cell::new(None::<f64>);
        let residual_at = |lambda_p_nm: f64| -> Option<f64> {
            let (lambda_s, lambda_i) = photons_at(lambda_p_nm)?;
            let (lp, ls, li) = (lambda_p_nm * 1e-3, lambda_s * 1e-3, lambda_i * 1e-3);
            let angle =
                solve_angle_warm(&waves, lp, ls, li, options.angle_step_deg, last_angle.get())
                    .ok()?;
            last_angle.set(Some(angle.angle_deg));
            waves.residual(condition, angle.angle_deg, lp, ls, li).ok()
        };
        let brackets = scan_sign_changes(residual_at, lo, hi, steps.max(8));
        for bracket in brackets {
            let eval = |lambda: f64| residual_at(lambda).unwrap_or(f64::NAN);
            let Ok(lambda_root) = brent(eval, bracket, 1e-7, 200) else { continue };
            let Some((lambda_s, lambda_i)) = photons_at(lambda_root) else { continue };
            let config = SpdcConfig::nondegenerate(
                crystal.clone(),
                geometry,
                assignment,
                lambda_s,
                lambda_i,
                options.length_mm,
                options.pump_bandwidth_nm,
            );
            let (lp, ls, li) = config.wavelengths_um();
            let Ok(angle) =
                solve_angle_warm(&waves, lp, ls, li, options.angle_step_deg, last_angle.get())
            else {
                continue;
            };
            let solution = solution_for(condition, &config, angle)?;
            if solution.gvm_residual_inv_c.abs() < GVM_RESIDUAL_TOL
                && solution.delta_k_rad_per_um.abs() < DELTA_K_TOL
            {
                solutions.push(solution);
            }
        }
    }
    solutions.sort_by(|a, b| a.config.lambda_p_nm.total_cmp(&b.config.lambda_p_nm));
    solutions.dedup_by(|a, b| {
        (a.config.lambda_p_nm - b.config.lambda_p_nm).abs() < 0.5
            && (a.angle_deg() - b.angle_deg()).abs() < 0.05
    });
    if solutions.is_empty() {
        Ok(GvmOutcome::NotSatisfied { scanned_nm: (lo, hi) })
    } else {
        Ok(GvmOutcome::Solved(solutions))
    }
}
