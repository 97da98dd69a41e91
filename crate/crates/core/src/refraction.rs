//! Direction-dependent optics in principal-plane geometries.
//!
//! Propagation is restricted to the cases the solver supports: any direction
//! in a uniaxial crystal (azimuth enters only through d_eff), and the three
//! principal planes of a biaxial crystal. In every case exactly two
//! polarization eigenmodes exist:
//!
//! - an *ordinary-like* branch whose index does not depend on the tuning
//!   angle (uniaxial `o`; the out-of-plane principal axis in a biaxial
//!   plane), and
//! - an *extraordinary-like* branch mixing the two in-plane principal
//!   indices through the index ellipse,
//!   `1/n²(ψ) = cos²ψ/n_a² + sin²ψ/n_b²`.
//!
//! | plane | tuning ψ | e-like endpoints n_a → n_b | o-like axis |
//! |-------|----------|-----------------------------|-------------|
//! | uniaxial | θ (from optic axis) | n_o → n_e | o |
//! | xz    | θ (from z) | n_x → n_z | y |
//! | yz    | θ (from z) | n_y → n_z | x |
//! | xy    | φ (from x) | n_y → n_x | z |
//!
//! Polar angle θ is measured from the z axis and azimuth φ from the x axis.
//! Angles are degrees at this interface, radians internally; Sellmeier
//! evaluation is in µm.

use serde::{Deserialize, Serialize};

use crate::crystal::{AxisClass, Crystal};
use crate::error::{Error, Result};

/// Propagation-plane restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    Uniaxial,
    Xz,
    Yz,
    Xy,
}

impl Plane {
    pub fn name(&self) -> &'static str {
        match self {
            Plane::Uniaxial => "uniaxial",
            Plane::Xz => "xz",
            Plane::Yz => "yz",
            Plane::Xy => "xy",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_lowercase().as_str() {
            "uniaxial" | "uni" => Ok(Plane::Uniaxial),
            "xz" => Ok(Plane::Xz),
            "yz" => Ok(Plane::Yz),
            "xy" => Ok(Plane::Xy),
            other => Err(Error::GeometryMismatch(format!("unknown plane '{other}'"))),
        }
    }

    /// Axis label of the angle-independent branch.
    pub fn ordinary_axis(&self) -> &'static str {
        match self {
            Plane::Uniaxial => "o",
            Plane::Xz => "y",
            Plane::Yz => "x",
            Plane::Xy => "z",
        }
    }

    /// Axis labels (ψ = 0, ψ = 90°) of the angle-dependent branch.
    pub fn extraordinary_axes(&self) -> (&'static str, &'static str) {
        match self {
            Plane::Uniaxial => ("o", "e"),
            Plane::Xz => ("x", "z"),
            Plane::Yz => ("y", "z"),
            Plane::Xy => ("y", "x"),
        }
    }

    /// Whether the tuning angle is the azimuth φ (xy plane) or the polar θ.
    pub fn tunes_phi(&self) -> bool {
        matches!(self, Plane::Xy)
    }
}

/// A propagation direction compatible with one of the supported planes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationGeometry {
    pub plane: Plane,
    /// Polar angle from z, degrees.
    pub theta_deg: f64,
    /// Azimuth from x, degrees.
    pub phi_deg: f64,
}

impl PropagationGeometry {
    pub fn uniaxial(theta_deg: f64) -> Self {
        Self { plane: Plane::Uniaxial, theta_deg, phi_deg: 0.0 }
    }

    pub fn xz(theta_deg: f64) -> Self {
        Self { plane: Plane::Xz, theta_deg, phi_deg: 0.0 }
    }

    pub fn yz(theta_deg: f64) -> Self {
        Self { plane: Plane::Yz, theta_deg, phi_deg: 90.0 }
    }

    pub fn xy(phi_deg: f64) -> Self {
        Self { plane: Plane::Xy, theta_deg: 90.0, phi_deg }
    }

    /// Build a geometry in `plane` with the given tuning angle.
    pub fn in_plane(plane: Plane, angle_deg: f64) -> Self {
        match plane {
            Plane::Uniaxial => Self::uniaxial(angle_deg),
            Plane::Xz => Self::xz(angle_deg),
            Plane::Yz => Self::yz(angle_deg),
            Plane::Xy => Self::xy(angle_deg),
        }
    }

    /// The angle that tunes phase matching in this plane (θ, or φ in xy).
    pub fn tuning_angle_deg(&self) -> f64 {
        if self.plane.tunes_phi() { self.phi_deg } else { self.theta_deg }
    }

    pub fn with_tuning_angle_deg(mut self, angle_deg: f64) -> Self {
        if self.plane.tunes_phi() {
            self.phi_deg = angle_deg;
        } else {
            self.theta_deg = angle_deg;
        }
        self
    }

    /// Check angle ranges and the fixed-angle restriction of each plane.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::GeometryMismatch(msg));
        if !(0.0..=90.0).contains(&self.theta_deg) || !(0.0..=90.0).contains(&self.phi_deg) {
            return bad(format!(
                "angles must lie in [0, 90] deg, got theta = {}, phi = {}",
                self.theta_deg, self.phi_deg
            ));
        }
        match self.plane {
            Plane::Uniaxial => Ok(()),
            Plane::Xz if self.phi_deg != 0.0 => {
                bad(format!("xz plane requires phi = 0, got {}", self.phi_deg))
            }
            Plane::Yz if self.phi_deg != 90.0 => {
                bad(format!("yz plane requires phi = 90, got {}", self.phi_deg))
            }
            Plane::Xy if self.theta_deg != 90.0 => {
                bad(format!("xy plane requires theta = 90, got {}", self.theta_deg))
            }
            _ => Ok(()),
        }
    }

    /// Check that the plane applies to the crystal class.
    pub fn check_crystal(&self, crystal: &Crystal) -> Result<()> {
        let ok = match crystal.axis_class {
            AxisClass::Uniaxial => self.plane == Plane::Uniaxial,
            AxisClass::Biaxial => self.plane != Plane::Uniaxial,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::GeometryMismatch(format!(
                "plane '{}' is not applicable to {:?} crystal {}",
                self.plane.name(),
                crystal.axis_class,
                crystal.name
            )))
        }
    }
}

/// The two polarization eigenmodes of a plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationBranch {
    OrdinaryLike,
    ExtraordinaryLike,
}

impl PolarizationBranch {
    pub fn short(&self) -> &'static str {
        match self {
            PolarizationBranch::OrdinaryLike => "o",
            PolarizationBranch::ExtraordinaryLike => "e",
        }
    }

    pub fn other(&self) -> Self {
        match self {
            PolarizationBranch::OrdinaryLike => PolarizationBranch::ExtraordinaryLike,
            PolarizationBranch::ExtraordinaryLike => PolarizationBranch::OrdinaryLike,
        }
    }
}

/// Branch assignment for the three interacting waves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolarizationAssignment {
    pub pump: PolarizationBranch,
    pub signal: PolarizationBranch,
    pub idler: PolarizationBranch,
}

impl PolarizationAssignment {
    /// Type-II pattern with an extraordinary-like pump: e → o + e.
    /// `swap` exchanges the signal/idler branches.
    pub fn type2(swap: bool) -> Self {
        let (signal, idler) = if swap {
            (PolarizationBranch::ExtraordinaryLike, PolarizationBranch::OrdinaryLike)
        } else {
            (PolarizationBranch::OrdinaryLike, PolarizationBranch::ExtraordinaryLike)
        };
        Self { pump: PolarizationBranch::ExtraordinaryLike, signal, idler }
    }

    /// Type-II with the pump on the ordinary-like branch; required in
    /// biaxial planes where the constant-index branch is the fast one (yz
    /// always, xz above the optic-axis angle). The signal stays the photon
    /// cross-polarized to the pump, so here signal = extraordinary-like.
    pub fn type2_ordinary_pump(swap: bool) -> Self {
        let (signal, idler) = if swap {
            (PolarizationBranch::OrdinaryLike, PolarizationBranch::ExtraordinaryLike)
        } else {
            (PolarizationBranch::ExtraordinaryLike, PolarizationBranch::OrdinaryLike)
        };
        Self { pump: PolarizationBranch::OrdinaryLike, signal, idler }
    }

    /// Signal and idler must ride different branches for Type-II.
    pub fn is_type2(&self) -> bool {
        self.signal != self.idler
    }
}

fn to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

/// ψ, the in-plane tuning angle in radians.
fn mixing_angle_rad(geometry: &PropagationGeometry) -> f64 {
    to_rad(geometry.tuning_angle_deg())
}

/// Index evaluation without the geometry checks; the solvers construct
/// geometries that are valid by construction and call this in tight loops.
pub(crate) fn index_unvalidated(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    branch: PolarizationBranch,
    lambda_um: f64,
) -> Result<f64> {
    match branch {
        PolarizationBranch::OrdinaryLike => {
            crystal.principal_index(geometry.plane.ordinary_axis(), lambda_um)
        }
        PolarizationBranch::ExtraordinaryLike => {
            let (axis_a, axis_b) = geometry.plane.extraordinary_axes();
            let n_a = crystal.principal_index(axis_a, lambda_um)?;
            let n_b = crystal.principal_index(axis_b, lambda_um)?;
            let psi = mixing_angle_rad(geometry);
            let (sin_psi, cos_psi) = psi.sin_cos();
            let inv_n2 = cos_psi * cos_psi / (n_a * n_a) + sin_psi * sin_psi / (n_b * n_b);
            Ok(inv_n2.sqrt().recip())
        }
    }
}

/// Direction-dependent refractive index of one branch.
pub fn refractive_index(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    branch: PolarizationBranch,
    lambda_um: f64,
) -> Result<f64> {
    geometry.validate()?;
    geometry.check_crystal(crystal)?;
    index_unvalidated(crystal, geometry, branch, lambda_um)
}

/// Wave number k = 2πn/λ in rad/µm.
pub fn wave_number(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    branch: PolarizationBranch,
    lambda_um: f64,
) -> Result<f64> {
    let n = refractive_index(crystal, geometry, branch, lambda_um)?;
    Ok(2.0 * std::f64::consts::PI * n / lambda_um)
}

/// Relative half-step of the central difference used for k'(ω).
///
/// Step-halving changes the result by well under 1e-6 relative for every
/// shipped dispersion model (see the refinement test below).
pub const GROUP_VELOCITY_FD_STEP: f64 = 1e-4;

/// Inverse group velocity k'(ω) in units of 1/c, i.e. the group index
/// n_g = n + ω·dn/dω, by central finite difference in ω.
pub fn inverse_group_velocity(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    branch: PolarizationBranch,
    lambda_um: f64,
) -> Result<f64> {
    inverse_group_velocity_with_step(crystal, geometry, branch, lambda_um, GROUP_VELOCITY_FD_STEP)
}

/// As [`inverse_group_velocity`] with an explicit relative step (used by the
/// step-refinement check).
pub fn inverse_group_velocity_with_step(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    branch: PolarizationBranch,
    lambda_um: f64,
    rel_step: f64,
) -> Result<f64> {
    geometry.validate()?;
    geometry.check_crystal(crystal)?;
    group_index_unvalidated(crystal, geometry, branch, lambda_um, rel_step)
}

pub(crate) fn group_index_unvalidated(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    branch: PolarizationBranch,
    lambda_um: f64,
    rel_step: f64,
) -> Result<f64> {
    // ω± = ω(1 ± h)  ⇔  λ± = λ/(1 ± h); both stencil points must stay
    // inside the valid range.
    let lambda_plus = lambda_um / (1.0 + rel_step);
    let lambda_minus = lambda_um / (1.0 - rel_step);
    let n_plus = index_unvalidated(crystal, geometry, branch, lambda_plus)?;
    let n_minus = index_unvalidated(crystal, geometry, branch, lambda_minus)?;
    Ok((n_plus * (1.0 + rel_step) - n_minus * (1.0 - rel_step)) / (2.0 * rel_step))
}

/// Signed walk-off angle ρ of the extraordinary-like branch, in degrees.
///
/// ρ(ψ) = arctan[ n²(ψ) · sinψ·cosψ · (1/n_b² − 1/n_a²) ]
///
/// For a negative uniaxial crystal this reduces to
/// ρ = arctan[(n_o²/n_e²)·tanθ] − θ ≥ 0; in planes where the branch index
/// increases with the angle (xz, yz of an n_x < n_y < n_z crystal) the sign
/// comes out negative, which is what the d_eff projections expect.
pub fn walkoff_angle(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    lambda_um: f64,
) -> Result<f64> {
    let (axis_a, axis_b) = geometry.plane.extraordinary_axes();
    let n_a = crystal.principal_index(axis_a, lambda_um)?;
    let n_b = crystal.principal_index(axis_b, lambda_um)?;
    let n_psi =
        refractive_index(crystal, geometry, PolarizationBranch::ExtraordinaryLike, lambda_um)?;
    let psi = mixing_angle_rad(geometry);
    let (sin_psi, cos_psi) = psi.sin_cos();
    let tan_rho =
        n_psi * n_psi * sin_psi * cos_psi * (1.0 / (n_b * n_b) - 1.0 / (n_a * n_a));
    Ok(tan_rho.atan().to_degrees())
}

/// Reference process for the tabulated d coefficients: 1064 nm SHG.
const MILLER_REF_FUNDAMENTAL_UM: f64 = 1.064;
const MILLER_REF_HARMONIC_UM: f64 = 0.532;

/// Miller-rule scale factor moving a d coefficient from the 1064 nm SHG
/// reference to the (λp, λs, λi) interaction, using χ = n² − 1 on the
/// ordinary-like axis of the plane.
pub fn miller_scale(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    lambda_p_um: f64,
    lambda_s_um: f64,
    lambda_i_um: f64,
) -> Result<f64> {
    let axis = geometry.plane.ordinary_axis();
    let chi = |lambda: f64| -> Result<f64> {
        let n = crystal.principal_index(axis, lambda)?;
        Ok(n * n - 1.0)
    };
    let reference =
        chi(MILLER_REF_HARMONIC_UM)? * chi(MILLER_REF_FUNDAMENTAL_UM)?.powi(2);
    Ok(chi(lambda_p_um)? * chi(lambda_s_um)? * chi(lambda_i_um)? / reference)
}

/// Angular projection of the d tensor for the point groups with a closed
/// form, evaluated at the Poynting angle ψ + ρ. Unscaled (pm/V at the
/// tensor's 1064 nm reference); sign preserved.
pub fn angular_deff_factor(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    rho_deg: f64,
) -> Result<f64> {
    let d = |label: &str| -> Result<f64> {
        crystal.d_coefficients.get(label).copied().ok_or_else(|| Error::DataValidation {
            crystal: crystal.name.clone(),
            reason: format!("missing d coefficient '{label}'"),
        })
    };
    let eff_angle = to_rad(geometry.tuning_angle_deg() + rho_deg);
    let unsupported = || Error::UnsupportedDeff {
        crystal: crystal.name.clone(),
        scenario: geometry.plane.name().to_string(),
        point_group: crystal.point_group.clone(),
    };
    match (crystal.point_group.as_str(), geometry.plane) {
        // Trigonal 3m, Type-II: d22·cos²(θ+ρ)·cos3φ.
        ("3m", Plane::Uniaxial) => {
            Ok(d("d22")? * eff_angle.cos().powi(2) * (3.0 * to_rad(geometry.phi_deg)).cos())
        }
        // Orthorhombic mm2 in the xz plane: d32·sin²(θ+ρ) + d31·cos²(θ+ρ).
        ("mm2", Plane::Xz) => {
            let (s, c) = eff_angle.sin_cos();
            Ok(d("d32")? * s * s + d("d31")? * c * c)
        }
        // mm2 in the yz plane: d31·cos(θ+ρ).
        ("mm2", Plane::Yz) => Ok(d("d31")? * eff_angle.cos()),
        // Monoclinic 2 in the xz plane: d26·cos(θ+ρ).
        ("2", Plane::Xz) => Ok(d("d26")? * eff_angle.cos()),
        _ => Err(unsupported()),
    }
}

/// Effective nonlinear coefficient in pm/V for a general (λp, λs, λi)
/// interaction: Appendix-style angular projection with the walk-off of the
/// extraordinary-like branch evaluated at the pump wavelength, Miller-scaled
/// from the 1064 nm tensor reference to the actual wavelengths.
///
/// Errors with [`Error::UnsupportedDeff`] when the point group has no
/// closed form in this plane; callers fall back to the crystal's
/// `deff_table`.
pub fn effective_nonlinearity_for(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    lambda_p_um: f64,
    lambda_s_um: f64,
    lambda_i_um: f64,
) -> Result<f64> {
    let rho_deg = walkoff_angle(crystal, geometry, lambda_p_um)?;
    let unscaled = angular_deff_factor(crystal, geometry, rho_deg)?;
    let scale = miller_scale(crystal, geometry, lambda_p_um, lambda_s_um, lambda_i_um)?;
    Ok(unscaled * scale)
}

/// [`effective_nonlinearity_for`] specialized to the wavelength-degenerate
/// interaction λ/2 → λ + λ, taking the down-converted wavelength.
pub fn effective_nonlinearity(
    crystal: &Crystal,
    geometry: &PropagationGeometry,
    lambda_um: f64,
) -> Result<f64> {
    effective_nonlinearity_for(crystal, geometry, lambda_um / 2.0, lambda_um, lambda_um)
}
