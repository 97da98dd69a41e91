//! Design engine for spectrally uncorrelated photon-pair sources based on
//! borate nonlinear crystals.
//!
//! The crate models collinear Type-II spontaneous parametric down-conversion
//! (SPDC) in the "BBO family" of borate crystals. It solves the phase-matching
//! condition jointly with three group-velocity-matching (GVM) conditions,
//! builds joint spectral amplitudes (JSA) on wavelength grids, extracts
//! heralded-photon spectral purity through Schmidt decomposition, and
//! simulates two-photon Hong-Ou-Mandel (HOM) interference for photons from
//! one source or from two independent sources.
//!
//! Layout:
//!
//! - [`crystal`]: immutable optical data for the shipped crystal set
//!   (Sellmeier dispersion models, d-tensor entries, transparency windows),
//!   loaded from a documented TOML format.
//! - [`refraction`]: direction-dependent refractive indices, wave numbers,
//!   inverse group velocities, walk-off angles, and effective nonlinear
//!   coefficients in principal-plane geometries.
//! - [`phasematch`]: the Δk = 0 angle solver and the nested GVM solvers for
//!   wavelength-degenerate and non-degenerate operating points.
//! - [`jsa`]: pump envelope × phase-matching amplitude grids, Schmidt
//!   purity, and pump-bandwidth optimization.
//! - [`interference`]: HOM dips for same-source and independent-source
//!   configurations, with visibility and FWHM extraction.
//! - [`numeric`]: the small numerical toolbox (Brent root bracketing,
//!   golden-section search, one-sided Jacobi SVD, quadrature weights).
//!
//! ```
//! use biborate::crystal::load_default;
//! use biborate::jsa::{compute_jsa_grid, optimize_bandwidth, schmidt_purity};
//! use biborate::phasematch::{solve_gvm_degenerate, GvmCondition, SolveOptions};
//! use biborate::refraction::Plane;
//!
//! let set = load_default()?;
//! let bbo = set.get("BBO")?;
//! let options = SolveOptions { length_mm: 20.0, ..Default::default() };
//! let point = solve_gvm_degenerate(bbo, Plane::Uniaxial, GvmCondition::Gvm3, &options)?;
//! let solution = point.best().expect("satisfied for BBO");
//! let optimum = optimize_bandwidth(&solution.config, 101, None)?;
//! let mut config = solution.config.clone();
//! config.pump_bandwidth_nm = optimum.delta_lambda_nm;
//! let grid = compute_jsa_grid(&config, 101, None)?;
//! assert!(schmidt_purity(&grid)?.purity > 0.8);
//! # Ok::<(), biborate::Error>(())
//! ```

pub mod crystal;
pub mod error;
pub mod interference;
pub mod io;
pub mod jsa;
pub mod numeric;
pub mod phasematch;
pub mod refraction;

pub use crystal::{Crystal, CrystalSet, SellmeierModel};
pub use error::{Error, Result};
pub use interference::HomCurve;
pub use jsa::{JsaGrid, PumpSpec};
pub use phasematch::{GvmCondition, GvmOutcome, GvmSolution, SpdcConfig};
pub use refraction::{Plane, PolarizationBranch, PropagationGeometry};

/// Speed of light in nm/fs. Also equals µm/ps and m/µs.
pub const SPEED_OF_LIGHT_NM_FS: f64 = 299.792458;
