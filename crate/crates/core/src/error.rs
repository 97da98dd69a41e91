//! Crate-wide error type.

use thiserror::Error;

/// Alias for results produced by this crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The crystal data file could not be read or parsed.
    #[error("crystal data parse failure: {0}")]
    DataParse(String),

    /// A crystal entry violated a structural or physical invariant.
    #[error("crystal data validation failure for '{crystal}': {reason}")]
    DataValidation { crystal: String, reason: String },

    /// A Sellmeier `form` identifier that this crate does not implement.
    #[error("unknown Sellmeier form '{0}'")]
    UnknownSellmeierForm(String),

    /// Lookup of a crystal name that is not in the set.
    #[error("unknown crystal '{name}'; nearest matches: {nearest:?}")]
    UnknownCrystal { name: String, nearest: Vec<String> },

    /// Wavelength outside the valid range of a dispersion model.
    #[error(
        "wavelength {lambda_um} um outside valid range [{min_um}, {max_um}] um for {crystal} axis {axis}"
    )]
    WavelengthOutOfRange {
        crystal: String,
        axis: String,
        lambda_um: f64,
        min_um: f64,
        max_um: f64,
    },

    /// A propagation geometry that does not apply to the crystal class
    /// (e.g. a biaxial principal plane requested on a uniaxial crystal).
    #[error("geometry/crystal mismatch: {0}")]
    GeometryMismatch(String),

    /// An invalid SPDC configuration (energy conservation, polarization
    /// pattern, or out-of-window wavelengths).
    #[error("invalid SPDC configuration: {0}")]
    InvalidConfig(String),

    /// No phase-matching angle exists for the requested wavelengths.
    #[error(
        "no phase matching: \u{0394}k has no sign change over ({lo_deg}\u{00b0}, {hi_deg}\u{00b0}); \u{0394}k range [{dk_min:.6}, {dk_max:.6}] rad/um"
    )]
    NoPhaseMatching {
        lo_deg: f64,
        hi_deg: f64,
        dk_min: f64,
        dk_max: f64,
    },

    /// The crystal point group has no closed-form d_eff and the data file
    /// carries no tabulated value for the scenario.
    #[error("no d_eff available for {crystal} scenario '{scenario}' (point group {point_group})")]
    UnsupportedDeff {
        crystal: String,
        scenario: String,
        point_group: String,
    },

    /// Grid construction or quadrature failure.
    #[error("grid error: {0}")]
    Grid(String),

    /// HOM evaluation failure (incompatible lattices, unresolved dip, ...).
    #[error("interference error: {0}")]
    Interference(String),

    /// Root finding could not converge.
    #[error("root finding failed: {0}")]
    RootFind(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
