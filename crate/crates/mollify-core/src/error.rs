//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by kernel construction, signal generation, transforms,
/// and exponent fitting.
#[derive(Debug, Error)]
pub enum Error {
    /// The moment linear system solved to an unacceptable residual.
    #[error("moment system ill-conditioned: residual {residual:e} exceeds {limit:e}")]
    Conditioning { residual: f64, limit: f64 },

    /// A parameter fails a documented precondition.
    #[error("invalid parameter: {0}")]
    Validation(String),

    /// A requested scale is too fine for the grid (kernel unresolved).
    #[error("scale {scale} unresolved on grid: scale*h = {product:e} exceeds 1/{oversampling}")]
    Resolution {
        scale: f64,
        product: f64,
        oversampling: f64,
    },

    /// The analysis window contains no grid points or is empty.
    #[error("window [{a}, {b}] contains no grid points")]
    EmptyWindow { a: f64, b: f64 },

    /// A test function or fixture support leaves the computational box.
    #[error("support error: {0}")]
    Support(String),

    /// A signal file does not conform to the expected format.
    #[error("format error at {location}: {message}")]
    Format { location: String, message: String },

    /// A log-log fit has no usable points (all values below the floor).
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// Every probed derivative order saturated; the exponent is unresolved.
    #[error("all probed orders saturated (slopes below threshold); raise k")]
    AllSaturated,

    /// All pairings sit below the noise floor; no rate is measurable.
    #[error("all pairings below noise floor {floor:e}; rate indistinguishable from exact")]
    BelowNoiseFloor { floor: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
