use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// `Validation` variants correspond to bad inputs, `Guard` variants to a
/// numerical safeguard that tripped during a computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("scale cutoff too small: |xi| = {norm} needs j_max >= {needed}")]
    CutoffTooSmall { norm: f64, needed: u32 },
    #[error("singular linear map (det = {0})")]
    SingularMap(f64),
    #[error("quadrature regions do not cover the band: {0}")]
    UncoveredBand(String),
    #[error("oscillation guard: {needed} cells per side needed, limit is {limit}")]
    OscillationGuard { needed: usize, limit: usize },
    #[error("unbounded band: deconvolution needs a band-limited input")]
    UnboundedBand,
    #[error("symbol too small on the band: min |Xi| = {0:e}")]
    SymbolTooSmall(f64),
    #[error("budget {m} below the minimum {min} for scale {j}")]
    BudgetTooSmall { m: usize, min: usize, j: u32 },
    #[error("budget {0} too small for a non-empty plan")]
    EmptyPlan(usize),
    #[error("duplicate curvelet index {0}")]
    DuplicateIndex(String),
}

impl Error {
    /// True for errors produced by a numerical safeguard rather than input validation.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::OscillationGuard { .. } | Error::SymbolTooSmall(_) | Error::UncoveredBand(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
