use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("non-invertible series: {0}")]
    NonInvertible(String),

    #[error("series truncation tail {tail:e} exceeds tolerance {tolerance:e}")]
    SeriesDivergence { tail: f64, tolerance: f64 },

    #[error("off-diagonal kernel vanishes (Lu Qi-Keng zero); diastasis undefined")]
    LuQiKengZero,

    #[error("orthogonal homogeneous vectors; projective diastasis is infinite")]
    OrthogonalPair,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("kernel truncation tail too large: {0}")]
    TailEstimate(String),

    #[error("inconsistent coefficient data: {0}")]
    Inconsistent(String),

    #[error("outside certified scope: {0}")]
    OutsideScope(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error output and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ParameterOutOfRange(_) => "E_PARAM_RANGE",
            Error::OutsideDomain(_) => "E_OUTSIDE_DOMAIN",
            Error::NonInvertible(_) => "E_NON_INVERTIBLE",
            Error::SeriesDivergence { .. } => "E_SERIES_DIVERGENCE",
            Error::LuQiKengZero => "E_LU_QI_KENG",
            Error::OrthogonalPair => "E_ORTHOGONAL",
            Error::Quadrature(_) => "E_QUADRATURE",
            Error::TailEstimate(_) => "E_TAIL",
            Error::Inconsistent(_) => "E_INCONSISTENT",
            Error::OutsideScope(_) => "E_SCOPE",
            Error::Schema(_) => "E_SCHEMA",
            Error::Io(_) => "E_IO",
        }
    }
}
