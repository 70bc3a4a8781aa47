use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("potential power p = {0} is not supported (must be even and >= 4)")]
    InvalidPower(u32),

    #[error("only the ground level (0) is implemented, got level {0}")]
    UnsupportedLevel(u32),

    #[error("invalid oscillator parameters: {0}")]
    InvalidSpec(String),

    #[error("trial frequency must be positive")]
    NonPositiveFrequency,

    #[error(
        "order {requested} needs Bender-Wu coefficients up to {needed}, series has {available}"
    )]
    InsufficientCoefficients {
        requested: usize,
        needed: usize,
        available: usize,
    },

    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error(
        "sigma = {sigma} is not a root of the scaling polynomial (relative residual {residual})"
    )]
    NotAnExtremum { sigma: String, residual: String },

    #[error("scaling polynomial order {scaling} does not match series order {series}")]
    OrderMismatch { scaling: usize, series: usize },

    #[error("order must be at least 1 for the variational optimization")]
    OrderTooLow,

    #[error("no candidate stationary point or turning point found at order {0}")]
    NoCandidates(usize),

    #[error("oracle did not converge: {0}")]
    OracleNotConverged(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("coefficient cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
