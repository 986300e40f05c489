use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("config error: {0}")]
    ConfigGeneral(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The closed-form regularized kernel is only branch-safe for
    /// 0 <= nu < 0.2631 (all Rayleigh roots real).
    #[error("unsupported regime: nu = {nu} is outside [0, 0.2631); the closed-form kernel crosses principal branch cuts there")]
    UnsupportedRegime { nu: f64 },

    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("wavesolver instability: max |p| grew {growth:.3e}x after {steps} steps")]
    Instability { steps: usize, growth: f64 },

    #[error("truncation domain too small: {0}")]
    Truncation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit-code classification: 1 for configuration/usage problems,
    /// 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Quadrature { .. } | Error::Instability { .. } | Error::Truncation(_) => 2,
            _ => 1,
        }
    }
}
