use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller passed arguments that make no sense for the operation.
    #[error("usage error: {0}")]
    Usage(String),

    /// A distribution or covariance failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// Parameters outside the admissible region of a generator.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input file could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),

    /// A whitened cross-correlation reached one, so the information is unbounded.
    #[error("ill-conditioned: canonical correlation {sigma} is numerically 1, information is unbounded")]
    IllConditioned { sigma: f64 },

    /// A provably non-negative quantity came out below the round-off clamp.
    #[error("{quantity} evaluated to {value}, below the -1e-9 round-off allowance")]
    NegativeInformation { quantity: &'static str, value: f64 },

    #[error("polytope has {vars} variables, above the exhaustive cap of {cap}; use sampling mode")]
    EnumerationCap { vars: usize, cap: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by this crate.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Usage(_)
                | Error::Validation(_)
                | Error::Domain(_)
                | Error::Parse(_)
                | Error::EnumerationCap { .. }
        )
    }
}
