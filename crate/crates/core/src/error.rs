use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{op}: series did not converge within {terms} terms")]
    NonConvergence { op: &'static str, terms: usize },

    #[error("{op}: series diverges ({detail})")]
    Divergent { op: &'static str, detail: String },

    #[error(
        "{op}: cancellation too severe (estimated error {estimate:.3e} against value {value:.3e})"
    )]
    Cancellation {
        op: &'static str,
        estimate: f64,
        value: f64,
    },

    #[error("{op}: term {term} overflows double precision")]
    Overflow { op: &'static str, term: usize },

    #[error("{op}: gamma pole at argument {at}")]
    GammaPole { op: &'static str, at: f64 },

    #[error("{op}: quadrature failed to reach tolerance (error estimate {estimate:.3e})")]
    Quadrature { op: &'static str, estimate: f64 },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Errors that mean "this representation cannot deliver the value here"
    /// rather than "the input is wrong"; callers with a second route may
    /// fall back on these.
    pub fn is_numerical_limit(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::Divergent { .. }
                | Error::Cancellation { .. }
                | Error::Overflow { .. }
        )
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {v}")))
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

pub(crate) fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be non-negative, got {v}"
        )))
    }
}

pub(crate) fn check_order(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must lie in (0, 1], got {v}"
        )))
    }
}
