use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot convert {from} to {to}: incompatible dimensions")]
    IncompatibleUnits {
        from: &'static str,
        to: &'static str,
    },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("angular frequency must be non-negative, got {0}")]
    NegativeFrequency(f64),

    #[error("singular dielectric configuration at omega = {omega:e} rad/ps (|denominator| = {magnitude:e})")]
    SingularConfiguration { omega: f64, magnitude: f64 },

    #[error("singular linear system (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error(
        "quadrature failed for {what}: estimated error {error:e} exceeds tolerance {tolerance:e}"
    )]
    QuadratureFailed {
        what: String,
        error: f64,
        tolerance: f64,
    },

    #[error("non-finite integrand value at omega = {0}")]
    NonFinite(f64),

    #[error("no crossover: {0}")]
    NoCrossover(String),

    #[error("line {line}, field `{field}`: {reason}")]
    Dataset {
        line: usize,
        field: String,
        reason: String,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
