use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A value lies outside the domain of the operation.
    #[error("domain error: {what} = {value} is outside {expected}")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown registered map `{0}`")]
    UnknownMap(String),

    /// The map does not preserve the kernel of the seminorm, so no Lipschitz
    /// bound relative to it exists.
    #[error("certification refused: {0}")]
    CertificationRefused(String),

    #[error("not a contraction: Lipschitz estimate {lipschitz} >= 1")]
    NotAContraction { lipschitz: f64 },

    #[error("I - A is singular (pivot {pivot:e} below threshold): no unique fixed point")]
    Singular { pivot: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn check_unit(what: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "[0, 1]",
        })
    }
}

pub(crate) fn check_open_unit(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "(0, 1)",
        })
    }
}

pub(crate) fn check_positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "(0, inf)",
        })
    }
}
