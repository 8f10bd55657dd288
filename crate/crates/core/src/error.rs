use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature could not reach its tolerance within budget.
    #[error("{what} did not converge within {budget} terms (last error estimate {estimate:e})")]
    NonConvergence {
        what: &'static str,
        budget: usize,
        estimate: f64,
    },

    /// A statistic failed inside a bootstrap or Monte Carlo replicate.
    #[error("replicate {index}: {source}")]
    Replicate {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Malformed input text.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Input contained no observations.
    #[error("input contains no observations")]
    EmptyInput,

    /// An observation or count was zero or negative.
    #[error("line {line}: value must be a positive integer, got {value}")]
    NonPositive { line: usize, value: String },

    /// Too few distinct values for a regression.
    #[error("need at least {needed} distinct values, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Coarse failure class used for process exit codes.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. }
            | Error::EmptyInput
            | Error::NonPositive { .. }
            | Error::Config(_) => ErrorClass::Input,
            Error::Domain(_) | Error::InsufficientPoints { .. } => ErrorClass::Domain,
            Error::NonConvergence { .. } => ErrorClass::Numerical,
            Error::Io { .. } => ErrorClass::Io,
            Error::Replicate { source, .. } => source.class(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Domain,
    Numerical,
    Io,
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes() {
        assert_eq!(Error::EmptyInput.class(), ErrorClass::Input);
        assert_eq!(Error::Config("x".into()).class(), ErrorClass::Input);
        assert_eq!(Error::domain("x").class(), ErrorClass::Domain);
        let nc = Error::NonConvergence {
            what: "zeta",
            budget: 10,
            estimate: 1.0,
        };
        assert_eq!(nc.class(), ErrorClass::Numerical);
        let wrapped = Error::Replicate {
            index: 3,
            source: Box::new(nc),
        };
        assert_eq!(wrapped.class(), ErrorClass::Numerical);
        assert!(wrapped
            .to_string()
            .starts_with("replicate 3: zeta did not converge"));
    }
}
