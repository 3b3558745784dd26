use thiserror::Error;

use crate::numeric::{fmt_rational, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A requested ball does not fit in the region where a point set is known
    /// to be complete.
    #[error("{message}{}", required_radius.as_ref().map(|r| format!(" (domain radius must exceed {})", fmt_rational(r))).unwrap_or_default())]
    Domain {
        message: String,
        required_radius: Option<Rational>,
    },

    #[error("point set is only known on an uncertified domain")]
    IncompleteDomain,

    #[error("domains do not intersect")]
    EmptyDomainIntersection,

    #[error("enumeration budget of {budget} candidates exceeded")]
    Budget { budget: u64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain {
            message: message.into(),
            required_radius: None,
        }
    }

    pub(crate) fn domain_needing(message: impl Into<String>, required: Rational) -> Self {
        Error::Domain {
            message: message.into(),
            required_radius: Some(required),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
