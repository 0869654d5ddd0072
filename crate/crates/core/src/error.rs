use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::extnat::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("arithmetic overflow in finite coordinate")]
    Overflow,

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("no order-unit: the system has no strictly positive finite solution")]
    NoOrderUnit,

    #[error("{0} is not an infinite support of the solution monoid")]
    NotAnInfiniteSupport(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DimensionTooLarge(_) => "dimension_too_large",
            Error::Overflow => "overflow",
            Error::InvalidSystem(_) => "invalid_system",
            Error::Parse(_) => "parse_error",
            Error::NoOrderUnit => "no_order_unit",
            Error::NotAnInfiniteSupport(_) => "not_an_infinite_support",
            Error::ResourceCap(_) => "resource_cap",
            Error::InvalidInput(_) => "invalid_input",
        }
    }

    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
