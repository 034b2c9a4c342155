use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} lies outside the disc where this representation converges")]
    Domain(String),
    #[error("z = 1 is the branch point of (1-z)^(-beta)")]
    Branch,
    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),
    #[error("gap ratio needs at least two exponents")]
    TooFewTerms,
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("maximum modulus left the floating-point range: {0}")]
    OverflowGuard(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("Green's function is singular at z = a")]
    Singularity,
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("no verdict row covers the pair {0}")]
    UnsupportedPair(String),
    #[error("descriptor error: {0}")]
    Descriptor(String),
    #[error("verdict table error: {0}")]
    Table(String),
    #[error("no constructive witness: {0}")]
    NotConstructible(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
