use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad category of a failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input data.
    Input,
    /// A documented precondition of an operation does not hold.
    Precondition,
    /// A post-hoc verification of a computed result failed.
    Invariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible lattices")]
    IncompatibleLattices,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polarization not movable")]
    NotMovable,

    #[error("empty strict family")]
    EmptyStrictFamily,

    #[error("cone not full-dimensional")]
    ConeNotFullDimensional,

    #[error("family not JH-closed")]
    NotJhClosed,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::IncompatibleLattices
            | Error::DimensionMismatch { .. }
            | Error::InvalidLattice(_)
            | Error::InvalidInput(_) => ErrorKind::Input,
            Error::NotMovable
            | Error::EmptyStrictFamily
            | Error::ConeNotFullDimensional
            | Error::NotJhClosed
            | Error::Precondition(_) => ErrorKind::Precondition,
            Error::Invariant(_) => ErrorKind::Invariant,
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
