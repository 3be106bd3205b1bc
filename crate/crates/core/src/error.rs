use thiserror::Error;

use crate::maps::LocalityWitness;

/// Errors raised by constructors and operations in this crate.
///
/// Property violations found by the checkers are not errors; they are
/// reported as witnesses inside the various report types.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum L0Error {
    #[error("probability space must have at least one atom")]
    EmptySpace,
    #[error("atom {atom} has non-positive mass {mass}")]
    NonPositiveMass { atom: String, mass: String },
    #[error("atom masses sum to {sum}, expected 1")]
    MassNotOne { sum: String },
    #[error("duplicate atom id {0:?}")]
    DuplicateAtom(String),
    #[error("event does not belong to this probability space")]
    ForeignEvent,
    #[error("unknown atom id {0:?}")]
    UnknownAtom(String),
    #[error("operands live on different probability spaces")]
    SpaceMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("line endpoints coincide; l(x, x) is not a line")]
    DegenerateLine,
    #[error("map is not local on event {:?}", .0.event)]
    NotLocal(Box<LocalityWitness>),
    #[error("no mass-preserving fixed-point-free pairing of the atoms exists")]
    NoMassPreservingPairing,
    #[error("invalid atom permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation moves atom {from} (mass {from_mass}) to {to} (mass {to_mass})")]
    NotMeasurePreserving {
        from: String,
        to: String,
        from_mass: String,
        to_mass: String,
    },
    #[error("certification requires dimension n >= 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("no scalar factor: S(xi x) is not on the line through theta and S(x)")]
    NoFactor,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid piece: {0}")]
    InvalidPiece(String),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = L0Error> = std::result::Result<T, E>;
