//! Exact algebra and affine geometry in `(L⁰)ⁿ` over finite atomic
//! probability spaces.
//!
//! `L⁰` is modeled as rational-valued functions on finitely many atoms of
//! positive mass. On top of the ring and module layers sit executable
//! predicates for self-maps of `(L⁰)ⁿ` (locality, stability, line
//! preservation) and a certifier that either recovers an `L⁰`-affine
//! representation `x ↦ A x + b` of a map or returns a replayable witness for
//! the hypothesis it violates.

pub mod certifier;
pub mod error;
pub mod fuzz;
pub mod geometry;
pub mod linalg;
pub mod maps;
pub mod probes;
pub mod rational;
pub mod scalar;
pub mod space;
pub mod vector;
pub mod wire;

pub use certifier::{
    certify_affine, certify_from_segments, AffineCertificate, Certification, FailureWitness,
    Hypothesis,
};
pub use error::{L0Error, Result};
pub use geometry::{
    decompose_independence, extend_to_full_support, has_full_support, is_independent,
    line_membership, segment_membership, IndependenceDecomposition,
};
pub use linalg::Matrix;
pub use maps::{
    AffineMap, AtomPermutation, BlackBoxMap, MapKind, MapSpec, PerAtomMap, Piece, SemilinearMap,
};
pub use probes::{ProbeBudget, ProbeSet};
pub use rational::Rational;
pub use scalar::{PointwiseOrder, Scalar};
pub use space::{Event, ProbSpace};
pub use vector::Vector;
