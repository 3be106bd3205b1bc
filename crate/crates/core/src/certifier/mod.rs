//! Recovering an `L⁰`-affine representation `x ↦ A x + b` of a map, or a
//! replayable witness for the hypothesis it violates.
//!
//! The pipeline centers the map at the origin, `S = T − T(θ)`, checks
//! locality, injectivity, and line preservation, reads the columns of `A`
//! off `S(eᵢ)`, and verifies `S(x) = A x` on a probe set that includes
//! nonconstant scalars and indicator-mixed vectors.

mod affine;
mod endo;
mod segments;

use serde::{Deserialize, Serialize};

use crate::maps::{
    AffineMap, InjectivityWitness, LineWitness, LocalityWitness, MapSpec, OntoStatus, Strength,
};
use crate::probes::ProbeBudget;
use crate::scalar::Scalar;
use crate::vector::Vector;

pub use affine::{certify_affine, scale_factor, ScaleFactor};
pub use endo::{endo_identity_check, EndoReport, EndoWitness, ScalarMap};
pub use segments::{
    certify_from_segments, check_segment_preservation, segment_to_line_harness,
    segment_to_line_harness_with, ClaimWitness, SegmentOptions, SegmentReport,
};

/// The hypothesis a [`FailureWitness`] refutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Locality,
    Injectivity,
    LineForward,
    LineOnto,
    Additivity,
    Homogeneity,
    /// Some segment is not mapped into the segment between the images.
    SegmentForward,
}

impl Hypothesis {
    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::Locality => "locality",
            Hypothesis::Injectivity => "injectivity",
            Hypothesis::LineForward => "line-forward",
            Hypothesis::LineOnto => "line-onto",
            Hypothesis::Additivity => "additivity",
            Hypothesis::Homogeneity => "homogeneity",
            Hypothesis::SegmentForward => "segment-forward",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureWitness {
    Locality(LocalityWitness),
    Injectivity(InjectivityWitness),
    Line(LineWitness),
    /// `S(x + y) ≠ S(x) + S(y)` for `S = T − T(θ)`.
    Additivity {
        x: Vector,
        y: Vector,
    },
    /// `S(ξx) ≠ ξ S(x)`.
    Homogeneity {
        xi: Scalar,
        x: Vector,
    },
    /// `T(μx + (1−μ)y)` is not on the segment between `T(x)` and `T(y)`.
    Segment {
        x: Vector,
        y: Vector,
        mu: Scalar,
        image: Vector,
    },
}

impl FailureWitness {
    pub fn hypothesis(&self) -> Hypothesis {
        match self {
            FailureWitness::Locality(_) => Hypothesis::Locality,
            FailureWitness::Injectivity(_) => Hypothesis::Injectivity,
            FailureWitness::Line(LineWitness::Forward { .. }) => Hypothesis::LineForward,
            FailureWitness::Line(LineWitness::Collapse { .. }) => Hypothesis::LineOnto,
            FailureWitness::Additivity { .. } => Hypothesis::Additivity,
            FailureWitness::Homogeneity { .. } => Hypothesis::Homogeneity,
            FailureWitness::Segment { .. } => Hypothesis::SegmentForward,
        }
    }

    /// Re-evaluates the map and confirms the violation.
    pub fn reproduces(&self, map: &MapSpec) -> bool {
        let s = |v: &Vector| {
            let theta = Vector::zero(map.space(), map.dim());
            &map.apply(v) - &map.apply(&theta)
        };
        match self {
            FailureWitness::Locality(w) => w.reproduces(map),
            FailureWitness::Injectivity(w) => w.reproduces(map),
            FailureWitness::Line(w) => w.reproduces(map),
            FailureWitness::Additivity { x, y } => s(&(x + y)) != &s(x) + &s(y),
            FailureWitness::Homogeneity { xi, x } => s(&x.scale(xi)) != s(x).scale(xi),
            FailureWitness::Segment { x, y, mu, image } => {
                let tz = map.apply(&Vector::affine_combination(mu, x, y));
                &tz == image && !segments::on_image_segment(&tz, &map.apply(x), &map.apply(y))
            }
        }
    }
}

/// How each hypothesis was established for a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub locality: Strength,
    pub injectivity: Strength,
    /// Forward line inclusion is always checked on samples.
    pub line_forward: Strength,
    pub line_onto: OntoStatus,
    /// `Exact` when the recovered `(A, b)` matches the map's own structure.
    pub representation: Strength,
}

/// Everything needed to rerun a certification bit for bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub budget: ProbeBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCertificate {
    /// `T(x) = A x + b`, with `b = T(θ)`.
    pub affine: AffineMap,
    /// Probes on which `T(x) − (A x + b)` was computed to be zero.
    pub verification: Vec<Vector>,
    pub hypotheses: HypothesisRecord,
    pub provenance: Provenance,
}

impl AffineCertificate {
    /// Whether `A x + b = T(x)` on every given probe.
    pub fn reverify<'a>(
        &self,
        map: &MapSpec,
        probes: impl IntoIterator<Item = &'a Vector>,
    ) -> bool {
        probes
            .into_iter()
            .all(|x| self.affine.eval(x) == map.apply(x))
    }
}

/// Result of a certification run: a certificate or the first witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Certified(Box<AffineCertificate>),
    Failed(Box<FailureWitness>),
}

impl Certification {
    pub fn certificate(&self) -> Option<&AffineCertificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Failed(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&FailureWitness> {
        match self {
            Certification::Certified(_) => None,
            Certification::Failed(w) => Some(w),
        }
    }
}

impl From<FailureWitness> for Certification {
    fn from(w: FailureWitness) -> Self {
        Certification::Failed(Box::new(w))
    }
}
