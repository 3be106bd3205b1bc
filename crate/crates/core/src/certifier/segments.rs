//! From segment preservation to line preservation, and the chained
//! certification that starts from segments.

use rand::Rng;

use super::{affine::certify_affine, Certification, FailureWitness};
use crate::error::{L0Error, Result};
use crate::geometry::segment_membership;
use crate::maps::{injectivity, is_local_with, on_image_line, LineWitness, MapSpec};
use crate::probes::{self, rng_for, ProbeBudget, ProbeSet, SeededRng};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::space::ProbSpace;
use crate::vector::Vector;

/// `w` on the segment between `u` and `v`, reading a degenerate segment as
/// its single point.
pub(crate) fn on_image_segment(w: &Vector, u: &Vector, v: &Vector) -> bool {
    if u == v {
        return w == u;
    }
    matches!(segment_membership(w, u, v), Ok(Some(_)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentOptions {
    /// Number of `(x, y)` pairs.
    pub trials: usize,
    /// Integer coefficients `k ∈ {−K, …, K}` for the first claim.
    pub k: i64,
    /// Coefficients for the second claim and for the segment check, spread
    /// over the pairs.
    pub lambda_samples: usize,
}

impl Default for SegmentOptions {
    fn default() -> Self {
        Self {
            trials: 10,
            k: 5,
            lambda_samples: 20,
        }
    }
}

/// `T(x + c·y) ∉ l(T(x), T(x + y))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimWitness {
    pub x: Vector,
    pub y: Vector,
    pub coefficient: Scalar,
    pub image: Vector,
}

impl ClaimWitness {
    /// The same violation as a line witness: `x + c·y = c(x + y) + (1 − c)x`.
    pub fn to_line_witness(&self) -> LineWitness {
        LineWitness::Forward {
            x: &self.x + &self.y,
            y: self.x.clone(),
            lambda: self.coefficient.clone(),
            image: self.image.clone(),
        }
    }

    pub fn reproduces(&self, map: &MapSpec) -> bool {
        self.to_line_witness().reproduces(map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentReport {
    /// Locality or injectivity failure. When set, nothing else is checked.
    pub precondition: Option<FailureWitness>,
    /// The segment hypothesis itself.
    pub segment: Option<FailureWitness>,
    /// `T(x + k·y) ∈ l(T(x), T(x+y))` for integers `|k| ≤ K`.
    pub integer_claim: Option<ClaimWitness>,
    /// The same for bounded `λ`, including values mixed over a partition.
    pub mixed_claim: Option<ClaimWitness>,
    pub trials: usize,
}

impl SegmentReport {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    /// The first failure in the order precondition, segment, claims.
    pub fn first_failure(&self) -> Option<FailureWitness> {
        self.precondition
            .clone()
            .or_else(|| self.segment.clone())
            .or_else(|| {
                self.integer_claim
                    .as_ref()
                    .or(self.mixed_claim.as_ref())
                    .map(|c| FailureWitness::Line(c.to_line_witness()))
            })
    }
}

/// A scalar constant on each block of a random partition into at most
/// three blocks, with block values drawn by `value`.
fn partition_scalar(
    space: &ProbSpace,
    rng: &mut SeededRng,
    mut value: impl FnMut(&mut SeededRng) -> Rational,
) -> Scalar {
    let blocks: Vec<Rational> = (0..3).map(|_| value(rng)).collect();
    Scalar::from_fn(space, |_| blocks[rng.random_range(0..3)].clone())
}

fn bounded(k: i64) -> impl FnMut(&mut SeededRng) -> Rational {
    move |rng| {
        let q = rng.random_range(1..=4);
        rational::ratio(rng.random_range(-k * q..=k * q), q)
    }
}

fn sample_pairs(
    space: &ProbSpace,
    dim: usize,
    trials: usize,
    rng: &mut SeededRng,
) -> Vec<(Vector, Vector)> {
    let mut out = Vec::with_capacity(trials);
    if dim >= 2 && trials > 0 {
        out.push((Vector::unit(space, dim, 0), Vector::unit(space, dim, 1)));
    }
    while out.len() < trials {
        let x = probes::random_vector(space, dim, rng);
        let y = probes::random_full_support_vector(space, dim, rng);
        if x != y {
            out.push((x, y));
        }
    }
    out
}

/// First sampled `μ ∈ [0, 1]` for which `T(μx + (1−μ)y)` leaves the segment
/// between `T(x)` and `T(y)`; samples cycle through the pairs.
fn segment_witness(
    map: &MapSpec,
    pairs: &[(Vector, Vector)],
    images: &[(Vector, Vector)],
    samples: usize,
    rng: &mut SeededRng,
) -> Option<FailureWitness> {
    let space = map.space();
    for j in 0..samples {
        let i = j % pairs.len();
        let (x, y) = &pairs[i];
        let mu = match j % 3 {
            0 if j == 0 => Scalar::constant(space, rational::ratio(1, 2)),
            1 => partition_scalar(space, rng, rational::random_unit),
            _ => probes::random_unit_scalar(space, rng),
        };
        let image = map.apply(&Vector::affine_combination(&mu, x, y));
        if !on_image_segment(&image, &images[i].0, &images[i].1) {
            return Some(FailureWitness::Segment {
                x: x.clone(),
                y: y.clone(),
                mu,
                image,
            });
        }
    }
    None
}

/// The segment hypothesis alone, with no locality or injectivity
/// precondition.
pub fn check_segment_preservation(
    map: &MapSpec,
    trials: usize,
    samples: usize,
    seed: u64,
) -> Option<FailureWitness> {
    let mut rng = rng_for(seed, 2);
    let pairs = sample_pairs(map.space(), map.dim(), trials, &mut rng);
    if pairs.is_empty() {
        return None;
    }
    let images: Vec<(Vector, Vector)> = pairs
        .iter()
        .map(|(x, y)| (map.apply(x), map.apply(y)))
        .collect();
    segment_witness(map, &pairs, &images, samples, &mut rng)
}

pub fn segment_to_line_harness(map: &MapSpec, trials: usize, seed: u64) -> SegmentReport {
    segment_to_line_harness_with(
        map,
        &SegmentOptions {
            trials,
            ..SegmentOptions::default()
        },
        seed,
    )
}

/// Checks the preconditions (locality, injectivity), the segment
/// hypothesis on sampled `μ ∈ [0, 1]`, and the two claims that carry
/// segment preservation over to lines.
pub fn segment_to_line_harness_with(
    map: &MapSpec,
    opts: &SegmentOptions,
    seed: u64,
) -> SegmentReport {
    let space = map.space();
    let dim = map.dim();
    let mut report = SegmentReport {
        precondition: None,
        segment: None,
        integer_claim: None,
        mixed_claim: None,
        trials: opts.trials,
    };

    let budget = ProbeBudget {
        random_vectors: opts.trials,
        ..ProbeBudget::default()
    };
    let probe_set = ProbeSet::generate(space, dim, &budget, &mut rng_for(seed, 1));
    if let Some(w) = is_local_with(map, &probe_set).witness {
        report.precondition = Some(FailureWitness::Locality(w));
        return report;
    }
    if let Some(w) = injectivity(map, &probe_set).witness {
        report.precondition = Some(FailureWitness::Injectivity(w));
        return report;
    }

    let mut rng = rng_for(seed, 2);
    let pairs = sample_pairs(space, dim, opts.trials, &mut rng);
    if pairs.is_empty() {
        return report;
    }
    let images: Vec<(Vector, Vector)> = pairs
        .iter()
        .map(|(x, y)| (map.apply(x), map.apply(y)))
        .collect();

    report.segment = segment_witness(map, &pairs, &images, opts.lambda_samples, &mut rng);

    // claims are stated on l(T(x), T(x + y))
    let line_images: Vec<(Vector, Vector)> = pairs
        .iter()
        .zip(&images)
        .map(|((x, y), (tx, _))| (tx.clone(), map.apply(&(x + y))))
        .collect();
    let claim = |i: usize, c: Scalar| -> Option<ClaimWitness> {
        let (x, y) = &pairs[i];
        let image = map.apply(&(x + &y.scale(&c)));
        let (tx, txy) = &line_images[i];
        (!on_image_line(&image, tx, txy)).then(|| ClaimWitness {
            x: x.clone(),
            y: y.clone(),
            coefficient: c,
            image,
        })
    };

    'integer: for i in 0..pairs.len() {
        for k in -opts.k..=opts.k {
            if let Some(w) = claim(i, Scalar::constant(space, rational::int(k))) {
                report.integer_claim = Some(w);
                break 'integer;
            }
        }
    }

    for j in 0..opts.lambda_samples {
        let lambda = if j % 2 == 0 {
            partition_scalar(space, &mut rng, bounded(opts.k))
        } else {
            Scalar::from_fn(space, |_| bounded(opts.k)(&mut rng))
        };
        if let Some(w) = claim(j % pairs.len(), lambda) {
            report.mixed_claim = Some(w);
            break;
        }
    }
    report
}

/// Segment harness, then [`certify_affine`] with the same budget and seed.
pub fn certify_from_segments(
    map: &MapSpec,
    budget: &ProbeBudget,
    seed: u64,
) -> Result<Certification> {
    if map.dim() < 2 {
        return Err(L0Error::DimensionTooSmall(map.dim()));
    }
    let opts = SegmentOptions {
        trials: budget.line_trials,
        k: SegmentOptions::default().k,
        lambda_samples: budget.lambda_samples,
    };
    if let Some(w) = segment_to_line_harness_with(map, &opts, seed).first_failure() {
        return Ok(w.into());
    }
    certify_affine(map, budget, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::Hypothesis;
    use crate::linalg::Matrix;
    use crate::maps::{make_swap_map, AffineMap, PerAtomMap, Piece};

    fn invertible() -> MapSpec {
        let s = ProbSpace::uniform(3).unwrap();
        AffineMap::new(
            vec![
                Matrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap(),
                Matrix::from_int_rows(&[&[2, 0], &[0, -1]]).unwrap(),
                Matrix::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap(),
            ],
            Vector::from_ints(&s, &[&[1, 0], &[0, 0], &[-2, 3]]).unwrap(),
        )
        .unwrap()
        .into()
    }

    #[test]
    fn invertible_affine_passes_all_claims() {
        let t = invertible();
        let r = segment_to_line_harness(&t, 50, 7);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.trials, 50);
    }

    #[test]
    fn swap_fails_the_locality_precondition() {
        let s = ProbSpace::uniform(2).unwrap();
        let swap = make_swap_map(&s, 2).unwrap();
        let r = segment_to_line_harness(&swap, 10, 0);
        let w = r.precondition.clone().unwrap();
        assert_eq!(w.hypothesis(), Hypothesis::Locality);
        assert!(r.segment.is_none() && r.integer_claim.is_none());
    }

    #[test]
    fn cube_breaks_the_segment_hypothesis() {
        let s = ProbSpace::uniform(2).unwrap();
        let t: MapSpec = PerAtomMap::uniform(&s, 2, Piece::cube()).unwrap().into();
        let r = segment_to_line_harness(&t, 10, 0);
        assert!(r.precondition.is_none());
        let w = r.segment.clone().unwrap();
        assert_eq!(w.hypothesis(), Hypothesis::SegmentForward);
        assert!(w.reproduces(&t));
        for c in [&r.integer_claim, &r.mixed_claim].into_iter().flatten() {
            assert!(c.reproduces(&t));
        }
    }

    #[test]
    fn pipeline_matches_direct_certification() {
        let t = invertible();
        let budget = ProbeBudget::default();
        let direct = certify_affine(&t, &budget, 11).unwrap();
        let chained = certify_from_segments(&t, &budget, 11).unwrap();
        assert!(direct.certificate().is_some());
        assert_eq!(direct, chained);
    }

    #[test]
    fn pipeline_rejects_singular_and_swap() {
        let s = ProbSpace::uniform(2).unwrap();
        let singular: MapSpec = AffineMap::linear(
            &s,
            vec![
                Matrix::identity(2),
                Matrix::from_int_rows(&[&[0, 0], &[0, 1]]).unwrap(),
            ],
        )
        .unwrap()
        .into();
        let out = certify_from_segments(&singular, &ProbeBudget::default(), 0).unwrap();
        assert_eq!(out.witness().unwrap().hypothesis(), Hypothesis::Injectivity);

        let swap = make_swap_map(&s, 2).unwrap();
        let out = certify_from_segments(&swap, &ProbeBudget::default(), 0).unwrap();
        assert_eq!(out.witness().unwrap().hypothesis(), Hypothesis::Locality);

        let one: MapSpec = AffineMap::identity(&s, 1).into();
        assert!(certify_from_segments(&one, &ProbeBudget::default(), 0).is_err());
    }
}
