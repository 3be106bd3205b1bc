//! Deterministic probe sets and seeded randomness.
//!
//! Checks over oracle maps are only as strong as their probes. A probe set
//! combines a fixed grid built from the coordinates `{-2, -1, 0, 1/2, 1, 3}`
//! with seeded random rationals (numerators and denominators at most 10).

use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::space::ProbSpace;
use crate::vector::Vector;

/// The generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

/// Stream `stream` of the generator seeded with `seed`.
///
/// Streams are independent, so trial `i` of a campaign sees the same data
/// regardless of how many trials run.
pub fn rng_for(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// How many random probes and trials a check may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeBudget {
    pub random_vectors: usize,
    pub random_scalars: usize,
    pub line_trials: usize,
    pub lambda_samples: usize,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        Self {
            random_vectors: 8,
            random_scalars: 8,
            line_trials: 16,
            lambda_samples: 20,
        }
    }
}

impl ProbeBudget {
    /// Every count set to `n`.
    pub fn uniform(n: usize) -> Self {
        Self {
            random_vectors: n,
            random_scalars: n,
            line_trials: n,
            lambda_samples: n,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub vectors: Vec<Vector>,
    pub scalars: Vec<Scalar>,
}

impl ProbeSet {
    /// Grid probes followed by `budget` seeded random probes.
    pub fn generate<R: Rng + ?Sized>(
        space: &ProbSpace,
        dim: usize,
        budget: &ProbeBudget,
        rng: &mut R,
    ) -> Self {
        let mut vectors = grid_vectors(space, dim);
        vectors.extend((0..budget.random_vectors).map(|_| random_vector(space, dim, rng)));
        let mut scalars = grid_scalars(space);
        scalars.extend((0..budget.random_scalars).map(|i| {
            if i % 3 == 2 {
                random_sparse_scalar(space, rng)
            } else {
                random_scalar(space, rng)
            }
        }));
        Self { vectors, scalars }
    }

    /// No probes; enough for checks that are decided from structure.
    pub fn empty() -> Self {
        Self {
            vectors: vec![],
            scalars: vec![],
        }
    }

    /// The probe set used when a caller does not supply one.
    pub fn default_for(space: &ProbSpace, dim: usize) -> Self {
        Self::generate(space, dim, &ProbeBudget::default(), &mut rng_for(0, 0))
    }

    /// A small probe set: θ, the unit vectors, and `extra` random vectors.
    pub fn compact<R: Rng + ?Sized>(
        space: &ProbSpace,
        dim: usize,
        extra: usize,
        rng: &mut R,
    ) -> Self {
        let mut vectors = vec![Vector::zero(space, dim)];
        vectors.extend((0..dim).map(|j| Vector::unit(space, dim, j)));
        vectors.push(staircase_vector(space, dim, 0));
        vectors.extend((0..extra).map(|_| random_vector(space, dim, rng)));
        Self {
            vectors,
            scalars: grid_scalars(space),
        }
    }

    /// Consecutive pairs `(v_i, v_{i+1})`, wrapping around.
    pub fn pairs(&self) -> impl Iterator<Item = (&Vector, &Vector)> + '_ {
        let n = self.vectors.len();
        (0..n).map(move |i| (&self.vectors[i], &self.vectors[(i + 1) % n]))
    }

    pub fn scalar_pairs(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> + '_ {
        let n = self.scalars.len();
        (0..n).flat_map(move |i| {
            [1, 2]
                .into_iter()
                .map(move |k| (&self.scalars[i], &self.scalars[(i + k) % n]))
        })
    }
}

/// `x(ω)_j = grid[(ω + 2j + shift) mod 6]`: nonconstant and sign-mixed.
pub fn staircase_vector(space: &ProbSpace, dim: usize, shift: usize) -> Vector {
    let grid = rational::grid_values();
    Vector::from_fn(space, dim, |atom| {
        (0..dim)
            .map(|j| grid[(atom + 2 * j + shift) % grid.len()].clone())
            .collect()
    })
}

pub fn grid_vectors(space: &ProbSpace, dim: usize) -> Vec<Vector> {
    let grid = rational::grid_values();
    let mut out = vec![Vector::zero(space, dim)];
    for c in grid.iter().filter(|c| !c.is_zero()) {
        for j in 0..dim {
            out.push(Vector::unit(space, dim, j).scale_by(c));
        }
        out.push(Vector::constant(space, vec![c.clone(); dim]));
    }
    out.extend((0..grid.len()).map(|s| staircase_vector(space, dim, s)));
    out
}

pub fn grid_scalars(space: &ProbSpace) -> Vec<Scalar> {
    let grid = rational::grid_values();
    let mut out: Vec<Scalar> = grid
        .iter()
        .map(|c| Scalar::constant(space, c.clone()))
        .collect();
    out.extend((0..space.len()).map(|a| space.singleton(a).indicator()));
    out.extend(
        (0..grid.len())
            .map(|s| Scalar::from_fn(space, |atom| grid[(atom + s) % grid.len()].clone())),
    );
    out
}

pub fn random_vector<R: Rng + ?Sized>(space: &ProbSpace, dim: usize, rng: &mut R) -> Vector {
    Vector::from_fn(space, dim, |_| {
        (0..dim).map(|_| rational::random_small(rng)).collect()
    })
}

/// A random vector with `x(ω) ≠ 0` at every atom.
pub fn random_full_support_vector<R: Rng + ?Sized>(
    space: &ProbSpace,
    dim: usize,
    rng: &mut R,
) -> Vector {
    Vector::from_fn(space, dim, |_| loop {
        let p: Vec<Rational> = (0..dim).map(|_| rational::random_small(rng)).collect();
        if p.iter().any(|v| !v.is_zero()) {
            break p;
        }
    })
}

pub fn random_scalar<R: Rng + ?Sized>(space: &ProbSpace, rng: &mut R) -> Scalar {
    Scalar::from_fn(space, |_| rational::random_small(rng))
}

/// A random scalar that is zero on roughly half the atoms.
pub fn random_sparse_scalar<R: Rng + ?Sized>(space: &ProbSpace, rng: &mut R) -> Scalar {
    Scalar::from_fn(space, |_| {
        if rng.random_bool(0.5) {
            Rational::zero()
        } else {
            rational::random_nonzero(rng)
        }
    })
}

pub fn random_unit_scalar<R: Rng + ?Sized>(space: &ProbSpace, rng: &mut R) -> Scalar {
    Scalar::from_fn(space, |_| rational::random_unit(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| rng_for(7, 3).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = rng_for(7, 3).random();
        let y: u64 = rng_for(7, 4).random();
        assert_ne!(x, y);
    }

    #[test]
    fn probe_sets_cover_required_shapes() {
        let s = ProbSpace::uniform(3).unwrap();
        let p = ProbeSet::generate(&s, 2, &ProbeBudget::default(), &mut rng_for(1, 0));
        assert!(p.vectors[0].is_zero());
        assert!(p.scalars.iter().any(|x| !x.is_constant()));
        assert!(p
            .scalars
            .iter()
            .any(|x| !x.is_zero() && !x.is_strictly_nonzero()));
        assert!(p
            .scalars
            .iter()
            .any(|x| x.values().iter().any(|v| v < &Rational::zero())
                && x.values().iter().any(|v| v > &Rational::zero())));
        let again = ProbeSet::generate(&s, 2, &ProbeBudget::default(), &mut rng_for(1, 0));
        assert_eq!(p.vectors, again.vectors);
        assert_eq!(p.scalars, again.scalars);
    }
}
