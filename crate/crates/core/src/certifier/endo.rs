//! Ring endomorphisms of `L⁰` and the check that the only local one
//! fixing `1` is the identity.

use num::{One, Zero};

use crate::error::{L0Error, Result};
use crate::maps::AtomPermutation;
use crate::probes::{self, rng_for, ProbeBudget};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::space::{Event, ProbSpace};

/// A serializable self-map `φ` of `L⁰`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarMap {
    Identity,
    /// `φ(ξ)(ω) = ξ(σ(ω))`.
    PullBack(AtomPermutation),
    /// `φ(ξ) = αξ + β`.
    Affine {
        alpha: Scalar,
        beta: Scalar,
    },
    /// `φ(ξ)(ω) = Σₖ cₖ(ω) ξ(ω)ᵏ`, with `coeffs[ω][k] = cₖ(ω)`.
    Polynomial {
        space: ProbSpace,
        coeffs: Vec<Vec<Rational>>,
    },
    /// Applied left to right.
    Compose(Vec<ScalarMap>),
}

impl ScalarMap {
    /// Checks that every space the map refers to is `space`.
    pub fn validate(&self, space: &ProbSpace) -> Result<()> {
        match self {
            ScalarMap::Identity => Ok(()),
            ScalarMap::PullBack(p) => space.ensure_same(p.space()),
            ScalarMap::Affine { alpha, beta } => {
                space.ensure_same(alpha.space())?;
                space.ensure_same(beta.space())
            }
            ScalarMap::Polynomial { space: s, coeffs } => {
                space.ensure_same(s)?;
                if coeffs.len() != space.len() {
                    return Err(L0Error::Malformed(format!(
                        "polynomial needs coefficients for {} atoms, got {}",
                        space.len(),
                        coeffs.len()
                    )));
                }
                Ok(())
            }
            ScalarMap::Compose(parts) => parts.iter().try_for_each(|p| p.validate(space)),
        }
    }

    pub fn apply(&self, xi: &Scalar) -> Scalar {
        match self {
            ScalarMap::Identity => xi.clone(),
            ScalarMap::PullBack(p) => xi.pull_back(p.images()),
            ScalarMap::Affine { alpha, beta } => &(alpha * xi) + beta,
            ScalarMap::Polynomial { coeffs, .. } => Scalar::from_fn(xi.space(), |a| {
                // Horner from the top coefficient down
                coeffs[a]
                    .iter()
                    .rev()
                    .fold(Rational::zero(), |acc, c| acc * xi.get(a) + c)
            }),
            ScalarMap::Compose(parts) => parts.iter().fold(xi.clone(), |acc, p| p.apply(&acc)),
        }
    }
}

/// A concrete violation found by [`endo_identity_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndoWitness {
    /// `Ĩ_A φ(Ĩ_A ξ) ≠ Ĩ_A φ(ξ)`.
    Locality { event: Event, xi: Scalar },
    /// `φ(ξ + η) ≠ φ(ξ) + φ(η)`.
    Additivity { xi: Scalar, eta: Scalar },
    /// `φ(ξη) ≠ φ(ξ) φ(η)`.
    Multiplicativity { xi: Scalar, eta: Scalar },
    /// `φ(1) ≠ 1`.
    Unit { image: Scalar },
    /// `ξ ≤ η` but `φ(ξ) ≰ φ(η)`.
    Monotonicity { xi: Scalar, eta: Scalar },
    /// `φ(ξ) ≠ ξ`.
    NotFixed { xi: Scalar },
}

impl EndoWitness {
    pub fn reproduces(&self, phi: &ScalarMap) -> bool {
        match self {
            EndoWitness::Locality { event, xi } => {
                phi.apply(&xi.restrict(event)).restrict(event) != phi.apply(xi).restrict(event)
            }
            EndoWitness::Additivity { xi, eta } => {
                phi.apply(&(xi + eta)) != &phi.apply(xi) + &phi.apply(eta)
            }
            EndoWitness::Multiplicativity { xi, eta } => {
                phi.apply(&(xi * eta)) != &phi.apply(xi) * &phi.apply(eta)
            }
            EndoWitness::Unit { image } => {
                let one = Scalar::one(image.space());
                phi.apply(&one) == *image && *image != one
            }
            EndoWitness::Monotonicity { xi, eta } => {
                eta.dominates(xi) && !phi.apply(eta).dominates(&phi.apply(xi))
            }
            EndoWitness::NotFixed { xi } => phi.apply(xi) != *xi,
        }
    }
}

/// Axioms (1)-(4) of a local unital ring endomorphism, two consequences the
/// identity argument passes through, and the identity verdict itself. Each
/// field is `None` when no violation was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndoReport {
    pub locality: Option<EndoWitness>,
    pub additivity: Option<EndoWitness>,
    pub multiplicativity: Option<EndoWitness>,
    pub unit: Option<EndoWitness>,
    /// `φ` fixes the grid's simple functions (constants, indicators, steps).
    pub fixes_simple: Option<EndoWitness>,
    pub monotone: Option<EndoWitness>,
    pub identity: Option<EndoWitness>,
    pub probes: usize,
}

impl EndoReport {
    pub fn axioms_pass(&self) -> bool {
        self.locality.is_none()
            && self.additivity.is_none()
            && self.multiplicativity.is_none()
            && self.unit.is_none()
    }

    pub fn identity_pass(&self) -> bool {
        self.identity.is_none()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &EndoWitness> {
        [
            &self.locality,
            &self.additivity,
            &self.multiplicativity,
            &self.unit,
            &self.fixes_simple,
            &self.monotone,
            &self.identity,
        ]
        .into_iter()
        .flatten()
    }
}

/// `1`, then `ξ(ω) = ω + 1`, then the grid scalars, then seeded randoms.
fn endo_probes(space: &ProbSpace, budget: &ProbeBudget, seed: u64) -> Vec<Scalar> {
    let mut rng = rng_for(seed, 0);
    let mut out = vec![
        Scalar::one(space),
        Scalar::from_fn(space, |a| rational::int(a as i64 + 1)),
    ];
    out.extend(probes::grid_scalars(space));
    out.extend((0..budget.random_scalars).map(|i| {
        if i % 3 == 2 {
            probes::random_sparse_scalar(space, &mut rng)
        } else {
            probes::random_scalar(space, &mut rng)
        }
    }));
    out
}

fn find_pair(
    xs: &[Scalar],
    bad: impl Fn(&Scalar, &Scalar) -> bool,
    witness: impl Fn(Scalar, Scalar) -> EndoWitness,
) -> Option<EndoWitness> {
    let n = xs.len();
    let diagonal = (0..n).map(|i| (i, i));
    let neighbours = (0..n).flat_map(|i| [1, 2].map(|k| (i, (i + k) % n)));
    diagonal
        .chain(neighbours)
        .find(|&(i, j)| bad(&xs[i], &xs[j]))
        .map(|(i, j)| witness(xs[i].clone(), xs[j].clone()))
}

pub fn endo_identity_check(
    phi: &ScalarMap,
    space: &ProbSpace,
    budget: &ProbeBudget,
    seed: u64,
) -> Result<EndoReport> {
    phi.validate(space)?;
    let xs = endo_probes(space, budget, seed);
    let images: Vec<Scalar> = xs.iter().map(|x| phi.apply(x)).collect();
    let n = xs.len();

    let mut locality = None;
    'atoms: for atom in 0..space.len() {
        let a = space.singleton(atom);
        for (i, xi) in xs.iter().enumerate() {
            if phi.apply(&xi.restrict(&a)).get(atom) != images[i].get(atom) {
                locality = Some(EndoWitness::Locality {
                    event: a,
                    xi: xi.clone(),
                });
                break 'atoms;
            }
            let mixed = Scalar::mix(&a, xi, &xs[(i + 1) % n]);
            if phi.apply(&mixed).get(atom) != images[i].get(atom) {
                locality = Some(EndoWitness::Locality {
                    event: a,
                    xi: mixed,
                });
                break 'atoms;
            }
        }
    }

    let additivity = find_pair(
        &xs,
        |x, y| phi.apply(&(x + y)) != &phi.apply(x) + &phi.apply(y),
        |xi, eta| EndoWitness::Additivity { xi, eta },
    );
    let multiplicativity = find_pair(
        &xs,
        |x, y| phi.apply(&(x * y)) != &phi.apply(x) * &phi.apply(y),
        |xi, eta| EndoWitness::Multiplicativity { xi, eta },
    );
    let unit = (images[0] != xs[0]).then(|| EndoWitness::Unit {
        image: images[0].clone(),
    });

    let simple = probes::grid_scalars(space);
    let fixes_simple = simple
        .iter()
        .find(|q| phi.apply(q) != **q)
        .map(|q| EndoWitness::NotFixed { xi: q.clone() });

    let mut steps: Vec<Scalar> = [rational::ratio(1, 2), Rational::one(), rational::int(3)]
        .into_iter()
        .map(|c| Scalar::constant(space, c))
        .collect();
    steps.extend((0..space.len()).map(|a| space.singleton(a).indicator()));
    let monotone = xs.iter().enumerate().find_map(|(i, xi)| {
        steps.iter().find_map(|d| {
            let eta = xi + d;
            (!phi.apply(&eta).dominates(&images[i])).then(|| EndoWitness::Monotonicity {
                xi: xi.clone(),
                eta,
            })
        })
    });

    let identity = (0..n)
        .find(|&i| images[i] != xs[i])
        .map(|i| EndoWitness::NotFixed { xi: xs[i].clone() });

    Ok(EndoReport {
        locality,
        additivity,
        multiplicativity,
        unit,
        fixes_simple,
        monotone,
        identity,
        probes: n,
    })
}
