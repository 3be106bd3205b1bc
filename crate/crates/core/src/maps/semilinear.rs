//! σ-semilinear maps and the atom-swap counterexample.

use std::collections::BTreeMap;

use super::{AffineMap, AtomPermutation, MapSpec, SemilinearMap};
use crate::error::{L0Error, Result};
use crate::probes::ProbeSet;
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::space::ProbSpace;
use crate::vector::Vector;

/// The law that failed in [`check_semilinear`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemilinearFailure {
    /// `T(θ) ≠ θ`.
    MovesOrigin { image: Vector },
    /// `T(x + y) ≠ T(x) + T(y)`.
    Additivity { x: Vector, y: Vector },
    /// `T(ξx) ≠ σ*(ξ) T(x)`.
    Homogeneity { xi: Scalar, x: Vector },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearReport {
    pub failure: Option<SemilinearFailure>,
}

impl SemilinearReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks `T(x+y) = T(x) + T(y)` and `T(ξx) = σ*(ξ) T(x)` on the probes,
/// where `σ*(ξ)(ω) = ξ(σ(ω))`. `T(θ) = θ` is checked first.
pub fn check_semilinear(
    map: &MapSpec,
    sigma: &AtomPermutation,
    probes: &ProbeSet,
) -> SemilinearReport {
    let fail = |f| SemilinearReport { failure: Some(f) };
    let theta = Vector::zero(map.space(), map.dim());
    let t0 = map.apply(&theta);
    if !t0.is_zero() {
        return fail(SemilinearFailure::MovesOrigin { image: t0 });
    }
    for (x, y) in probes.pairs() {
        if map.apply(&(x + y)) != &map.apply(x) + &map.apply(y) {
            return fail(SemilinearFailure::Additivity {
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    for x in &probes.vectors {
        let tx = map.apply(x);
        for xi in &probes.scalars {
            if map.apply(&x.scale(xi)) != tx.scale(&xi.pull_back(sigma.images())) {
                return fail(SemilinearFailure::Homogeneity {
                    xi: xi.clone(),
                    x: x.clone(),
                });
            }
        }
    }
    SemilinearReport { failure: None }
}

/// A fixed-point-free involution of the atoms that preserves mass.
///
/// The first half of the atoms is paired with the second half in order
/// (the finite picture of `ω ↔ ω ± 1/2`); failing that, atoms of equal mass
/// are paired greedily.
fn mass_preserving_pairing(space: &ProbSpace) -> Option<Vec<usize>> {
    let m = space.len();
    if m % 2 == 1 {
        return None;
    }
    let k = m / 2;
    if (0..k).all(|i| space.mass(i) == space.mass(i + k)) {
        return Some((0..m).map(|i| if i < k { i + k } else { i - k }).collect());
    }
    let mut by_mass: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for a in 0..m {
        by_mass.entry(space.mass(a)).or_default().push(a);
    }
    let mut images = vec![0; m];
    for atoms in by_mass.values() {
        if atoms.len() % 2 == 1 {
            return None;
        }
        for pair in atoms.chunks(2) {
            images[pair[0]] = pair[1];
            images[pair[1]] = pair[0];
        }
    }
    Some(images)
}

/// The swap map `(Tx)(ω) = x(σ(ω))` for a mass-preserving involution `σ`
/// without fixed points.
pub fn make_swap_map(space: &ProbSpace, dim: usize) -> Result<MapSpec> {
    if dim == 0 {
        return Err(L0Error::ZeroDimension);
    }
    let images = mass_preserving_pairing(space).ok_or(L0Error::NoMassPreservingPairing)?;
    let sigma = AtomPermutation::new(space, images)?;
    Ok(MapSpec::Semilinear(SemilinearMap::new(
        sigma,
        AffineMap::identity(space, dim),
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::{rng_for, ProbeBudget};
    use crate::rational::{int, ratio};

    #[test]
    fn swap_map_pairings() {
        let s2 = ProbSpace::uniform(2).unwrap();
        let MapSpec::Semilinear(m) = make_swap_map(&s2, 1).unwrap() else {
            panic!("expected a semilinear map")
        };
        assert_eq!(m.sigma().images(), [1, 0]);

        let s4 = ProbSpace::uniform(4).unwrap();
        let MapSpec::Semilinear(m) = make_swap_map(&s4, 2).unwrap() else {
            panic!("expected a semilinear map")
        };
        assert_eq!(m.sigma().images(), [2, 3, 0, 1]);

        let uneven = ProbSpace::new(vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)]).unwrap();
        assert_eq!(
            make_swap_map(&uneven, 1).unwrap_err(),
            L0Error::NoMassPreservingPairing
        );

        let grouped =
            ProbSpace::new(vec![ratio(1, 3), ratio(1, 6), ratio(1, 3), ratio(1, 6)]).unwrap();
        assert!(make_swap_map(&grouped, 1).is_ok());
        let by_mass =
            ProbSpace::new(vec![ratio(1, 3), ratio(1, 3), ratio(1, 6), ratio(1, 6)]).unwrap();
        let MapSpec::Semilinear(m) = make_swap_map(&by_mass, 1).unwrap() else {
            panic!("expected a semilinear map")
        };
        assert_eq!(m.sigma().images(), [1, 0, 3, 2]);
    }

    #[test]
    fn swap_is_an_involution() {
        let s = ProbSpace::uniform(4).unwrap();
        let t = make_swap_map(&s, 2).unwrap();
        let probes = ProbeSet::generate(&s, 2, &ProbeBudget::default(), &mut rng_for(2, 0));
        for x in &probes.vectors {
            assert_eq!(t.apply(&t.apply(x)), *x);
        }
    }

    #[test]
    fn semilinear_examples() {
        let s = ProbSpace::uniform(2).unwrap();
        let probes = ProbeSet::default_for(&s, 2);
        let swap = make_swap_map(&s, 2).unwrap();
        let MapSpec::Semilinear(m) = &swap else {
            unreachable!()
        };
        assert!(check_semilinear(&swap, m.sigma(), &probes).holds());
        // with the wrong σ the homogeneity law fails
        let id = AtomPermutation::identity(&s);
        assert!(matches!(
            check_semilinear(&swap, &id, &probes).failure,
            Some(SemilinearFailure::Homogeneity { .. })
        ));

        let linear: MapSpec = AffineMap::linear(
            &s,
            vec![crate::linalg::Matrix::from_int_rows(&[&[1, 2], &[0, 1]]).unwrap(); 2],
        )
        .unwrap()
        .into();
        assert!(check_semilinear(&linear, &id, &probes).holds());

        let shift: MapSpec =
            AffineMap::translation(Vector::constant(&s, vec![int(1), int(0)])).into();
        assert!(matches!(
            check_semilinear(&shift, &id, &probes).failure,
            Some(SemilinearFailure::MovesOrigin { .. })
        ));
    }
}
