//! Does a map send `L⁰`-lines onto `L⁰`-lines?

use num::One;
use serde::{Deserialize, Serialize};

use super::predicates::{injectivity, InjectivityWitness};
use super::MapSpec;
use crate::geometry::line_membership;
use crate::probes::{self, rng_for, ProbeSet};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OntoStatus {
    ExactPass,
    ExactFail,
    SampledPass,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineWitness {
    /// `T(λx + (1−λ)y)` is not on `l(Tx, Ty)`.
    Forward {
        x: Vector,
        y: Vector,
        lambda: Scalar,
        image: Vector,
    },
    /// `x ≠ y` but `T(x) = T(y)`: the image of `l(x, y)` is not a line.
    Collapse { x: Vector, y: Vector },
}

impl LineWitness {
    pub fn reproduces(&self, map: &MapSpec) -> bool {
        match self {
            LineWitness::Forward {
                x,
                y,
                lambda,
                image,
            } => {
                let z = Vector::affine_combination(lambda, x, y);
                let tz = map.apply(&z);
                &tz == image && !on_image_line(&tz, &map.apply(x), &map.apply(y))
            }
            LineWitness::Collapse { x, y } => x != y && map.apply(x) == map.apply(y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinePreservationReport {
    pub forward_ok: bool,
    pub onto_status: OntoStatus,
    pub trials: usize,
    pub witness: Option<LineWitness>,
}

impl LinePreservationReport {
    pub fn passed(&self) -> bool {
        self.forward_ok
            && matches!(
                self.onto_status,
                OntoStatus::ExactPass | OntoStatus::SampledPass
            )
    }
}

/// `w ∈ l(u, v)`, reading `l(u, u)` as the single point `u`.
pub(crate) fn on_image_line(w: &Vector, u: &Vector, v: &Vector) -> bool {
    if u == v {
        return w == u;
    }
    matches!(line_membership(w, u, v), Ok(Some(_)))
}

/// Forward trials first probe `l(θ, 1)` and the unit lines at a few constant
/// coefficients, then random pairs with nonconstant sign-mixed `λ`.
fn forward_trials(map: &MapSpec, trials: usize, seed: u64) -> Vec<(Vector, Vector, Scalar)> {
    let space = map.space();
    let dim = map.dim();
    let theta = Vector::zero(space, dim);
    let mut out = Vec::with_capacity(trials);
    let ones = Vector::constant(space, vec![Rational::one(); dim]);
    let fixed = [
        rational::int(2),
        rational::int(-1),
        rational::ratio(1, 2),
        rational::int(3),
    ];
    // lines through the origin along constant directions are blind to
    // coordinatewise maps, so at least half of the trials stay random
    let fixed_cap = trials / 2;
    'fixed: for base in std::iter::once(ones).chain((0..dim).map(|j| Vector::unit(space, dim, j))) {
        for c in &fixed {
            if out.len() >= fixed_cap {
                break 'fixed;
            }
            out.push((
                base.clone(),
                theta.clone(),
                Scalar::constant(space, c.clone()),
            ));
        }
    }
    let mut rng = rng_for(seed, 0);
    while out.len() < trials {
        let x = probes::random_vector(space, dim, &mut rng);
        let y = probes::random_vector(space, dim, &mut rng);
        if x == y {
            continue;
        }
        let lambda = probes::random_scalar(space, &mut rng);
        out.push((x, y, lambda));
    }
    out
}

fn collapse_from(w: InjectivityWitness) -> Option<LineWitness> {
    match w {
        InjectivityWitness::Collision { x, y } => Some(LineWitness::Collapse { x, y }),
        InjectivityWitness::SingularPiece { .. } => None,
    }
}

fn affine_onto(map: &MapSpec) -> (OntoStatus, Option<LineWitness>) {
    let empty = ProbeSet::empty();
    match injectivity(map, &empty).witness {
        None => (OntoStatus::ExactPass, None),
        Some(w) => (OntoStatus::ExactFail, collapse_from(w)),
    }
}

/// Targets `κTx + (1−κ)Ty` for grid and mixed `κ`; each is searched for a
/// preimage on `l(x, y)` atom by atom over constant grid coefficients, and
/// the assembled preimage is re-evaluated before it counts.
fn sampled_onto(map: &MapSpec, pairs: &[(Vector, Vector)]) -> OntoStatus {
    let space = map.space();
    let grid = rational::grid_values();
    for (x, y) in pairs {
        let (tx, ty) = (map.apply(x), map.apply(y));
        if tx == ty {
            return OntoStatus::Inconclusive;
        }
        let table: Vec<Vector> = grid
            .iter()
            .map(|c| {
                map.apply(&Vector::affine_combination(
                    &Scalar::constant(space, c.clone()),
                    x,
                    y,
                ))
            })
            .collect();
        let mut kappas: Vec<Scalar> = grid
            .iter()
            .map(|c| Scalar::constant(space, c.clone()))
            .collect();
        kappas.extend(
            (0..grid.len()).map(|s| Scalar::from_fn(space, |a| grid[(a + s) % grid.len()].clone())),
        );
        for kappa in kappas {
            let target = Vector::affine_combination(&kappa, &tx, &ty);
            let mut lambda = Vec::with_capacity(space.len());
            for atom in 0..space.len() {
                match table
                    .iter()
                    .position(|img| img.point(atom) == target.point(atom))
                {
                    Some(k) => lambda.push(grid[k].clone()),
                    None => return OntoStatus::Inconclusive,
                }
            }
            let lambda = Scalar::from_values(space, lambda).expect("one value per atom");
            if map.apply(&Vector::affine_combination(&lambda, x, y)) != target {
                return OntoStatus::Inconclusive;
            }
        }
    }
    OntoStatus::SampledPass
}

/// Forward inclusion is always sampled. Ontoness is exact for affine and
/// semilinear maps (and per-atom maps whose pieces are all affine), where it
/// holds iff every per-atom matrix is invertible; otherwise it is searched.
pub fn check_line_preservation(map: &MapSpec, trials: usize, seed: u64) -> LinePreservationReport {
    let cases = forward_trials(map, trials, seed);
    let mut witness = None;
    for (x, y, lambda) in &cases {
        let image = map.apply(&Vector::affine_combination(lambda, x, y));
        if !on_image_line(&image, &map.apply(x), &map.apply(y)) {
            witness = Some(LineWitness::Forward {
                x: x.clone(),
                y: y.clone(),
                lambda: lambda.clone(),
                image,
            });
            break;
        }
    }
    let forward_ok = witness.is_none();

    let (onto_status, onto_witness) = match map {
        MapSpec::Affine(_) | MapSpec::Semilinear(_) => affine_onto(map),
        MapSpec::PerAtom(m) => match m.as_affine() {
            Some(a) => affine_onto(&MapSpec::Affine(a)),
            None => {
                let empty = ProbeSet::empty();
                match injectivity(map, &empty).witness.and_then(collapse_from) {
                    Some(w) => (OntoStatus::ExactFail, Some(w)),
                    None => (OntoStatus::Inconclusive, None),
                }
            }
        },
        MapSpec::BlackBox(_) => (OntoStatus::Inconclusive, None),
    };
    let onto_status = match onto_status {
        OntoStatus::Inconclusive => {
            let pairs: Vec<(Vector, Vector)> = cases
                .iter()
                .take(4)
                .map(|(x, y, _)| (x.clone(), y.clone()))
                .collect();
            sampled_onto(map, &pairs)
        }
        s => s,
    };

    LinePreservationReport {
        forward_ok,
        onto_status,
        trials: cases.len(),
        witness: witness.or(onto_witness),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::maps::{make_swap_map, AffineMap, PerAtomMap, Piece};
    use crate::rational::int;
    use crate::space::ProbSpace;

    #[test]
    fn invertible_affine_passes_exactly() {
        let s = ProbSpace::uniform(2).unwrap();
        let m: MapSpec = AffineMap::new(
            vec![
                Matrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap(),
                Matrix::from_int_rows(&[&[2, 0], &[0, 1]]).unwrap(),
            ],
            Vector::from_ints(&s, &[&[1, 0], &[0, 1]]).unwrap(),
        )
        .unwrap()
        .into();
        let r = check_line_preservation(&m, 20, 1);
        assert!(r.forward_ok);
        assert_eq!(r.onto_status, OntoStatus::ExactPass);
        assert_eq!(r.trials, 20);
        assert!(r.witness.is_none());
    }

    #[test]
    fn singular_affine_fails_onto() {
        let s = ProbSpace::uniform(2).unwrap();
        let m: MapSpec = AffineMap::linear(
            &s,
            vec![
                Matrix::identity(2),
                Matrix::from_int_rows(&[&[1, 0], &[0, 0]]).unwrap(),
            ],
        )
        .unwrap()
        .into();
        let r = check_line_preservation(&m, 10, 1);
        assert!(r.forward_ok);
        assert_eq!(r.onto_status, OntoStatus::ExactFail);
        assert!(r.witness.unwrap().reproduces(&m));
    }

    #[test]
    fn swap_preserves_lines() {
        let s = ProbSpace::uniform(2).unwrap();
        let swap = make_swap_map(&s, 2).unwrap();
        let r = check_line_preservation(&swap, 30, 9);
        assert!(r.forward_ok);
        assert_eq!(r.onto_status, OntoStatus::ExactPass);
    }

    #[test]
    fn cube_on_first_coordinate_breaks_lines() {
        let s = ProbSpace::uniform(2).unwrap();
        let m: MapSpec = PerAtomMap::new(
            &s,
            2,
            vec![
                Piece::Power(crate::maps::Exponents::PerCoord(vec![3, 1])),
                Piece::Identity,
            ],
        )
        .unwrap()
        .into();
        let r = check_line_preservation(&m, 10, 0);
        assert!(!r.forward_ok);
        let w = r.witness.clone().unwrap();
        assert!(w.reproduces(&m));
        let LineWitness::Forward {
            x,
            y,
            lambda,
            image,
        } = w
        else {
            panic!("expected a forward witness")
        };
        let ones = Vector::from_ints(&s, &[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(x, ones);
        assert!(y.is_zero());
        assert_eq!(lambda, Scalar::constant(&s, int(2)));
        assert_eq!(image, Vector::from_ints(&s, &[&[8, 2], &[2, 2]]).unwrap());
    }

    #[test]
    fn black_box_affine_is_sampled() {
        let s = ProbSpace::uniform(3).unwrap();
        let m: MapSpec = AffineMap::new(
            vec![Matrix::from_int_rows(&[&[0, 1], &[1, 0]]).unwrap(); 3],
            Vector::from_ints(&s, &[&[1, 0], &[0, 1], &[2, 2]]).unwrap(),
        )
        .unwrap()
        .into();
        let r = check_line_preservation(&m.to_black_box(), 12, 4);
        assert!(r.forward_ok);
        assert_eq!(r.onto_status, OntoStatus::SampledPass);
    }

    #[test]
    fn one_dimensional_cube_is_inconclusive_onto() {
        // n = 1: every point lies on the unique line, so forward passes
        let s = ProbSpace::uniform(2).unwrap();
        let m: MapSpec = PerAtomMap::uniform(&s, 1, Piece::cube()).unwrap().into();
        let r = check_line_preservation(&m, 12, 4);
        assert!(r.forward_ok);
        assert_eq!(r.onto_status, OntoStatus::Inconclusive);
    }
}
