//! Locality, stability, injectivity, and the per-atom factorization.

use num::Zero;
use serde::{Deserialize, Serialize};

use super::{AffineMap, MapSpec, PerAtomMap, Piece, PieceCollision, SemilinearMap};
use crate::error::{L0Error, Result};
use crate::linalg::Matrix;
use crate::probes::ProbeSet;
use crate::rational::Rational;
use crate::space::{Event, ProbSpace};
use crate::vector::Vector;

/// How much a verdict can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strength {
    /// Decided from the map's structure.
    Exact,
    /// No counterexample on the probe set.
    Sampled,
}

/// `Ĩ_A T(Ĩ_A x) ≠ Ĩ_A T(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityWitness {
    pub event: Event,
    pub x: Vector,
}

impl LocalityWitness {
    pub fn reproduces(&self, map: &MapSpec) -> bool {
        let a = &self.event;
        map.apply(&self.x.restrict(a)).restrict(a) != map.apply(&self.x).restrict(a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityReport {
    pub verdict: bool,
    pub strength: Strength,
    pub witness: Option<LocalityWitness>,
}

/// Locality with the default probe set for black boxes.
pub fn is_local(map: &MapSpec) -> LocalityReport {
    match map {
        MapSpec::BlackBox(_) => is_local_with(map, &ProbeSet::default_for(map.space(), map.dim())),
        _ => is_local_with(map, &ProbeSet::empty()),
    }
}

/// Affine and per-atom maps are local by construction. A semilinear map is
/// local iff its permutation only moves atoms whose matrix is zero. Black
/// boxes are probed on single-atom events, which suffices on atomic spaces:
/// `Ĩ_a Ĩ_A = Ĩ_a` whenever `a ∈ A`.
pub fn is_local_with(map: &MapSpec, probes: &ProbeSet) -> LocalityReport {
    let exact = |witness: Option<LocalityWitness>| LocalityReport {
        verdict: witness.is_none(),
        strength: Strength::Exact,
        witness,
    };
    match map {
        MapSpec::Affine(_) | MapSpec::PerAtom(_) => exact(None),
        MapSpec::Semilinear(m) => exact(semilinear_locality_witness(m)),
        MapSpec::BlackBox(_) => {
            let witness = probe_locality(map, probes);
            LocalityReport {
                verdict: witness.is_none(),
                strength: Strength::Sampled,
                witness,
            }
        }
    }
}

fn semilinear_locality_witness(m: &SemilinearMap) -> Option<LocalityWitness> {
    let space = m.affine().space();
    let dim = m.affine().dim();
    let atom =
        (0..space.len()).find(|&a| m.sigma().apply(a) != a && !m.affine().matrix(a).is_zero())?;
    let matrix = m.affine().matrix(atom);
    let col = (0..dim)
        .find(|&j| matrix.column(j).iter().any(|v| !v.is_zero()))
        .expect("nonzero matrix has a nonzero column");
    // x(ω) = (ω + 1) e_col, so the moved atom sees a nonzero input
    let x = Vector::from_fn(space, dim, |a| {
        let mut p = vec![Rational::zero(); dim];
        p[col] = crate::rational::int(a as i64 + 1);
        p
    });
    Some(LocalityWitness {
        event: space.singleton(atom),
        x,
    })
}

fn probe_locality(map: &MapSpec, probes: &ProbeSet) -> Option<LocalityWitness> {
    let space = map.space();
    let images: Vec<Vector> = probes.vectors.iter().map(|x| map.apply(x)).collect();
    let n = probes.vectors.len();
    for atom in 0..space.len() {
        let a = space.singleton(atom);
        for (i, x) in probes.vectors.iter().enumerate() {
            let tx = &images[i];
            let masked = map.apply(&x.restrict(&a));
            if masked.point(atom) != tx.point(atom) {
                return Some(LocalityWitness {
                    event: a,
                    x: x.clone(),
                });
            }
            // T(p)(a) must agree with T(x)(a) for any p agreeing with x at a
            let y = &probes.vectors[(i + 1) % n];
            let p = Vector::mix(&a, x, y);
            if map.apply(&p).point(atom) != tx.point(atom) {
                // T(Ĩ_a p)(a) = T(Ĩ_a x)(a) = T(x)(a) ≠ T(p)(a)
                return Some(LocalityWitness { event: a, x: p });
            }
        }
    }
    None
}

/// `T(Ĩ_A x + Ĩ_{A^c} y) ≠ Ĩ_A T(x) + Ĩ_{A^c} T(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityWitness {
    pub event: Event,
    pub x: Vector,
    pub y: Vector,
}

impl StabilityWitness {
    pub fn reproduces(&self, map: &MapSpec) -> bool {
        let lhs = map.apply(&Vector::mix(&self.event, &self.x, &self.y));
        let rhs = Vector::mix(&self.event, &map.apply(&self.x), &map.apply(&self.y));
        lhs != rhs
    }
}

/// First stability violation over `events` and the probe pairs.
pub fn stability_witness(
    map: &MapSpec,
    events: &[Event],
    probes: &ProbeSet,
) -> Option<StabilityWitness> {
    let images: Vec<Vector> = probes.vectors.iter().map(|x| map.apply(x)).collect();
    let n = images.len();
    for i in 0..n {
        let j = (i + 1) % n;
        let (x, y) = (&probes.vectors[i], &probes.vectors[j]);
        for event in events {
            if event.is_empty() || event.is_omega() {
                continue;
            }
            let lhs = map.apply(&Vector::mix(event, x, y));
            if lhs != Vector::mix(event, &images[i], &images[j]) {
                return Some(StabilityWitness {
                    event: event.clone(),
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
    }
    None
}

/// Whether `T` is stable for every supplied event on the probe pairs. The
/// events `∅` and `Ω` hold trivially and are skipped.
pub fn is_stable(map: &MapSpec, events: &[Event], probes: &ProbeSet) -> bool {
    stability_witness(map, events, probes).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityWitness {
    /// `x ≠ y` with `T(x) = T(y)`.
    Collision { x: Vector, y: Vector },
    /// The per-atom piece at `atom` contains a singular affine part `part`
    /// killing `kernel`; no rational collision is available through the
    /// preceding nonlinear parts.
    SingularPiece {
        atom: usize,
        part: usize,
        kernel: Vec<Rational>,
    },
}

impl InjectivityWitness {
    pub fn reproduces(&self, map: &MapSpec) -> bool {
        match self {
            InjectivityWitness::Collision { x, y } => x != y && map.apply(x) == map.apply(y),
            InjectivityWitness::SingularPiece { atom, part, kernel } => {
                let MapSpec::PerAtom(m) = map else {
                    return false;
                };
                let Some(Piece::Compose(parts)) = m.pieces().get(*atom) else {
                    return false;
                };
                match parts.get(*part) {
                    Some(Piece::Affine { matrix, .. }) => {
                        kernel.iter().any(|v| !v.is_zero())
                            && matrix.mul_vec(kernel).iter().all(Zero::is_zero)
                    }
                    _ => false,
                }
            }
        }
    }

    /// The atom on which injectivity fails, when the witness pins one down.
    pub fn atom(&self) -> Option<usize> {
        match self {
            InjectivityWitness::Collision { x, y } => {
                (0..x.space().len()).find(|&a| x.point(a) != y.point(a))
            }
            InjectivityWitness::SingularPiece { atom, .. } => Some(*atom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub injective: bool,
    pub strength: Strength,
    pub witness: Option<InjectivityWitness>,
}

/// `(θ, k e_atom)` style collision for a singular matrix at `atom`, placed at
/// `input_atom` of the input.
fn kernel_collision(
    space: &ProbSpace,
    dim: usize,
    input_atom: usize,
    matrix: &Matrix,
) -> InjectivityWitness {
    let k = matrix
        .kernel_vector()
        .expect("singular matrix has a kernel");
    let x = Vector::zero(space, dim);
    let y = Vector::from_fn(space, dim, |a| {
        if a == input_atom {
            k.clone()
        } else {
            vec![Rational::zero(); dim]
        }
    });
    InjectivityWitness::Collision { x, y }
}

/// Exact for structured maps; sampled collision search for black boxes.
pub fn injectivity(map: &MapSpec, probes: &ProbeSet) -> InjectivityReport {
    let exact = |witness: Option<InjectivityWitness>| InjectivityReport {
        injective: witness.is_none(),
        strength: Strength::Exact,
        witness,
    };
    let space = map.space();
    let dim = map.dim();
    match map {
        MapSpec::Affine(m) => exact(
            m.singular_atom()
                .map(|a| kernel_collision(space, dim, a, m.matrix(a))),
        ),
        MapSpec::Semilinear(m) => exact(
            m.affine()
                .singular_atom()
                .map(|a| kernel_collision(space, dim, m.sigma().apply(a), m.affine().matrix(a))),
        ),
        MapSpec::PerAtom(m) => {
            let Some(atom) = m.pieces().iter().position(|p| !p.is_injective()) else {
                return exact(None);
            };
            let witness = match m.pieces()[atom].collision(dim) {
                Some(PieceCollision::Points(p, q)) => {
                    let at = |pt: &Vec<Rational>| {
                        Vector::from_fn(space, dim, |a| {
                            if a == atom {
                                pt.clone()
                            } else {
                                vec![Rational::zero(); dim]
                            }
                        })
                    };
                    InjectivityWitness::Collision {
                        x: at(&p),
                        y: at(&q),
                    }
                }
                Some(PieceCollision::SingularPart { part, kernel }) => {
                    InjectivityWitness::SingularPiece { atom, part, kernel }
                }
                None => unreachable!("non-injective piece without collision evidence"),
            };
            exact(Some(witness))
        }
        MapSpec::BlackBox(_) => {
            let images: Vec<Vector> = probes.vectors.iter().map(|x| map.apply(x)).collect();
            let mut witness = None;
            'outer: for i in 0..images.len() {
                for j in i + 1..images.len() {
                    if images[i] == images[j] && probes.vectors[i] != probes.vectors[j] {
                        witness = Some(InjectivityWitness::Collision {
                            x: probes.vectors[i].clone(),
                            y: probes.vectors[j].clone(),
                        });
                        break 'outer;
                    }
                }
            }
            InjectivityReport {
                injective: witness.is_none(),
                strength: Strength::Sampled,
                witness,
            }
        }
    }
}

/// The family `f_ω` with `T(x)(ω) = f_ω(x(ω))`.
#[derive(Debug, Clone)]
pub enum AtomFactors {
    Exact(PerAtomMap),
    /// Observed input/output point pairs per atom.
    Tabulated {
        space: ProbSpace,
        dim: usize,
        tables: Vec<Vec<(Vec<Rational>, Vec<Rational>)>>,
    },
}

impl AtomFactors {
    /// `f_ω(x(ω))` at every atom, or `None` if a tabulated point is missing.
    pub fn eval(&self, x: &Vector) -> Option<Vector> {
        match self {
            AtomFactors::Exact(m) => Some(m.eval(x)),
            AtomFactors::Tabulated { space, dim, tables } => {
                let mut points = Vec::with_capacity(space.len());
                for (atom, table) in tables.iter().enumerate() {
                    let p = x.point(atom);
                    let (_, img) = table.iter().find(|(input, _)| input.as_slice() == p)?;
                    points.push(img.clone());
                }
                Vector::from_points(space, *dim, points).ok()
            }
        }
    }
}

fn affine_pieces(m: &AffineMap) -> PerAtomMap {
    let pieces = (0..m.space().len())
        .map(|a| Piece::Affine {
            matrix: m.matrix(a).clone(),
            offset: m.offset().point(a).to_vec(),
        })
        .collect();
    PerAtomMap::new(m.space(), m.dim(), pieces).expect("shapes agree")
}

pub fn factor_per_atom(map: &MapSpec, probes: &ProbeSet) -> Result<AtomFactors> {
    let report = is_local_with(map, probes);
    if let Some(w) = report.witness {
        return Err(L0Error::NotLocal(Box::new(w)));
    }
    match map {
        MapSpec::Affine(m) => Ok(AtomFactors::Exact(affine_pieces(m))),
        MapSpec::PerAtom(m) => Ok(AtomFactors::Exact(m.clone())),
        // local: every moved atom has a zero matrix, so only the offset remains
        MapSpec::Semilinear(m) => {
            let a = m.affine();
            let space = a.space();
            let dim = a.dim();
            let pieces = (0..space.len())
                .map(|atom| {
                    let matrix = if m.sigma().apply(atom) == atom {
                        a.matrix(atom).clone()
                    } else {
                        Matrix::zeros(dim, dim)
                    };
                    Piece::Affine {
                        matrix,
                        offset: a.offset().point(atom).to_vec(),
                    }
                })
                .collect();
            Ok(AtomFactors::Exact(PerAtomMap::new(space, dim, pieces)?))
        }
        MapSpec::BlackBox(_) => {
            let space = map.space();
            let mut tables: Vec<Vec<(Vec<Rational>, Vec<Rational>)>> =
                vec![Vec::new(); space.len()];
            for x in &probes.vectors {
                let tx = map.apply(x);
                for (atom, table) in tables.iter_mut().enumerate() {
                    let p = x.point(atom);
                    if !table.iter().any(|(input, _)| input.as_slice() == p) {
                        table.push((p.to_vec(), tx.point(atom).to_vec()));
                    }
                }
            }
            Ok(AtomFactors::Tabulated {
                space: space.clone(),
                dim: map.dim(),
                tables,
            })
        }
    }
}
