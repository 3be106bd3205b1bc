//! Support, `L⁰`-independence, and `L⁰`-lines and segments.
//!
//! Scalars act atom by atom, so every notion here reduces to ordinary linear
//! algebra in `ℝⁿ` at each atom. A pair `x, y` is `L⁰`-independent exactly
//! when `x(ω), y(ω)` are linearly independent at every atom.

use num::{One, Zero};

use crate::error::{L0Error, Result};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::space::Event;
use crate::vector::{is_origin, Vector};

/// `x(ω) ≠ 0` at every atom.
pub fn has_full_support(x: &Vector) -> bool {
    x.points().iter().all(|p| !is_origin(p))
}

/// Returns `(z, A)` with `A = {y ≠ θ}`, `z` of full support, and `Ĩ_A z = y`.
///
/// Atoms where `y` vanishes are filled with `e₁`.
pub fn extend_to_full_support(y: &Vector) -> (Vector, Event) {
    let support = y.support();
    let z = y.map_points(y.dim(), |_, p| {
        if is_origin(p) {
            let mut e1 = vec![Rational::zero(); p.len()];
            e1[0] = Rational::one();
            e1
        } else {
            p.to_vec()
        }
    });
    (z, support)
}

/// Whether two points of `ℝⁿ` are linearly independent: some 2×2 minor of
/// the `n × 2` matrix `[p q]` is nonzero.
pub(crate) fn points_independent(p: &[Rational], q: &[Rational]) -> bool {
    let n = p.len();
    (0..n).any(|i| (i + 1..n).any(|j| &p[i] * &q[j] != &p[j] * &q[i]))
}

pub fn is_independent(x: &Vector, y: &Vector) -> Result<bool> {
    x.ensure_compatible(y)?;
    Ok((0..x.space().len()).all(|a| points_independent(x.point(a), y.point(a))))
}

/// The split `Ω = A ⊔ B` into the atoms where `x, y` are independent (`A`)
/// and where they are not (`B`), with a nontrivial relation on `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceDecomposition {
    pub independent: Event,
    pub dependent: Event,
    /// Coefficient of `x` in the relation `ξx + ηy = θ`.
    pub xi: Scalar,
    /// Coefficient of `y` in the relation `ξx + ηy = θ`.
    pub eta: Scalar,
}

impl IndependenceDecomposition {
    /// Re-checks every structural invariant against the input pair.
    pub fn holds_for(&self, x: &Vector, y: &Vector) -> bool {
        let space = x.space();
        let partition = self
            .independent
            .intersection(&self.dependent)
            .is_ok_and(|e| e.is_empty())
            && self
                .independent
                .union(&self.dependent)
                .is_ok_and(|e| e.is_omega());
        let relation = (&x.scale(&self.xi) + &y.scale(&self.eta)).is_zero();
        let nontrivial = self
            .dependent
            .members()
            .all(|a| !(self.xi.get(a).is_zero() && self.eta.get(a).is_zero()));
        let vanishes = self
            .independent
            .members()
            .all(|a| self.xi.get(a).is_zero() && self.eta.get(a).is_zero());
        partition && relation && nontrivial && vanishes && self.xi.space() == space
    }
}

/// A nonzero `(ξ, η)` with `ξp + ηq = 0` for a rank-deficient pair.
fn atom_relation(p: &[Rational], q: &[Rational]) -> (Rational, Rational) {
    if is_origin(q) {
        return (Rational::zero(), Rational::one());
    }
    if is_origin(p) {
        return (Rational::one(), Rational::zero());
    }
    // q = c p with p ≠ 0; read c off the first nonzero coordinate of p
    let k = p.iter().position(|v| !v.is_zero()).expect("p is nonzero");
    let c = &q[k] / &p[k];
    (c, -Rational::one())
}

pub fn decompose_independence(x: &Vector, y: &Vector) -> Result<IndependenceDecomposition> {
    x.ensure_compatible(y)?;
    let space = x.space();
    let mut xi = Vec::with_capacity(space.len());
    let mut eta = Vec::with_capacity(space.len());
    let mut independent = Vec::new();
    for a in 0..space.len() {
        let (p, q) = (x.point(a), y.point(a));
        if points_independent(p, q) {
            independent.push(a);
            xi.push(Rational::zero());
            eta.push(Rational::zero());
        } else {
            let (u, v) = atom_relation(p, q);
            xi.push(u);
            eta.push(v);
        }
    }
    let independent = Event::new(space, independent)?;
    Ok(IndependenceDecomposition {
        dependent: independent.complement(),
        independent,
        xi: Scalar::from_values(space, xi)?,
        eta: Scalar::from_values(space, eta)?,
    })
}

/// Solves `z = λx + (1 − λ)y` in `ℝⁿ`. Where `x = y` the coefficient is not
/// unique and `0` is returned when `z = y`.
pub(crate) fn atom_line_coefficient(
    z: &[Rational],
    x: &[Rational],
    y: &[Rational],
) -> Option<Rational> {
    let Some(k) = (0..x.len()).find(|&i| x[i] != y[i]) else {
        return (z == y).then(Rational::zero);
    };
    let lambda = (&z[k] - &y[k]) / (&x[k] - &y[k]);
    let on_line = (0..x.len())
        .filter(|&i| i != k)
        .all(|i| &z[i] - &y[i] == &lambda * (&x[i] - &y[i]));
    on_line.then_some(lambda)
}

/// The coefficient `λ` with `z = λx + (1 − λ)y`, if `z ∈ l(x, y)`.
pub fn line_membership(z: &Vector, x: &Vector, y: &Vector) -> Result<Option<Scalar>> {
    x.ensure_compatible(y)?;
    x.ensure_compatible(z)?;
    if x == y {
        return Err(L0Error::DegenerateLine);
    }
    let mut lambda = Vec::with_capacity(x.space().len());
    for a in 0..x.space().len() {
        match atom_line_coefficient(z.point(a), x.point(a), y.point(a)) {
            Some(l) => lambda.push(l),
            None => return Ok(None),
        }
    }
    Ok(Some(Scalar::from_values(x.space(), lambda)?))
}

/// As [`line_membership`], additionally requiring `0 ≤ λ ≤ 1` on every atom.
pub fn segment_membership(z: &Vector, x: &Vector, y: &Vector) -> Result<Option<Scalar>> {
    Ok(line_membership(z, x, y)?.filter(|l| l.values().iter().all(rational::is_between_unit)))
}
