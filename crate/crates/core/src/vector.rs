//! Elements of the free module `(L⁰)ⁿ`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{One, Zero};

use crate::error::{L0Error, Result};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::space::{Event, ProbSpace};

/// One rational point of `ℝⁿ` per atom.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    space: ProbSpace,
    dim: usize,
    points: Vec<Vec<Rational>>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.points
                    .iter()
                    .map(|p| p.iter().map(rational::format).collect::<Vec<_>>()),
            )
            .finish()
    }
}

pub(crate) fn is_origin(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

impl Vector {
    pub fn from_points(space: &ProbSpace, dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if dim == 0 {
            return Err(L0Error::ZeroDimension);
        }
        if points.len() != space.len() {
            return Err(L0Error::Malformed(format!(
                "vector has {} points for {} atoms",
                points.len(),
                space.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(L0Error::DimMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            dim,
            points,
        })
    }

    /// Convenience constructor from small integer coordinates.
    pub fn from_ints(space: &ProbSpace, points: &[&[i64]]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        Self::from_points(
            space,
            dim,
            points
                .iter()
                .map(|p| p.iter().map(|&v| rational::int(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        space: &ProbSpace,
        dim: usize,
        mut f: impl FnMut(usize) -> Vec<Rational>,
    ) -> Self {
        let points: Vec<_> = (0..space.len()).map(&mut f).collect();
        debug_assert!(points.iter().all(|p| p.len() == dim));
        Self {
            space: space.clone(),
            dim,
            points,
        }
    }

    /// `θ`.
    pub fn zero(space: &ProbSpace, dim: usize) -> Self {
        Self::from_fn(space, dim, |_| vec![Rational::zero(); dim])
    }

    /// The constant unit vector `e_i` (0-based `i`).
    pub fn unit(space: &ProbSpace, dim: usize, i: usize) -> Self {
        assert!(i < dim, "unit index {i} out of range for dim {dim}");
        Self::from_fn(space, dim, |_| {
            let mut p = vec![Rational::zero(); dim];
            p[i] = Rational::one();
            p
        })
    }

    pub fn constant(space: &ProbSpace, point: Vec<Rational>) -> Self {
        let dim = point.len();
        Self::from_fn(space, dim, |_| point.clone())
    }

    /// Assembles a vector from its coordinate scalars `(ξ₁, …, ξₙ)`.
    pub fn from_coords(coords: &[Scalar]) -> Result<Self> {
        let first = coords.first().ok_or(L0Error::ZeroDimension)?;
        for c in coords {
            first.space().ensure_same(c.space())?;
        }
        Ok(Self::from_fn(first.space(), coords.len(), |atom| {
            coords.iter().map(|c| c.get(atom).clone()).collect()
        }))
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, atom: usize) -> &[Rational] {
        &self.points[atom]
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn coord(&self, i: usize) -> Scalar {
        Scalar::from_fn(&self.space, |atom| self.points[atom][i].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.points.iter().all(|p| is_origin(p))
    }

    /// `{x ≠ θ}`.
    pub fn support(&self) -> Event {
        Event::new(
            &self.space,
            (0..self.points.len()).filter(|&i| !is_origin(&self.points[i])),
        )
        .expect("in range")
    }

    pub fn ensure_compatible(&self, other: &Vector) -> Result<()> {
        self.space.ensure_same(&other.space)?;
        if self.dim != other.dim {
            return Err(L0Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Vector,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Vector> {
        self.ensure_compatible(other)?;
        Ok(Self::from_fn(&self.space, self.dim, |atom| {
            self.points[atom]
                .iter()
                .zip(&other.points[atom])
                .map(|(a, b)| f(a, b))
                .collect()
        }))
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `ξ x`.
    pub fn checked_scale(&self, xi: &Scalar) -> Result<Vector> {
        self.space.ensure_same(xi.space())?;
        Ok(self.scale(xi))
    }

    /// `ξ x`; panics if `ξ` lives on another space.
    pub fn scale(&self, xi: &Scalar) -> Vector {
        assert!(
            self.space == *xi.space(),
            "scalar and vector on different spaces"
        );
        Self::from_fn(&self.space, self.dim, |atom| {
            let c = xi.get(atom);
            self.points[atom].iter().map(|v| v * c).collect()
        })
    }

    pub fn scale_by(&self, c: &Rational) -> Vector {
        Self::from_fn(&self.space, self.dim, |atom| {
            self.points[atom].iter().map(|v| v * c).collect()
        })
    }

    /// `Ĩ_A x`.
    pub fn restrict(&self, event: &Event) -> Vector {
        Self::from_fn(&self.space, self.dim, |atom| {
            if event.contains(atom) {
                self.points[atom].clone()
            } else {
                vec![Rational::zero(); self.dim]
            }
        })
    }

    /// `Ĩ_A a + Ĩ_{A^c} b`.
    pub fn mix(event: &Event, a: &Vector, b: &Vector) -> Vector {
        Self::from_fn(&a.space, a.dim, |atom| {
            if event.contains(atom) {
                a.points[atom].clone()
            } else {
                b.points[atom].clone()
            }
        })
    }

    /// `λ x + (1 − λ) y`.
    pub fn affine_combination(lambda: &Scalar, x: &Vector, y: &Vector) -> Vector {
        Self::from_fn(&x.space, x.dim, |atom| {
            let l = lambda.get(atom);
            let m = Rational::one() - l;
            x.points[atom]
                .iter()
                .zip(&y.points[atom])
                .map(|(a, b)| l * a + &m * b)
                .collect()
        })
    }

    /// `(σ* x)(ω) = x(σ(ω))`.
    pub fn pull_back(&self, perm: &[usize]) -> Vector {
        Self::from_fn(&self.space, self.dim, |atom| {
            self.points[perm[atom]].clone()
        })
    }

    /// Applies `f` to the point of every atom.
    pub fn map_points(
        &self,
        dim: usize,
        mut f: impl FnMut(usize, &[Rational]) -> Vec<Rational>,
    ) -> Vector {
        Self::from_fn(&self.space, dim, |atom| f(atom, &self.points[atom]))
    }
}

macro_rules! vector_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Vector> for &Vector {
            type Output = Vector;
            fn $method(self, rhs: &Vector) -> Vector {
                self.$checked(rhs).expect("incompatible vector operands")
            }
        }

        impl $tr<Vector> for Vector {
            type Output = Vector;
            fn $method(self, rhs: Vector) -> Vector {
                (&self).$method(&rhs)
            }
        }
    };
}

vector_binop!(Add, add, checked_add);
vector_binop!(Sub, sub, checked_sub);

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale_by(&-Rational::one())
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn raw_vector(m: usize, n: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
        prop::collection::vec(prop::collection::vec((-5i64..=5, 1i64..=3), n), m)
    }

    fn raw_scalar(m: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-5i64..=5, 1i64..=3), m)
    }

    fn vec_of(space: &ProbSpace, raw: &[Vec<(i64, i64)>]) -> Vector {
        let n = raw[0].len();
        Vector::from_points(
            space,
            n,
            raw.iter()
                .map(|p| p.iter().map(|&(a, b)| ratio(a, b)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn scalar_of(space: &ProbSpace, raw: &[(i64, i64)]) -> Scalar {
        Scalar::from_values(space, raw.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn module_laws(x in raw_vector(3, 2), y in raw_vector(3, 2), a in raw_scalar(3), b in raw_scalar(3)) {
            let s = ProbSpace::uniform(3).unwrap();
            let (x, y) = (vec_of(&s, &x), vec_of(&s, &y));
            let (xi, eta) = (scalar_of(&s, &a), scalar_of(&s, &b));
            prop_assert_eq!((&x + &y).scale(&xi), &x.scale(&xi) + &y.scale(&xi));
            prop_assert_eq!(x.scale(&(&xi * &eta)), x.scale(&eta).scale(&xi));
            prop_assert_eq!(x.scale(&Scalar::one(&s)), x.clone());
            prop_assert_eq!(x.scale(&(&xi + &eta)), &x.scale(&xi) + &x.scale(&eta));
        }

        #[test]
        fn coords_roundtrip(x in raw_vector(4, 3)) {
            let s = ProbSpace::uniform(4).unwrap();
            let x = vec_of(&s, &x);
            let coords: Vec<_> = (0..3).map(|i| x.coord(i)).collect();
            prop_assert_eq!(Vector::from_coords(&coords).unwrap(), x);
        }
    }

    #[test]
    fn mismatches_are_errors() {
        let s = ProbSpace::uniform(2).unwrap();
        let t = ProbSpace::uniform(3).unwrap();
        let x = Vector::zero(&s, 2);
        assert_eq!(
            x.checked_add(&Vector::zero(&s, 3)),
            Err(L0Error::DimMismatch {
                expected: 2,
                found: 3
            })
        );
        assert_eq!(
            x.checked_add(&Vector::zero(&t, 2)),
            Err(L0Error::SpaceMismatch)
        );
        assert_eq!(
            Vector::from_points(&s, 0, vec![vec![], vec![]]),
            Err(L0Error::ZeroDimension)
        );
    }

    #[test]
    fn restrict_and_support() {
        let s = ProbSpace::uniform(2).unwrap();
        let x = Vector::from_ints(&s, &[&[1, 0], &[0, 0]]).unwrap();
        assert_eq!(x.support().member_ids(), ["a1"]);
        assert_eq!(x.restrict(&s.singleton(1)), Vector::zero(&s, 2));
        assert_eq!(x.restrict(&s.singleton(0)), x);
    }
}
