//! The ring `L⁰` realized as rational-valued functions on atoms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{L0Error, Result};
use crate::rational::{self, Rational};
use crate::space::{Event, ProbSpace};

/// An element of `L⁰`: one exact rational per atom.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    space: ProbSpace,
    values: Vec<Rational>,
}

/// Outcome of comparing two scalars in the pointwise partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOrder {
    Equal,
    /// `a ≤ b` on every atom, strictly somewhere.
    Less,
    /// `a ≥ b` on every atom, strictly somewhere.
    Greater,
    Incomparable,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.values.iter().map(rational::format))
            .finish()
    }
}

impl Scalar {
    pub fn from_values(space: &ProbSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(L0Error::Malformed(format!(
                "scalar has {} values for {} atoms",
                values.len(),
                space.len()
            )));
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn from_fn(space: &ProbSpace, f: impl FnMut(usize) -> Rational) -> Self {
        Self {
            space: space.clone(),
            values: (0..space.len()).map(f).collect(),
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(space: &ProbSpace, values: &[i64]) -> Result<Self> {
        Self::from_values(space, values.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn constant(space: &ProbSpace, value: Rational) -> Self {
        Self::from_fn(space, |_| value.clone())
    }

    pub fn zero(space: &ProbSpace) -> Self {
        Self::constant(space, Rational::zero())
    }

    pub fn one(space: &ProbSpace) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, atom: usize) -> &Rational {
        &self.values[atom]
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_strictly_nonzero(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    fn zip_with(
        &self,
        other: &Scalar,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Scalar> {
        self.space.ensure_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Scalar {
        Self {
            space: self.space.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise comparison; errors on mismatched spaces.
    pub fn compare(&self, other: &Scalar) -> Result<PointwiseOrder> {
        self.space.ensure_same(&other.space)?;
        let mut le = true;
        let mut ge = true;
        for (a, b) in self.values.iter().zip(&other.values) {
            le &= a <= b;
            ge &= a >= b;
        }
        Ok(match (le, ge) {
            (true, true) => PointwiseOrder::Equal,
            (true, false) => PointwiseOrder::Less,
            (false, true) => PointwiseOrder::Greater,
            (false, false) => PointwiseOrder::Incomparable,
        })
    }

    /// `self ≥ other` on every atom.
    pub fn dominates(&self, other: &Scalar) -> bool {
        matches!(
            self.compare(other),
            Ok(PointwiseOrder::Equal | PointwiseOrder::Greater)
        )
    }

    /// `{ξ ≠ 0}`.
    pub fn support(&self) -> Event {
        Event::new(
            &self.space,
            (0..self.values.len()).filter(|&i| !self.values[i].is_zero()),
        )
        .expect("in range")
    }

    /// A strictly nonzero `η` with `Ĩ_{ξ≠0} η = ξ`; zeros are replaced by 1.
    pub fn strictly_nonzero_extension(&self) -> Scalar {
        self.map(|v| {
            if v.is_zero() {
                Rational::one()
            } else {
                v.clone()
            }
        })
    }

    /// `Ĩ_A ξ`.
    pub fn restrict(&self, event: &Event) -> Scalar {
        Self::from_fn(&self.space, |i| {
            if event.contains(i) {
                self.values[i].clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// `Ĩ_A a + Ĩ_{A^c} b`.
    pub fn mix(event: &Event, a: &Scalar, b: &Scalar) -> Scalar {
        Self::from_fn(&a.space, |i| {
            if event.contains(i) {
                a.values[i].clone()
            } else {
                b.values[i].clone()
            }
        })
    }

    /// `σ*(ξ)(ω) = ξ(σ(ω))`, where `perm[ω] = σ(ω)`.
    pub fn pull_back(&self, perm: &[usize]) -> Scalar {
        Self::from_fn(&self.space, |i| self.values[perm[i]].clone())
    }

    pub fn scale(&self, c: &Rational) -> Scalar {
        self.map(|v| v * c)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs)
                    .expect("scalar operands on different spaces")
            }
        }

        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, checked_add);
scalar_binop!(Sub, sub, checked_sub);
scalar_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.map(|v| -v)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn s2() -> ProbSpace {
        ProbSpace::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap()
    }

    fn sc(space: &ProbSpace, v: &[i64]) -> Scalar {
        Scalar::from_ints(space, v).unwrap()
    }

    #[test]
    fn ring_op_examples() {
        let s = s2();
        assert_eq!(&sc(&s, &[1, 2]) + &sc(&s, &[3, 4]), sc(&s, &[4, 6]));
        assert_eq!(&sc(&s, &[1, 2]) * &sc(&s, &[0, 1]), sc(&s, &[0, 2]));
        assert_eq!(&Scalar::one(&s) - &Scalar::one(&s), Scalar::zero(&s));
        let t = ProbSpace::uniform(2).unwrap();
        assert_eq!(t, s);
        let u = ProbSpace::uniform(3).unwrap();
        assert_eq!(
            Scalar::one(&s).checked_add(&Scalar::one(&u)),
            Err(L0Error::SpaceMismatch)
        );
    }

    #[test]
    fn pointwise_order() {
        let s = s2();
        let a = sc(&s, &[1, 2]);
        assert_eq!(a.compare(&a).unwrap(), PointwiseOrder::Equal);
        assert_eq!(a.compare(&sc(&s, &[1, 3])).unwrap(), PointwiseOrder::Less);
        assert_eq!(
            a.compare(&sc(&s, &[0, 2])).unwrap(),
            PointwiseOrder::Greater
        );
        assert_eq!(
            a.compare(&sc(&s, &[2, 1])).unwrap(),
            PointwiseOrder::Incomparable
        );
    }

    #[test]
    fn support_examples() {
        let s = s2();
        assert!(Scalar::zero(&s).support().is_empty());
        assert!(Scalar::one(&s).support().is_omega());
        assert_eq!(sc(&s, &[0, 3]).support().member_ids(), ["a2"]);
    }

    #[test]
    fn extension_examples() {
        let s = s2();
        let xi = sc(&s, &[0, 3]);
        let eta = xi.strictly_nonzero_extension();
        assert_eq!(eta, sc(&s, &[1, 3]));
        assert_eq!(&xi.support().indicator() * &eta, xi);
        assert_eq!(
            Scalar::zero(&s).strictly_nonzero_extension(),
            Scalar::one(&s)
        );
        let unit = sc(&s, &[-2, 5]);
        assert_eq!(unit.strictly_nonzero_extension(), unit);
    }

    #[test]
    fn pull_back_swaps() {
        let s = s2();
        assert_eq!(sc(&s, &[1, 2]).pull_back(&[1, 0]), sc(&s, &[2, 1]));
    }

    fn arb_scalar(m: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((-6i64..=6, 1i64..=4), m)
    }

    fn build(space: &ProbSpace, raw: &[(i64, i64)]) -> Scalar {
        Scalar::from_values(space, raw.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_scalar(4), b in arb_scalar(4), c in arb_scalar(4)) {
            let s = ProbSpace::uniform(4).unwrap();
            let (a, b, c) = (build(&s, &a), build(&s, &b), build(&s, &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &(-&a), Scalar::zero(&s));
        }

        #[test]
        fn extension_restores_scalar(a in arb_scalar(5)) {
            let s = ProbSpace::uniform(5).unwrap();
            let xi = build(&s, &a);
            let eta = xi.strictly_nonzero_extension();
            prop_assert!(eta.is_strictly_nonzero());
            prop_assert_eq!(&xi.support().indicator() * &eta, xi);
        }

        #[test]
        fn no_zero_divisors_against_units(a in arb_scalar(4), b in arb_scalar(4)) {
            let s = ProbSpace::uniform(4).unwrap();
            let xi = build(&s, &a);
            let eta = build(&s, &b).strictly_nonzero_extension();
            if (&xi * &eta).is_zero() {
                prop_assert!(xi.is_zero());
            }
        }

        #[test]
        fn indicator_absorbs_iff_support_inside(a in arb_scalar(4), mask in 0u8..16) {
            let s = ProbSpace::uniform(4).unwrap();
            let xi = build(&s, &a);
            let ev = Event::new(&s, (0..4).filter(|i| mask >> i & 1 == 1)).unwrap();
            prop_assert_eq!(&ev.indicator() * &xi == xi, xi.support().is_subset(&ev));
        }
    }

    #[test]
    fn constant_probe_values() {
        let s = s2();
        assert!(Scalar::constant(&s, int(3)).is_constant());
        assert!(!sc(&s, &[1, 2]).is_constant());
    }
}
