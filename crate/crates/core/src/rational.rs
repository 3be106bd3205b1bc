//! Exact rationals and their `"p/q"` string form.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rand::Rng;

use crate::error::{L0Error, Result};

pub type Rational = num::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`; panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with optional sign.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || L0Error::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"3"`, `"-1/2"`.
pub fn format(q: &Rational) -> String {
    q.to_string()
}

pub fn is_between_unit(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

/// The default probe coordinates `{-2, -1, 0, 1/2, 1, 3}`.
pub fn grid_values() -> Vec<Rational> {
    vec![int(-2), int(-1), int(0), ratio(1, 2), int(1), int(3)]
}

/// A random rational with numerator in `[-10, 10]` and denominator in `[1, 10]`.
pub fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let num = rng.random_range(-10i64..=10);
    let den = rng.random_range(1i64..=10);
    ratio(num, den)
}

/// Like [`random_small`] but never zero.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let q = random_small(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A random rational in `[0, 1]` with denominator at most 10.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let den = rng.random_range(1i64..=10);
    let num = rng.random_range(0..=den);
    ratio(num, den)
}
