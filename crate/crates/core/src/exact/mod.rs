//! Exact rational arithmetic: Pochhammer symbols, dense univariate
//! polynomials over Q, the rising-factorial basis, multi-index enumeration
//! and the coefficient polynomials attached to Hartogs and egg domains.

mod base;
mod basis;
mod multiindex;
mod polynomial;

pub(crate) use base::ball_base_roots;
pub use base::{chi_polynomial, egg_bj, hartogs_base_polynomial, BaseBlock, HomogeneousBaseData};
pub use basis::{from_rising_factorial_basis, rising_factorial_poly, to_rising_factorial_basis};
pub use multiindex::{lex_multiindices, multiindices_of_degree, MultiIndex};
pub use polynomial::{FactoredForm, LinearFactor, RationalPolynomial};

use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or `"a"`. Decimal notation is rejected so that every
/// parameter that feeds an exact test stays exact.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Schema(format!("expected a rational \"a/b\" or integer, got {text:?}"));
    if text.is_empty() || text.contains(['.', 'e', 'E']) {
        return Err(bad());
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Schema(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"a/b"` (or `"a"` for integers) rendering, inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Rising factorial `x (x+1) ... (x+l-1)`; the empty product is one.
pub fn pochhammer<T>(x: T, l: usize) -> T
where
    T: Clone + One + Add<Output = T> + Mul<Output = T>,
{
    let mut acc = T::one();
    let mut term = x;
    for _ in 0..l {
        acc = acc * term.clone();
        term = term + T::one();
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_rational(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// Generalized binomial coefficient `mu (mu-1) ... (mu-v+1) / v!`.
pub fn binomial(mu: &Rational, v: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..v {
        acc = acc * (mu - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

pub fn binomial_f64(mu: f64, v: usize) -> f64 {
    (0..v).fold(1.0, |acc, i| acc * (mu - i as f64) / (i as f64 + 1.0))
}

/// Serde adapter storing a [`Rational`] as an `"a/b"` string.
pub mod serde_rational {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(int(3), 2), int(12));
        assert_eq!(pochhammer(rat(1, 2), 3), rat(15, 8));
        assert_eq!(pochhammer(3.0_f64, 2), 12.0);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), rat(-2, 3));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(-2, 3)), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial(&int(2), 3), int(0));
        assert!((binomial_f64(0.5, 2) + 0.125).abs() < 1e-15);
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = Rational::new(factorial(400), factorial(399));
        assert!((to_f64(&big) - 400.0).abs() < 1e-9);
    }
}
