use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{format_rational, to_f64, Rational};

/// `constant + slope * k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub constant: Rational,
    pub slope: Rational,
}

impl LinearFactor {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        LinearFactor { constant, slope }
    }

    /// The root `-constant / slope`, or `None` for a constant factor.
    pub fn root(&self) -> Option<Rational> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-&self.constant / &self.slope)
        }
    }

    fn to_polynomial(&self) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(vec![self.constant.clone(), self.slope.clone()])
    }
}

/// `scale * prod(factors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    pub scale: Rational,
    pub factors: Vec<LinearFactor>,
}

impl FactoredForm {
    pub fn expand(&self) -> RationalPolynomial {
        self.factors
            .iter()
            .fold(RationalPolynomial::constant(self.scale.clone()), |acc, f| &acc * &f.to_polynomial())
    }

    /// Roots with multiplicity, in factor order.
    pub fn roots(&self) -> Vec<Rational> {
        self.factors.iter().filter_map(LinearFactor::root).collect()
    }
}

/// Dense polynomial over Q, coefficients indexed by degree, with an optional
/// factorization into linear factors kept alongside the expansion.
#[derive(Clone, Debug)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
    factored: Option<FactoredForm>,
}

impl PartialEq for RationalPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for RationalPolynomial {}

impl RationalPolynomial {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs, factored: None }
    }

    pub fn from_factored(form: FactoredForm) -> Self {
        let mut p = form.expand();
        p.factored = Some(form);
        p
    }

    pub fn zero() -> Self {
        RationalPolynomial { coeffs: Vec::new(), factored: None }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The polynomial `k`.
    pub fn variable() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `constant + slope * k`.
    pub fn linear(constant: Rational, slope: Rational) -> Self {
        Self::from_coeffs(vec![constant, slope])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn factored(&self) -> Option<&FactoredForm> {
        self.factored.as_ref()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(a + b k)`.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Self {
        let inner = Self::linear(a.clone(), b.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &inner) + &Self::constant(c.clone()))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let shift = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / &lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &q * c;
            }
            quot[shift] = q;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_rem(self).1.is_zero()
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::from_coeffs(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})*x", format_rational(c))?,
                _ => write!(f, "({})*x^{i}", format_rational(c))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{int, rat};
    use super::*;

    fn poly(cs: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn trims_leading_zeros() {
        let p = poly(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(poly(&[0, 0]).degree(), None);
    }

    #[test]
    fn factored_form_expands() {
        let form = FactoredForm {
            scale: rat(1, 2),
            factors: vec![LinearFactor::new(int(1), int(1)), LinearFactor::new(int(2), int(1))],
        };
        let p = RationalPolynomial::from_factored(form);
        // (k+1)(k+2)/2
        assert_eq!(p, RationalPolynomial::from_coeffs(vec![int(1), rat(3, 2), rat(1, 2)]));
        assert_eq!(p.factored().unwrap().roots(), vec![int(-1), int(-2)]);
    }

    #[test]
    fn division() {
        // (x^2 - 1) / (x - 1) = x + 1
        let (q, r) = poly(&[-1, 0, 1]).div_rem(&poly(&[-1, 1]));
        assert_eq!(q, poly(&[1, 1]));
        assert!(r.is_zero());
        let (q, r) = poly(&[1, 0, 1]).div_rem(&poly(&[0, 2]));
        assert_eq!(q, RationalPolynomial::from_coeffs(vec![int(0), rat(1, 2)]));
        assert_eq!(r, poly(&[1]));
        assert!(poly(&[3]).divides(&poly(&[1, 5, 7])));
        assert!(!poly(&[1, 1]).divides(&poly(&[1, 0, 1])));
    }

    #[test]
    fn compose_and_eval() {
        let p = poly(&[0, 0, 1]);
        let q = p.compose_linear(&int(1), &int(-1));
        assert_eq!(q, poly(&[1, -2, 1]));
        assert_eq!(q.eval(&int(3)), int(4));
        assert_eq!(q.eval_f64(3.0), 4.0);
    }
}
