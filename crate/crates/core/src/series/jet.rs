use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalars a [`Jet2`] can carry: real for the diagonal, complex for
/// polarized (off-diagonal) kernel evaluation.
pub trait JetScalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// Principal branch.
    fn powf(self, c: f64) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn magnitude(self) -> f64;
    /// Whether `self^c` is defined (and smooth) on the principal branch.
    fn admits_power(self, c: f64) -> bool;
}

impl JetScalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn powf(self, c: f64) -> Self {
        f64::powf(self, c)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn admits_power(self, c: f64) -> bool {
        self > 0.0 || (self != 0.0 && c.fract() == 0.0)
    }
}

impl JetScalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn powf(self, c: f64) -> Self {
        if c.fract() == 0.0 && c.abs() < i32::MAX as f64 {
            self.powi(c as i32)
        } else {
            Complex64::powf(self, c)
        }
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn admits_power(self, c: f64) -> bool {
        if self == Complex64::new(0.0, 0.0) {
            return false;
        }
        // Off the branch cut of the principal logarithm.
        c.fract() == 0.0 || !(self.im == 0.0 && self.re < 0.0)
    }
}

/// Bivariate Taylor jet of order `(P, Q)` at a base point `(t1, t2)`.
///
/// Stores normalized coefficients `c[i][j] = d^{i+j} f / (dt1^i dt2^j) / (i! j!)`,
/// so arithmetic is truncated polynomial arithmetic in the two increments.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2<T: JetScalar> {
    p: usize,
    q: usize,
    coeffs: Vec<T>,
}

impl<T: JetScalar> Jet2<T> {
    fn zeros(p: usize, q: usize) -> Self {
        Jet2 { p, q, coeffs: vec![T::from_f64(0.0); (p + 1) * (q + 1)] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.q + 1) + j
    }

    pub fn constant(value: T, p: usize, q: usize) -> Self {
        let mut out = Self::zeros(p, q);
        out.coeffs[0] = value;
        out
    }

    /// The coordinate `t1` at base value `t1`.
    pub fn var1(t1: T, p: usize, q: usize) -> Self {
        let mut out = Self::constant(t1, p, q);
        if p >= 1 {
            let k = out.idx(1, 0);
            out.coeffs[k] = T::from_f64(1.0);
        }
        out
    }

    /// The coordinate `t2` at base value `t2`.
    pub fn var2(t2: T, p: usize, q: usize) -> Self {
        let mut out = Self::constant(t2, p, q);
        if q >= 1 {
            out.coeffs[1] = T::from_f64(1.0);
        }
        out
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    /// Normalized Taylor coefficient `c[i][j]`.
    pub fn taylor(&self, i: usize, j: usize) -> T {
        self.coeffs[self.idx(i, j)]
    }

    /// `d^{i+j} f / (dt1^i dt2^j)` at the base point.
    pub fn derivative(&self, i: usize, j: usize) -> T {
        let fact = |k: usize| (1..=k).fold(1.0, |acc, x| acc * x as f64);
        self.taylor(i, j) * T::from_f64(fact(i) * fact(j))
    }

    pub fn scale(&self, c: T) -> Self {
        Jet2 { p: self.p, q: self.q, coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    pub fn add_scalar(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + c;
        out
    }

    /// Nilpotent part: the jet with its constant term removed.
    fn increment(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = T::from_f64(0.0);
        out
    }

    /// `g(self)` where `outer[v]` are the Taylor coefficients of `g` at
    /// `self.value()`. Terms beyond total order `P + Q` vanish.
    pub fn compose(&self, outer: &[T]) -> Self {
        let h = self.increment();
        let top = (self.p + self.q).min(outer.len().saturating_sub(1));
        let mut acc = Self::constant(outer.get(top).copied().unwrap_or(T::from_f64(0.0)), self.p, self.q);
        for v in (0..top).rev() {
            acc = (&acc * &h).add_scalar(outer[v]);
        }
        acc
    }

    fn order_budget(&self) -> usize {
        self.p + self.q
    }

    /// `self^c` on the principal branch.
    pub fn powf(&self, c: f64) -> Result<Self> {
        if c >= 0.0 && c.fract() == 0.0 && c <= u32::MAX as f64 {
            return Ok(self.powu(c as u32));
        }
        let x0 = self.value();
        if !x0.admits_power(c) {
            return Err(Error::NonInvertible(format!("jet base value {x0:?} with exponent {c}")));
        }
        let k = self.order_budget();
        let mut outer = Vec::with_capacity(k + 1);
        let mut binom = 1.0;
        for v in 0..=k {
            if v > 0 {
                binom = binom * (c - (v - 1) as f64) / v as f64;
            }
            outer.push(T::from_f64(binom) * x0.powf(c - v as f64));
        }
        Ok(self.compose(&outer))
    }

    /// Non-negative integer power by repeated squaring; defined at any base value.
    pub fn powu(&self, mut e: u32) -> Self {
        let mut acc = Self::constant(T::from_f64(1.0), self.p, self.q);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powi(&self, e: i32) -> Result<Self> {
        self.powf(e as f64)
    }

    pub fn recip(&self) -> Result<Self> {
        self.powf(-1.0)
    }

    pub fn exp(&self) -> Self {
        let e0 = self.value().exp();
        let mut outer = Vec::with_capacity(self.order_budget() + 1);
        let mut fact = 1.0;
        for v in 0..=self.order_budget() {
            if v > 0 {
                fact *= v as f64;
            }
            outer.push(e0 * T::from_f64(1.0 / fact));
        }
        self.compose(&outer)
    }

    pub fn ln(&self) -> Result<Self> {
        let x0 = self.value();
        if !x0.admits_power(0.5) {
            return Err(Error::NonInvertible(format!("logarithm at {x0:?}")));
        }
        let mut outer = vec![x0.ln()];
        for v in 1..=self.order_budget() {
            let sign = if v % 2 == 1 { 1.0 } else { -1.0 };
            outer.push(T::from_f64(sign / v as f64) * x0.powf(-(v as f64)));
        }
        Ok(self.compose(&outer))
    }

    /// Compose with the power series `sum a_l u^l` (centered at zero).
    pub fn compose_series(&self, coeffs: &[f64]) -> Self {
        let outer = super::recenter(coeffs, self.value(), self.order_budget());
        self.compose(&outer)
    }
}

impl<T: JetScalar> Add for &Jet2<T> {
    type Output = Jet2<T>;
    fn add(self, rhs: &Jet2<T>) -> Jet2<T> {
        debug_assert_eq!(self.orders(), rhs.orders());
        Jet2 {
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: JetScalar> Sub for &Jet2<T> {
    type Output = Jet2<T>;
    fn sub(self, rhs: &Jet2<T>) -> Jet2<T> {
        debug_assert_eq!(self.orders(), rhs.orders());
        Jet2 {
            p: self.p,
            q: self.q,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: JetScalar> Neg for &Jet2<T> {
    type Output = Jet2<T>;
    fn neg(self) -> Jet2<T> {
        self.scale(T::from_f64(-1.0))
    }
}

impl<T: JetScalar> Mul for &Jet2<T> {
    type Output = Jet2<T>;
    fn mul(self, rhs: &Jet2<T>) -> Jet2<T> {
        debug_assert_eq!(self.orders(), rhs.orders());
        let mut out = Jet2::zeros(self.p, self.q);
        let zero = T::from_f64(0.0);
        for i1 in 0..=self.p {
            for j1 in 0..=self.q {
                let a = self.coeffs[self.idx(i1, j1)];
                if a == zero {
                    continue;
                }
                for i2 in 0..=(self.p - i1) {
                    for j2 in 0..=(self.q - j1) {
                        let k = out.idx(i1 + i2, j1 + j2);
                        out.coeffs[k] = out.coeffs[k] + a * rhs.coeffs[rhs.idx(i2, j2)];
                    }
                }
            }
        }
        out
    }
}
