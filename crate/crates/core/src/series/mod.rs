//! Truncated univariate power series and bivariate Taylor jets.

mod jet;

pub use jet::{Jet2, JetScalar};

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Power series `a_0 + a_1 x + ... + a_R x^R`, exact through order `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Pads with zeros or drops terms so that the result has order `order`.
    pub fn new(mut coeffs: Vec<f64>, order: usize) -> Self {
        coeffs.resize(order + 1, 0.0);
        TruncatedSeries { coeffs }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(1.0, order)
    }

    /// `1 - c x`.
    pub fn one_minus(c: f64, order: usize) -> Self {
        Self::new(vec![1.0, -c], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn scale(&self, c: f64) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }

    /// Cauchy product through the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![0.0; order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// `self^c` by the logarithmic-derivative recurrence
    /// `k f_0 g_k = sum_{i=1}^k (c i - (k - i)) f_i g_{k-i}`.
    pub fn real_pow(&self, c: f64) -> Result<Self> {
        let f0 = self.constant_term();
        let integral = c.fract() == 0.0;
        if f0 == 0.0 {
            if integral && c >= 0.0 {
                return Ok(self.powi(c as u32));
            }
            return Err(Error::NonInvertible(format!("f(0) = 0 with exponent {c}")));
        }
        if f0 < 0.0 && !integral {
            return Err(Error::NonInvertible(format!(
                "f(0) = {f0} < 0 with non-integer exponent {c}"
            )));
        }
        let order = self.order();
        let mut g = vec![0.0; order + 1];
        g[0] = f0.powf(c);
        for k in 1..=order {
            let mut acc = 0.0;
            for i in 1..=k {
                let fi = self.coeffs[i];
                if fi != 0.0 {
                    acc += (c * i as f64 - (k - i) as f64) * fi * g[k - i];
                }
            }
            g[k] = acc / (k as f64 * f0);
        }
        Ok(TruncatedSeries { coeffs: g })
    }

    pub fn powi(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.order()), |acc, _| acc.mul(self))
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

/// Product of two coefficient lists, truncated at `order`.
pub fn series_mul(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    let a = TruncatedSeries::new(a.to_vec(), order);
    a.mul(&TruncatedSeries::new(b.to_vec(), order)).coeffs().to_vec()
}

/// `a^c` through `order`; needs `a_0 > 0` unless `c` is a nonnegative integer.
pub fn series_real_pow(a: &[f64], c: f64, order: usize) -> Result<Vec<f64>> {
    Ok(TruncatedSeries::new(a.to_vec(), order).real_pow(c)?.coeffs().to_vec())
}

/// `d^{p+q} f / (dt1^p dt2^q)` at `(t1, t2)`, with `f` written over jets.
pub fn jet_mixed_partial<T, F>(f: F, t1: T, t2: T, p: usize, q: usize) -> Result<T>
where
    T: JetScalar,
    F: Fn(&Jet2<T>, &Jet2<T>) -> Result<Jet2<T>>,
{
    Ok(f(&Jet2::var1(t1, p, q), &Jet2::var2(t2, p, q))?.derivative(p, q))
}

/// Taylor coefficients at `center` of the power series `sum a_l u^l`,
/// through order `order`: `sum_l binom(l, v) a_l center^(l - v)`.
pub fn recenter<T: JetScalar>(coeffs: &[f64], center: T, order: usize) -> Vec<T> {
    let mut out = vec![T::from_f64(0.0); order + 1];
    for (v, slot) in out.iter_mut().enumerate() {
        let mut acc = T::from_f64(0.0);
        let mut power = T::from_f64(1.0);
        let mut binom = 1.0;
        for l in v..coeffs.len() {
            if l > v {
                binom = binom * l as f64 / (l - v) as f64;
                power = power * center;
            }
            acc = acc + T::from_f64(coeffs[l] * binom) * power;
        }
        *slot = acc;
    }
    out
}
