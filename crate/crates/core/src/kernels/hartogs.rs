use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::ball::{ball_constant, inner, norm_sq};
use super::BergmanKernel;
use crate::error::{Error, Result};
use crate::exact::{
    factorial_rational, format_rational, hartogs_base_polynomial, to_f64, to_rising_factorial_basis,
    HomogeneousBaseData, Rational,
};

/// Coefficients `c(s, j)` of the base polynomial in the basis `{(k+1)_j}`,
/// their weighted sum `S = sum c(s,j) (j+m)!` and `c'(s, j) = c(s, j) / S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HartogsCoefficients {
    #[serde(serialize_with = "ser_one")]
    pub s: Rational,
    #[serde(serialize_with = "ser_vec")]
    pub c: Vec<Rational>,
    #[serde(rename = "S", serialize_with = "ser_one")]
    pub sum: Rational,
    #[serde(serialize_with = "ser_vec")]
    pub c_normalized: Vec<Rational>,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(format_rational))
}

fn ser_one<S: serde::Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(r))
}

impl HartogsCoefficients {
    pub fn c_f64(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }

    pub fn c_normalized_f64(&self) -> Vec<f64> {
        self.c_normalized.iter().map(to_f64).collect()
    }
}

/// Coefficients for any admissible `s`, including `s = 0` (product domain).
pub(crate) fn coefficients_unchecked(n: u32, m: u32, s: &Rational) -> Result<HartogsCoefficients> {
    let base = HomogeneousBaseData::ball(n)?;
    let b = hartogs_base_polynomial(&base, s)?;
    let mut c = to_rising_factorial_basis(&b);
    c.resize(n as usize + 1, Rational::zero());
    let sum: Rational = c
        .iter()
        .enumerate()
        .map(|(j, cj)| cj * factorial_rational(j as u64 + m as u64))
        .sum();
    if !sum.is_positive() {
        return Err(Error::Inconsistent(format!("S = {} is not positive", format_rational(&sum))));
    }
    let c_normalized = c.iter().map(|cj| cj / &sum).collect();
    Ok(HartogsCoefficients { s: s.clone(), c, sum, c_normalized })
}

pub fn hartogs_coefficients(n: u32, m: u32, s: &Rational) -> Result<HartogsCoefficients> {
    if m == 0 {
        return Err(Error::ParameterOutOfRange("m must be at least 1".into()));
    }
    if s.is_zero() {
        return Err(Error::ParameterOutOfRange(
            "s = 0 gives a product domain; the base polynomial degenerates to a constant".into(),
        ));
    }
    coefficients_unchecked(n, m, s)
}

pub fn hartogs_kernel(n: u32, m: u32, s: &Rational, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    HartogsKernel::new(n, m, s.clone())?.kernel(z, w)
}

/// Kernel of `{(z, xi) in B^n x C^m : ||xi||^2 < K_{B^n}(z, z)^{-s}}`.
#[derive(Clone, Debug)]
pub struct HartogsKernel {
    n: u32,
    m: u32,
    s: Rational,
    s_f64: f64,
    coefficients: HartogsCoefficients,
    weights: Vec<f64>,
}

impl HartogsKernel {
    pub fn new(n: u32, m: u32, s: Rational) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::ParameterOutOfRange("n and m must be at least 1".into()));
        }
        let coefficients = coefficients_unchecked(n, m, &s)?;
        let weights = coefficients
            .c
            .iter()
            .enumerate()
            .map(|(j, cj)| to_f64(&(cj * factorial_rational(j as u64 + m as u64))))
            .collect();
        Ok(HartogsKernel { n, m, s_f64: to_f64(&s), s, coefficients, weights })
    }

    pub fn coefficients(&self) -> &HartogsCoefficients {
        &self.coefficients
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    /// `K_{B^n}(z, z)^{-s}` for a base point with `||z||^2 = r2`.
    pub fn fiber_bound(n: u32, s: f64, r2: f64) -> f64 {
        (ball_constant(n) * (1.0 - r2).powi(-(n as i32 + 1))).powf(-s)
    }

    fn split<'a>(&self, z: &'a [Complex64]) -> (&'a [Complex64], &'a [Complex64]) {
        z.split_at(self.n as usize)
    }

    fn check(&self, z: &[Complex64], label: &str) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::OutsideDomain(format!(
                "{label} has {} coordinates, expected {}",
                z.len(),
                self.dim()
            )));
        }
        if !self.contains(z) {
            return Err(Error::OutsideDomain(format!("{label} is not in the domain")));
        }
        Ok(())
    }
}

impl BergmanKernel for HartogsKernel {
    fn dim(&self) -> usize {
        (self.n + self.m) as usize
    }

    fn contains(&self, z: &[Complex64]) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        let (base, fiber) = self.split(z);
        let r2 = norm_sq(base);
        r2 < 1.0 && norm_sq(fiber) < Self::fiber_bound(self.n, self.s_f64, r2)
    }

    fn kernel(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        self.check(z, "first point")?;
        self.check(w, "second point")?;
        let (zb, zf) = self.split(z);
        let (wb, wf) = self.split(w);
        let h = Complex64::new(1.0, 0.0) - inner(zb, wb);
        let g = self.n as f64 + 1.0;
        // K_B(z, w)^a = (n!/pi^n)^a h^{-g a}
        let kb_pow = |a: f64| ball_constant(self.n).powf(a) * h.powf(-g * a);
        let t = kb_pow(self.s_f64) * inner(zf, wf);
        if t.norm() >= 1.0 {
            return Err(Error::OutsideDomain(format!("|t| = {} >= 1", t.norm())));
        }
        let one_minus_t = Complex64::new(1.0, 0.0) - t;
        let m = self.m as i32;
        let sum: Complex64 = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, wt)| **wt != 0.0)
            .map(|(j, wt)| *wt * one_minus_t.powi(-(j as i32 + m + 1)))
            .sum();
        Ok(kb_pow(self.m as f64 * self.s_f64 + 1.0) / PI.powi(m) * sum)
    }
}
