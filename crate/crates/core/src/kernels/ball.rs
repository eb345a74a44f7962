use std::f64::consts::PI;

use num_complex::Complex64;

use super::BergmanKernel;
use crate::error::{Error, Result};

/// `<z, w> = sum z_i conj(w_i)`.
pub fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm_sq(z: &[Complex64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum()
}

/// `n! / pi^n`, the kernel of `B^n` at the origin.
pub fn ball_constant(n: u32) -> f64 {
    (1..=n).map(|i| i as f64 / PI).product()
}

fn check_point(n: u32, z: &[Complex64], label: &str) -> Result<()> {
    if z.len() != n as usize {
        return Err(Error::OutsideDomain(format!("{label} has {} coordinates, expected {n}", z.len())));
    }
    if norm_sq(z) >= 1.0 {
        return Err(Error::OutsideDomain(format!("{label} is not in the open unit ball")));
    }
    Ok(())
}

/// `1 - <z, w>` after validating both points.
pub fn ball_generic_norm(n: u32, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    check_point(n, z, "z")?;
    check_point(n, w, "w")?;
    Ok(Complex64::new(1.0, 0.0) - inner(z, w))
}

pub fn ball_kernel(n: u32, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
    BallKernel::new(n)?.kernel(z, w)
}

/// `K_B(z, w)^a` on the principal branch: `(n!/pi^n)^a (1 - <z,w>)^{-(n+1) a}`.
/// Points are not validated.
pub fn ball_kernel_power(n: u32, z: &[Complex64], w: &[Complex64], a: f64) -> Complex64 {
    let h = Complex64::new(1.0, 0.0) - inner(z, w);
    ball_constant(n).powf(a) * h.powf(-(n as f64 + 1.0) * a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallKernel {
    n: u32,
}

impl BallKernel {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
        }
        Ok(BallKernel { n })
    }
}

impl BergmanKernel for BallKernel {
    fn dim(&self) -> usize {
        self.n as usize
    }

    fn contains(&self, z: &[Complex64]) -> bool {
        z.len() == self.n as usize && norm_sq(z) < 1.0
    }

    fn kernel(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        let h = ball_generic_norm(self.n, z, w)?;
        Ok(ball_constant(self.n) * h.powi(-(self.n as i32 + 1)))
    }
}
