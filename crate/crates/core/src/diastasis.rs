//! Calabi's diastasis for Bergman metrics and for the complex space forms.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, to_f64, Rational};
use crate::kernels::{inner, norm_sq, BergmanKernel};

/// A diastasis value already multiplied by the metric scale `lambda`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiastasisValue {
    pub value: f64,
    #[serde(serialize_with = "ser_rational")]
    pub scale: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(r))
}

impl DiastasisValue {
    /// The diastasis of `lambda g` is `lambda` times the diastasis of `g`.
    pub fn rescaled(unit: f64, scale: Rational) -> Self {
        DiastasisValue { value: to_f64(&scale) * unit, scale }
    }
}

/// `log(K(z,z) K(w,w) / |K(z,w)|^2)`.
pub fn bergman_diastasis<K: BergmanKernel + ?Sized>(kernel: &K, z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    let kzw = kernel.kernel(z, w)?;
    if kzw.norm() == 0.0 {
        return Err(Error::LuQiKengZero);
    }
    let kzz = kernel.kernel_diag(z)?;
    let kww = kernel.kernel_diag(w)?;
    Ok(kzz.ln() + kww.ln() - 2.0 * kzw.norm().ln())
}

/// Diastasis of the complex hyperbolic space of curvature `b < 0`, realized
/// on the ball of radius `1/sqrt(-b)`.
pub fn hyperbolic_diastasis(b: f64, z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if b >= 0.0 || !b.is_finite() {
        return Err(Error::ParameterOutOfRange(format!("curvature {b} must be negative")));
    }
    if z.len() != w.len() {
        return Err(Error::OutsideDomain("points of different dimension".into()));
    }
    for (label, p) in [("z", z), ("w", w)] {
        if 1.0 + b * norm_sq(p) <= 0.0 {
            return Err(Error::OutsideDomain(format!("{label} is outside the ball of radius 1/sqrt(-b)")));
        }
    }
    let cross = Complex64::new(1.0, 0.0) + b * inner(z, w);
    Ok(((1.0 + b * norm_sq(z)).ln() + (1.0 + b * norm_sq(w)).ln() - 2.0 * cross.norm().ln()) / b)
}

/// Diastasis of the complex projective space of curvature `b > 0`, in
/// homogeneous coordinates.
pub fn projective_diastasis(b: f64, z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::ParameterOutOfRange(format!("curvature {b} must be positive")));
    }
    let (nz, nw) = (norm_sq(z), norm_sq(w));
    if nz == 0.0 || nw == 0.0 || z.len() != w.len() {
        return Err(Error::OutsideDomain("homogeneous coordinates must be nonzero and of equal length".into()));
    }
    let cross = inner(z, w).norm_sqr();
    if cross == 0.0 {
        return Err(Error::OrthogonalPair);
    }
    Ok((nz * nw / cross).ln() / b)
}

/// Coordinates of a point of the unit ball `B^N` in the model of curvature
/// `-1/(N+1)`: `zeta = sqrt(N+1) z`.
pub fn ball_to_hyperbolic_model(big_n: u32, z: &[Complex64]) -> Vec<Complex64> {
    let scale = (big_n as f64 + 1.0).sqrt();
    z.iter().map(|c| c * scale).collect()
}
