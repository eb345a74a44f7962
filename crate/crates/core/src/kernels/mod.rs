//! Closed-form Bergman kernels of the unit ball, Hartogs-type domains over
//! the ball and egg domains over the ball, evaluated on and off the
//! diagonal.

mod ball;
mod domain;
mod egg;
mod hartogs;

pub use ball::{ball_constant, ball_generic_norm, ball_kernel, ball_kernel_power, inner, norm_sq, BallKernel};
pub use domain::{DomainKind, DomainSpec, TargetData};
pub use egg::{
    egg_coefficients, egg_kernel, egg_lambda_derivative, EggCoefficients, EggKernel, EggLambda, HjmEvaluation,
};
pub use hartogs::{hartogs_coefficients, hartogs_kernel, HartogsCoefficients, HartogsKernel};

use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;

/// A Bergman kernel `K(z, w)`, holomorphic in `z` and antiholomorphic in `w`.
pub trait BergmanKernel {
    fn dim(&self) -> usize;

    /// Whether `z` lies in the open domain.
    fn contains(&self, z: &[Complex64]) -> bool;

    fn kernel(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64>;

    fn kernel_diag(&self, z: &[Complex64]) -> Result<f64> {
        Ok(self.kernel(z, z)?.re)
    }
}

/// Ratio of the closed-form kernel to the Lebesgue-measure kernel.
pub fn lebesgue_ratio(spec: &DomainSpec) -> f64 {
    match spec.domain {
        DomainKind::Egg { p, q, .. } => {
            let fact = |j: u32| (1..=j).map(f64::from).product::<f64>();
            std::f64::consts::PI.powi(spec.complex_dim() as i32) / (fact(p) * fact(q))
        }
        _ => 1.0,
    }
}

/// Closed-form kernel for any supported domain.
pub fn kernel_for(spec: &DomainSpec) -> Result<Box<dyn BergmanKernel + Send + Sync>> {
    spec.validate()?;
    Ok(match &spec.domain {
        DomainKind::Ball { n } => Box::new(BallKernel::new(*n)?),
        DomainKind::Hartogs { n, m, s } => Box::new(HartogsKernel::new(*n, *m, s.clone())?),
        DomainKind::Egg { n, p, q, k } => Box::new(EggKernel::new(*n, *p, *q, k.clone(), HjmEvaluation::ClosedForm)?),
    })
}

fn unit_direction<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..len)
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen();
                let r = (-2.0 * u1.ln()).sqrt();
                let th = std::f64::consts::TAU * u2;
                Complex64::new(r * th.cos(), r * th.sin())
            })
            .collect();
        let nrm = norm_sq(&v).sqrt();
        if nrm > 1e-12 {
            return v.into_iter().map(|c| c / nrm).collect();
        }
    }
}

/// Random vector of `len` complex coordinates with squared norm `r2`.
pub(crate) fn random_vector<R: Rng + ?Sized>(rng: &mut R, len: usize, r2: f64) -> Vec<Complex64> {
    unit_direction(rng, len).into_iter().map(|c| c * r2.sqrt()).collect()
}

/// Draws an interior point; each fibered budget is filled to at most
/// `depth` (in `(0, 1)`) of what the domain allows.
pub fn sample_point<R: Rng + ?Sized>(spec: &DomainSpec, rng: &mut R, depth: f64) -> Vec<Complex64> {
    let frac = |rng: &mut R| depth * rng.gen::<f64>();
    match &spec.domain {
        DomainKind::Ball { n } => {
            let r2 = frac(rng);
            random_vector(rng, *n as usize, r2)
        }
        DomainKind::Hartogs { n, m, s } => {
            let r2 = frac(rng);
            let mut pt = random_vector(rng, *n as usize, r2);
            let bound = HartogsKernel::fiber_bound(*n, crate::exact::to_f64(s), r2);
            let f2 = frac(rng) * bound;
            pt.extend(random_vector(rng, *m as usize, f2));
            pt
        }
        DomainKind::Egg { n, p, q, k } => {
            let r2 = frac(rng);
            let budget = 1.0 - r2;
            let x1 = frac(rng) * budget;
            let x2k = frac(rng) * (budget - x1);
            let x2 = x2k.powf(1.0 / crate::exact::to_f64(k));
            let mut pt = random_vector(rng, *n as usize, r2);
            pt.extend(random_vector(rng, *p as usize, x1));
            pt.extend(random_vector(rng, *q as usize, x2));
            pt
        }
    }
}
