//! Brute-force Bergman kernels of complete Reinhardt domains from monomial
//! norms. Monomials are orthogonal there, so
//! `K(z, w) = sum_a z^a conj(w^a) / ||z^a||^2`.
//!
//! With `x_i = |z_i|^2` every norm is `pi^dim` times an integral over a
//! simplex-like region of `x`, which stick-breaking reduces to products of
//! one-dimensional integrals `int_0^1 t^a (1-t)^b dt` with integer `a` and
//! rational `b`. These are computed by Gauss-Legendre quadrature after the
//! substitution `1 - t = u^d` (`d` the denominator of `b`), at two node
//! counts whose disagreement is reported as a quadrature failure.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, int, lex_multiindices, to_f64, MultiIndex, Rational};
use crate::kernels::{ball_constant, kernel_for, BergmanKernel, DomainKind, DomainSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per one-dimensional integral; the refinement
    /// check reruns with twice as many.
    pub nodes: usize,
    /// Highest total degree `D` of the monomial basis.
    pub cutoff: u32,
    pub refinement_tolerance: f64,
    /// Largest accepted tail estimate relative to the kernel value.
    pub tail_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { nodes: 128, cutoff: 40, refinement_tolerance: 1e-8, tail_tolerance: 1e-7 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 64 {
            return Err(Error::ParameterOutOfRange(format!("{} quadrature nodes; at least 64 required", self.nodes)));
        }
        if self.cutoff < 10 {
            return Err(Error::ParameterOutOfRange(format!("cutoff {}; at least 10 required", self.cutoff)));
        }
        if !(self.refinement_tolerance > 0.0 && self.tail_tolerance > 0.0) {
            return Err(Error::ParameterOutOfRange("tolerances must be positive".into()));
        }
        Ok(())
    }
}

struct Integrator {
    coarse: GaussLegendre,
    fine: GaussLegendre,
    nodes: usize,
    tolerance: f64,
    cache: HashMap<(u32, Rational), f64>,
}

impl Integrator {
    fn new(quad: &QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        let rule = |n: usize| GaussLegendre::new(NonZeroUsize::new(n).expect("validated node count"));
        Ok(Integrator {
            coarse: rule(quad.nodes),
            fine: rule(2 * quad.nodes),
            nodes: quad.nodes,
            tolerance: quad.refinement_tolerance,
            cache: HashMap::new(),
        })
    }

    /// `int_0^1 t^a (1-t)^b dt` for `b > -1`.
    fn beta(&mut self, a: u32, b: &Rational) -> Result<f64> {
        if let Some(v) = self.cache.get(&(a, b.clone())) {
            return Ok(*v);
        }
        if b <= &int(-1) {
            return Err(Error::Quadrature(format!(
                "exponent {} leaves a monomial outside L^2",
                format_rational(b)
            )));
        }
        let d = b.denom().to_i32().ok_or_else(|| Error::Quadrature("exponent denominator too large".into()))?;
        // 1 - t = u^d turns the integrand into d (1 - u^d)^a u^{d b + d - 1}
        let power = (b * int(d as i64)).to_integer().to_i32().expect("small exponent") + d - 1;
        let f = |u: f64| d as f64 * (1.0 - u.powi(d)).powi(a as i32) * u.powi(power);
        let coarse = self.coarse.integrate(0.0, 1.0, f);
        let fine = self.fine.integrate(0.0, 1.0, f);
        if fine.is_nan() || fine <= 0.0 || (coarse - fine).abs() > self.tolerance * fine {
            return Err(Error::Quadrature(format!(
                "int t^{a} (1-t)^{} : {coarse} with {} nodes, {fine} with {}",
                format_rational(b),
                self.nodes,
                2 * self.nodes
            )));
        }
        self.cache.insert((a, b.clone()), fine);
        Ok(fine)
    }

    /// `int_{x >= 0, sum x < 1} x^a (1 - sum x)^gamma dx` by stick-breaking.
    fn dirichlet(&mut self, a: &[u32], gamma: &Rational) -> Result<f64> {
        let Some((first, rest)) = a.split_first() else {
            return Ok(1.0);
        };
        let rest_degree: u32 = rest.iter().sum();
        let exponent = int(rest_degree as i64 + rest.len() as i64) + gamma;
        Ok(self.beta(*first, &exponent)? * self.dirichlet(rest, gamma)?)
    }

    fn norm(&mut self, spec: &DomainSpec, a: &MultiIndex) -> Result<f64> {
        let e = a.entries();
        if e.len() != spec.complex_dim() {
            return Err(Error::ParameterOutOfRange(format!(
                "multi-index of length {} for a domain of dimension {}",
                e.len(),
                spec.complex_dim()
            )));
        }
        let zero = int(0);
        let dim = spec.complex_dim() as i32;
        let value = match &spec.domain {
            DomainKind::Ball { .. } => self.dirichlet(e, &zero)?,
            DomainKind::Hartogs { n, m, s } => {
                let (base, fiber) = e.split_at(*n as usize);
                let fiber_weight = fiber.iter().sum::<u32>() + m;
                // fiber radius^2 = c (1 - |z|^2)^{(n+1) s}
                let c = ball_constant(*n).powf(-to_f64(s));
                let exponent = s * int(*n as i64 + 1) * int(fiber_weight as i64);
                self.dirichlet(fiber, &zero)? * c.powi(fiber_weight as i32) * self.dirichlet(base, &exponent)?
            }
            DomainKind::Egg { n, p, q, k } => {
                let (base, rest) = e.split_at(*n as usize);
                let (x1, x2) = rest.split_at(*p as usize);
                let gamma2 = int((x2.iter().sum::<u32>() + q) as i64) / k;
                let gamma1 = int((x1.iter().sum::<u32>() + p) as i64) + &gamma2;
                self.dirichlet(x2, &zero)? * self.dirichlet(x1, &gamma2)? * self.dirichlet(base, &gamma1)?
            }
        };
        Ok(PI.powi(dim) * value)
    }
}

/// `||z^a||^2` over the domain, Lebesgue measure.
pub fn monomial_norm(spec: &DomainSpec, a: &MultiIndex, quad: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    Integrator::new(quad)?.norm(spec, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OracleValue {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// Estimated magnitude of the omitted terms of degree above the cutoff.
    pub tail_estimate: f64,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq([c.re, c.im])
}

/// Truncated monomial expansion with precomputed norms.
pub struct OracleKernel {
    spec: DomainSpec,
    quad: QuadratureSpec,
    indices: Vec<MultiIndex>,
    inv_norms: Vec<f64>,
    domain: Box<dyn BergmanKernel + Send + Sync>,
}

impl OracleKernel {
    pub fn new(spec: &DomainSpec, quad: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        if let DomainKind::Hartogs { s, .. } = &spec.domain {
            if s.is_negative() {
                return Err(Error::OutsideScope("the oracle needs bounded fibers (s >= 0)".into()));
            }
        }
        let mut integrator = Integrator::new(quad)?;
        let indices = lex_multiindices(spec.complex_dim(), quad.cutoff);
        let inv_norms = indices
            .iter()
            .map(|a| integrator.norm(spec, a).map(|v| 1.0 / v))
            .collect::<Result<Vec<_>>>()?;
        Ok(OracleKernel { spec: spec.clone(), quad: quad.clone(), indices, inv_norms, domain: kernel_for(spec)? })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    /// Sums of `|z^a conj(w^a)| / ||z^a||^2` per total degree.
    fn shells(&self, z: &[Complex64], w: &[Complex64]) -> (Complex64, Vec<f64>) {
        let d = self.quad.cutoff as usize;
        let powers = |v: &[Complex64]| -> Vec<Vec<Complex64>> {
            v.iter()
                .map(|c| {
                    let mut row = vec![Complex64::new(1.0, 0.0)];
                    for _ in 0..d {
                        let next = row.last().expect("non-empty") * c;
                        row.push(next);
                    }
                    row
                })
                .collect()
        };
        let (pz, pw) = (powers(z), powers(w));
        let mut total = Complex64::new(0.0, 0.0);
        let mut shells = vec![0.0; d + 1];
        for (a, inv) in self.indices.iter().zip(&self.inv_norms) {
            let mut term = Complex64::new(*inv, 0.0);
            for (i, e) in a.entries().iter().enumerate() {
                term *= pz[i][*e as usize] * pw[i][*e as usize].conj();
            }
            total += term;
            shells[a.degree() as usize] += term.norm();
        }
        (total, shells)
    }

    pub fn evaluate(&self, z: &[Complex64], w: &[Complex64]) -> Result<OracleValue> {
        for (label, v) in [("first point", z), ("second point", w)] {
            if !self.domain.contains(v) {
                return Err(Error::OutsideDomain(format!("{label} is not in the domain")));
            }
        }
        let (value, shells) = self.shells(z, w);
        let d = shells.len() - 1;
        // geometric decay read off the last three shells
        let ratio = (d.saturating_sub(2)..=d)
            .filter(|i| *i > 0 && shells[i - 1] > 0.0)
            .map(|i| shells[i] / shells[i - 1])
            .fold(0.0f64, f64::max);
        let tail_estimate = if ratio >= 1.0 { f64::INFINITY } else { shells[d] * ratio / (1.0 - ratio) };
        if tail_estimate > self.quad.tail_tolerance * value.norm() {
            return Err(Error::TailEstimate(format!(
                "tail {tail_estimate:e} against |K| = {:e} at cutoff {d}; the point is too close to the boundary",
                value.norm()
            )));
        }
        Ok(OracleValue { value, tail_estimate })
    }

    /// Diagonal partial sums `sum_{|a| <= d}`, for `d = 0..=D`.
    pub fn diagonal_partial_sums(&self, z: &[Complex64]) -> Vec<f64> {
        let (_, shells) = self.shells(z, z);
        shells
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }
}

impl BergmanKernel for OracleKernel {
    fn dim(&self) -> usize {
        self.spec.complex_dim()
    }

    fn contains(&self, z: &[Complex64]) -> bool {
        self.domain.contains(z)
    }

    fn kernel(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        Ok(self.evaluate(z, w)?.value)
    }
}

pub fn oracle_kernel(spec: &DomainSpec, z: &[Complex64], w: &[Complex64], quad: &QuadratureSpec) -> Result<Complex64> {
    OracleKernel::new(spec, quad)?.kernel(z, w)
}
