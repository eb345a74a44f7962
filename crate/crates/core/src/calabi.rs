//! Fiber-slice expansion of a rescaled Hartogs diastasis and the diagonal
//! form of Calabi's criterion for immersions into a complex hyperbolic space.
//!
//! Along the slice `z = 0`, with `x = ||xi||^2`, `Y = C x` and
//! `C = K_{B^n}(0, 0)^s`, preservation of the diastasis reads
//! `sum |f_j|^2 / (N+1) = 1 - (1 - Y)^mu A(Y)^{-rho}` with
//! `A(Y) = sum_j c'(s,j) (j+m)! (1-Y)^{n-j}`, `rho = lambda/(N+1)` and
//! `mu = rho (n+m+1)`. The Taylor coefficients of the right-hand side are `alpha(v)`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    binomial, factorial_rational, format_rational, int, lex_multiindices, to_f64, MultiIndex, Rational,
    RationalPolynomial,
};
use crate::kernels::{ball_constant, HartogsCoefficients};
use crate::series::TruncatedSeries;

/// Largest supported expansion order.
pub const MAX_SLICE_ORDER: usize = 400;
/// Recommended minimum truncation degree for a verdict.
pub const MIN_VERDICT_DEGREE: u32 = 30;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `beta(m_r)` over graded-lex multi-indices, in enumeration order.
pub type BetaTable = Vec<(MultiIndex, f64)>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceExpansion {
    /// `K_{B^n}(0,0)^s`; irrational in general, so kept as a float.
    #[serde(rename = "C")]
    pub c_const: f64,
    pub alpha: Vec<f64>,
    pub beta: BetaTable,
    pub mu: f64,
    #[serde(serialize_with = "ser_rational")]
    pub exponent_ratio: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_rational(r))
}

/// `C = (n!/pi^n)^s`.
pub fn slice_constant(n: u32, s: &Rational) -> f64 {
    ball_constant(n).powf(to_f64(s))
}

fn check_slice_input(coeff: &HartogsCoefficients, n: u32, lambda: &Rational, order: usize) -> Result<()> {
    if !lambda.is_positive() {
        return Err(Error::ParameterOutOfRange("lambda must be positive".into()));
    }
    if coeff.s.is_zero() {
        return Err(Error::ParameterOutOfRange("s must be nonzero".into()));
    }
    if order == 0 || order > MAX_SLICE_ORDER {
        return Err(Error::ParameterOutOfRange(format!(
            "expansion order {order} outside 1..={MAX_SLICE_ORDER}"
        )));
    }
    if coeff.c_normalized.len() != n as usize + 1 {
        return Err(Error::Inconsistent(format!(
            "{} coefficients for a base of dimension {n}",
            coeff.c_normalized.len()
        )));
    }
    Ok(())
}

/// `A(Y) = sum_j c'(s,j) (j+m)! (1-Y)^{n-j}`, exactly.
pub(crate) fn slice_polynomial(coeff: &HartogsCoefficients, n: u32, m: u32) -> RationalPolynomial {
    let one_minus = RationalPolynomial::linear(int(1), int(-1));
    coeff
        .c_normalized
        .iter()
        .enumerate()
        .fold(RationalPolynomial::zero(), |acc, (j, cj)| {
            let w = cj * factorial_rational(j as u64 + m as u64);
            &acc + &one_minus.pow(n - j as u32).scale(&w)
        })
}

/// `alpha(0..=order)` computed with floating-point series arithmetic.
pub fn hartogs_slice_alpha(
    coeff: &HartogsCoefficients,
    n: u32,
    m: u32,
    lambda: &Rational,
    big_n: u32,
    order: usize,
) -> Result<Vec<f64>> {
    check_slice_input(coeff, n, lambda, order)?;
    let rho = lambda / int(big_n as i64 + 1);
    slice_alpha_f64(coeff, n, m, to_f64(&rho), order)
}

/// As [`hartogs_slice_alpha`] with `rho = lambda/(N+1)` given as a float,
/// for scales outside the rationals.
pub fn slice_alpha_f64(coeff: &HartogsCoefficients, n: u32, m: u32, rho: f64, order: usize) -> Result<Vec<f64>> {
    let c = slice_constant(n, &coeff.s);
    let a = slice_polynomial(coeff, n, m);
    let x = TruncatedSeries::new(vec![0.0, c], order);
    // A(Cx) by Horner in the series ring.
    let a_series = a
        .coeffs()
        .iter()
        .rev()
        .fold(TruncatedSeries::constant(0.0, order), |acc, ak| {
            &acc.mul(&x) + &TruncatedSeries::constant(to_f64(ak), order)
        });
    let mu = rho * (n + m + 1) as f64;
    let product = TruncatedSeries::one_minus(c, order)
        .real_pow(mu)?
        .mul(&a_series.real_pow(-rho)?);
    let mut alpha: Vec<f64> = product.coeffs().iter().map(|p| -p).collect();
    alpha[0] += 1.0;
    Ok(alpha)
}

/// `alpha(v) / C^v` for `v <= order`, exactly: the series of
/// `A(Y)^{-rho}` comes from the logarithmic-derivative recurrence over Q.
pub fn slice_alpha_exact(
    coeff: &HartogsCoefficients,
    n: u32,
    m: u32,
    lambda: &Rational,
    big_n: u32,
    order: usize,
) -> Result<Vec<Rational>> {
    check_slice_input(coeff, n, lambda, order)?;
    let rho = lambda / int(big_n as i64 + 1);
    let mu = &rho * int((n + m + 1) as i64);
    let a = slice_polynomial(coeff, n, m);
    let a0 = a.coeff(0);
    if a0 != Rational::one() {
        return Err(Error::Inconsistent(format!("A(0) = {} instead of 1", format_rational(&a0))));
    }
    let exponent = -&rho;
    let mut g = vec![Rational::one()];
    for k in 1..=order {
        let mut acc = Rational::zero();
        for i in 1..=k.min(a.coeffs().len().saturating_sub(1)) {
            let ai = a.coeff(i);
            if !ai.is_zero() {
                acc += (&exponent * int(i as i64) - int((k - i) as i64)) * ai * &g[k - i];
            }
        }
        g.push(acc / int(k as i64));
    }
    let mut alpha = Vec::with_capacity(order + 1);
    for v in 0..=order {
        let mut acc = Rational::zero();
        for i in 0..=v {
            let b = binomial(&mu, i);
            let b = if i % 2 == 0 { b } else { -b };
            acc += b * &g[v - i];
        }
        alpha.push(-acc);
    }
    alpha[0] += Rational::one();
    Ok(alpha)
}

/// `alpha(v) / C^v` for `v <= order` from the explicit double sum over
/// multi-indices `a` of length `n + 2`, evaluated exactly. Each `v` is
/// accepted once its partial sums in `l` have been unchanged for five
/// consecutive `l`.
pub fn alpha_resummation_exact(
    coeff: &HartogsCoefficients,
    n: u32,
    m: u32,
    lambda: &Rational,
    big_n: u32,
    order: usize,
) -> Result<Vec<Rational>> {
    check_slice_input(coeff, n, lambda, order)?;
    let rho = lambda / int(big_n as i64 + 1);
    let mu = &rho * int((n + m + 1) as i64);
    let parts = n as usize + 2;
    // weights of (1-Y)^{n-j+1}, j = 1..n+1, and the constant 1 for j = n+2
    let weights: Vec<Rational> = (1..=n as usize + 1)
        .map(|j| &coeff.c_normalized[j - 1] * factorial_rational((j - 1 + m as usize) as u64))
        .collect();

    const STABLE_RUN: usize = 5;
    let mut totals = vec![Rational::zero(); order + 1];
    let mut stable = vec![0usize; order + 1];
    let mut l = 0usize;
    loop {
        let coef_l = binomial(&-&rho, l) * if l.is_multiple_of(2) { int(1) } else { int(-1) };
        let mut layer = vec![Rational::zero(); order + 1];
        for a in crate::exact::multiindices_of_degree(parts, l as u32) {
            let e = a.entries();
            let mut term = a.multinomial();
            let mut exponent = mu.clone();
            for j in 1..=n as usize + 1 {
                let aj = e[j - 1];
                if aj > 0 {
                    term *= pow_rational(&weights[j - 1], aj);
                    exponent += int(((n as usize + 1 - j) * aj as usize) as i64);
                }
            }
            if (l - e[parts - 1] as usize) % 2 == 1 {
                term = -term;
            }
            for (v, slot) in layer.iter_mut().enumerate() {
                let b = binomial(&exponent, v);
                if !b.is_zero() {
                    let signed = if v % 2 == 0 { b } else { -b };
                    *slot += &term * signed;
                }
            }
        }
        for v in 0..=order {
            let delta = &coef_l * &layer[v];
            if delta.is_zero() {
                stable[v] += 1;
            } else {
                stable[v] = 0;
                totals[v] += delta;
            }
        }
        if stable.iter().all(|s| *s >= STABLE_RUN) {
            break;
        }
        l += 1;
        if l > order + 64 {
            return Err(Error::SeriesDivergence { tail: f64::INFINITY, tolerance: 0.0 });
        }
    }
    let mut alpha: Vec<Rational> = totals.into_iter().map(|t| -t).collect();
    alpha[0] += Rational::one();
    Ok(alpha)
}

fn pow_rational(r: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * r)
}

/// Floating-point view of [`alpha_resummation_exact`], scaled by `C^v`.
pub fn alpha_resummation(
    coeff: &HartogsCoefficients,
    n: u32,
    m: u32,
    lambda: &Rational,
    big_n: u32,
    order: usize,
) -> Result<Vec<f64>> {
    let c = slice_constant(n, &coeff.s);
    Ok(alpha_resummation_exact(coeff, n, m, lambda, big_n, order)?
        .iter()
        .enumerate()
        .map(|(v, a)| to_f64(a) * c.powi(v as i32))
        .collect())
}

/// `beta(m_r) = alpha(|m_r|) |m_r|! / m_r!` over all indices of degree at
/// most `max_degree`.
pub fn beta_from_alpha(alpha: &[f64], fiber_dim: u32, max_degree: u32) -> BetaTable {
    lex_multiindices(fiber_dim as usize, max_degree)
        .into_iter()
        .map(|idx| {
            let d = idx.degree() as usize;
            let value = if d == 0 { 0.0 } else { alpha.get(d).copied().unwrap_or(0.0) * idx.multinomial_f64() };
            (idx, value)
        })
        .collect()
}

pub fn slice_expansion(
    coeff: &HartogsCoefficients,
    n: u32,
    m: u32,
    lambda: &Rational,
    big_n: u32,
    order: usize,
) -> Result<SliceExpansion> {
    let alpha = hartogs_slice_alpha(coeff, n, m, lambda, big_n, order)?;
    let beta = beta_from_alpha(&alpha, m, order as u32);
    let exponent_ratio = lambda / int(big_n as i64 + 1);
    Ok(SliceExpansion {
        c_const: slice_constant(n, &coeff.s),
        mu: to_f64(&exponent_ratio) * (n + m + 1) as f64,
        alpha,
        beta,
        exponent_ratio,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CalabiVerdict {
    ImmersionImpossible,
    ConsistentWithImmersion,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalabiDiagnostic {
    /// `(N+1) beta(m_r)` for `r >= 1`.
    pub diagonal: Vec<(MultiIndex, f64)>,
    pub is_psd: bool,
    pub truncated_rank: usize,
    pub is_polynomial: bool,
    /// Highest degree carrying an entry above tolerance.
    pub cutoff_degree: Option<u32>,
    pub max_degree: u32,
    pub tolerance: f64,
    pub verdict: CalabiVerdict,
    pub caveat: String,
}

pub fn calabi_diag_test(beta: &[(MultiIndex, f64)], big_n: u32, tol: f64) -> CalabiDiagnostic {
    let scale = big_n as f64 + 1.0;
    let diagonal: Vec<(MultiIndex, f64)> = beta
        .iter()
        .filter(|(idx, _)| idx.degree() > 0)
        .map(|(idx, b)| (idx.clone(), scale * b))
        .collect();
    let max_degree = beta.iter().map(|(idx, _)| idx.degree()).max().unwrap_or(0);
    let is_psd = diagonal.iter().all(|(_, d)| *d >= -tol);
    let truncated_rank = diagonal.iter().filter(|(_, d)| *d > tol).count();
    let cutoff_degree = diagonal
        .iter()
        .filter(|(_, d)| d.abs() > tol)
        .map(|(idx, _)| idx.degree())
        .max();
    let is_polynomial = cutoff_degree.is_none_or(|c| c < max_degree);
    let verdict = if !is_psd || truncated_rank > big_n as usize {
        CalabiVerdict::ImmersionImpossible
    } else if is_polynomial {
        CalabiVerdict::ConsistentWithImmersion
    } else {
        CalabiVerdict::Inconclusive
    };
    let mut caveat = format!("verdict holds for entries of degree <= {max_degree} only");
    if max_degree < MIN_VERDICT_DEGREE {
        caveat.push_str(&format!("; truncation below the recommended minimum degree {MIN_VERDICT_DEGREE}"));
    }
    CalabiDiagnostic {
        diagonal,
        is_psd,
        truncated_rank,
        is_polynomial,
        cutoff_degree,
        max_degree,
        tolerance: tol,
        verdict,
        caveat,
    }
}

/// Slice coefficients `binom(mu, v) (-1)^{v+1}` of `1 - (1 - x)^mu`, the
/// potential of a ball rescaled by `mu` inside a hyperbolic target.
pub fn pure_ball_slice_alpha(mu: f64, order: usize) -> Result<Vec<f64>> {
    let series = TruncatedSeries::one_minus(1.0, order).real_pow(mu)?;
    let mut alpha: Vec<f64> = series.coeffs().iter().map(|c| -c).collect();
    alpha[0] += 1.0;
    Ok(alpha)
}
