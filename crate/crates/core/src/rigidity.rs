//! Exact algebraic constraints behind ball rigidity for Hartogs and egg
//! domains, the combined report and the egg-to-Hartogs reduction check.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calabi::{beta_from_alpha, calabi_diag_test, hartogs_slice_alpha, slice_alpha_f64, CalabiDiagnostic, CalabiVerdict};
use crate::diastasis::bergman_diastasis;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, to_f64, Rational, RationalPolynomial};
use crate::kernels::{
    ball_constant, BallKernel, BergmanKernel, DomainKind, DomainSpec, EggKernel, HartogsCoefficients,
    HartogsKernel, HjmEvaluation,
};

/// Largest `delta (n+m+1)` for which `T1`, `T2` are expanded.
pub const MAX_DIVISIBILITY_DEGREE: u64 = 4096;
pub const DEFAULT_TRUNCATION: u32 = 30;

/// The metric scale. Only rational scales are in reach of the exact checks.
#[derive(Clone, Debug, PartialEq)]
pub enum Lambda {
    Exact(Rational),
    Approx(f64),
}

/// `T1 = (1 - Y)^{delta (n+m+1)}` and `T2 = A(Y)^delta` with `Y = C X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityPair {
    pub t1: RationalPolynomial,
    pub t2: RationalPolynomial,
    pub delta: u64,
    pub epsilon: u64,
    pub top_coeff_nonzero: bool,
    pub t2_constant: bool,
    pub t2_divides_t1: bool,
    /// `T2` at `Y = 1`, that is `X = 1/C`.
    pub t2_at_root: Rational,
}

impl DivisibilityPair {
    pub fn passes(&self) -> bool {
        self.top_coeff_nonzero && self.t2_constant && self.t2_divides_t1
    }
}

pub fn check_algebraic_constraints(
    coeff: &HartogsCoefficients,
    n: u32,
    m: u32,
    lambda: &Rational,
    big_n: u32,
) -> Result<DivisibilityPair> {
    if !lambda.is_positive() {
        return Err(Error::ParameterOutOfRange("lambda must be positive".into()));
    }
    if coeff.s.is_zero() {
        return Err(Error::ParameterOutOfRange("s must be nonzero".into()));
    }
    let ratio = lambda / int(big_n as i64 + 1);
    let too_big = || Error::ParameterOutOfRange(format!("lambda/(N+1) = {} is too large to expand", format_rational(&ratio)));
    let delta = ratio.numer().to_u64().ok_or_else(too_big)?;
    let epsilon = ratio.denom().to_u64().ok_or_else(too_big)?;
    let t1_degree = delta.checked_mul((n + m + 1) as u64).ok_or_else(too_big)?;
    if t1_degree > MAX_DIVISIBILITY_DEGREE || delta * n as u64 > MAX_DIVISIBILITY_DEGREE {
        return Err(too_big());
    }
    let one_minus = RationalPolynomial::linear(int(1), int(-1));
    let t1 = one_minus.pow(t1_degree as u32);
    let t2 = crate::calabi::slice_polynomial(coeff, n, m).pow(delta as u32);
    let top_coeff_nonzero = !coeff.c[n as usize].is_zero();
    let t2_constant = t2.is_constant();
    let t2_divides_t1 = !t2.is_zero() && t2.divides(&t1);
    let t2_at_root = t2.eval(&Rational::one());
    Ok(DivisibilityPair { t1, t2, delta, epsilon, top_coeff_nonzero, t2_constant, t2_divides_t1, t2_at_root })
}

/// Whether the roots of `b(k)` coincide with those of `(k+1)_n`.
pub fn zero_locus_s(n: u32, s: &Rational) -> bool {
    if s.is_zero() || n == 0 {
        return false;
    }
    let Ok(mut roots) = crate::exact::ball_base_roots(n, s) else {
        return false;
    };
    roots.sort();
    roots.dedup();
    let mut target: Vec<Rational> = (1..=n as i64).map(|i| int(-i)).collect();
    target.sort();
    roots == target
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    BallCertified,
    ObstructionFound,
    InconclusiveAtTruncation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalabiSummary {
    pub verdict: CalabiVerdict,
    pub is_psd: bool,
    pub truncated_rank: usize,
    pub is_polynomial: bool,
    pub cutoff_degree: Option<u32>,
    pub max_degree: u32,
    pub caveat: String,
}

impl From<&CalabiDiagnostic> for CalabiSummary {
    fn from(d: &CalabiDiagnostic) -> Self {
        CalabiSummary {
            verdict: d.verdict,
            is_psd: d.is_psd,
            truncated_rank: d.truncated_rank,
            is_polynomial: d.is_polynomial,
            cutoff_degree: d.cutoff_degree,
            max_degree: d.max_degree,
            caveat: d.caveat.clone(),
        }
    }
}

/// The Hartogs data a report is computed on; for eggs, the reduced domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedHartogs {
    pub n: u32,
    pub m: u32,
    pub s: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct RigidityChecks {
    pub reduced_to: ReducedHartogs,
    pub s_nonzero: bool,
    pub top_coeff_nonzero: Option<bool>,
    pub T2_constant: Option<bool>,
    pub T2_divides_T1: Option<bool>,
    pub T2_at_root: Option<String>,
    pub zero_locus_matches: Option<bool>,
    pub calabi_verdict: Option<CalabiSummary>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub psd: f64,
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { psd: crate::calabi::DEFAULT_TOLERANCE, rank: crate::calabi::DEFAULT_TOLERANCE }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Versions {
    pub bergman_core: &'static str,
    pub report_schema: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Versions { bergman_core: env!("CARGO_PKG_VERSION"), report_schema: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RigidityReport {
    pub spec: DomainSpec,
    pub checks: RigidityChecks,
    pub conclusion: Conclusion,
    pub truncation: u32,
    pub tolerances: Tolerances,
    pub versions: Versions,
}

/// Hartogs exponent of the egg reduction, `1/(k (n+p+1))`.
pub fn egg_reduction_exponent(n: u32, p: u32, k: &Rational) -> Rational {
    int(1) / (k * int((n + p + 1) as i64))
}

pub fn rigidity_report(spec: &DomainSpec, truncation: u32) -> Result<RigidityReport> {
    let target = spec
        .target
        .as_ref()
        .ok_or_else(|| Error::ParameterOutOfRange("rigidity needs target data N and lambda".into()))?;
    rigidity_report_with_lambda(spec, &Lambda::Exact(target.lambda.clone()), target.big_n, truncation)
}

/// As [`rigidity_report`] with the scale given separately, so that
/// non-rational scales can be reported as out of scope.
pub fn rigidity_report_with_lambda(
    spec: &DomainSpec,
    lambda: &Lambda,
    big_n: u32,
    truncation: u32,
) -> Result<RigidityReport> {
    spec.validate()?;
    if (big_n as usize) < spec.complex_dim() {
        return Err(Error::ParameterOutOfRange(format!(
            "N = {big_n} is below the domain dimension {}",
            spec.complex_dim()
        )));
    }
    let mut notes = Vec::new();
    let (n, m, s) = match &spec.domain {
        DomainKind::Hartogs { n, m, s } => (*n, *m, s.clone()),
        DomainKind::Egg { n, p, q, k } => {
            let s_star = egg_reduction_exponent(*n, *p, k);
            notes.push(format!(
                "egg reduced to the Hartogs domain over B^{} with fiber C^{q} and exponent s* = 1/(k(n+p+1)) = {}; the exponent 1/k = {} does not describe the same domain unless n + p = 0",
                n + p,
                format_rational(&s_star),
                format_rational(&(int(1) / k)),
            ));
            (n + p, *q, s_star)
        }
        DomainKind::Ball { .. } => {
            return Err(Error::OutsideScope("rigidity reports cover Hartogs and egg domains".into()));
        }
    };
    let reduced_to = ReducedHartogs { n, m, s: format_rational(&s) };
    let tolerances = Tolerances::default();
    let mut checks = RigidityChecks {
        reduced_to,
        s_nonzero: !s.is_zero(),
        top_coeff_nonzero: None,
        T2_constant: None,
        T2_divides_T1: None,
        T2_at_root: None,
        zero_locus_matches: None,
        calabi_verdict: None,
        notes,
    };
    let finish = |checks: RigidityChecks, conclusion| RigidityReport {
        spec: spec.clone(),
        checks,
        conclusion,
        truncation,
        tolerances: tolerances.clone(),
        versions: Versions::default(),
    };
    if s.is_zero() {
        checks.notes.push("s = 0: product of a ball and a Euclidean ball, which is not biholomorphic to a ball".into());
        return Ok(finish(checks, Conclusion::ObstructionFound));
    }
    let coeff = crate::kernels::hartogs_coefficients(n, m, &s)?;
    checks.zero_locus_matches = Some(zero_locus_s(n, &s));
    let order = truncation.max(1) as usize;

    let exact = match lambda {
        Lambda::Exact(l) => {
            let pair = check_algebraic_constraints(&coeff, n, m, l, big_n)?;
            let t2_expected = (&coeff.c_normalized[n as usize]
                * crate::exact::factorial_rational((n + m) as u64))
            .pow(pair.delta as i32);
            if pair.t2_at_root != t2_expected {
                return Err(Error::Inconsistent("T2 at X = 1/C differs from (c'(s,n)(n+m)!)^delta".into()));
            }
            checks.top_coeff_nonzero = Some(pair.top_coeff_nonzero);
            checks.T2_constant = Some(pair.t2_constant);
            checks.T2_divides_T1 = Some(pair.t2_divides_t1);
            checks.T2_at_root = Some(format_rational(&pair.t2_at_root));
            let alpha = hartogs_slice_alpha(&coeff, n, m, l, big_n, order)?;
            let diag = calabi_diag_test(&beta_from_alpha(&alpha, m, truncation), big_n, tolerances.psd);
            checks.calabi_verdict = Some(CalabiSummary::from(&diag));
            Some(pair.passes() && checks.zero_locus_matches == Some(true))
        }
        Lambda::Approx(l) => {
            if !(l.is_finite() && *l > 0.0) {
                return Err(Error::ParameterOutOfRange("lambda must be positive".into()));
            }
            checks.notes.push(
                "lambda is not rational: the exact divisibility checks are outside certified scope".into(),
            );
            let alpha = slice_alpha_f64(&coeff, n, m, l / (big_n as f64 + 1.0), order)?;
            let diag = calabi_diag_test(&beta_from_alpha(&alpha, m, truncation), big_n, tolerances.psd);
            checks.calabi_verdict = Some(CalabiSummary::from(&diag));
            None
        }
    };
    let conclusion = match exact {
        Some(true) => {
            if let Some(c) = &checks.calabi_verdict {
                if c.verdict != CalabiVerdict::ConsistentWithImmersion {
                    checks.notes.push(
                        "the domain is a ball; this scale and target dimension admit no immersion at the computed truncation"
                            .into(),
                    );
                }
            }
            Conclusion::BallCertified
        }
        Some(false) => Conclusion::ObstructionFound,
        None => Conclusion::InconclusiveAtTruncation,
    };
    Ok(finish(checks, conclusion))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentComparison {
    pub s: String,
    /// Sample pairs lying in the Hartogs domain after fiber scaling.
    pub pairs_compared: usize,
    pub max_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EggReductionReport {
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub k: String,
    pub samples: usize,
    /// Egg against `B^{n+p+q}` when `k = 1`.
    pub ball_deviation: Option<f64>,
    /// Full domain against `(B^{n+p})_{q, s*}`.
    pub computed_exponent: ExponentComparison,
    /// The same comparison restricted to `xi1 = 0`.
    pub computed_exponent_slice: ExponentComparison,
    /// Full domain against `(B^{n+p})_{q, 1/k}`.
    pub inverse_k_exponent: ExponentComparison,
    pub base_pullback_expected: f64,
    pub base_pullback_max_deviation: f64,
    pub notes: Vec<String>,
}

pub fn egg_reduction_check(n: u32, p: u32, q: u32, k: &Rational, samples: usize) -> Result<EggReductionReport> {
    egg_reduction_check_seeded(n, p, q, k, samples, 0x5eed)
}

pub fn egg_reduction_check_seeded(
    n: u32,
    p: u32,
    q: u32,
    k: &Rational,
    samples: usize,
    seed: u64,
) -> Result<EggReductionReport> {
    let spec = DomainSpec::egg(n, p, q, k.clone());
    spec.validate()?;
    if samples == 0 {
        return Err(Error::ParameterOutOfRange("at least one sample pair is needed".into()));
    }
    let egg = EggKernel::new(n, p, q, k.clone(), HjmEvaluation::ClosedForm)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = 0.6;
    let pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..samples)
        .map(|_| {
            (
                crate::kernels::sample_point(&spec, &mut rng, depth),
                crate::kernels::sample_point(&spec, &mut rng, depth),
            )
        })
        .collect();
    let nb = n as usize;
    let slice_pairs: Vec<(Vec<Complex64>, Vec<Complex64>)> = pairs
        .iter()
        .map(|(a, b)| {
            let zero = |v: &[Complex64]| {
                let mut v = v.to_vec();
                v[nb..nb + p as usize].iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                v
            };
            (zero(a), zero(b))
        })
        .collect();

    let ball_deviation = if k.is_one() {
        let ball = BallKernel::new(n + p + q)?;
        Some(max_deviation(&egg, &ball, &pairs, |v| Some(v.to_vec()))?.1)
    } else {
        None
    };

    let compare = |s: &Rational, set: &[(Vec<Complex64>, Vec<Complex64>)]| -> Result<ExponentComparison> {
        let hartogs = HartogsKernel::new(n + p, q, s.clone())?;
        // fiber scaling carrying ||xi2||^2 < N^{1/k} to ||xi2'||^2 < K^{-s}
        let scale = ball_constant(n + p).powf(-to_f64(s)).sqrt();
        let map = |v: &[Complex64]| {
            let mut out = v.to_vec();
            out[(n + p) as usize..].iter_mut().for_each(|c| *c *= scale);
            hartogs.contains(&out).then_some(out)
        };
        let (count, dev) = max_deviation(&egg, &hartogs, set, map)?;
        Ok(ExponentComparison { s: format_rational(s), pairs_compared: count, max_deviation: (count > 0).then_some(dev) })
    };
    let s_star = egg_reduction_exponent(n, p, k);
    let computed_exponent = compare(&s_star, &pairs)?;
    let computed_exponent_slice = compare(&s_star, &slice_pairs)?;
    let inverse_k_exponent = compare(&(int(1) / k), &pairs)?;

    let g = (n + 1) as f64;
    let kf = to_f64(k);
    let base_pullback_expected = p as f64 / g + q as f64 / (kf * g) + 1.0;
    let ball = BallKernel::new(n)?;
    let mut base_pullback_max_deviation: f64 = 0.0;
    for (a, b) in &pairs {
        let lift = |v: &[Complex64]| {
            let mut out = v[..nb].to_vec();
            out.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), (p + q) as usize));
            out
        };
        let d_base = bergman_diastasis(&ball, &a[..nb], &b[..nb])?;
        if d_base < 1e-6 {
            continue;
        }
        let d_egg = bergman_diastasis(&egg, &lift(a), &lift(b))?;
        base_pullback_max_deviation = base_pullback_max_deviation.max((d_egg / d_base - base_pullback_expected).abs());
    }
    let mut notes = vec![format!(
        "computed Hartogs exponent s* = 1/(k(n+p+1)) = {}; the exponent 1/k = {} is compared as well",
        format_rational(&s_star),
        format_rational(&(int(1) / k))
    )];
    if let (Some(a), Some(b)) = (computed_exponent.max_deviation, inverse_k_exponent.max_deviation) {
        if b > 1e3 * a.max(1e-12) {
            notes.push("the exponent 1/k does not reproduce the egg diastasis".into());
        }
    }
    Ok(EggReductionReport {
        n,
        p,
        q,
        k: format_rational(k),
        samples,
        ball_deviation,
        computed_exponent,
        computed_exponent_slice,
        inverse_k_exponent,
        base_pullback_expected,
        base_pullback_max_deviation,
        notes,
    })
}

fn max_deviation<A, B, F>(
    a: &A,
    b: &B,
    pairs: &[(Vec<Complex64>, Vec<Complex64>)],
    map: F,
) -> Result<(usize, f64)>
where
    A: BergmanKernel + ?Sized,
    B: BergmanKernel + ?Sized,
    F: Fn(&[Complex64]) -> Option<Vec<Complex64>>,
{
    let mut count = 0;
    let mut worst: f64 = 0.0;
    for (z, w) in pairs {
        let (Some(zz), Some(ww)) = (map(z), map(w)) else {
            continue;
        };
        let da = bergman_diastasis(a, z, w)?;
        let db = bergman_diastasis(b, &zz, &ww)?;
        worst = worst.max((da - db).abs());
        count += 1;
    }
    Ok((count, worst))
}

/// `lambda/(N+1)` in lowest terms as `(delta, epsilon)`.
pub fn delta_epsilon(lambda: &Rational, big_n: u32) -> (i64, i64) {
    let r = lambda / int(big_n as i64 + 1);
    (r.numer().to_i64().unwrap_or(i64::MAX), r.denom().to_i64().unwrap_or(i64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::hartogs_coefficients;
    use crate::exact::rat;

    #[test]
    fn zero_locus_examples() {
        assert!(zero_locus_s(1, &rat(1, 2)));
        assert!(zero_locus_s(2, &rat(1, 3)));
        assert!(!zero_locus_s(2, &rat(1, 2)));
        assert!(!zero_locus_s(1, &int(0)));
    }

    #[test]
    fn divisibility_examples() {
        let c = hartogs_coefficients(1, 1, &rat(1, 2)).unwrap();
        let pair = check_algebraic_constraints(&c, 1, 1, &int(2), 3).unwrap();
        assert_eq!(pair.delta, 1);
        assert!(pair.t2_constant && pair.t2_divides_t1 && pair.top_coeff_nonzero);
        assert_eq!(pair.t2, RationalPolynomial::constant(int(1)));

        let c = hartogs_coefficients(1, 1, &rat(1, 3)).unwrap();
        let pair = check_algebraic_constraints(&c, 1, 1, &int(4), 3).unwrap();
        assert_eq!(pair.delta, 1);
        assert_eq!(pair.t2, RationalPolynomial::from_coeffs(vec![int(1), rat(-1, 5)]));
        assert_eq!(pair.t2_at_root, rat(4, 5));
        assert!(!pair.t2_constant && !pair.t2_divides_t1);
    }

    #[test]
    fn report_examples() {
        let r = rigidity_report(&DomainSpec::hartogs(1, 1, rat(1, 2)).with_target(3, rat(3, 4)), 30).unwrap();
        assert_eq!(r.conclusion, Conclusion::BallCertified);
        let r = rigidity_report(&DomainSpec::hartogs(1, 1, rat(1, 3)).with_target(5, int(2)), 30).unwrap();
        assert_eq!(r.conclusion, Conclusion::ObstructionFound);
        assert_eq!(r.checks.calabi_verdict.unwrap().verdict, CalabiVerdict::ImmersionImpossible);
        let r = rigidity_report(&DomainSpec::hartogs(2, 1, rat(1, 3)).with_target(3, int(1)), 30).unwrap();
        assert_eq!(r.conclusion, Conclusion::BallCertified);
        let r = rigidity_report_with_lambda(
            &DomainSpec::hartogs(1, 1, rat(1, 3)),
            &Lambda::Approx(std::f64::consts::SQRT_2),
            5,
            30,
        )
        .unwrap();
        assert_eq!(r.conclusion, Conclusion::InconclusiveAtTruncation);
    }

    #[test]
    fn egg_reports_follow_k() {
        let r = rigidity_report(&DomainSpec::egg(1, 1, 1, int(1)).with_target(3, int(1)), 30).unwrap();
        assert_eq!(r.conclusion, Conclusion::BallCertified);
        let r = rigidity_report(&DomainSpec::egg(1, 1, 1, int(2)).with_target(3, int(1)), 30).unwrap();
        assert_eq!(r.conclusion, Conclusion::ObstructionFound);
        assert_eq!(r.checks.reduced_to.s, "1/6");
    }

    #[test]
    fn delta_epsilon_lowest_terms() {
        assert_eq!(delta_epsilon(&rat(3, 4), 3), (3, 16));
        assert_eq!(delta_epsilon(&int(2), 5), (1, 3));
    }
}
