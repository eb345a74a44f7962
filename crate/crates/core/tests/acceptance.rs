//! Acceptance suite. Prints one line per criterion and exits nonzero if a
//! criterion fails that is not listed as a known failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use bergman_core::calabi::{
    beta_from_alpha, calabi_diag_test, hartogs_slice_alpha, pure_ball_slice_alpha, slice_constant, slice_expansion,
    CalabiVerdict,
};
use bergman_core::diastasis::bergman_diastasis;
use bergman_core::exact::{binomial, factorial_rational, int, rat, to_f64, Rational};
use bergman_core::kernels::{
    ball_constant, ball_kernel, egg_coefficients, kernel_for, lebesgue_ratio, norm_sq, sample_point, BallKernel,
    DomainSpec, EggKernel, EggLambda, HartogsKernel, HjmEvaluation,
};
use bergman_core::oracle::{OracleKernel, QuadratureSpec};
use bergman_core::rigidity::zero_locus_s;
use common::*;
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Check {
    let mut cases = 0;
    for n in 1..=3u32 {
        for a in 1..=6i64 {
            for b in 1..=6i64 {
                let s = rat(a, b);
                let coeff = bergman_core::kernels::hartogs_coefficients(n, 1, &s).map_err(err)?;
                let vanish = coeff.c[..n as usize].iter().all(Zero::is_zero);
                let locus = zero_locus_s(n, &s);
                let ball = s == rat(1, n as i64 + 1);
                ensure(vanish == locus && locus == ball, || {
                    format!("n={n} s={a}/{b}: vanish={vanish} locus={locus} ball={ball}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n, s) pairs, three conditions agree"))
}

fn criterion_2() -> Check {
    for n in 1..=4u32 {
        for m in 1..=3u32 {
            let coeff = bergman_core::kernels::hartogs_coefficients(n, m, &rat(1, n as i64 + 1)).map_err(err)?;
            let mut expected = vec![Rational::zero(); n as usize + 1];
            expected[n as usize] = int(1) / factorial_rational(n as u64);
            ensure(coeff.c == expected, || format!("n={n} m={m}: {:?}", coeff.c))?;
        }
    }
    Ok("c = (0, ..., 0, 1/n!) for n <= 4".into())
}

fn criterion_3() -> Check {
    let mut worst: f64 = 0.0;
    let mut r = rng(3);
    for n in 1..=2u32 {
        for m in 1..=2u32 {
            let s = rat(1, n as i64 + 1);
            let spec = DomainSpec::hartogs(n, m, s.clone());
            let hartogs = HartogsKernel::new(n, m, s).map_err(err)?;
            let ball = BallKernel::new(n + m).map_err(err)?;
            let scale = ball_constant(n).powf(1.0 / (2.0 * (n as f64 + 1.0)));
            let lift = |p: &[Complex64]| -> Vec<Complex64> {
                p.iter().enumerate().map(|(i, c)| if i < n as usize { *c } else { c * scale }).collect()
            };
            for _ in 0..20 {
                let z = sample_point(&spec, &mut r, 0.9);
                let w = sample_point(&spec, &mut r, 0.9);
                let a = bergman_diastasis(&hartogs, &z, &w).map_err(err)?;
                let b = bergman_diastasis(&ball, &lift(&z), &lift(&w)).map_err(err)?;
                worst = worst.max((a - b).abs());
            }
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("max |D - D_ball| = {worst:.2e} over 80 pairs"))
}

fn criterion_4() -> Check {
    let mut worst: f64 = 0.0;
    let mut r = rng(4);
    for (n, p, q) in [(1u32, 1u32, 1u32), (2, 1, 1)] {
        let spec = DomainSpec::egg(n, p, q, int(1));
        let egg = EggKernel::new(n, p, q, int(1), HjmEvaluation::ClosedForm).map_err(err)?;
        let ball = BallKernel::new(n + p + q).map_err(err)?;
        for _ in 0..10 {
            let z = sample_point(&spec, &mut r, 0.9);
            let w = sample_point(&spec, &mut r, 0.9);
            let a = bergman_diastasis(&egg, &z, &w).map_err(err)?;
            let b = bergman_diastasis(&ball, &z, &w).map_err(err)?;
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst < 1e-7, || format!("max deviation {worst:e}"))?;
    let lambda = EggLambda::new(egg_coefficients(1).map_err(err)?, int(1), HjmEvaluation::ClosedForm).map_err(err)?;
    let l00 = lambda.derivative(1, 1, 0.0, 0.0).map_err(err)?;
    ensure((l00 - 6.0).abs() < 1e-12, || format!("Lambda(0,0) = {l00}"))?;
    Ok(format!("max |D_egg - D_ball| = {worst:.2e}; Lambda(0,0) = {l00}"))
}

fn criterion_5() -> Check {
    let quad = QuadratureSpec::default();
    let domains = [
        DomainSpec::ball(1),
        DomainSpec::ball(2),
        DomainSpec::hartogs(1, 1, rat(1, 3)),
        DomainSpec::egg(1, 1, 1, int(2)),
    ];
    let mut summary = Vec::new();
    for spec in &domains {
        let oracle = OracleKernel::new(spec, &quad).map_err(err)?;
        let closed = kernel_for(spec).map_err(err)?;
        let ratio = lebesgue_ratio(spec);
        let mut r = rng(5);
        let points: Vec<_> = (0..20).map(|_| sample_point(spec, &mut r, 0.2)).collect();
        let (mut rel, mut dia): (f64, f64) = (0.0, 0.0);
        for z in &points {
            let a = oracle.evaluate(z, z).map_err(err)?.value.re;
            let b = closed.kernel_diag(z).map_err(err)? / ratio;
            rel = rel.max((a - b).abs() / b);
        }
        for pair in points.windows(2) {
            let a = bergman_diastasis(&oracle, &pair[0], &pair[1]).map_err(err)?;
            let b = bergman_diastasis(closed.as_ref(), &pair[0], &pair[1]).map_err(err)?;
            dia = dia.max((a - b).abs());
        }
        ensure(rel < 1e-5 && dia < 1e-4, || format!("{spec}: relative {rel:e}, diastasis {dia:e}"))?;
        summary.push(format!("{spec}: {rel:.1e}/{dia:.1e}"));
    }
    Ok(summary.join("; "))
}

fn criterion_6() -> Check {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = r.gen_range(1..=3u32);
        let m = r.gen_range(1..=3u32);
        let s = rat(r.gen_range(1..=6), r.gen_range(1..=6));
        let lambda = rat(r.gen_range(1..=12), r.gen_range(1..=4));
        let big_n = r.gen_range(1..=8u32);
        let coeff = bergman_core::kernels::hartogs_coefficients(n, m, &s).map_err(err)?;
        let alpha = hartogs_slice_alpha(&coeff, n, m, &lambda, big_n, 10).map_err(err)?;
        let rho = &lambda / int(big_n as i64 + 1);
        let oracle = alpha_oracle(&coeff, m, &rho, slice_constant(n, &s), 10);
        ensure(alpha[0] == 0.0, || format!("alpha(0) = {}", alpha[0]))?;
        for v in 1..=10 {
            let dev = (alpha[v] - oracle[v]).abs() / oracle[v].abs().max(1.0);
            worst = worst.max(dev);
            ensure(dev < 1e-9, || format!("n={n} m={m} s={s} lambda={lambda} N={big_n} v={v}: {} vs {}", alpha[v], oracle[v]))?;
        }
    }
    Ok(format!("20 tuples, max deviation {worst:.2e}"))
}

/// Whether `binom(mu, v) (-1)^{v+1}`, `1 <= v <= order`, is nonnegative and
/// vanishes from some `v` on, decided exactly.
fn ball_sequence_is_admissible(mu: &Rational, order: usize) -> bool {
    let terms: Vec<Rational> = (1..=order)
        .map(|v| if v % 2 == 1 { binomial(mu, v) } else { -binomial(mu, v) })
        .collect();
    let nonneg = terms.iter().all(|t| !t.is_negative());
    let finite = terms.iter().rev().take(order / 2).all(Zero::is_zero);
    nonneg && finite
}

fn calabi_mu_verdicts() -> Vec<(Rational, CalabiVerdict, bool)> {
    [rat(1, 1), rat(2, 1), rat(3, 1), rat(1, 2), rat(3, 2)]
        .into_iter()
        .map(|mu| {
            let alpha = pure_ball_slice_alpha(to_f64(&mu), 40).expect("series");
            let beta = beta_from_alpha(&alpha, 1, 40);
            let verdict = calabi_diag_test(&beta, 1, 1e-10).verdict;
            let admissible = ball_sequence_is_admissible(&mu, 40);
            (mu, verdict, admissible)
        })
        .collect()
}

fn criterion_7() -> Check {
    // (a) unit slope: the rescaled diastasis is that of a ball
    for (n, m) in [(1u32, 1u32), (1, 2), (2, 1), (2, 2), (3, 1)] {
        let big_n = n + m;
        let lambda = rat(big_n as i64 + 1, (n + m + 1) as i64);
        let s = rat(1, n as i64 + 1);
        let coeff = bergman_core::kernels::hartogs_coefficients(n, m, &s).map_err(err)?;
        let exp = slice_expansion(&coeff, n, m, &lambda, big_n, 30).map_err(err)?;
        let d = calabi_diag_test(&exp.beta, big_n, 1e-10);
        ensure(d.is_psd && d.truncated_rank == m as usize, || {
            format!("(a) n={n} m={m}: psd={} rank={}", d.is_psd, d.truncated_rank)
        })?;
    }
    // (b)
    let coeff = bergman_core::kernels::hartogs_coefficients(1, 1, &rat(1, 3)).map_err(err)?;
    let exp = slice_expansion(&coeff, 1, 1, &int(2), 5, 30).map_err(err)?;
    let d = calabi_diag_test(&exp.beta, 5, 1e-10);
    ensure(d.verdict == CalabiVerdict::ImmersionImpossible && d.truncated_rank > 5, || {
        format!("(b) verdict {:?} rank {}", d.verdict, d.truncated_rank)
    })?;
    // (c) the diagnostic reproduces the exact verdict on the sequence
    for (mu, verdict, admissible) in calabi_mu_verdicts() {
        let consistent = verdict == CalabiVerdict::ConsistentWithImmersion;
        ensure(consistent == admissible && verdict != CalabiVerdict::Inconclusive, || {
            format!("(c) mu={mu}: verdict {verdict:?}, exact admissible {admissible}")
        })?;
    }
    Ok(format!("(a) rank m; (b) rank {} > 5; (c) verdicts match the exact sequences", d.truncated_rank))
}

/// The hyperbolic-target law read literally: admissible iff `mu` is a positive integer.
fn criterion_7c_literal() -> Check {
    let mut mismatches = Vec::new();
    for (mu, verdict, _) in calabi_mu_verdicts() {
        let predicted = mu.is_integer() && mu.is_positive();
        let consistent = verdict == CalabiVerdict::ConsistentWithImmersion;
        if predicted != consistent {
            mismatches.push(format!("mu={mu} gives {verdict:?}"));
        }
    }
    ensure(mismatches.is_empty(), || {
        format!("{}; binom(mu,2)(-1)^3 < 0 for every integer mu >= 2, so only mu = 1 is admissible", mismatches.join(", "))
    })?;
    Ok("positive integers are exactly the admissible mu".into())
}

fn criterion_8() -> Check {
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for (n, m, s) in [(1u32, 1u32, rat(1, 3)), (2, 1, rat(3, 2)), (2, 3, rat(1, 5)), (3, 2, rat(2, 1))] {
        let k = HartogsKernel::new(n, m, s.clone()).map_err(err)?;
        let base = BallKernel::new(n).map_err(err)?;
        let expected = m as f64 * to_f64(&s) + 1.0;
        for _ in 0..10 {
            let z = ball_point(&mut r, n as usize, 0.9);
            let w = ball_point(&mut r, n as usize, 0.9);
            let pad = |p: &[Complex64]| [p.to_vec(), vec![Complex64::zero(); m as usize]].concat();
            let ratio = bergman_diastasis(&k, &pad(&z), &pad(&w)).map_err(err)? / bergman_diastasis(&base, &z, &w).map_err(err)?;
            worst = worst.max((ratio - expected).abs());
        }
    }
    for (n, p, q, kk) in [(1u32, 1u32, 1u32, rat(2, 1)), (2, 2, 1, rat(1, 2)), (1, 1, 2, rat(3, 1))] {
        let egg = EggKernel::new(n, p, q, kk.clone(), HjmEvaluation::ClosedForm).map_err(err)?;
        let base = BallKernel::new(n).map_err(err)?;
        let g = n as f64 + 1.0;
        let expected = p as f64 / g + q as f64 / (to_f64(&kk) * g) + 1.0;
        for _ in 0..10 {
            let z = ball_point(&mut r, n as usize, 0.9);
            let w = ball_point(&mut r, n as usize, 0.9);
            let pad = |x: &[Complex64]| [x.to_vec(), vec![Complex64::zero(); (p + q) as usize]].concat();
            let ratio = bergman_diastasis(&egg, &pad(&z), &pad(&w)).map_err(err)? / bergman_diastasis(&base, &z, &w).map_err(err)?;
            worst = worst.max((ratio - expected).abs());
        }
    }
    ensure(worst < 1e-8, || format!("max deviation {worst:e}"))?;
    Ok(format!("max ratio deviation {worst:.2e}"))
}

fn criterion_9() -> Check {
    let mut r = rng(9);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = 1 + i % 3;
        let phi = random_mobius(&mut r, n);
        let z = ball_point(&mut r, n, 0.95);
        let w = ball_point(&mut r, n, 0.95);
        let lhs = ball_kernel(n as u32, &z, &w).map_err(err)?;
        let rhs = phi.jacobian(&z) * ball_kernel(n as u32, &phi.map(&z), &phi.map(&w)).map_err(err)? * phi.jacobian(&w).conj();
        worst = worst.max((lhs - rhs).norm() / lhs.norm());
    }
    ensure(worst < 1e-10, || format!("max relative deviation {worst:e}"))?;
    // K = phi / psi^{n+1} with psi = 1 - |z|^2, phi = n!/pi^n and no logarithmic term
    for n in 1..=3u32 {
        let phi0 = to_f64(&factorial_rational(n as u64)) / PI.powi(n as i32);
        ensure((ball_constant(n) - phi0).abs() <= 4.0 * f64::EPSILON * phi0, || {
            format!("n={n}: constant {} vs {phi0}", ball_constant(n))
        })?;
        for _ in 0..20 {
            let z = ball_point(&mut r, n as usize, 0.99);
            let psi = 1.0 - norm_sq(&z);
            let k = ball_kernel(n, &z, &z).map_err(err)?.re;
            ensure(((k * psi.powi(n as i32 + 1)) - phi0).abs() <= 1e-12 * phi0, || format!("n={n}: {k}"))?;
        }
    }
    Ok(format!("50 automorphisms, max relative deviation {worst:.2e}; phi = n!/pi^n, no log term"))
}

struct Criterion {
    id: &'static str,
    budget: Duration,
    run: fn() -> Check,
    known_failure: bool,
}

fn main() {
    let criteria = [
        Criterion { id: "1", budget: Duration::from_secs(1), run: criterion_1, known_failure: false },
        Criterion { id: "2", budget: Duration::from_secs(1), run: criterion_2, known_failure: false },
        Criterion { id: "3", budget: Duration::from_secs(5), run: criterion_3, known_failure: false },
        Criterion { id: "4", budget: Duration::from_secs(10), run: criterion_4, known_failure: false },
        Criterion { id: "5", budget: Duration::from_secs(120), run: criterion_5, known_failure: false },
        Criterion { id: "6", budget: Duration::from_secs(30), run: criterion_6, known_failure: false },
        Criterion { id: "7", budget: Duration::from_secs(30), run: criterion_7, known_failure: false },
        Criterion { id: "7c-literal", budget: Duration::from_secs(30), run: criterion_7c_literal, known_failure: true },
        Criterion { id: "8", budget: Duration::from_secs(10), run: criterion_8, known_failure: false },
        Criterion { id: "9", budget: Duration::from_secs(5), run: criterion_9, known_failure: false },
    ];
    let mut unexpected = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= c.budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, budget {:?}", c.budget))
            }
        });
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) if c.known_failure => ("FAIL (known)", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {:<11} {status:<12} [{elapsed:>9.2?}] {detail}", c.id);
        if outcome.is_ok() == c.known_failure {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criterion result(s) differ from expectation");
        std::process::exit(1);
    }
}
