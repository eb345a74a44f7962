use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::ball::{inner, norm_sq};
use super::BergmanKernel;
use crate::error::{Error, Result};
use crate::exact::{
    chi_polynomial, egg_bj, factorial, factorial_rational, format_rational, int, pochhammer, to_f64,
    to_rising_factorial_basis, Rational, RationalPolynomial,
};
use crate::series::{Jet2, JetScalar};

/// `chi`, `chi(0)` and `b_1..b_{n+2}` for the egg over `B^n` (rank 1, `a = 2`, `b = n - 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EggCoefficients {
    pub n: u32,
    pub chi: RationalPolynomial,
    pub chi0: Rational,
    pub bj: Vec<Rational>,
    pub genus: u32,
}

#[derive(Serialize)]
struct EggCoefficientsView {
    n: u32,
    chi: Vec<String>,
    chi0: String,
    bj: Vec<String>,
    genus: u32,
}

impl Serialize for EggCoefficients {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        EggCoefficientsView {
            n: self.n,
            chi: self.chi.coeffs().iter().map(format_rational).collect(),
            chi0: format_rational(&self.chi0),
            bj: self.bj.iter().map(format_rational).collect(),
            genus: self.genus,
        }
        .serialize(ser)
    }
}

pub fn egg_coefficients(n: u32) -> Result<EggCoefficients> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("n must be at least 1".into()));
    }
    let chi = chi_polynomial(1, 2, n - 1);
    let chi0 = chi.coeff(0);
    if chi0.is_zero() {
        return Err(Error::Inconsistent("chi(0) vanishes".into()));
    }
    let bj = egg_bj(&chi, n as usize)?;
    Ok(EggCoefficients { n, chi, chi0, bj, genus: n + 1 })
}

/// How the one-variable series `H_{jm}(u) = sum_l ((l+1)/k + 2 + m)_{j-m} u^l` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HjmEvaluation {
    /// Exact resummation: the coefficient is a polynomial in `l`, so the
    /// series is a finite combination of `(1 - u)^{-(i+1)}`.
    #[default]
    ClosedForm,
    /// Partial sum of `terms` terms; fails when the tail bound exceeds `tolerance`.
    Truncated { terms: usize, tolerance: f64 },
}


#[derive(Clone, Debug)]
struct HjmTerm {
    j: usize,
    m: usize,
    /// `(-j)_m (2)_m / m!`
    weight: f64,
    /// `e_i i!` with `P(l) = sum_i e_i (l+1)_i`
    closed: Vec<f64>,
    poly: Vec<f64>,
}

impl HjmTerm {
    fn poly_at(&self, l: f64) -> f64 {
        self.poly.iter().rev().fold(0.0, |acc, c| acc * l + c)
    }
}

/// `Lambda(t1, t2)` with its partial derivatives, for a fixed base and `k`.
#[derive(Clone, Debug)]
pub struct EggLambda {
    coefficients: EggCoefficients,
    k: Rational,
    k_f64: f64,
    mode: HjmEvaluation,
    terms: Vec<HjmTerm>,
    bj: Vec<f64>,
    prefactor: f64,
}

impl EggLambda {
    pub fn new(coefficients: EggCoefficients, k: Rational, mode: HjmEvaluation) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::ParameterOutOfRange(format!("k = {} must be positive", format_rational(&k))));
        }
        let jmax = coefficients.bj.len();
        let inv_k = Rational::from_integer(1.into()) / &k;
        let mut terms = Vec::new();
        for j in 1..=jmax {
            for m in 0..=j {
                let mut p = RationalPolynomial::one();
                for r in 0..(j - m) {
                    let constant = &inv_k + int((2 + m + r) as i64);
                    p = &p * &RationalPolynomial::linear(constant, inv_k.clone());
                }
                let closed = to_rising_factorial_basis(&p)
                    .iter()
                    .enumerate()
                    .map(|(i, e)| to_f64(&(e * factorial_rational(i as u64))))
                    .collect();
                let weight = pochhammer(int(-(j as i64)), m) * pochhammer(int(2), m) / factorial_rational(m as u64);
                terms.push(HjmTerm {
                    j,
                    m,
                    weight: to_f64(&weight),
                    closed,
                    poly: p.coeffs().iter().map(to_f64).collect(),
                });
            }
        }
        // n! is 1/vol(B^n) for the measure dV/pi^n.
        let volume = factorial(coefficients.n as u64);
        let prefactor = to_f64(&(&k * Rational::from_integer(volume) / &coefficients.chi0));
        Ok(EggLambda {
            bj: coefficients.bj.iter().map(to_f64).collect(),
            coefficients,
            k_f64: to_f64(&k),
            k,
            mode,
            terms,
            prefactor,
        })
    }

    pub fn coefficients(&self) -> &EggCoefficients {
        &self.coefficients
    }

    pub fn k(&self) -> &Rational {
        &self.k
    }

    pub fn mode(&self) -> HjmEvaluation {
        self.mode
    }

    /// `H_{jm}(u)` as a plain number.
    pub fn hjm(&self, j: usize, m: usize, u: f64) -> Result<f64> {
        let term = self
            .terms
            .iter()
            .find(|t| t.j == j && t.m == m)
            .ok_or_else(|| Error::ParameterOutOfRange(format!("no H_{{{j}{m}}} for this base")))?;
        let jet = Jet2::constant(u, 0, 0);
        let inv = self.inverse_powers(&jet, term.closed.len())?;
        Ok(self.eval_hjm(term, &jet, &inv)?.value())
    }

    /// `(1 - u)^{-(i+1)}` for `i < count`.
    fn inverse_powers<T: JetScalar>(&self, u: &Jet2<T>, count: usize) -> Result<Vec<Jet2<T>>> {
        if self.mode != HjmEvaluation::ClosedForm {
            return Ok(Vec::new());
        }
        let one_minus = u.scale(T::from_f64(-1.0)).add_scalar(T::from_f64(1.0));
        let first = one_minus.recip()?;
        let mut out = vec![first.clone()];
        while out.len() < count {
            let next = out.last().expect("non-empty") * &first;
            out.push(next);
        }
        Ok(out)
    }

    fn eval_hjm<T: JetScalar>(&self, term: &HjmTerm, u: &Jet2<T>, inv: &[Jet2<T>]) -> Result<Jet2<T>> {
        let (p, q) = u.orders();
        match self.mode {
            HjmEvaluation::ClosedForm => {
                let mut acc = Jet2::constant(T::from_f64(0.0), p, q);
                for (e, pow) in term.closed.iter().zip(inv) {
                    if *e != 0.0 {
                        acc = &acc + &pow.scale(T::from_f64(*e));
                    }
                }
                Ok(acc)
            }
            HjmEvaluation::Truncated { terms, tolerance } => {
                let u0 = u.value().magnitude();
                let big_l = terms as f64;
                let (pl, pl1) = (term.poly_at(big_l), term.poly_at(big_l + 1.0));
                let ratio = if pl == 0.0 { 0.0 } else { u0 * (pl1 / pl).abs() };
                let tail = if ratio >= 1.0 {
                    f64::INFINITY
                } else {
                    pl.abs() * u0.powf(big_l) / (1.0 - ratio)
                };
                if tail > tolerance {
                    return Err(Error::SeriesDivergence { tail, tolerance });
                }
                let coeffs: Vec<f64> = (0..terms).map(|l| term.poly_at(l as f64)).collect();
                Ok(u.compose_series(&coeffs))
            }
        }
    }

    /// Jet of `Lambda` at `(t1, t2)` carrying derivatives up to `(p_order, q_order)`.
    pub fn jet<T: JetScalar>(&self, t1: T, t2: T, p_order: usize, q_order: usize) -> Result<Jet2<T>> {
        let one = T::from_f64(1.0);
        let t1j = Jet2::var1(t1, p_order, q_order);
        let t2j = Jet2::var2(t2, p_order, q_order);
        let one_minus_t1 = t1j.scale(-one).add_scalar(one);
        let w = one_minus_t1.powf(-1.0 / self.k_f64)?;
        let u = &t2j * &w;
        let jmax = self.bj.len();
        let inv = self.inverse_powers(&u, jmax + 1)?;
        let inv_t1 = one_minus_t1.recip()?;

        let mut t1_pows = vec![Jet2::constant(one, p_order, q_order)];
        let mut inv_t1_pows = vec![Jet2::constant(one, p_order, q_order)];
        for _ in 0..=jmax {
            let a = t1_pows.last().expect("non-empty") * &t1j;
            let b = inv_t1_pows.last().expect("non-empty") * &inv_t1;
            t1_pows.push(a);
            inv_t1_pows.push(b);
        }

        let mut h = Jet2::constant(T::from_f64(0.0), p_order, q_order);
        for j in 1..=jmax {
            let bj = self.bj[j - 1];
            if bj == 0.0 {
                continue;
            }
            let mut inner_sum = Jet2::constant(T::from_f64(0.0), p_order, q_order);
            for term in self.terms.iter().filter(|t| t.j == j) {
                if term.weight == 0.0 {
                    continue;
                }
                let hjm = self.eval_hjm(term, &u, &inv)?;
                inner_sum = &inner_sum + &(&t1_pows[term.m] * &hjm).scale(T::from_f64(term.weight));
            }
            h = &h + &(&inv_t1_pows[j] * &inner_sum).scale(T::from_f64(bj));
        }
        Ok((&w * &h).scale(T::from_f64(self.prefactor)))
    }

    /// `Lambda^{(p-1),(q-1)}(t1, t2)` for real arguments.
    pub fn derivative(&self, p: u32, q: u32, t1: f64, t2: f64) -> Result<f64> {
        if p == 0 || q == 0 {
            return Err(Error::ParameterOutOfRange("p and q must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&t1) {
            return Err(Error::OutsideDomain(format!("t1 = {t1} is outside [0, 1)")));
        }
        let (p, q) = (p as usize - 1, q as usize - 1);
        Ok(self.jet(t1, t2, p, q)?.derivative(p, q))
    }
}

pub fn egg_lambda_derivative(
    coefficients: &EggCoefficients,
    k: &Rational,
    p: u32,
    q: u32,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    EggLambda::new(coefficients.clone(), k.clone(), HjmEvaluation::ClosedForm)?.derivative(p, q, t1, t2)
}

pub fn egg_kernel(
    n: u32,
    p: u32,
    q: u32,
    k: &Rational,
    z: &[Complex64],
    w: &[Complex64],
) -> Result<Complex64> {
    EggKernel::new(n, p, q, k.clone(), HjmEvaluation::ClosedForm)?.kernel(z, w)
}

/// Kernel of `{(z, xi1, xi2) : ||xi1||^2 + ||xi2||^{2k} < 1 - ||z||^2}`,
/// normalized as `pi^dim / (p! q!)` times the Lebesgue-measure kernel.
#[derive(Clone, Debug)]
pub struct EggKernel {
    n: u32,
    p: u32,
    q: u32,
    lambda: EggLambda,
    denom: f64,
}

impl EggKernel {
    pub fn new(n: u32, p: u32, q: u32, k: Rational, mode: HjmEvaluation) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::ParameterOutOfRange("p and q must be at least 1".into()));
        }
        let lambda = EggLambda::new(egg_coefficients(n)?, k, mode)?;
        let denom = to_f64(&(factorial_rational(p as u64) * factorial_rational(q as u64)));
        Ok(EggKernel { n, p, q, lambda, denom })
    }

    pub fn lambda(&self) -> &EggLambda {
        &self.lambda
    }

    fn split<'a>(&self, z: &'a [Complex64]) -> (&'a [Complex64], &'a [Complex64], &'a [Complex64]) {
        let (base, rest) = z.split_at(self.n as usize);
        let (x1, x2) = rest.split_at(self.p as usize);
        (base, x1, x2)
    }

    fn check(&self, z: &[Complex64], label: &str) -> Result<()> {
        if !self.contains(z) {
            return Err(Error::OutsideDomain(format!("{label} is not in the domain")));
        }
        Ok(())
    }
}

impl BergmanKernel for EggKernel {
    fn dim(&self) -> usize {
        (self.n + self.p + self.q) as usize
    }

    fn contains(&self, z: &[Complex64]) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        let (base, x1, x2) = self.split(z);
        norm_sq(x1) + norm_sq(x2).powf(self.lambda.k_f64) < 1.0 - norm_sq(base)
    }

    fn kernel(&self, z: &[Complex64], w: &[Complex64]) -> Result<Complex64> {
        self.check(z, "first point")?;
        self.check(w, "second point")?;
        let (zb, z1, z2) = self.split(z);
        let (wb, w1, w2) = self.split(w);
        let big_n = Complex64::new(1.0, 0.0) - inner(zb, wb);
        let k = self.lambda.k_f64;
        let t1 = inner(z1, w1) / big_n;
        let t2 = inner(z2, w2) / JetScalar::powf(big_n, 1.0 / k);
        let (p, q) = (self.p as usize - 1, self.q as usize - 1);
        let lam = self.lambda.jet(t1, t2, p, q)?.derivative(p, q);
        let g = self.n as f64 + 1.0;
        let exponent = -(self.p as f64) - self.q as f64 / k - g;
        Ok(lam / self.denom * JetScalar::powf(big_n, exponent))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn coefficients_n1() {
        let c = egg_coefficients(1).unwrap();
        assert_eq!(c.chi0, int(1));
        assert_eq!(c.bj, vec![int(6), int(-6), int(1)]);
        assert_eq!(c.genus, 2);
    }

    #[test]
    fn lambda_at_origin_and_k1_closed_form() {
        let lam = EggLambda::new(egg_coefficients(1).unwrap(), int(1), HjmEvaluation::ClosedForm).unwrap();
        assert!((lam.derivative(1, 1, 0.0, 0.0).unwrap() - 6.0).abs() < 1e-12);
        for (t1, t2) in [(0.1, 0.2), (0.3, -0.1), (0.5, 0.25)] {
            let expected = 6.0 * (1.0f64 - t1 - t2).powi(-4);
            let got = lam.derivative(1, 1, t1, t2).unwrap();
            assert!((got - expected).abs() < 1e-10 * expected, "{got} vs {expected}");
        }
    }

    #[test]
    fn lambda_at_origin_matches_factorials() {
        for n in 1..=4u32 {
            let lam = EggLambda::new(egg_coefficients(n).unwrap(), int(1), HjmEvaluation::ClosedForm).unwrap();
            let expected = to_f64(&factorial_rational(n as u64 + 2));
            assert!((lam.derivative(1, 1, 0.0, 0.0).unwrap() - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn hjm_at_zero() {
        let k = rat(3, 2);
        let lam = EggLambda::new(egg_coefficients(2).unwrap(), k.clone(), HjmEvaluation::ClosedForm).unwrap();
        for j in 1..=4usize {
            for m in 0..=j {
                let expected = pochhammer(int(1) / &k + int(2 + m as i64), j - m);
                assert!((lam.hjm(j, m, 0.0).unwrap() - to_f64(&expected)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_agrees_with_closed_form_and_flags_divergence() {
        let coeffs = egg_coefficients(1).unwrap();
        let closed = EggLambda::new(coeffs.clone(), rat(2, 1), HjmEvaluation::ClosedForm).unwrap();
        let trunc = EggLambda::new(coeffs, rat(2, 1), HjmEvaluation::Truncated { terms: 64, tolerance: 1e-9 })
            .unwrap();
        let a = closed.derivative(1, 2, 0.2, 0.1).unwrap();
        let b = trunc.derivative(1, 2, 0.2, 0.1).unwrap();
        assert!((a - b).abs() < 1e-8 * a.abs());
        assert!(matches!(
            trunc.derivative(1, 1, 0.0, 0.9),
            Err(Error::SeriesDivergence { .. })
        ));
        assert!(closed.derivative(1, 1, 0.0, 0.9).is_ok());
    }

    #[test]
    fn t2_derivative_matches_finite_differences() {
        let lam = EggLambda::new(egg_coefficients(1).unwrap(), rat(2, 1), HjmEvaluation::ClosedForm).unwrap();
        let h = 1e-5;
        let fd = (lam.derivative(1, 1, 0.0, h).unwrap() - lam.derivative(1, 1, 0.0, -h).unwrap()) / (2.0 * h);
        let jet = lam.derivative(1, 2, 0.0, 0.0).unwrap();
        assert!((fd - jet).abs() < 1e-6 * jet.abs().max(1.0), "{fd} vs {jet}");
    }

    #[test]
    fn k1_egg_is_ball_at_origin() {
        let o = vec![Complex64::new(0.0, 0.0); 3];
        let v = egg_kernel(1, 1, 1, &int(1), &o, &o).unwrap();
        assert!((v.re - 6.0).abs() < 1e-12);
    }
}
