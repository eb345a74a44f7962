use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{int, rat, to_rising_factorial_basis, FactoredForm, LinearFactor, Rational, RationalPolynomial};
use crate::error::{Error, Result};

/// One block `{p_k, q_k, b_k}` of the invariants of a bounded homogeneous domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseBlock {
    pub p: u32,
    pub q: u32,
    pub b: u32,
}

/// Invariants of a bounded homogeneous base, one block per unit of rank.
/// Used only for the coefficient algebra; kernels are evaluated over the
/// ball only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousBaseData {
    blocks: Vec<BaseBlock>,
}

impl HomogeneousBaseData {
    pub fn new(blocks: Vec<BaseBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::ParameterOutOfRange("rank must be positive".into()));
        }
        Ok(HomogeneousBaseData { blocks })
    }

    /// The unit ball `B^n`: rank one, `p = q = 0`, `b = n - 1`.
    pub fn ball(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange("ball dimension must be at least 1".into()));
        }
        Self::new(vec![BaseBlock { p: 0, q: 0, b: n - 1 }])
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BaseBlock] {
        &self.blocks
    }

    /// `a_{ki} = (i + q_k/2) / (p_k + q_k + b_k + 2)` for `1 <= i <= 1 + p_k + b_k`.
    pub fn exponents(&self) -> Vec<Rational> {
        self.blocks
            .iter()
            .flat_map(|blk| {
                let denom = int((blk.p + blk.q + blk.b + 2) as i64);
                let half_q = rat(blk.q as i64, 2);
                (1..=(1 + blk.p + blk.b)).map(move |i| (int(i as i64) + &half_q) / &denom)
            })
            .collect()
    }

    pub fn c_omega(&self) -> Rational {
        self.exponents()
            .into_iter()
            .min()
            .expect("a block always contributes at least one exponent")
    }
}

/// `b(k) = F(s k) = prod_{k,i} (1 + s k / a_{ki})`, in factored and expanded form.
pub fn hartogs_base_polynomial(base: &HomogeneousBaseData, s: &Rational) -> Result<RationalPolynomial> {
    let c_omega = base.c_omega();
    if *s <= -&c_omega {
        return Err(Error::ParameterOutOfRange(format!(
            "s = {s} must exceed -C = {}",
            -c_omega
        )));
    }
    let factors = base
        .exponents()
        .into_iter()
        .map(|a| LinearFactor::new(Rational::one(), s / a))
        .collect();
    Ok(RationalPolynomial::from_factored(FactoredForm { scale: Rational::one(), factors }))
}

/// `chi(s) = prod_{j=1}^r (s + 1 + (j-1) a/2)_{1 + b + (r-j) a}`.
pub fn chi_polynomial(r: u32, a: u32, b: u32) -> RationalPolynomial {
    let mut factors = Vec::new();
    for j in 1..=r {
        let shift = int(1) + rat(((j - 1) * a) as i64, 2);
        let len = 1 + b + (r - j) * a;
        for i in 0..len {
            factors.push(LinearFactor::new(&shift + int(i as i64), Rational::one()));
        }
    }
    RationalPolynomial::from_factored(FactoredForm { scale: Rational::one(), factors })
}

/// Coefficients `b_1..b_{n+2}` of `h (h-1) chi(h)` in the basis `{(h+1)_j}`.
pub fn egg_bj(chi: &RationalPolynomial, n: usize) -> Result<Vec<Rational>> {
    if chi.degree() != Some(n) {
        return Err(Error::Inconsistent(format!(
            "chi has degree {:?}, expected {n}",
            chi.degree()
        )));
    }
    let h_h_minus_1 = RationalPolynomial::from_coeffs(vec![int(0), int(-1), int(1)]);
    let coords = to_rising_factorial_basis(&(&h_h_minus_1 * chi));
    if !coords[0].is_zero() {
        return Err(Error::Inconsistent(format!(
            "degree-0 basis coefficient of h(h-1)chi(h) is {}, expected 0",
            coords[0]
        )));
    }
    Ok(coords[1..].to_vec())
}

/// Roots of `b(k)` for the ball base, read from its factored form.
pub(crate) fn ball_base_roots(n: u32, s: &Rational) -> Result<Vec<Rational>> {
    let b = hartogs_base_polynomial(&HomogeneousBaseData::ball(n)?, s)?;
    Ok(b.factored().map(FactoredForm::roots).unwrap_or_default())
}
