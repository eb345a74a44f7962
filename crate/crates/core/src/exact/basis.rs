use num_traits::{One, Zero};

use super::{int, LinearFactor, Rational, RationalPolynomial};

/// `(k + shift)_j` as a polynomial in `k`, carrying its factored form.
pub fn rising_factorial_poly(shift: &Rational, j: usize) -> RationalPolynomial {
    RationalPolynomial::from_factored(super::FactoredForm {
        scale: Rational::one(),
        factors: (0..j)
            .map(|i| LinearFactor::new(shift + int(i as i64), Rational::one()))
            .collect(),
    })
}

/// Coordinates of `p` in the basis `{(k+1)_j}`, `j = 0..=deg p`.
///
/// Every `(k+1)_j` is monic of degree `j`, so peeling leading coefficients
/// from the top degree down solves the triangular system exactly.
pub fn to_rising_factorial_basis(p: &RationalPolynomial) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return vec![Rational::zero()];
    };
    let one = Rational::one();
    let mut rem = p.clone();
    let mut out = vec![Rational::zero(); deg + 1];
    for j in (0..=deg).rev() {
        let c = rem.coeff(j);
        if !c.is_zero() {
            rem = &rem - &rising_factorial_poly(&one, j).scale(&c);
        }
        out[j] = c;
    }
    debug_assert!(rem.is_zero());
    out
}

pub fn from_rising_factorial_basis(coords: &[Rational]) -> RationalPolynomial {
    let one = Rational::one();
    coords.iter().enumerate().fold(RationalPolynomial::zero(), |acc, (j, c)| {
        &acc + &rising_factorial_poly(&one, j).scale(c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_polynomial() {
        assert_eq!(to_rising_factorial_basis(&RationalPolynomial::one()), vec![int(1)]);
    }

    #[test]
    fn k_squared() {
        // (k+1)(k+2) - 3(k+1) + 1 = k^2
        let p = RationalPolynomial::from_coeffs(vec![int(0), int(0), int(1)]);
        assert_eq!(to_rising_factorial_basis(&p), vec![int(1), int(-3), int(1)]);
    }

    #[test]
    fn basis_element_is_unit_vector() {
        let p = rising_factorial_poly(&Rational::one(), 4);
        assert_eq!(to_rising_factorial_basis(&p), vec![int(0), int(0), int(0), int(0), int(1)]);
    }

    #[test]
    fn cubic_minus_linear() {
        // h^3 - h = h(h-1)(h+1)
        let p = RationalPolynomial::from_coeffs(vec![int(0), int(-1), int(0), int(1)]);
        assert_eq!(to_rising_factorial_basis(&p), vec![int(0), int(6), int(-6), int(1)]);
    }
}
