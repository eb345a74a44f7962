#![allow(dead_code)]

use bergman_core::exact::{binomial, factorial_rational, int, to_f64, Rational};
use bergman_core::kernels::{inner, norm_sq, HartogsCoefficients};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish point of the ball of radius `r`.
pub fn ball_point<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = norm_sq(&v).sqrt().max(1e-12);
    let rad = r * rng.gen::<f64>();
    v.iter().map(|c| c * (rad / norm)).collect()
}

/// Random unitary matrix by Gram-Schmidt.
pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Complex64>> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    while rows.len() < n {
        let mut v: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for r in &rows {
            let c = inner(&v, r);
            for (x, y) in v.iter_mut().zip(r) {
                *x -= c * y;
            }
        }
        let norm = norm_sq(&v).sqrt();
        if norm > 1e-3 {
            rows.push(v.iter().map(|x| x / norm).collect());
        }
    }
    rows
}

pub fn apply(u: &[Vec<Complex64>], z: &[Complex64]) -> Vec<Complex64> {
    u.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
}

pub fn det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if piv != col {
            a.swap(piv, col);
            d = -d;
        }
        d *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let t = a[col][k];
                a[row][k] -= f * t;
            }
        }
    }
    d
}

/// Ball automorphism `z -> U phi_a(z)` exchanging `a` and `0` before the rotation.
pub struct Mobius {
    pub a: Vec<Complex64>,
    pub u: Vec<Vec<Complex64>>,
}

impl Mobius {
    pub fn map(&self, z: &[Complex64]) -> Vec<Complex64> {
        let a2 = norm_sq(&self.a);
        let sa = (1.0 - a2).sqrt();
        let za = inner(z, &self.a);
        let denom = Complex64::new(1.0, 0.0) - za;
        let w: Vec<Complex64> = if a2 == 0.0 {
            z.iter().map(|x| -x).collect()
        } else {
            z.iter()
                .zip(&self.a)
                .map(|(zi, ai)| {
                    let proj = ai * (za / a2);
                    (ai - proj - (zi - proj) * sa) / denom
                })
                .collect()
        };
        apply(&self.u, &w)
    }

    /// Complex Jacobian determinant, `det U (-1)^n (1-|a|^2)^{(n+1)/2} / (1 - <z,a>)^{n+1}`.
    pub fn jacobian(&self, z: &[Complex64]) -> Complex64 {
        let n = z.len() as i32;
        let a2 = norm_sq(&self.a);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let denom = (Complex64::new(1.0, 0.0) - inner(z, &self.a)).powi(n + 1);
        det(&self.u) * sign * (1.0 - a2).powf((n + 1) as f64 / 2.0) / denom
    }

    /// Jacobian determinant by central differences, for checking [`Mobius::jacobian`].
    pub fn jacobian_fd(&self, z: &[Complex64], h: f64) -> Complex64 {
        let n = z.len();
        let mut cols = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[j] += h;
            zm[j] -= h;
            let (fp, fm) = (self.map(&zp), self.map(&zm));
            for i in 0..n {
                cols[i][j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        det(&cols)
    }
}

pub fn random_mobius<R: Rng>(rng: &mut R, n: usize) -> Mobius {
    Mobius { a: ball_point(rng, n, 0.8), u: unitary(rng, n) }
}

/// `alpha(v)` from the slice kernel itself: with `Y = C x`,
/// `K(Y)/K(0) = sum_j c_j (j+m)! (1-Y)^{-(j+m+1)} / sum_j c_j (j+m)!`
/// is expanded by binomial series and raised to `-rho` by the
/// J.C.P. Miller recurrence, all over Q. Returns `alpha(v) / C^v`.
pub fn alpha_over_c_power(coeff: &HartogsCoefficients, m: u32, rho: &Rational, order: usize) -> Vec<Rational> {
    let mut g = vec![Rational::zero(); order + 1];
    for (j, c) in coeff.c.iter().enumerate() {
        let w = c * factorial_rational(j as u64 + m as u64);
        let e = int(j as i64 + m as i64 + 1);
        for (l, slot) in g.iter_mut().enumerate() {
            // coefficient of Y^l in (1-Y)^{-e} is binom(e+l-1, l)
            *slot += &w * binomial(&(&e + int(l as i64) - int(1)), l);
        }
    }
    let g0 = g[0].clone();
    let g: Vec<Rational> = g.iter().map(|x| x / &g0).collect();
    // h = g^{-rho}: l h_l = sum_{k=1}^{l} (k(-rho+1) - l) g_k h_{l-k}
    let a = -rho.clone();
    let mut h = vec![Rational::one()];
    for l in 1..=order {
        let mut acc = Rational::zero();
        for k in 1..=l {
            let f = int(k as i64) * (&a + int(1)) - int(l as i64);
            acc += f * &g[k] * &h[l - k];
        }
        h.push(acc / int(l as i64));
    }
    h.iter().enumerate().map(|(v, x)| if v == 0 { Rational::one() - x } else { -x.clone() }).collect()
}

pub fn alpha_oracle(coeff: &HartogsCoefficients, m: u32, rho: &Rational, c_const: f64, order: usize) -> Vec<f64> {
    alpha_over_c_power(coeff, m, rho, order)
        .iter()
        .enumerate()
        .map(|(v, a)| to_f64(a) * c_const.powi(v as i32))
        .collect()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}
