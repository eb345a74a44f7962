use std::fmt;

use serde::{Deserialize, Serialize};

use super::{factorial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `|a|! / a!`.
    pub fn multinomial(&self) -> Rational {
        let denom = self.0.iter().fold(factorial(0), |acc, &a| acc * factorial(a as u64));
        Rational::new(factorial(self.degree() as u64), denom)
    }

    pub fn multinomial_f64(&self) -> f64 {
        let mut out = 1.0;
        let mut n = 0.0;
        for &a in &self.0 {
            for i in 1..=a {
                n += 1.0;
                out *= n / i as f64;
            }
        }
        out
    }

    /// Graded-lexicographic key: total degree first, then larger leading
    /// entries first.
    pub fn grlex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All indices of exactly `degree` with `len` entries, leading entry descending.
pub fn multiindices_of_degree(len: usize, degree: u32) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, slots: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            fill(prefix, slots - 1, remaining - first, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        if degree == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(len), len, degree, &mut out);
    out
}

/// Graded-lexicographic enumeration of every index with degree at most
/// `max_degree`, starting at the zero index.
pub fn lex_multiindices(len: usize, max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree).flat_map(|d| multiindices_of_degree(len, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::int;
    use super::*;

    fn ids(v: &[&[u32]]) -> Vec<MultiIndex> {
        v.iter().map(|e| MultiIndex(e.to_vec())).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(lex_multiindices(1, 2), ids(&[&[0], &[1], &[2]]));
        assert_eq!(lex_multiindices(2, 1), ids(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(
            lex_multiindices(2, 2),
            ids(&[&[0, 0], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]])
        );
    }

    #[test]
    fn multinomial_weights() {
        assert_eq!(MultiIndex(vec![1, 1]).multinomial(), int(2));
        assert_eq!(MultiIndex(vec![2, 1, 0]).multinomial(), int(3));
        assert_eq!(MultiIndex(vec![2, 2]).multinomial_f64(), 6.0);
    }
}
