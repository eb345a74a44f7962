use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, rat, serde_rational, Rational};

/// A model domain over the unit ball `B^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainKind {
    Ball {
        n: u32,
    },
    /// `{(z, xi) : ||xi||^2 < K_{B^n}(z, z)^{-s}}`, fiber `C^m`.
    Hartogs {
        n: u32,
        m: u32,
        #[serde(with = "serde_rational")]
        s: Rational,
    },
    /// `{(z, xi1, xi2) : ||xi1||^2 + ||xi2||^{2k} < 1 - ||z||^2}`, fibers `C^p x C^q`.
    Egg {
        n: u32,
        p: u32,
        q: u32,
        #[serde(with = "serde_rational")]
        k: Rational,
    },
}

/// Target ball dimension and metric rescaling for immersion questions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetData {
    #[serde(rename = "N")]
    pub big_n: u32,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub domain: DomainKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetData>,
}

impl DomainSpec {
    pub fn ball(n: u32) -> Self {
        DomainSpec { domain: DomainKind::Ball { n }, target: None }
    }

    pub fn hartogs(n: u32, m: u32, s: Rational) -> Self {
        DomainSpec { domain: DomainKind::Hartogs { n, m, s }, target: None }
    }

    pub fn egg(n: u32, p: u32, q: u32, k: Rational) -> Self {
        DomainSpec { domain: DomainKind::Egg { n, p, q, k }, target: None }
    }

    pub fn with_target(mut self, big_n: u32, lambda: Rational) -> Self {
        self.target = Some(TargetData { big_n, lambda });
        self
    }

    pub fn base_dim(&self) -> u32 {
        match self.domain {
            DomainKind::Ball { n } | DomainKind::Hartogs { n, .. } | DomainKind::Egg { n, .. } => n,
        }
    }

    pub fn complex_dim(&self) -> usize {
        (match &self.domain {
            DomainKind::Ball { n } => *n,
            DomainKind::Hartogs { n, m, .. } => n + m,
            DomainKind::Egg { n, p, q, .. } => n + p + q,
        }) as usize
    }

    /// Coordinate block lengths: base first, then fibers.
    pub fn blocks(&self) -> Vec<usize> {
        match &self.domain {
            DomainKind::Ball { n } => vec![*n as usize],
            DomainKind::Hartogs { n, m, .. } => vec![*n as usize, *m as usize],
            DomainKind::Egg { n, p, q, .. } => vec![*n as usize, *p as usize, *q as usize],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ParameterOutOfRange(msg));
        match &self.domain {
            DomainKind::Ball { n } => {
                if *n == 0 {
                    return bad("n must be at least 1".into());
                }
            }
            DomainKind::Hartogs { n, m, s } => {
                if *n == 0 || *m == 0 {
                    return bad("n and m must be at least 1".into());
                }
                if !(s + rat(1, *n as i64 + 1)).is_positive() {
                    return bad(format!("s = {} must exceed -1/(n+1)", format_rational(s)));
                }
            }
            DomainKind::Egg { n, p, q, k } => {
                if *n == 0 || *p == 0 || *q == 0 {
                    return bad("n, p and q must be at least 1".into());
                }
                if !k.is_positive() {
                    return bad(format!("k = {} must be positive", format_rational(k)));
                }
            }
        }
        if let Some(t) = &self.target {
            if (t.big_n as usize) < self.complex_dim() {
                return bad(format!("N = {} is below the domain dimension {}", t.big_n, self.complex_dim()));
            }
            if !t.lambda.is_positive() {
                return bad("lambda must be positive".into());
            }
        }
        Ok(())
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.domain {
            DomainKind::Ball { n } => write!(f, "B^{n}"),
            DomainKind::Hartogs { n, m, s } => write!(f, "(B^{n})_{{{m},{}}}", format_rational(s)),
            DomainKind::Egg { n, p, q, k } => write!(f, "E({p},{q},B^{n},{})", format_rational(k)),
        }
    }
}
