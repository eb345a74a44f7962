use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::DomainSpec;
use crate::oracle::QuadratureSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Kernel,
    Diastasis,
    Calabi,
    Rigidity,
    OracleCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Diastasis => "diastasis",
            Command::Calabi => "calabi",
            Command::Rigidity => "rigidity",
            Command::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A point as a list of `[re, im]` pairs.
pub type Point = Vec<[f64; 2]>;

pub fn to_complex(p: &Point) -> Vec<Complex64> {
    p.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

/// Parses `"0.1,0.2:-0.3"`: comma-separated coordinates, each `re` or `re:im`.
pub fn parse_point(text: &str) -> Result<Point> {
    let bad = |part: &str| Error::Schema(format!("bad coordinate {part:?} in point {text:?}; expected re or re:im"));
    text.split(',')
        .map(|part| {
            let part = part.trim();
            let (re, im) = part.split_once(':').unwrap_or((part, "0"));
            let re: f64 = re.trim().parse().map_err(|_| bad(part))?;
            let im: f64 = im.trim().parse().map_err(|_| bad(part))?;
            if !(re.is_finite() && im.is_finite()) {
                return Err(bad(part));
            }
            Ok([re, im])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunTolerances {
    /// Calabi diagonal entries below `-psd` break positivity; entries above count toward the rank.
    pub psd: f64,
    /// Accepted relative deviation between oracle and closed-form kernels.
    pub oracle_relative: f64,
    /// Accepted absolute deviation between oracle and closed-form diastasis.
    pub oracle_diastasis: f64,
}

impl Default for RunTolerances {
    fn default() -> Self {
        RunTolerances { psd: crate::calabi::DEFAULT_TOLERANCE, oracle_relative: 1e-5, oracle_diastasis: 1e-4 }
    }
}

fn default_truncation() -> u32 {
    crate::rigidity::DEFAULT_TRUNCATION
}

fn default_true() -> bool {
    true
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub spec: DomainSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Point>,
    #[serde(default = "default_truncation")]
    pub truncation: u32,
    #[serde(default)]
    pub tolerances: RunTolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSpec>,
    /// Number of sampled points when none are given (oracle comparison).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub seed: u64,
    /// Evaluate egg series by partial sums of this many terms instead of in closed form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hjm_terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_true")]
    pub timestamp: bool,
}

impl RunConfig {
    pub fn new(command: Command, spec: DomainSpec) -> Self {
        RunConfig {
            command,
            spec,
            points: Vec::new(),
            truncation: default_truncation(),
            tolerances: RunTolerances::default(),
            quadrature: None,
            samples: None,
            seed: 0,
            hjm_terms: None,
            output: None,
            format: Format::Json,
            timestamp: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.truncation == 0 || self.truncation as usize > crate::calabi::MAX_SLICE_ORDER {
            return Err(Error::ParameterOutOfRange(format!(
                "truncation {} outside 1..={}",
                self.truncation,
                crate::calabi::MAX_SLICE_ORDER
            )));
        }
        let dim = self.spec.complex_dim();
        if let Some(p) = self.points.iter().find(|p| p.len() != dim) {
            return Err(Error::Schema(format!("point with {} coordinates for a domain of dimension {dim}", p.len())));
        }
        if let Some(q) = &self.quadrature {
            q.validate()?;
        }
        Ok(())
    }
}
