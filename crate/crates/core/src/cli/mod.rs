//! Report generation behind the `bergman` binary.

mod config;

pub use config::{parse_point, to_complex, Command, Format, Point, RunConfig, RunTolerances};

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::calabi::{beta_from_alpha, calabi_diag_test, slice_alpha_exact, slice_expansion, CalabiVerdict};
use crate::diastasis::{bergman_diastasis, DiastasisValue};
use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, to_f64, Rational};
use crate::kernels::{
    hartogs_coefficients, kernel_for, lebesgue_ratio, sample_point, BergmanKernel, DomainKind, DomainSpec, EggKernel, HjmEvaluation,
};
use crate::oracle::OracleKernel;
use crate::rigidity::{egg_reduction_check, egg_reduction_exponent, rigidity_report, Conclusion, Versions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_OBSTRUCTION: i32 = 2;

/// Sampling depth for oracle points; deeper points need more shells than the default cutoff.
const SAMPLE_DEPTH: f64 = 0.2;

pub const CSV_HEADER: [&str; 3] = ["index", "value_exact", "value_decimal"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub versions: Versions,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub spec: DomainSpec,
    pub result: Value,
    pub checks: Value,
    pub truncation: u32,
    pub tolerances: RunTolerances,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub index: String,
    pub exact: String,
    pub decimal: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub rows: Vec<CsvRow>,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.report).map_err(|e| Error::Io(e.to_string()))?;
                text.push('\n');
                Ok(text)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(e.to_string());
                w.write_record(CSV_HEADER).map_err(io)?;
                for row in &self.rows {
                    w.write_record([row.index.as_str(), row.exact.as_str(), &format!("{:e}", row.decimal + 0.0)])
                        .map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
            }
        }
    }
}

/// Machine-readable error body.
pub fn error_json(err: &Error) -> String {
    json!({ "error": { "code": err.code(), "message": err.to_string() } }).to_string()
}

/// Runs the command and writes the report; returns the process exit status.
pub fn execute(config: &RunConfig) -> i32 {
    let result = run(config).and_then(|outcome| {
        let text = outcome.render(config.format)?;
        match &config.output {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))?,
        }
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", error_json(&err));
            EXIT_ERROR
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let body = match config.command {
        Command::Kernel => kernel_command(config)?,
        Command::Diastasis => diastasis_command(config)?,
        Command::Calabi => calabi_command(config)?,
        Command::Rigidity => rigidity_command(config)?,
        Command::OracleCompare => oracle_command(config)?,
    };
    let timestamp = config.timestamp.then(|| {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        format!("unix:{secs}")
    });
    Ok(Outcome {
        report: Report {
            command: config.command.name(),
            spec: config.spec.clone(),
            result: body.result,
            checks: body.checks,
            truncation: config.truncation,
            tolerances: config.tolerances.clone(),
            provenance: Provenance { versions: Versions::default(), config: config.clone(), timestamp },
        },
        rows: body.rows,
        exit_code: body.exit_code,
    })
}

struct Body {
    result: Value,
    checks: Value,
    rows: Vec<CsvRow>,
    exit_code: i32,
}

fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn kernel_of(config: &RunConfig) -> Result<Box<dyn BergmanKernel + Send + Sync>> {
    match (&config.spec.domain, config.hjm_terms) {
        (DomainKind::Egg { n, p, q, k }, Some(terms)) => Ok(Box::new(EggKernel::new(
            *n,
            *p,
            *q,
            k.clone(),
            HjmEvaluation::Truncated { terms, tolerance: 1e-12 },
        )?)),
        _ => kernel_for(&config.spec),
    }
}

fn point_or_origin(config: &RunConfig, i: usize) -> Vec<Complex64> {
    config
        .points
        .get(i)
        .map(to_complex)
        .unwrap_or_else(|| vec![Complex64::new(0.0, 0.0); config.spec.complex_dim()])
}

/// `n!/pi^n` as text, for the ball kernel at the origin.
fn ball_origin_form(n: u32) -> String {
    let f = factorial(n as u64);
    match n {
        1 => "1/pi".into(),
        _ => format!("{f}/pi^{n}"),
    }
}

fn kernel_command(config: &RunConfig) -> Result<Body> {
    let kernel = kernel_of(config)?;
    let z = point_or_origin(config, 0);
    let w = if config.points.len() > 1 { point_or_origin(config, 1) } else { z.clone() };
    let value = kernel.kernel(&z, &w)?;
    let exact_form = match &config.spec.domain {
        DomainKind::Ball { n } if z.iter().chain(&w).all(|c| c.norm() == 0.0) => Some(ball_origin_form(*n)),
        _ => None,
    };
    let normalization = match config.spec.domain {
        DomainKind::Egg { .. } => "pi^dim / (p! q!) times the Lebesgue-measure kernel",
        _ => "Lebesgue measure",
    };
    let mut rows = vec![CsvRow { index: "re".into(), exact: exact_form.clone().unwrap_or_default(), decimal: value.re }];
    rows.push(CsvRow {
        index: "im".into(),
        exact: if exact_form.is_some() { "0".into() } else { String::new() },
        decimal: value.im,
    });
    Ok(Body {
        result: json!({
            "z": z.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "w": w.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "value": complex_json(value),
            "exact_form": exact_form,
            "normalization": normalization,
        }),
        checks: json!({ "points_in_domain": true }),
        rows,
        exit_code: EXIT_OK,
    })
}

fn diastasis_command(config: &RunConfig) -> Result<Body> {
    let kernel = kernel_of(config)?;
    let z = point_or_origin(config, 0);
    let w = point_or_origin(config, 1);
    let unit = bergman_diastasis(kernel.as_ref(), &z, &w)?;
    let scale = config.spec.target.as_ref().map(|t| t.lambda.clone()).unwrap_or_else(|| Rational::from_integer(1.into()));
    let value = DiastasisValue::rescaled(unit, scale);
    Ok(Body {
        result: json!({ "unit": unit, "lambda": format_rational(&value.scale), "value": value.value }),
        checks: json!({ "nonnegative": value.value >= -1e-12 }),
        rows: vec![CsvRow { index: "diastasis".into(), exact: String::new(), decimal: value.value }],
        exit_code: EXIT_OK,
    })
}

/// Hartogs data the slice computations run on; eggs are reduced first.
fn hartogs_view(spec: &DomainSpec) -> Result<(u32, u32, Rational)> {
    match &spec.domain {
        DomainKind::Hartogs { n, m, s } => Ok((*n, *m, s.clone())),
        DomainKind::Egg { n, p, q, k } => Ok((n + p, *q, egg_reduction_exponent(*n, *p, k))),
        DomainKind::Ball { .. } => Err(Error::OutsideScope("the slice expansion needs a Hartogs or egg domain".into())),
    }
}

fn calabi_command(config: &RunConfig) -> Result<Body> {
    let target = config
        .spec
        .target
        .as_ref()
        .ok_or_else(|| Error::ParameterOutOfRange("calabi needs target data N and lambda".into()))?;
    let (n, m, s) = hartogs_view(&config.spec)?;
    let coeff = hartogs_coefficients(n, m, &s)?;
    let order = config.truncation as usize;
    let expansion = slice_expansion(&coeff, n, m, &target.lambda, target.big_n, order)?;
    let exact = slice_alpha_exact(&coeff, n, m, &target.lambda, target.big_n, order)?;
    let diag = calabi_diag_test(&expansion.beta, target.big_n, config.tolerances.psd);
    let scale = Rational::from_integer((target.big_n as i64 + 1).into());
    let rows = diag
        .diagonal
        .iter()
        .map(|(idx, value)| {
            let d = idx.degree() as usize;
            let exact_entry = &scale * &exact[d] * idx.multinomial();
            CsvRow { index: idx.to_string(), exact: format!("{}*C^{d}", format_rational(&exact_entry)), decimal: *value }
        })
        .collect();
    let exit_code = if diag.verdict == CalabiVerdict::ImmersionImpossible { EXIT_OBSTRUCTION } else { EXIT_OK };
    let beta_check = beta_from_alpha(&expansion.alpha, m, config.truncation).len();
    Ok(Body {
        result: json!({
            "hartogs": { "n": n, "m": m, "s": format_rational(&s) },
            "coefficients": coeff,
            "C": expansion.c_const,
            "C_form": format!("({}/pi^{n})^({})", factorial(n as u64), format_rational(&s)),
            "mu": expansion.mu,
            "exponent_ratio": format_rational(&expansion.exponent_ratio),
            "alpha": expansion.alpha,
            "alpha_over_C_power": exact.iter().map(format_rational).collect::<Vec<_>>(),
            "diagonal": diag.diagonal.iter().map(|(i, v)| json!({ "index": i, "value": v })).collect::<Vec<_>>(),
            "indices": beta_check,
        }),
        checks: json!({
            "verdict": diag.verdict,
            "is_psd": diag.is_psd,
            "truncated_rank": diag.truncated_rank,
            "is_polynomial": diag.is_polynomial,
            "cutoff_degree": diag.cutoff_degree,
            "max_degree": diag.max_degree,
            "tolerance": diag.tolerance,
            "caveat": diag.caveat,
        }),
        rows,
        exit_code,
    })
}

fn rigidity_command(config: &RunConfig) -> Result<Body> {
    let report = rigidity_report(&config.spec, config.truncation)?;
    let reduction = match &config.spec.domain {
        DomainKind::Egg { n, p, q, k } => Some(egg_reduction_check(*n, *p, *q, k, config.samples.unwrap_or(10))?),
        _ => None,
    };
    let checks = serde_json::to_value(&report.checks).map_err(|e| Error::Io(e.to_string()))?;
    let mut rows = Vec::new();
    if let Value::Object(map) = &checks {
        for (key, value) in map {
            match value {
                Value::Bool(b) => rows.push(CsvRow { index: key.clone(), exact: b.to_string(), decimal: *b as u8 as f64 }),
                Value::String(s) => rows.push(CsvRow {
                    index: key.clone(),
                    exact: s.clone(),
                    decimal: crate::exact::parse_rational(s).map(|r| to_f64(&r)).unwrap_or(f64::NAN),
                }),
                _ => {}
            }
        }
    }
    let exit_code = if report.conclusion == Conclusion::ObstructionFound { EXIT_OBSTRUCTION } else { EXIT_OK };
    Ok(Body {
        result: json!({ "conclusion": report.conclusion, "reduction": reduction }),
        checks,
        rows,
        exit_code,
    })
}

fn oracle_command(config: &RunConfig) -> Result<Body> {
    let quad = config.quadrature.clone().unwrap_or_default();
    let oracle = OracleKernel::new(&config.spec, &quad)?;
    let closed = kernel_of(config)?;
    let points: Vec<Vec<Complex64>> = if config.points.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        (0..config.samples.unwrap_or(20)).map(|_| sample_point(&config.spec, &mut rng, SAMPLE_DEPTH)).collect()
    } else {
        config.points.iter().map(to_complex).collect()
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut max_rel: f64 = 0.0;
    let ratio = lebesgue_ratio(&config.spec);
    for (i, z) in points.iter().enumerate() {
        let a = oracle.evaluate(z, z)?;
        let b = closed.kernel_diag(z)? / ratio;
        let rel = (a.value.re - b).abs() / b.abs();
        max_rel = max_rel.max(rel);
        entries.push(json!({
            "point": z.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "closed_form": b,
            "oracle": a.value.re,
            "relative_deviation": rel,
            "tail_estimate": a.tail_estimate,
        }));
        rows.push(CsvRow { index: format!("{i}"), exact: String::new(), decimal: rel });
    }
    let mut max_dia: f64 = 0.0;
    for pair in points.windows(2) {
        let a = bergman_diastasis(&oracle, &pair[0], &pair[1])?;
        let b = bergman_diastasis(closed.as_ref(), &pair[0], &pair[1])?;
        max_dia = max_dia.max((a - b).abs());
    }
    let ok = max_rel <= config.tolerances.oracle_relative && max_dia <= config.tolerances.oracle_diastasis;
    Ok(Body {
        result: json!({ "points": entries, "quadrature": quad, "closed_form_scale": ratio }),
        checks: json!({
            "max_relative_deviation": max_rel,
            "max_diastasis_deviation": max_dia,
            "within_tolerance": ok,
        }),
        rows,
        exit_code: if ok { EXIT_OK } else { EXIT_ERROR },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn no_clock(mut c: RunConfig) -> RunConfig {
        c.timestamp = false;
        c
    }

    #[test]
    fn ball_origin_kernel() {
        let mut c = no_clock(RunConfig::new(Command::Kernel, DomainSpec::ball(2)));
        c.points.push(vec![[0.0, 0.0], [0.0, 0.0]]);
        let out = run(&c).unwrap();
        assert_eq!(out.report.result["exact_form"], "2/pi^2");
        let v = out.report.result["value"][0].as_f64().unwrap();
        assert!((v - 2.0 / std::f64::consts::PI.powi(2)).abs() < 1e-15);
        let csv = out.render(Format::Csv).unwrap();
        assert!(csv.starts_with("index,value_exact,value_decimal\n"));
    }

    #[test]
    fn rigidity_exit_codes() {
        let c = no_clock(RunConfig::new(
            Command::Rigidity,
            DomainSpec::hartogs(1, 1, rat(1, 2)).with_target(3, rat(3, 4)),
        ));
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.report.result["conclusion"], "ball_certified");
        let c = no_clock(RunConfig::new(Command::Rigidity, DomainSpec::hartogs(1, 1, rat(1, 3)).with_target(5, int(2))));
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_OBSTRUCTION);
        assert_eq!(out.report.result["conclusion"], "obstruction_found");
    }

    #[test]
    fn deterministic_without_timestamp() {
        let c = no_clock(RunConfig::new(Command::Calabi, DomainSpec::hartogs(1, 1, rat(1, 3)).with_target(5, int(2))));
        let a = run(&c).unwrap().render(Format::Json).unwrap();
        let b = run(&c).unwrap().render(Format::Json).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["command", "spec", "result", "checks", "truncation", "tolerances", "provenance"]);
        let back = RunConfig::from_json(&v["provenance"]["config"].to_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn errors_carry_codes() {
        let c = RunConfig::new(Command::Calabi, DomainSpec::ball(2));
        let err = run(&c).unwrap_err();
        assert!(error_json(&err).contains("\"code\""));
    }
}
