use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bergman_core::cli::{error_json, execute, parse_point, Command, Format, RunConfig, EXIT_ERROR, EXIT_OK};
use bergman_core::exact::parse_rational;
use bergman_core::kernels::DomainSpec;
use bergman_core::oracle::QuadratureSpec;
use bergman_core::Error;

#[derive(Parser)]
#[command(name = "bergman", version, about = "Bergman kernels, diastasis and rigidity diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate K(z,w); w defaults to z, z to the origin.
    Kernel(Opts),
    /// Diastasis between the --at point and the --with point.
    Diastasis(Opts),
    /// Slice expansion and Calabi diagonal test.
    Calabi(Opts),
    /// Exact algebraic rigidity checks.
    Rigidity(Opts),
    /// Compare closed-form kernels against the quadrature oracle.
    OracleCompare(Opts),
    /// Run a JSON configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<CliFormat>,
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliDomain {
    Ball,
    Hartogs,
    Egg,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Json,
    Csv,
}

impl From<CliFormat> for Format {
    fn from(f: CliFormat) -> Self {
        match f {
            CliFormat::Json => Format::Json,
            CliFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Args)]
struct Opts {
    #[arg(long, value_enum)]
    domain: CliDomain,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: Option<u32>,
    /// Rational exponent, e.g. 1/2.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    k: Option<String>,
    /// Target dimension of the hyperbolic model.
    #[arg(long = "N")]
    big_n: Option<u32>,
    #[arg(long)]
    lambda: Option<String>,
    /// Point as comma-separated coordinates, each re or re:im.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    with: Option<String>,
    #[arg(long, default_value_t = 30)]
    truncation: u32,
    #[arg(long, value_enum, default_value = "json")]
    format: CliFormat,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    no_timestamp: bool,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Quadrature nodes for the oracle.
    #[arg(long)]
    nodes: Option<usize>,
    /// Shell cutoff for the oracle sum.
    #[arg(long)]
    cutoff: Option<u32>,
    /// Sum egg series with this many terms instead of the closed form.
    #[arg(long)]
    hjm_terms: Option<usize>,
}

fn required<T>(v: Option<T>, name: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::Schema(format!("--{name} is required for this domain")))
}

fn build(command: Command, o: Opts) -> Result<RunConfig, Error> {
    let mut spec = match o.domain {
        CliDomain::Ball => DomainSpec::ball(o.n),
        CliDomain::Hartogs => {
            DomainSpec::hartogs(o.n, required(o.m, "m")?, parse_rational(&required(o.s, "s")?)?)
        }
        CliDomain::Egg => DomainSpec::egg(
            o.n,
            required(o.p, "p")?,
            required(o.q, "q")?,
            parse_rational(&required(o.k, "k")?)?,
        ),
    };
    match (o.big_n, o.lambda) {
        (Some(n), Some(l)) => spec = spec.with_target(n, parse_rational(&l)?),
        (None, None) => {}
        _ => return Err(Error::Schema("--N and --lambda go together".into())),
    }
    let mut config = RunConfig::new(command, spec);
    for text in [o.at, o.with].into_iter().flatten() {
        config.points.push(parse_point(&text)?);
    }
    config.truncation = o.truncation;
    config.format = o.format.into();
    config.output = o.output;
    config.timestamp = !o.no_timestamp;
    config.samples = o.samples;
    config.seed = o.seed;
    config.hjm_terms = o.hjm_terms;
    if o.nodes.is_some() || o.cutoff.is_some() {
        let mut quad = QuadratureSpec::default();
        quad.nodes = o.nodes.unwrap_or(quad.nodes);
        quad.cutoff = o.cutoff.unwrap_or(quad.cutoff);
        config.quadrature = Some(quad);
    }
    config.validate()?;
    Ok(config)
}

fn load(path: &PathBuf, output: Option<PathBuf>, format: Option<CliFormat>, no_timestamp: bool) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut config = RunConfig::from_json(&text)?;
    if output.is_some() {
        config.output = output;
    }
    if let Some(f) = format {
        config.format = f.into();
    }
    if no_timestamp {
        config.timestamp = false;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::from(EXIT_OK as u8);
        }
        Err(e) => {
            eprintln!("{}", error_json(&Error::Schema(e.to_string().trim().to_string())));
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let config = match cli.command {
        Sub::Kernel(o) => build(Command::Kernel, o),
        Sub::Diastasis(o) => build(Command::Diastasis, o),
        Sub::Calabi(o) => build(Command::Calabi, o),
        Sub::Rigidity(o) => build(Command::Rigidity, o),
        Sub::OracleCompare(o) => build(Command::OracleCompare, o),
        Sub::Run { config, output, format, no_timestamp } => load(&config, output, format, no_timestamp),
    };
    match config {
        Ok(config) => ExitCode::from(execute(&config) as u8),
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
