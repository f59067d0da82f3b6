//! Batch front-end: `reconstruct`, `project`, `verify` and `sweep`.
//!
//! Exit codes: 0 pass (including runs whose hypotheses fail, which are
//! reported with their census), 1 a conclusion failed although every
//! hypothesis held, 2 input or schema error, 3 numerical failure.

mod output;
pub mod spec;
mod verify;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Vector3;

use crate::numerics::{StepControl, DEFAULT_STEP, DEFAULT_TOL};
use crate::sphere::{PlaneChoice, ProjectionConfig, DEFAULT_EPSILON_MIN};

pub use verify::{ConfigEcho, Outcome, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CONCLUSION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable holding the seed for randomized pair sampling.
pub const SEED_VAR: &str = "SCHURKIT_SEED";

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Input(String),
    Numeric(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Numeric(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "schurkit", version, about = "Reconstruct curves from curvature and check chord comparison theorems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct NumericArgs {
    /// Maximum integration step
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    /// Tolerance for every inequality check
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

impl NumericArgs {
    pub fn control(&self) -> Result<StepControl, Failure> {
        Ok(StepControl::new(self.step, self.tol)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "thm1.1")]
    ChordComparison,
    #[value(name = "corollary")]
    NestedChords,
    #[value(name = "prop2.2")]
    AnchoredMonotonicity,
    #[value(name = "thm2.3")]
    Lorentz,
    #[value(name = "thm1.2")]
    Spherical,
    #[value(name = "eq1.1")]
    TurningBudget,
}

impl Theorem {
    pub fn id(&self) -> &'static str {
        match self {
            Theorem::ChordComparison => "thm1.1",
            Theorem::NestedChords => "corollary",
            Theorem::AnchoredMonotonicity => "prop2.2",
            Theorem::Lorentz => "thm2.3",
            Theorem::Spherical => "thm1.2",
            Theorem::TurningBudget => "eq1.1",
        }
    }
}

/// `a:b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeArg(pub f64, pub f64);

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
        let a: f64 = a.trim().parse().map_err(|e| format!("bad range start `{a}`: {e}"))?;
        let b: f64 = b.trim().parse().map_err(|e| format!("bad range end `{b}`: {e}"))?;
        if !(a < b) {
            return Err(format!("range start {a} must be below its end {b}"));
        }
        Ok(RangeArg(a, b))
    }
}

/// `auto` or an arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SStarArg {
    Auto,
    At(f64),
}

impl FromStr for SStarArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(SStarArg::Auto);
        }
        s.parse().map(SStarArg::At).map_err(|e| format!("expected `auto` or a number, got `{s}`: {e}"))
    }
}

impl fmt::Display for SStarArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SStarArg::Auto => f.write_str("auto"),
            SStarArg::At(s) => write!(f, "{s}"),
        }
    }
}

/// `auto` or `u1,u2,u3,d`; `u` is normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneArg {
    Auto,
    Fixed([f64; 3], f64),
}

impl FromStr for PlaneArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(PlaneArg::Auto);
        }
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad plane component `{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            [a, b, c, d] => Ok(PlaneArg::Fixed([*a, *b, *c], *d)),
            _ => Err(format!("expected `auto` or u1,u2,u3,d, got {} numbers", parts.len())),
        }
    }
}

impl PlaneArg {
    pub fn choice(&self) -> Result<PlaneChoice, Failure> {
        match *self {
            PlaneArg::Auto => Ok(PlaneChoice::Auto {
                epsilon_min: DEFAULT_EPSILON_MIN,
            }),
            PlaneArg::Fixed(u, d) => {
                let u = Vector3::from(u);
                if u.norm() < 1e-12 {
                    return Err(Failure::Input("plane normal must be nonzero".into()));
                }
                Ok(PlaneChoice::Fixed(ProjectionConfig::new(u.normalize(), d, DEFAULT_EPSILON_MIN)?))
            }
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reconstruct one curve and write its samples as CSV
    Reconstruct {
        spec: PathBuf,
        /// Output CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Cone-project a spherical pair onto a plane and write the lifted samples
    Project {
        spec_c: PathBuf,
        spec_c_tilde: PathBuf,
        #[arg(long, default_value = "auto")]
        plane: PlaneArg,
        /// Output CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary of the projection
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Check one theorem on a curve pair and write a JSON report
    Verify {
        theorem: Theorem,
        spec_c: PathBuf,
        spec_c_tilde: Option<PathBuf>,
        /// Parameter range s':s''
        #[arg(long)]
        range: Option<RangeArg>,
        /// Anchor point: `auto` or an arc-length value
        #[arg(long = "s-star")]
        s_star: Option<SStarArg>,
        #[arg(long, default_value = "auto")]
        plane: PlaneArg,
        /// Report path (stdout when omitted)
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Check a theorem on every pair s' < s'' of an N x N grid
    Sweep {
        theorem: Theorem,
        spec_c: PathBuf,
        spec_c_tilde: PathBuf,
        #[arg(long, default_value_t = 10)]
        grid: usize,
        /// Per-pair CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Aggregate JSON report
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        numeric: NumericArgs,
    },
}

/// Seed from the environment; 0 when unset.
pub fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| Failure::Input(format!("{SEED_VAR}=`{v}` is not an unsigned integer: {e}"))),
        Err(_) => Ok(0),
    }
}

pub(crate) fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

pub(crate) fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    text.push('\n');
    let mut out = open_output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Input(format!("cannot write report: {e}")))
}

pub fn execute(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Reconstruct { spec, out, numeric } => {
            output::reconstruct(&spec, out.as_deref(), &numeric.control()?)?;
            Ok(EXIT_PASS)
        }
        Command::Project {
            spec_c,
            spec_c_tilde,
            plane,
            out,
            report,
            numeric,
        } => {
            output::project(&spec_c, &spec_c_tilde, plane.choice()?, out.as_deref(), report.as_deref(), &numeric.control()?)?;
            Ok(EXIT_PASS)
        }
        Command::Verify {
            theorem,
            spec_c,
            spec_c_tilde,
            range,
            s_star,
            plane,
            report,
            numeric,
        } => {
            let opts = verify::Options {
                control: numeric.control()?,
                range: range.map(|r| (r.0, r.1)),
                s_star,
                plane,
                seed: seed_from_env()?,
            };
            let rep = verify::verify(theorem, &spec_c, spec_c_tilde.as_deref(), &opts)?;
            write_json(report.as_deref(), &rep)?;
            Ok(verify::announce(&rep))
        }
        Command::Sweep {
            theorem,
            spec_c,
            spec_c_tilde,
            grid,
            out,
            report,
            numeric,
        } => {
            let (rep, rows) = verify::sweep(theorem, &spec_c, &spec_c_tilde, grid, &numeric.control()?)?;
            output::write_sweep_rows(out.as_deref(), &rows)?;
            if let Some(path) = report.as_deref() {
                write_json(Some(path), &rep)?;
            }
            Ok(verify::announce(&rep))
        }
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("schurkit: {f}");
            f.exit_code()
        }
    }
}
