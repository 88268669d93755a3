//! Argument parsing and dispatch. `run` never exits the process; it returns
//! the exit status so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use floerkit_core::analyzer::{hfk_hat, property_g_report, Assumptions};
use floerkit_core::surgery::{large_surgery_at, zero_surgery_homology, zero_surgery_twisted};
use floerkit_core::{validate_complex, CfkComplex, Error, Field, FieldKind, F2};
use num_rational::BigRational;

use crate::fuzz::{run_fuzz, FuzzSpec};
use crate::json::parse_complex;
use crate::report::{
    AnalyzeReport, FuzzCase, FuzzReport, Header, HfkLevel, HfkReport, LargeReport, Report, TwistedReport,
    ValidateReport, ZeroReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSTABILIZED: i32 = 3;
/// Fuzz or selftest found a failing invariant.
pub const EXIT_FINDING: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    F2,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "floerkit", version, about = "Exact Heegaard Floer surgery computations from CFK-infinity models")]
pub struct Cli {
    /// Coefficient field; overrides the document's `field`.
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every invariant of a complex and list violations.
    Validate { file: PathBuf },
    /// Knot Floer homology by Alexander grading.
    Hfk {
        file: PathBuf,
        #[arg(short = 'k', allow_negative_numbers = true)]
        k: Option<i64>,
    },
    /// Homology of n-surgery in the spin^c structure k (default 0).
    SurgeryLarge {
        file: PathBuf,
        #[arg(short = 'n', allow_negative_numbers = true)]
        n: i64,
        #[arg(short = 'k', allow_negative_numbers = true, default_value_t = 0)]
        k: i64,
        /// Run even when n is below twice the top Alexander grading.
        #[arg(long)]
        force: bool,
    },
    /// Homology of zero-surgery in spin^c structure k, via the mapping cone.
    SurgeryZero {
        file: PathBuf,
        #[arg(short = 'k', allow_negative_numbers = true)]
        k: i64,
        /// Use coefficients twisted by T (generic rank over Q(T) or F2(T)).
        #[arg(long)]
        twisted: bool,
    },
    /// Detector report: top grading, fiberedness, rank identities, conditions.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        assume_irreducible: bool,
        #[arg(long)]
        assume_taut: bool,
        #[arg(long)]
        assume_torsion_spinc: bool,
    },
    /// Generate flip-valid complexes and run the invariant suite on each.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_generators: usize,
        #[arg(long, default_value_t = 3)]
        width: i64,
    },
    /// Run every acceptance criterion.
    Selftest,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unstabilized { .. } => EXIT_UNSTABILIZED,
        Error::GenusBound { .. } | Error::NonPositiveSurgery(_) | Error::AmbiguousSpinc { .. } => EXIT_USAGE,
        _ => EXIT_INVALID,
    }
}

/// A failed invocation: status plus the diagnostic line.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(exit_code(&e), format!("error: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, format!("error: {}", msg.into()))
}

fn check_options(cmd: &Command) -> Result<(), Failure> {
    match cmd {
        Command::SurgeryLarge { n, .. } if *n <= 0 => Err(usage(format!("-n must be positive, got {n}"))),
        Command::Fuzz { count: 0, .. } => Err(usage("--count must be positive")),
        Command::Fuzz { max_generators: 0, .. } => Err(usage("--max-generators must be positive")),
        Command::Fuzz { width, .. } if *width < 0 => Err(usage("--width must be nonnegative")),
        _ => Ok(()),
    }
}

fn load(path: &PathBuf, field: Option<FieldArg>) -> Result<CfkComplex, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut c = parse_complex(&text).map_err(|e| Failure(EXIT_INVALID, format!("error: {}: {e}", path.display())))?;
    if let Some(f) = field {
        c.field = match f {
            FieldArg::F2 => FieldKind::F2,
            FieldArg::Q => FieldKind::Q,
        };
    }
    Ok(c)
}

/// Loads and validates; computing verbs refuse invalid complexes.
fn load_valid(path: &PathBuf, field: Option<FieldArg>) -> Result<CfkComplex, Failure> {
    let c = load(path, field)?;
    let report = validate_complex(&c);
    if !report.is_valid() {
        let mut msg = format!("error: {} is not a valid complex over {}:", c.name, c.field);
        for v in &report.violations {
            msg.push_str(&format!("\n  {}: {v}", v.kind()));
        }
        return Err(Failure(EXIT_INVALID, msg));
    }
    Ok(c)
}

fn header(c: &CfkComplex) -> Header {
    Header {
        name: c.name.clone(),
        field: c.field.to_string(),
        base: c.base_generator().map(|g| g.name.clone()).unwrap_or_default(),
    }
}

fn hfk_levels<F: Field>(c: &CfkComplex, k: Option<i64>) -> Result<Vec<HfkLevel>, Error> {
    let ks: Vec<i64> = match k {
        Some(k) => vec![k],
        None => {
            let hi = c.generators.iter().map(|g| g.alexander).max().unwrap_or(0);
            let lo = c.generators.iter().map(|g| g.alexander).min().unwrap_or(0);
            (lo..=hi).rev().collect()
        }
    };
    ks.into_iter()
        .map(|k| {
            let dims = hfk_hat::<F>(c, k)?;
            Ok(HfkLevel { k, total: dims.values().sum(), by_grading: dims.into_iter().collect() })
        })
        .collect()
}

fn compute<F: Field>(c: &CfkComplex, cmd: &Command) -> Result<Report, Error> {
    let header = header(c);
    Ok(match cmd {
        Command::Hfk { k, .. } => Report::Hfk(HfkReport { header, levels: hfk_levels::<F>(c, *k)? }),
        Command::SurgeryLarge { n, k, force, .. } => {
            let r = large_surgery_at::<F>(c, *n, *k, *force)?;
            Report::SurgeryLarge(LargeReport {
                header,
                n: r.n,
                k: r.k,
                hypothesis_verified: r.hypothesis_verified,
                module: (&r.module).into(),
            })
        }
        Command::SurgeryZero { k, twisted: false, .. } => {
            c.ensure_flip()?;
            let m = zero_surgery_homology::<F>(c, *k)?;
            Report::SurgeryZero(ZeroReport { header, k: *k, module: (&m).into() })
        }
        Command::SurgeryZero { k, twisted: true, .. } => {
            c.ensure_flip()?;
            let t = zero_surgery_twisted::<F>(c, *k)?;
            Report::SurgeryZeroTwisted(TwistedReport {
                header,
                k: *k,
                generic_rank: t.generic_rank,
                corank: t.corank,
                modulus: t.modulus,
                per_grading: t.per_grading,
            })
        }
        Command::Analyze { assume_irreducible, assume_taut, assume_torsion_spinc, .. } => {
            let assumptions = Assumptions {
                irreducible: *assume_irreducible,
                taut: *assume_taut,
                torsion_spinc: *assume_torsion_spinc,
            };
            Report::Analyze(AnalyzeReport::new(header, &property_g_report::<F>(c, assumptions)?))
        }
        Command::Validate { .. } | Command::Fuzz { .. } | Command::Selftest => {
            unreachable!("handled without a field dispatch")
        }
    })
}

pub fn fuzz_report(spec: &FuzzSpec, field: FieldKind) -> Report {
    let outcomes = match field {
        FieldKind::F2 => run_fuzz::<F2>(spec),
        FieldKind::Q => run_fuzz::<BigRational>(spec),
    };
    let cases: Vec<FuzzCase> = outcomes
        .into_iter()
        .map(|o| FuzzCase {
            index: o.index,
            seed: o.seed,
            name: o.name,
            generators: o.generators,
            failure: o.result.err(),
        })
        .collect();
    Report::Fuzz(FuzzReport {
        seed: spec.seed,
        count: spec.count,
        max_generators: spec.max_generators,
        width: spec.width,
        passed: cases.iter().filter(|c| c.failure.is_none()).count(),
        reproducer: cases.iter().find(|c| c.failure.is_some()).map(|c| c.seed),
        cases,
    })
}

fn execute(cli: &Cli) -> Result<(Report, i32), Failure> {
    check_options(&cli.command)?;
    let field_of = |c: &CfkComplex| c.field;
    match &cli.command {
        Command::Validate { file } => {
            let c = load(file, cli.field)?;
            let r = ValidateReport::new(&c.name, &c.field.to_string(), &validate_complex(&c));
            let code = if r.valid { EXIT_OK } else { EXIT_INVALID };
            Ok((Report::Validate(r), code))
        }
        Command::Fuzz { seed, count, max_generators, width } => {
            let spec = FuzzSpec { seed: *seed, count: *count, max_generators: *max_generators, width: *width };
            let field = match cli.field {
                Some(FieldArg::Q) => FieldKind::Q,
                _ => FieldKind::F2,
            };
            let report = fuzz_report(&spec, field);
            let code = match &report {
                Report::Fuzz(r) if r.passed == r.count => EXIT_OK,
                _ => EXIT_FINDING,
            };
            Ok((report, code))
        }
        Command::Selftest => {
            let report = crate::selftest::run_selftest();
            let code = match &report {
                Report::Selftest(r) if r.passed => EXIT_OK,
                _ => EXIT_FINDING,
            };
            Ok((report, code))
        }
        Command::Hfk { file, .. }
        | Command::SurgeryLarge { file, .. }
        | Command::SurgeryZero { file, .. }
        | Command::Analyze { file, .. } => {
            let c = load_valid(file, cli.field)?;
            let report = match field_of(&c) {
                FieldKind::F2 => compute::<F2>(&c, &cli.command)?,
                FieldKind::Q => compute::<BigRational>(&c, &cli.command)?,
            };
            Ok((report, EXIT_OK))
        }
    }
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((report, code)) => {
            let text = match cli.format {
                Format::Table => report.to_table(),
                Format::Json => report.to_json() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "{msg}");
            code
        }
    }
}
