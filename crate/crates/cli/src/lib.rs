//! Command-line front end for `lemnisc-core`.
//!
//! All commands write to a caller-supplied sink so they can be exercised
//! without spawning a process. Exit statuses: 0 success, 1 verification
//! failure, 2 usage error, 3 numeric or domain error.

pub mod format;

use std::f64::consts::SQRT_2;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use lemnisc_core::extensions::{self, c_branch, s_branch};
use lemnisc_core::geometry::SquareLattice;
use lemnisc_core::series::{guarded_radius, radius_constants};
use lemnisc_core::verify::Verifier;
use lemnisc_core::{
    Complex, EllipticFn, Error, GridSpec, Suite, TaylorPair, ToleranceProfile, WeierstrassContext,
};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "lemnisc",
    version,
    about = "Quartic-system series, lemniscatic ℘ and its elliptic extensions"
)]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Significant digits for computed values
    #[arg(long, global = true, default_value_t = 15, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    #[value(name = "s")]
    LowerS,
    #[value(name = "c")]
    LowerC,
    #[value(name = "S")]
    S,
    #[value(name = "C")]
    C,
    #[value(name = "P")]
    P,
    #[value(name = "sl")]
    Sl,
    #[value(name = "sd")]
    Sd,
    #[value(name = "wp")]
    Wp,
    #[value(name = "wp_prime")]
    WpPrime,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the reference constants
    Constants,
    /// Evaluate one function at one point
    Eval {
        #[arg(long = "fn", value_enum)]
        function: Function,
        /// Complex literal: a, bi, a+bi or a-bi
        #[arg(long, allow_hyphen_values = true, value_parser = parse_z)]
        z: Complex,
    },
    /// Evaluate a function over a square grid
    Grid {
        #[arg(long = "fn", value_enum)]
        function: Function,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_z, default_value = "0")]
        center: Complex,
        #[arg(long, default_value_t = 1.0)]
        half_width: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Radius around singular points whose samples are skipped
        #[arg(long, default_value_t = 0.0)]
        exclusion: f64,
    },
    /// Dump Taylor coefficients a_n, b_n for n = 0..=N
    Coeffs {
        #[arg(long = "n", value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Enumerate the poles of S, C and P
    Poles {
        #[arg(long = "m", num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
        m: Vec<i64>,
        #[arg(long = "n", num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true, required = true)]
        n: Vec<i64>,
    },
    /// Run identity suites and print their reports
    Verify {
        /// Suite name or `all` (repeatable)
        #[arg(long = "suite", default_value = "all")]
        suites: Vec<String>,
        /// Absolute tolerance override, `suite=value` (repeatable)
        #[arg(long = "tol", value_parser = parse_override)]
        overrides: Vec<(String, f64)>,
        #[arg(long, value_enum, default_value_t = Profile::Default)]
        profile: Profile,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    Default,
    Strict,
}

impl From<Profile> for ToleranceProfile {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Default => ToleranceProfile::Default,
            Profile::Strict => ToleranceProfile::Strict,
        }
    }
}

fn parse_z(text: &str) -> Result<Complex, String> {
    format::parse_complex(text)
}

fn parse_override(text: &str) -> Result<(String, f64), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected suite=value, got `{text}`"))?;
    let tol: f64 = value
        .parse()
        .map_err(|_| format!("invalid tolerance `{value}`"))?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(format!(
            "tolerance must be positive and finite, got `{value}`"
        ));
    }
    Ok((name.to_string(), tol))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_)
            | Self::Numeric(Error::UnknownSuite { .. } | Error::InvalidParameter(_)) => 2,
            _ => 3,
        }
    }
}

/// Outcome of a successful command: `false` only when verification ran and
/// some suite failed.
pub type Outcome = Result<bool, CliError>;

struct Ctx {
    format: OutputFormat,
    digits: usize,
}

impl Ctx {
    fn round(&self, x: f64) -> f64 {
        format::round(x, self.digits)
    }

    fn num(&self, x: f64) -> Value {
        json_number(self.round(x))
    }

    fn csv<W: Write>(&self, out: W) -> csv::Writer<W> {
        csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out)
    }
}

/// Integral values print without a fractional part.
fn json_number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        Value::from(x as i64)
    } else {
        Value::from(x)
    }
}

fn print_json<W: Write>(out: &mut W, value: &Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Outcome {
    let ctx = Ctx {
        format: cli.format,
        digits: cli.digits as usize,
    };
    match &cli.command {
        Command::Constants => constants(&ctx, out).map(|_| true),
        Command::Eval { function, z } => eval(&ctx, out, *function, *z).map(|_| true),
        Command::Grid {
            function,
            center,
            half_width,
            points,
            exclusion,
        } => {
            let grid = GridSpec::new(*center, *half_width, *points, *exclusion)?;
            grid_cmd(&ctx, out, *function, &grid).map(|_| true)
        }
        Command::Coeffs { n } => coeffs(&ctx, out, *n as usize).map(|_| true),
        Command::Poles { m, n } => poles(&ctx, out, (m[0], m[1]), (n[0], n[1])).map(|_| true),
        Command::Verify {
            suites,
            overrides,
            profile,
        } => verify(out, suites, overrides, (*profile).into()),
    }
}

fn constants<W: Write>(ctx: &Ctx, out: &mut W) -> Result<(), CliError> {
    let radii = radius_constants();
    let wp = WeierstrassContext::default();
    let (p1, p2) = wp.periods();
    match ctx.format {
        OutputFormat::Json => {
            let value = json!({
                "picard_radius": ctx.num(radii.picard_radius),
                "scalar_radius": ctx.num(radii.scalar_radius),
                "omega": ctx.num(wp.omega()),
                "omega_over_sqrt2": ctx.num(wp.omega() / SQRT_2),
                "periods": [[ctx.num(p1.re), ctx.num(p1.im)], [ctx.num(p2.re), ctx.num(p2.im)]],
                "g2": ctx.num(wp.g2()),
                "g3": ctx.num(wp.g3()),
            });
            print_json(out, &value)
        }
        OutputFormat::Csv => {
            let d = ctx.digits;
            let mut w = ctx.csv(out);
            w.write_record(["name", "value"])?;
            let rows = [
                ("picard_radius", format::number(radii.picard_radius, d)),
                ("scalar_radius", format::number(radii.scalar_radius, d)),
                ("omega", format::number(wp.omega(), d)),
                ("omega_over_sqrt2", format::number(wp.omega() / SQRT_2, d)),
                ("period_1", format::complex(p1, d)),
                ("period_2", format::complex(p2, d)),
                ("g2", format::number(wp.g2(), d)),
                ("g3", format::number(wp.g3(), d)),
            ];
            for (name, value) in rows {
                w.write_record([name, value.as_str()])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Self::LowerS => "s",
            Self::LowerC => "c",
            Self::S => "S",
            Self::C => "C",
            Self::P => "P",
            Self::Sl => "sl",
            Self::Sd => "sd",
            Self::Wp => "wp",
            Self::WpPrime => "wp_prime",
        }
    }

    fn elliptic(self) -> Option<EllipticFn> {
        match self {
            Self::S => Some(EllipticFn::S),
            Self::C => Some(EllipticFn::C),
            Self::P => Some(EllipticFn::P),
            Self::Sl => Some(EllipticFn::Sl),
            Self::Sd => Some(EllipticFn::Sd),
            _ => None,
        }
    }

    /// Points where the function has a pole or branch point.
    fn singularities(self, omega: f64) -> SquareLattice {
        match self {
            Self::Wp | Self::WpPrime => SquareLattice::periods(omega),
            Self::LowerS | Self::LowerC => SquareLattice::extension_poles(omega),
            f => f.elliptic().expect("elliptic variant").poles(omega),
        }
    }

    /// Series inside the guarded disc, branch continuation beyond it.
    pub fn eval(self, wp: &WeierstrassContext, z: Complex) -> lemnisc_core::Result<Complex> {
        let series = |z: Complex| -> Option<lemnisc_core::Result<TaylorPair>> {
            (z.norm() <= guarded_radius()).then(|| TaylorPair::for_radius(z.norm()))
        };
        match self {
            Self::LowerS => match series(z) {
                Some(tp) => tp?.eval_s(z),
                None => s_branch(wp, z),
            },
            Self::LowerC => match series(z) {
                Some(tp) => tp?.eval_c(z),
                None => c_branch(wp, z),
            },
            Self::Wp => wp.wp(z),
            Self::WpPrime => wp.wp_prime(z),
            f => f.elliptic().expect("elliptic variant").eval(wp, z),
        }
    }
}

fn eval<W: Write>(ctx: &Ctx, out: &mut W, function: Function, z: Complex) -> Result<(), CliError> {
    let wp = WeierstrassContext::default();
    let value = function.eval(&wp, z)?;
    let d = ctx.digits;
    match ctx.format {
        OutputFormat::Json => print_json(
            out,
            &json!({
                "fn": function.name(),
                "z": format::complex(z, d),
                "value": format::complex(value, d),
                "re": ctx.num(value.re),
                "im": ctx.num(value.im),
            }),
        ),
        OutputFormat::Csv => {
            let mut w = ctx.csv(out);
            w.write_record(["fn", "re_z", "im_z", "re_f", "im_f"])?;
            w.write_record([
                function.name().to_string(),
                format::number(z.re, d),
                format::number(z.im, d),
                format::number(value.re, d),
                format::number(value.im, d),
            ])?;
            w.flush()?;
            Ok(())
        }
    }
}

/// Evaluates `function` on every grid sample; `None` marks an excluded point.
pub fn grid_values(function: Function, grid: &GridSpec) -> Vec<(Complex, Option<Complex>)> {
    let wp = WeierstrassContext::default();
    let singular = function.singularities(wp.omega());
    grid.samples()
        .into_par_iter()
        .map(|z| {
            let value = if singular.distance(z) < grid.exclusion_radius {
                None
            } else {
                function.eval(&wp, z).ok()
            };
            (z, value)
        })
        .collect()
}

fn grid_cmd<W: Write>(
    ctx: &Ctx,
    out: &mut W,
    function: Function,
    grid: &GridSpec,
) -> Result<(), CliError> {
    let rows = grid_values(function, grid);
    let d = ctx.digits;
    match ctx.format {
        OutputFormat::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|(z, v)| match v {
                    Some(f) => json!([ctx.num(z.re), ctx.num(z.im), ctx.num(f.re), ctx.num(f.im)]),
                    None => json!([ctx.num(z.re), ctx.num(z.im), null, null]),
                })
                .collect();
            print_json(out, &Value::Array(values))
        }
        OutputFormat::Csv => {
            let mut w = ctx.csv(out);
            w.write_record(["re_z", "im_z", "re_f", "im_f", "excluded"])?;
            for (z, v) in &rows {
                let (re, im, excluded) = match v {
                    Some(f) => (format::number(f.re, d), format::number(f.im, d), "0"),
                    None => (String::new(), String::new(), "1"),
                };
                w.write_record([
                    &format::number(z.re, d),
                    &format::number(z.im, d),
                    &re,
                    &im,
                    excluded,
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn coeffs<W: Write>(ctx: &Ctx, out: &mut W, n: usize) -> Result<(), CliError> {
    let tp = TaylorPair::new(n)?;
    match ctx.format {
        OutputFormat::Json => {
            let rows: Vec<Value> = (0..=n)
                .map(|k| json!({"n": k, "a_n": json_number(tp.a(k)), "b_n": json_number(tp.b(k))}))
                .collect();
            print_json(out, &Value::Array(rows))
        }
        OutputFormat::Csv => {
            let mut w = ctx.csv(out);
            w.write_record(["n", "a_n", "b_n"])?;
            for k in 0..=n {
                w.write_record([
                    k.to_string(),
                    format::number(tp.a(k), 17),
                    format::number(tp.b(k), 17),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn poles<W: Write>(ctx: &Ctx, out: &mut W, m: (i64, i64), n: (i64, i64)) -> Result<(), CliError> {
    const LIMIT: i64 = 1000;
    for (name, (lo, hi)) in [("m", m), ("n", n)] {
        if lo > hi {
            return Err(CliError::Usage(format!(
                "--{name} range is empty: {lo} > {hi}"
            )));
        }
        if lo.abs() > LIMIT || hi.abs() > LIMIT {
            return Err(CliError::Usage(format!(
                "--{name} bounds must lie in [-{LIMIT}, {LIMIT}]"
            )));
        }
    }
    let wp = WeierstrassContext::default();
    let points = extensions::pole_set(&wp, m.0..=m.1, n.0..=n.1);
    let d = ctx.digits;
    match ctx.format {
        OutputFormat::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|p| json!([ctx.num(p.re), ctx.num(p.im)]))
                .collect();
            print_json(out, &Value::Array(rows))
        }
        OutputFormat::Csv => {
            let mut w = ctx.csv(out);
            w.write_record(["re", "im"])?;
            for p in &points {
                w.write_record([format::number(p.re, d), format::number(p.im, d)])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>, CliError> {
    let mut selected = Vec::new();
    for name in names.iter().flat_map(|n| n.split(',')) {
        if name == "all" {
            selected.extend(Suite::ALL);
        } else {
            selected.push(name.parse::<Suite>()?);
        }
    }
    let mut seen = Vec::new();
    selected.retain(|s| {
        let fresh = !seen.contains(s);
        seen.push(*s);
        fresh
    });
    Ok(selected)
}

fn verify<W: Write>(
    out: &mut W,
    names: &[String],
    overrides: &[(String, f64)],
    profile: ToleranceProfile,
) -> Outcome {
    let selected = parse_suites(names)?;
    let overrides = overrides
        .iter()
        .map(|(name, tol)| Ok((name.parse::<Suite>()?, *tol)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let reports = Verifier::default().run_many(&selected, profile, &overrides)?;
    serde_json::to_writer_pretty(&mut *out, &reports)?;
    writeln!(out)?;
    for r in reports.iter().filter(|r| !r.passed) {
        eprintln!(
            "suite {} failed: max residual {:e} > tolerance {:e}",
            r.suite, r.max_residual, r.tolerance
        );
    }
    Ok(lemnisc_core::verify::all_passed(&reports))
}
