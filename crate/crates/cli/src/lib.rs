//! Command-line front end for the identity catalog, the Euler expander and
//! approximant tables.
//!
//! Exit codes: 0 when everything checked passes, 1 when a check fails or the
//! expander runs out of precision, 2 for usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcfrac::catalog::{self, lookup, register_all, IdentityEntry, Plan, RunReport, VerifyOptions};
use qcfrac::cfrac::{numeric_value, worpitzky_index, CFrac, NumericCF, WORPITZKY_HORIZON};
use qcfrac::euler::{euclid_cf, euclid_value, euler_expand_with_floor, render_quotients, EulerError, SAFETY_FLOOR};
use qcfrac::qseries::{build_family_with, sample_params, Family, Lift, ParamPoint};
use qcfrac::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qcfrac", version, about = "Exact checks of q-series continued fraction identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify one identity, or `all`, at sampled or explicit parameters.
    Verify(VerifyArgs),
    /// Expand N/D with Euler's division step.
    Expand(ExpandArgs),
    /// Table of approximants of a continued fraction entry.
    Approximants(ApproximantArgs),
    /// Regular continued fraction of a positive rational.
    Euclid {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Tsv,
}

#[derive(Args, Debug)]
struct RunFlags {
    #[arg(long, default_value_t = 40)]
    order: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 3)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit point, e.g. `a=1/3,b=1/5,l=1/7`. Missing parameters come from the seed.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report in `--format` here; stdout then gets the text lines.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity id, or `all`.
    id: String,
    #[command(flatten)]
    run: RunFlags,
    /// Record wall-clock time per report.
    #[arg(long)]
    timings: bool,
    /// Add 1 to the lowest coefficient of partial numerator N (fraction entries only).
    #[arg(long, value_name = "N")]
    perturb_element: Option<usize>,
}

#[derive(Args, Debug)]
struct ExpandArgs {
    /// Numerator family, `NAME[:shift]`.
    #[arg(long)]
    num: String,
    /// Denominator family, `NAME[:shift]`.
    #[arg(long)]
    den: String,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40)]
    order: usize,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Parameters to multiply by q, e.g. `a,l`.
    #[arg(long, default_value = "none")]
    lift: String,
    /// Stop before a step would leave fewer usable orders than this.
    #[arg(long, default_value_t = SAFETY_FLOOR)]
    floor: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ApproximantArgs {
    id: String,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Truncation order. By default large enough to show the contact of every row, up to 120.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Also evaluate the approximants numerically at this q, e.g. `1/2`.
    #[arg(long)]
    at_q: Option<String>,
}

/// Validated settings shared by the verification commands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub order: usize,
    pub depth: usize,
    pub points: usize,
    pub seed: u64,
    pub params: Option<ParamPoint>,
    pub format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    fn from_flags(f: &RunFlags) -> Result<Self, String> {
        if f.order < 4 {
            return Err(format!("--order must be at least 4, got {}", f.order));
        }
        if f.depth < 1 {
            return Err("--depth must be at least 1".into());
        }
        if f.points < 1 {
            return Err("--points must be at least 1".into());
        }
        Ok(RunConfig {
            order: f.order,
            depth: f.depth,
            points: f.points,
            seed: f.seed,
            params: f.params.as_deref().map(|s| parse_params(s, f.seed)).transpose()?,
            format: f.format,
            output_path: f.output.clone(),
        })
    }
}

fn parse_params(s: &str, seed: u64) -> Result<ParamPoint, String> {
    let defaults = sample_params(seed, 1).remove(0);
    ParamPoint::parse_with_defaults(s, &defaults).map_err(|e| format!("--params: {e}"))
}

fn params_or_default(s: Option<&str>, seed: u64) -> Result<ParamPoint, String> {
    match s {
        Some(s) => parse_params(s, seed),
        None => Ok(sample_params(seed, 1).remove(0)),
    }
}

fn parse_lift(s: &str) -> Result<Lift, String> {
    let mut lift = Lift::NONE;
    for name in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match name {
            "none" => {}
            "a" => lift.a = true,
            "b" => lift.b = true,
            "l" | "lambda" => lift.lambda = true,
            other => return Err(format!("--lift: unknown parameter `{other}`")),
        }
    }
    Ok(lift)
}

/// `NAME[:shift]`, shift defaulting to the family's smallest.
fn parse_family(s: &str) -> Result<(Family, usize), String> {
    let (name, shift) = match s.split_once(':') {
        Some((n, sh)) => (n, Some(sh)),
        None => (s, None),
    };
    let family: Family = name.parse().map_err(|e| format!("{e}"))?;
    let shift = match shift {
        Some(sh) => sh.parse().map_err(|_| format!("bad shift `{sh}` in `{s}`"))?,
        None => family.default_shift(),
    };
    Ok((family, shift))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Expand(a) => cmd_expand(&a, out),
        Command::Approximants(a) => cmd_approximants(&a, out),
        Command::Euclid { fraction } => cmd_euclid(&fraction, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

enum CliError {
    Usage(String),
    Failed(String),
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("write failed: {e}"))
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = RunConfig::from_flags(&a.run)?;
    let entries: Vec<IdentityEntry> = if a.id == "all" {
        register_all()
    } else {
        vec![lookup(&a.id).ok_or_else(|| format!("unknown identity `{}`", a.id))?]
    };
    if let Some(n) = a.perturb_element {
        if n == 0 {
            return Err("--perturb-element counts partial numerators from 1".to_string().into());
        }
        if !entries.iter().any(|e| e.kind.is_cf()) {
            return Err(format!("--perturb-element needs a continued fraction entry, `{}` is not one", a.id).into());
        }
    }
    let plan = Plan {
        seed: cfg.seed,
        points: cfg.points,
        order: cfg.order,
        depth: cfg.depth,
        at: cfg.params.clone(),
        options: VerifyOptions {
            perturb_element: a.perturb_element,
            timings: a.timings,
            dump: cfg.format != Format::Text,
        },
    };
    let report = catalog::run_plan(&entries, &plan).map_err(|e| e.to_string())?;
    let text = render_text(&report);
    let rendered = match cfg.format {
        Format::Text => text.clone(),
        Format::Json => report.to_json() + "\n",
        Format::Tsv => report.to_tsv(),
    };
    match &cfg.output_path {
        Some(path) => {
            std::fs::write(path, &rendered)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            out.write_all(text.as_bytes())?;
        }
        None => out.write_all(rendered.as_bytes())?,
    }
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_FAIL })
}

fn render_text(report: &RunReport) -> String {
    let titles: Vec<(&str, &str)> = register_all().iter().map(|e| (e.id, e.title)).collect();
    let title = |id: &str| titles.iter().find(|t| t.0 == id).map_or("", |t| t.1);
    let mut s = String::new();
    for r in &report.reports {
        let _ = writeln!(s, "{}", r.line(title(&r.id)));
    }
    for r in &report.reductions {
        let _ = writeln!(s, "{}", r.line());
    }
    let sm = report.summary;
    let _ = writeln!(s, "summary: pass={} fail={} skip={}", sm.pass, sm.fail, sm.skip);
    s
}

fn cmd_expand(a: &ExpandArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if a.order < 4 {
        return Err(format!("--order must be at least 4, got {}", a.order).into());
    }
    let p = params_or_default(a.params.as_deref(), a.seed)?;
    let sp = parse_lift(&a.lift)?.apply(&p);
    let (fn_, sn) = parse_family(&a.num)?;
    let (fd, sd) = parse_family(&a.den)?;
    let build = |f, s| build_family_with(f, s, &sp, a.order).map_err(|e| CliError::Usage(e.to_string()));
    let (n, d) = (build(fn_, sn)?, build(fd, sd)?);
    match euler_expand_with_floor(&n, &d, a.depth, a.floor) {
        Ok(trace) => {
            if a.format == Format::Json {
                let json = serde_json::to_string_pretty(&trace.record()).expect("trace serializes");
                writeln!(out, "{json}")?;
            } else {
                write!(out, "{trace}")?;
                writeln!(out, "residual_order = {}", trace.residual_order)?;
                if trace.terminated {
                    if trace.steps.is_empty() {
                        writeln!(out, "terminated: ratio is 1")?;
                    } else {
                        writeln!(out, "terminated: remaining ratio is 1 after {} steps", trace.steps.len())?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Err(EulerError::PrecisionExhausted { floor, trace }) => {
            write!(out, "{trace}")?;
            writeln!(out, "residual_order = {}", trace.residual_order)?;
            Err(CliError::Failed(format!(
                "precision exhausted after {} steps: the next step would leave fewer than {floor} usable orders; raise --order",
                trace.steps.len()
            )))
        }
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

/// Order through which row `depth` should agree with the target, clamped to `40..=120`.
fn auto_order(cf: &CFrac, depth: usize) -> usize {
    let total: usize = (1..=depth).map(|n| cf.element(n, 4 * n + 16).a.valuation().unwrap_or(4 * n + 16)).sum();
    (total + 1).clamp(40, 120)
}

fn cmd_approximants(a: &ApproximantArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let entry = lookup(&a.id).ok_or_else(|| format!("unknown identity `{}`", a.id))?;
    if !entry.kind.is_cf() {
        return Err(format!("`{}` is not a continued fraction entry", a.id).into());
    }
    if a.depth < 1 {
        return Err("--depth must be at least 1".to_string().into());
    }
    let p = params_or_default(a.params.as_deref(), a.seed)?;
    entry.check_constraints(&p).map_err(CliError::Usage)?;
    let (cf, _) = entry.fraction(&p, 4).expect("fraction entry").map_err(|e| CliError::Usage(e.to_string()))?;
    let order = match a.order {
        Some(o) if o < 4 => return Err(format!("--order must be at least 4, got {o}").into()),
        Some(o) => o,
        None => auto_order(&cf, a.depth + 1),
    };
    let (cf, target) =
        entry.fraction(&p, order).expect("fraction entry").map_err(|e| CliError::Usage(e.to_string()))?;
    let approx = cf.approximants(a.depth, order).map_err(|e| CliError::Usage(e.to_string()))?;
    let numeric = match &a.at_q {
        None => None,
        Some(s) => {
            let q: Rational = s.parse().map_err(|e| format!("--at-q: {e}"))?;
            Some((NumericCF::from_cfrac(&cf, &q).map_err(|e| CliError::Usage(e.to_string()))?, q))
        }
    };
    writeln!(out, "# {} at {} order={}", entry.id, entry.effective_point(&p), order)?;
    let mut header = String::from("n\tfirst_mismatch_power");
    if numeric.is_some() {
        header.push_str("\tvalue\tdelta");
    }
    writeln!(out, "{header}")?;
    let mut prev = match &numeric {
        Some((ncf, _)) => Some(numeric_value(ncf, 0).map_err(|e| CliError::Failed(e.to_string()))?),
        None => None,
    };
    for (n, s) in approx.iter().enumerate().skip(1) {
        let m = s.first_mismatch(&target).map_or(format!(">{order}"), |m| m.to_string());
        let mut row = format!("{n}\t{m}");
        if let Some((ncf, _)) = &numeric {
            let v = numeric_value(ncf, n).map_err(|e| CliError::Failed(e.to_string()))?;
            let _ = write!(row, "\t{v:.17e}\t{:.3e}", (v - prev.unwrap_or(v)).abs());
            prev = Some(v);
        }
        writeln!(out, "{row}")?;
    }
    if let Some((ncf, q)) = &numeric {
        let unit = unit_denominator_form(ncf.clone());
        match worpitzky_index(&unit, 0.25, WORPITZKY_HORIZON) {
            Ok(i) => writeln!(out, "# worpitzky_index\t{i}")?,
            Err(e) => writeln!(out, "# worpitzky_index\tnone ({e})")?,
        }
        let oracle = target.evaluate(q).to_f64();
        writeln!(out, "# series_ratio_at_q\t{oracle:.17e}\t(truncated at order {order})")?;
        if let Some(last) = prev {
            writeln!(out, "# |S_{} - series_ratio|\t{:.3e}", a.depth, (last - oracle).abs())?;
        }
    }
    Ok(EXIT_OK)
}

/// Numeric elements `a_n / (b_(n-1) b_n)` with unit denominators, the form
/// the Worpitzky bound `|a_n| <= 1/4` refers to.
fn unit_denominator_form(ncf: NumericCF) -> NumericCF {
    NumericCF::new(1.0, move |n| {
        let (a, b) = ncf.element(n);
        let prev = if n == 1 { ncf.b0() } else { ncf.element(n - 1).1 };
        (a / (prev * b), 1.0)
    })
}

fn cmd_euclid(s: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let x: Rational = s.trim().parse().map_err(|e| format!("`{s}`: {e}"))?;
    if x.is_negative() || x.is_zero() {
        return Err(format!("`{s}` is not a positive rational").into());
    }
    let quotients = euclid_cf(x.numer(), x.denom()).map_err(|e| e.to_string())?;
    writeln!(out, "{x} = {}", render_quotients(&quotients))?;
    writeln!(out, "reconstructed: {}", euclid_value(&quotients))?;
    Ok(EXIT_OK)
}
