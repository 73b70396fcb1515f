//! Command-line front end for the multiplicative geometry library.
//!
//! Exit codes: 0 success / all checks pass, 1 a verification or
//! classification verdict failed, 2 usage, parse, or domain errors.
//!
//! Stream conventions: the machine-readable artifact (CSV for `frame`,
//! JSON for `classify`/`verify`/`partner`/`synthesize`, SVG for `plot`)
//! goes to `--out` when given and to standard output otherwise; the
//! human summary goes to standard output when the artifact went to a
//! file and to standard error otherwise. `partner` and `synthesize`
//! reserve `--out` for their sample CSV and always print the JSON
//! report to standard output.

mod source;
mod svg;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mulgeo::curve::{curve_from_curvature_jets, FrameStart, DEFAULT_CLASSIFY_TOL};
use mulgeo::jet::Taylor;
use mulgeo::partner::{DEFAULT_PARTNER_SAMPLES, DEFAULT_PARTNER_TOL};
use mulgeo::{
    bertrand_partner, bertrand_verify, classify_helix, frenet, is_natural, mannheim_partner,
    mannheim_verify, parse_mexpr, rectifying_fit, reparametrize_natural, slant_helix_sigma,
    spherical_check, CheckStatus, ClassificationReport, CurveJet, CurveKind, FrenetApparatus,
    MNum, PartnerReport,
};

use source::{curve_of, parse_source, SourceObject};
use svg::{Geometry, PlotItem};

const FRAME_HEADER: &str = "s,x1,x2,x3,t1,t2,t3,n1,n2,n3,b1,b2,b3,kappa,tau";

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification) => ExitCode::from(1),
        Err(err) => {
            eprintln!("mulgeo: {err}");
            ExitCode::from(2)
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(mulgeo::Error),
    Io(std::io::Error),
    /// A verdict failed; the report has already been printed.
    Verification,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> CliError {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(err) => write!(f, "{err}"),
            CliError::Io(err) => write!(f, "{err}"),
            CliError::Verification => write!(f, "verification failed"),
        }
    }
}

impl From<mulgeo::Error> for CliError {
    fn from(err: mulgeo::Error) -> CliError {
        CliError::Lib(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::Io(err)
    }
}

#[derive(Parser)]
#[command(name = "mulgeo", version, about = "Multiplicative differential geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a multiplicative expression at a parameter value
    Eval(EvalArgs),
    /// Sample a curve's multiplicative Frenet apparatus as CSV
    Frame(FrameArgs),
    /// Run the shape classifiers and report JSON
    Classify(ClassifyArgs),
    /// Construct a Bertrand or Mannheim partner and verify the pair
    Partner(PartnerArgs),
    /// Verify the partner-curve identities on a given pair
    Verify(VerifyArgs),
    /// Integrate curvature and torsion profiles into a curve
    Synthesize(SynthArgs),
    /// Render curves and planes to SVG
    Plot(PlotArgs),
}

/// Single-curve input: a source string or a CurveSpec file.
#[derive(Args)]
struct CurveArg {
    /// Curve source: circle | helix:a=..,b=.. | sphcurve:m=.. | spec:<path> |
    /// natural(..) | bertrand-partner(..,lambda=..) | mannheim-partner(..)
    #[arg(long, value_name = "SOURCE")]
    curve: Option<String>,
    /// CurveSpec JSON file (same as --curve spec:<path>)
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
}

impl CurveArg {
    fn resolve(&self) -> Result<(String, CurveJet), CliError> {
        let label = match (&self.curve, &self.spec) {
            (Some(c), None) => c.clone(),
            (None, Some(p)) => format!("spec:{}", p.display()),
            _ => return Err(CliError::usage("give exactly one of --curve or --spec")),
        };
        let curve = curve_of(&label)?;
        Ok((label, curve))
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Expression in the parameter `s`, e.g. "e^2 .* msin(s)"
    expr: String,
    /// Parameter value, as `e^<log>` or a positive decimal
    #[arg(long, value_name = "MNUM")]
    at: String,
    /// Print the log-form rendering only
    #[arg(long)]
    log_form: bool,
}

#[derive(Args)]
struct FrameArgs {
    #[command(flatten)]
    curve: CurveArg,
    /// Restrict sampling to s0:s1 (after any reparametrization)
    #[arg(long, value_name = "S0:S1")]
    range: Option<String>,
    /// Number of samples
    #[arg(short = 'n', long = "samples", default_value_t = 64)]
    n: usize,
    /// Write the CSV here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Render every cell as e^<log>
    #[arg(long)]
    log_form: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    curve: CurveArg,
    #[arg(short = 'n', long = "samples", default_value_t = 64)]
    n: usize,
    /// Residual tolerance for the classifiers
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairKind {
    Bertrand,
    Mannheim,
}

#[derive(Args)]
struct PartnerArgs {
    /// bertrand or mannheim
    #[arg(value_enum)]
    kind: PairKind,
    #[command(flatten)]
    curve: CurveArg,
    /// Offset constant for a Bertrand partner (Mannheim measures its own)
    #[arg(long, value_name = "MNUM")]
    lambda: Option<String>,
    #[arg(short = 'n', long = "samples", default_value_t = DEFAULT_PARTNER_SAMPLES)]
    n: usize,
    /// Residual tolerance for the identity checks
    #[arg(long)]
    tol: Option<f64>,
    /// Write partner curve samples (s,x1,x2,x3 CSV) here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Render CSV cells as e^<log>
    #[arg(long)]
    log_form: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// bertrand or mannheim
    #[arg(value_enum)]
    kind: PairKind,
    /// The two curves of the pair, in order (base, partner)
    #[arg(long = "curve", value_name = "SOURCE")]
    curves: Vec<String>,
    /// CurveSpec JSON files, appended after --curve sources
    #[arg(long = "spec", value_name = "FILE")]
    specs: Vec<PathBuf>,
    #[arg(short = 'n', long = "samples", default_value_t = DEFAULT_PARTNER_SAMPLES)]
    n: usize,
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Curvature profile as an expression in s, e.g. "e^1"
    kappa: String,
    /// Torsion profile as an expression in s, e.g. "s"
    tau: String,
    /// Parameter range s0:s1 for the synthesized curve
    #[arg(long, value_name = "S0:S1")]
    range: String,
    #[arg(short = 'n', long = "samples", default_value_t = 64)]
    n: usize,
    /// Write frame samples of the synthesized curve (CSV) here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Render CSV cells as e^<log>
    #[arg(long)]
    log_form: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Projection {
    Xy,
    Xz,
    Yz,
}

impl Projection {
    pub fn axis_names(self) -> (&'static str, &'static str) {
        match self {
            Projection::Xy => ("x1", "x2"),
            Projection::Xz => ("x1", "x3"),
            Projection::Yz => ("x2", "x3"),
        }
    }
}

#[derive(Args)]
struct PlotArgs {
    /// Objects to draw; repeatable (curves or plane:a=..,b=..,c=..,d=..)
    #[arg(long = "curve", value_name = "SOURCE")]
    curves: Vec<String>,
    /// CurveSpec JSON files to draw
    #[arg(long = "spec", value_name = "FILE")]
    specs: Vec<PathBuf>,
    /// Samples per curve
    #[arg(short = 'n', long = "samples", default_value_t = 256)]
    n: usize,
    /// Write the SVG here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Plot raw positive-orthant values instead of log coordinates
    #[arg(long)]
    raw_axes: bool,
    /// Coordinate plane to project onto
    #[arg(long, value_enum, default_value_t = Projection::Xy)]
    projection: Projection,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Frame(args) => cmd_frame(args),
        Cmd::Classify(args) => cmd_classify(args),
        Cmd::Partner(args) => cmd_partner(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Synthesize(args) => cmd_synthesize(args),
        Cmd::Plot(args) => cmd_plot(args),
    }
}

fn require_samples(n: usize) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::usage("sample count must be at least 2"));
    }
    Ok(())
}

fn resolve_tol(tol: Option<f64>, default: f64) -> Result<f64, CliError> {
    let tol = tol.unwrap_or(default);
    if !(tol > 0.0) {
        return Err(CliError::usage("tolerance must be positive"));
    }
    Ok(tol)
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| CliError::usage(format!("range must be s0:s1, got `{text}`")))?;
    let a: MNum = a.trim().parse()?;
    let b: MNum = b.trim().parse()?;
    if a.log() >= b.log() {
        return Err(CliError::usage("range start must be below range end"));
    }
    Ok((a.log(), b.log()))
}

/// Log-parameter midpoint grid, matching the library's sampling.
fn midpoints(u0: f64, u1: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (u1 - u0) / n as f64;
    (0..n).map(move |i| u0 + (i as f64 + 0.5) * step)
}

fn render_cell(x: MNum, log_form: bool) -> String {
    if log_form {
        format!("e^{}", x.log())
    } else {
        x.to_string()
    }
}

fn annotation(v: MNum) -> String {
    if v.log() == 0.0 {
        "0*".to_string()
    } else if v.log() == 1.0 {
        "1*".to_string()
    } else {
        format!("e^{}", v.log())
    }
}

/// Writes the artifact to --out or standard output; returns whether it
/// went to a file.
fn emit(out: &Option<PathBuf>, text: &str) -> Result<bool, CliError> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            Ok(true)
        }
        None => {
            print!("{text}");
            Ok(false)
        }
    }
}

/// Reparametrizes by multiplicative arc length when the curve is not
/// natural, with a note on standard error.
fn ensure_natural(label: &str, curve: CurveJet) -> Result<CurveJet, CliError> {
    let report = is_natural(&curve)?;
    if report.natural {
        return Ok(curve);
    }
    eprintln!(
        "note: `{label}` is not naturally parametrized (speed deviation {:.3e}); \
         reparametrizing by multiplicative arc length",
        report.max_deviation
    );
    Ok(reparametrize_natural(&curve)?)
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let expr = parse_mexpr(&args.expr)?;
    let at: MNum = args.at.parse()?;
    let v = expr.eval(at)?;
    if args.log_form {
        println!("e^{}", v.log());
    } else {
        println!("{} (= {})", v, annotation(v));
    }
    Ok(())
}

fn frame_csv(curve: &CurveJet, u0: f64, u1: f64, n: usize, log_form: bool) -> Result<String, CliError> {
    let mut out = String::from(FRAME_HEADER);
    out.push('\n');
    for (i, u) in midpoints(u0, u1, n).enumerate() {
        let s = MNum::from_log(u);
        let fr = frenet(curve, s).map_err(|err| {
            eprintln!("frame undefined at sample {i} (s = e^{u}): {err}");
            CliError::Lib(err)
        })?;
        out.push_str(&frame_row(s, &fr, log_form));
        out.push('\n');
    }
    Ok(out)
}

fn frame_row(s: MNum, fr: &FrenetApparatus, log_form: bool) -> String {
    let mut cells = vec![render_cell(s, log_form)];
    for vec in [&fr.point, &fr.t, &fr.n, &fr.b] {
        for l in vec.log_image() {
            cells.push(render_cell(MNum::from_log(l), log_form));
        }
    }
    cells.push(render_cell(fr.kappa, log_form));
    cells.push(render_cell(fr.tau, log_form));
    cells.join(",")
}

fn cmd_frame(args: FrameArgs) -> Result<(), CliError> {
    require_samples(args.n)?;
    let (label, curve) = args.curve.resolve()?;
    let curve = ensure_natural(&label, curve)?;
    let (mut u0, mut u1) = curve.u_domain();
    if let Some(range) = &args.range {
        let (a, b) = parse_range(range)?;
        if a < u0 || b > u1 {
            return Err(CliError::usage(format!(
                "range e^{a}:e^{b} leaves the curve domain e^{u0}:e^{u1}"
            )));
        }
        (u0, u1) = (a, b);
    }
    let csv = frame_csv(&curve, u0, u1, args.n, args.log_form)?;
    emit(&args.out, &csv)?;
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), CliError> {
    require_samples(args.n)?;
    let tol = resolve_tol(args.tol, DEFAULT_CLASSIFY_TOL)?;
    let (label, curve) = args.curve.resolve()?;
    let curve = ensure_natural(&label, curve)?;

    let reports: Vec<(&str, ClassificationReport)> = vec![
        ("helix", classify_helix(&curve, args.n, tol)?),
        ("slant_helix", slant_helix_sigma(&curve, args.n, tol)?),
        ("spherical", spherical_check(&curve, args.n, tol, None)?),
        ("rectifying", rectifying_fit(&curve, args.n, tol)?),
    ];
    let best = reports.iter().find(|(_, r)| r.kind != CurveKind::Unclassified);

    let mut map = serde_json::Map::new();
    for (name, report) in &reports {
        map.insert(name.to_string(), serde_json::to_value(report).expect("report serializes"));
    }
    let doc = json!({
        "curve": label,
        "kind": best.map(|(_, r)| r.kind).unwrap_or(CurveKind::Unclassified),
        "reports": map,
    });
    let body = format!("{}\n", serde_json::to_string_pretty(&doc).expect("doc serializes"));
    let to_file = emit(&args.out, &body)?;

    let summary = match best {
        Some((name, report)) => {
            let constants: Vec<String> =
                report.constants.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            format!(
                "classification: {name} ({}; worst residual {:.3e})",
                if constants.is_empty() { "no constants".to_string() } else { constants.join(", ") },
                report.residual
            )
        }
        None => "classification: unclassified".to_string(),
    };
    if to_file {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }

    if best.is_none() {
        return Err(CliError::Verification);
    }
    Ok(())
}

fn partner_csv(curve: &CurveJet, n: usize, log_form: bool) -> Result<String, CliError> {
    let (u0, u1) = curve.u_domain();
    let mut out = String::from("s,x1,x2,x3\n");
    for u in midpoints(u0, u1, n) {
        let s = MNum::from_log(u);
        let p = curve.point(s)?;
        let mut cells = vec![render_cell(s, log_form)];
        for l in p.log_image() {
            cells.push(render_cell(MNum::from_log(l), log_form));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn status_word(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Indeterminate => "indeterminate",
    }
}

fn partner_summary(report: &PartnerReport, to_stdout: bool) {
    let mut lines = Vec::new();
    lines.push(format!(
        "pair: lambda = {} (dev {:.3e}), theta = {} (dev {:.3e})",
        report.lambda, report.lambda_max_deviation, report.theta, report.theta_max_deviation
    ));
    for check in &report.checks {
        lines.push(format!(
            "  {:<32} {:<13} max residual {:.3e}",
            check.name,
            status_word(check.status),
            check.max_residual
        ));
    }
    for note in &report.notes {
        lines.push(format!("  note: {note}"));
    }
    lines.push(format!("verdict: {}", if report.verdict { "PASS" } else { "FAIL" }));
    for line in lines {
        if to_stdout {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn cmd_partner(args: PartnerArgs) -> Result<(), CliError> {
    require_samples(args.n)?;
    let tol = resolve_tol(args.tol, DEFAULT_PARTNER_TOL)?;
    let (label, x) = args.curve.resolve()?;

    let (y, report) = match args.kind {
        PairKind::Bertrand => {
            let lambda: MNum = args
                .lambda
                .as_deref()
                .ok_or_else(|| CliError::usage("bertrand partner needs --lambda"))?
                .parse()?;
            let y = bertrand_partner(&x, lambda)?;
            let report = bertrand_verify(&x, &y, args.n, tol)?;
            (y, report)
        }
        PairKind::Mannheim => {
            if args.lambda.is_some() {
                return Err(CliError::usage(
                    "mannheim partner measures its own offset; drop --lambda",
                ));
            }
            let y = mannheim_partner(&x)?;
            let report = mannheim_verify(&x, &y, args.n, tol)?;
            (y, report)
        }
    };

    match &args.out {
        Some(_) => {
            let csv = partner_csv(&y, args.n, args.log_form)?;
            emit(&args.out, &csv)?;
        }
        None => eprintln!("note: no --out given; partner samples not written"),
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({ "base": label, "report": report }))
            .expect("report serializes")
    );
    partner_summary(&report, false);

    if !report.verdict {
        return Err(CliError::Verification);
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    require_samples(args.n)?;
    let tol = resolve_tol(args.tol, DEFAULT_PARTNER_TOL)?;
    let mut sources = args.curves.clone();
    sources.extend(args.specs.iter().map(|p| format!("spec:{}", p.display())));
    if sources.len() != 2 {
        return Err(CliError::usage("verify needs exactly two curves (base, partner)"));
    }
    let x = curve_of(&sources[0])?;
    let y = curve_of(&sources[1])?;
    let report = match args.kind {
        PairKind::Bertrand => bertrand_verify(&x, &y, args.n, tol)?,
        PairKind::Mannheim => mannheim_verify(&x, &y, args.n, tol)?,
    };

    let doc = json!({ "base": sources[0], "partner": sources[1], "report": report });
    let body = format!("{}\n", serde_json::to_string_pretty(&doc).expect("doc serializes"));
    let to_file = emit(&args.out, &body)?;
    partner_summary(&report, to_file);

    if !report.verdict {
        return Err(CliError::Verification);
    }
    Ok(())
}

fn cmd_synthesize(args: SynthArgs) -> Result<(), CliError> {
    require_samples(args.n)?;
    let kexpr = parse_mexpr(&args.kappa)?;
    let wexpr = parse_mexpr(&args.tau)?;
    let (u0, u1) = parse_range(&args.range)?;

    let kb = kexpr.to_bridge();
    let wb = wexpr.to_bridge();
    let curve = curve_from_curvature_jets(
        move |u| kb.eval_jet(&Taylor::variable(u)),
        move |u| wb.eval_jet(&Taylor::variable(u)),
        (u0, u1),
        FrameStart::default(),
    )?;

    let mut kappa_dev = 0.0f64;
    let mut tau_dev = 0.0f64;
    for u in midpoints(u0, u1, args.n) {
        let s = MNum::from_log(u);
        let fr = frenet(&curve, s)?;
        kappa_dev = kappa_dev.max((fr.kappa.log() - kexpr.eval(s)?.log()).abs());
        tau_dev = tau_dev.max((fr.tau.log() - wexpr.eval(s)?.log()).abs());
    }
    let naturality = is_natural(&curve)?;

    match &args.out {
        Some(_) => {
            let csv = frame_csv(&curve, u0, u1, args.n, args.log_form)?;
            emit(&args.out, &csv)?;
        }
        None => eprintln!("note: no --out given; frame samples not written"),
    }
    let doc = json!({
        "kappa": args.kappa,
        "tau": args.tau,
        "range": [format!("e^{u0}"), format!("e^{u1}")],
        "samples": args.n,
        "max_kappa_log_deviation": kappa_dev,
        "max_tau_log_deviation": tau_dev,
        "natural": naturality.natural,
        "max_speed_deviation": naturality.max_deviation,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("doc serializes"));
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<(), CliError> {
    require_samples(args.n)?;
    let mut items = Vec::new();
    let mut labels = args.curves.clone();
    labels.extend(args.specs.iter().map(|p| format!("spec:{}", p.display())));
    for label in labels {
        let geometry = match parse_source(&label)? {
            SourceObject::Curve(c) => Geometry::Curve(c),
            SourceObject::Plane(p) => Geometry::Plane(p),
        };
        items.push(PlotItem { label, geometry });
    }
    let body = svg::render_plot(&items, args.n, args.projection, args.raw_axes)?;
    emit(&args.out, &body)?;
    Ok(())
}
