//! Command-line front end: reads version-1 scenario documents, evaluates
//! weak and modular values geometrically and/or directly, and emits a JSON
//! result envelope or CSV.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 physical
//! singularity (orthogonal selection, out-of-range canonicalization).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use majgeom::Tolerances;
use serde_json::{json, Map, Value};

mod commands;
pub mod scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

/// Environment variable overriding the comparison tolerance.
pub const TOLERANCE_ENV: &str = "MAJGEOM_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Geometric,
    Direct,
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Geometric => "geometric",
            Mode::Direct => "direct",
            Mode::Both => "both",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "majgeom", version, about = "Weak and modular values from Bloch-sphere geometry")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Both)]
    pub mode: Mode,
    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report angles in degrees (inputs stay in radians).
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Scenario file (JSON, version 1).
    #[arg(long, global = true, conflicts_with = "input")]
    pub scenario: Option<PathBuf>,
    /// Inline scenario JSON.
    #[arg(long, global = true)]
    pub input: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Qubit projector weak value <f|r><r|i>/<f|i>.
    QubitWeak,
    /// Qubit modular value of e^{j beta/2} e^{-j (alpha/2) r.sigma}.
    QubitModular,
    /// Qutrit projector weak value.
    QutritWeak,
    /// Qutrit modular value of a Gell-Mann direction or Hermitian observable.
    QutritModular,
    /// Direct weak (and optionally modular) value for any dimension.
    NlevelDirect,
    /// Majorana points of a state, or the symmetric state of given points.
    Majorana,
    /// Canonicalizing unitaries of a qutrit triple.
    Canonicalize,
    /// Weak-value singularity scan over the polar parameter theta.
    ScanSingularity(ScanArgs),
    /// Three-box paradox report.
    ThreeBox,
    /// ABL probabilities over projector contexts.
    Abl,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::QubitWeak => "qubit-weak",
            Command::QubitModular => "qubit-modular",
            Command::QutritWeak => "qutrit-weak",
            Command::QutritModular => "qutrit-modular",
            Command::NlevelDirect => "nlevel-direct",
            Command::Majorana => "majorana",
            Command::Canonicalize => "canonicalize",
            Command::ScanSingularity(_) => "scan-singularity",
            Command::ThreeBox => "three-box",
            Command::Abl => "abl",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    /// Number of grid points (default 512).
    #[arg(long)]
    pub count: Option<usize>,
    /// First grid angle in radians.
    #[arg(long)]
    pub start: Option<f64>,
    /// Last grid angle in radians.
    #[arg(long)]
    pub stop: Option<f64>,
    /// Qutrit parameter epsilon (default arcsin(tan(pi/6))).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Phase chi1 (default 4pi/3).
    #[arg(long)]
    pub chi1: Option<f64>,
    /// Phase chi2 (default 2pi/3).
    #[arg(long)]
    pub chi2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, kind: "Usage".into(), message: message.into() }
    }

    fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind, "message": self.message, "exit_code": self.code } })
    }
}

impl From<majgeom::Error> for CliError {
    fn from(e: majgeom::Error) -> Self {
        let code = if e.is_physical_singularity() { EXIT_SINGULAR } else { EXIT_USAGE };
        CliError { code, kind: e.kind().into(), message: e.to_string() }
    }
}

/// Exit code, the emitted document and diagnostics for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Settings shared by all commands.
pub(crate) struct Context {
    pub format: Format,
    pub mode: Mode,
    pub degrees: bool,
    pub tolerances: Tolerances,
    pub scenario_text: Option<String>,
}

impl Context {
    pub fn angle(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_degrees()
        } else {
            x
        }
    }
}

/// What a command hands back for rendering.
pub(crate) struct Output {
    pub scenario: Value,
    pub results: Value,
    pub csv: String,
    pub provenance: &'static str,
    pub mismatch: bool,
    pub warnings: Vec<String>,
}

fn tolerances_from_env(value: Option<String>) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::DEFAULT;
    if let Some(v) = value {
        let t: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{TOLERANCE_ENV}={v:?} is not a number")))?;
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::usage(format!("{TOLERANCE_ENV} must be positive, got {v}")));
        }
        tol.compare = t;
    }
    Ok(tol)
}

const ANGLE_KEYS: &[&str] = &[
    "argument",
    "unwrapped_argument",
    "solid_angle",
    "dynamical_phase",
    "theta",
    "theta_b",
    "theta_c",
    "theta_before",
    "theta_after",
    "alpha",
    "beta",
    "alpha1",
    "alpha2",
    "beta1",
    "beta2",
    "omega1",
    "omega2",
    "wv_argument",
    "epsilon",
    "chi1",
    "chi2",
    "chi_tilde",
    "eta",
    "step",
    "omega1_max_step",
    "omega2_max_step",
    "polar",
    "azimuth",
    "below",
    "above",
];

fn to_degrees(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                match x {
                    Value::Number(n) if ANGLE_KEYS.contains(&k.as_str()) => {
                        if let Some(f) = n.as_f64() {
                            *x = json!(f.to_degrees());
                        }
                    }
                    _ => to_degrees(x),
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(to_degrees),
        _ => {}
    }
}

fn envelope(cmd: &str, ctx: &Context, out: Output) -> Value {
    let mut results = out.results;
    if ctx.degrees {
        to_degrees(&mut results);
    }
    let mut m = Map::new();
    m.insert("command".into(), json!(cmd));
    m.insert("angle_unit".into(), json!(if ctx.degrees { "deg" } else { "rad" }));
    m.insert("tolerances".into(), serde_json::to_value(ctx.tolerances).expect("plain struct"));
    m.insert("provenance".into(), json!(out.provenance));
    m.insert("scenario".into(), out.scenario);
    m.insert("results".into(), results);
    m.insert("mismatch".into(), json!(out.mismatch));
    m.insert("warnings".into(), json!(out.warnings));
    Value::Object(m)
}

/// Renders a JSON document the way every command emits it.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn execute(cli: Cli, tol_env: Option<String>) -> Result<(String, Vec<String>), CliError> {
    let tolerances = tolerances_from_env(tol_env)?;
    let scenario_text = match (&cli.scenario, &cli.input) {
        (Some(p), _) => Some(
            std::fs::read_to_string(p)
                .map_err(|e| CliError::usage(format!("cannot read scenario {}: {e}", p.display())))?,
        ),
        (None, Some(s)) => Some(s.clone()),
        (None, None) => None,
    };
    let ctx = Context { format: cli.format, mode: cli.mode, degrees: cli.degrees, tolerances, scenario_text };
    let out = commands::dispatch(&cli.command, &ctx)?;
    let warnings = out.warnings.clone();
    let doc = match ctx.format {
        Format::Csv => out.csv,
        Format::Json => render_json(&envelope(cli.command.name(), &ctx, out)),
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, &doc).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
        return Ok((String::new(), warnings));
    }
    Ok((doc, warnings))
}

/// Runs the CLI on `argv` (program name first), reading `MAJGEOM_TOL` from
/// the environment.
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_tolerance(argv, std::env::var(TOLERANCE_ENV).ok())
}

/// As [`run`], with the tolerance override passed explicitly.
pub fn run_with_tolerance<I, T>(argv: I, tol_env: Option<String>) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return RunOutput { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() };
            }
            let err = CliError::usage(e.to_string().trim_end().to_string());
            return RunOutput { code: EXIT_USAGE, stdout: render_json(&err.to_json()), stderr: String::new() };
        }
    };
    match execute(cli, tol_env) {
        Ok((stdout, warnings)) => RunOutput {
            code: EXIT_OK,
            stdout,
            stderr: warnings.iter().map(|w| format!("warning: {w}\n")).collect(),
        },
        Err(e) => RunOutput { code: e.code, stdout: render_json(&e.to_json()), stderr: format!("error: {}\n", e.message) },
    }
}
