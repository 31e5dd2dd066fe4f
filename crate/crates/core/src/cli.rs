//! Command-line front end. Payloads go to `--output` (or stdout), diagnostics to stderr.
//!
//! Exit codes: 0 ok, 2 parse or usage error, 3 domain error (including vacuum),
//! 4 search exhausted, 5 verification failed.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gas::{GasModel, PrimState};
use crate::patching::{assemble, normalize, Normalization, PatchConfig, PatchedSolution};
use crate::riemann1d::{
    classify_with, solve_middle, wave_curve, Jump, RiemannData, SelfSimilarSolution, WavePattern, DEFAULT_TOL_CLS,
};
use crate::subsolution::{estimate_threshold, find, smallness_upper, SearchConfig};
use crate::verifier::{verify_subsolution, FanQuintuple, ResidualReport, Tolerances, DEFAULT_TOL_EQ};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NOT_FOUND: i32 = 4;
pub const EXIT_VERIFICATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "euler-fan", version, about = "Riemann problems and fan subsolutions for the 2D full Euler system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input document (stdin when absent or `-`).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file (stdout when absent or `-`).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Relative tolerance for jump relations.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_EQ)]
    pub tol_eq: f64,
    /// Relative tolerance for treating a wave or contact as absent.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL_CLS)]
    pub tol_cls: f64,
    /// Grid size for `solve1d` and `curves`.
    #[arg(long, global = true, default_value_t = 201)]
    pub samples: usize,
    /// First rung of the patching ladder.
    #[arg(long, global = true)]
    pub delta0: Option<f64>,
    /// First rung of the subsolution ladder.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub h0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Wave pattern and middle states.
    Classify,
    /// Self-similar solution sampled on a grid of y/t.
    Solve1d,
    /// Explicit fan subsolutions: search or check.
    #[command(subcommand)]
    Subsolution(SubsolutionCommand),
    /// Fan subsolution patched with a trailing 3-wave when needed.
    Patch,
    /// Empirical window for rho- v-^2.
    Threshold,
    /// Wave curves in the p-v plane as CSV.
    Curves,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum SubsolutionCommand {
    /// Search the explicit family for normalised data.
    Find,
    /// Check a quintuple against the full system.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: Tolerances,
    pub samples: usize,
    pub delta0: Option<f64>,
    pub h0: f64,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let tol = Tolerances { eq: cli.tol_eq, cls: cli.tol_cls };
        tol.validate().map_err(|e| Failure::Parse(e.to_string()))?;
        if cli.samples < 2 {
            return Err(Failure::Parse(format!("--samples must be at least 2, got {}", cli.samples)));
        }
        if let Some(d) = cli.delta0 {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Failure::Parse(format!("--delta0 must be positive, got {d}")));
            }
        }
        if !(cli.h0 > 0.0 && cli.h0 < 1.0) {
            return Err(Failure::Parse(format!("--h0 must lie in (0, 1), got {}", cli.h0)));
        }
        Ok(RunConfig { tol, samples: cli.samples, delta0: cli.delta0, h0: cli.h0 })
    }

    fn search(&self) -> SearchConfig {
        let base = SearchConfig::default();
        SearchConfig { h0: self.h0, h_min: base.h_min.min(self.h0), tol: self.tol }
    }
}

/// Riemann data as read from disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataDocument {
    pub c_v: f64,
    pub left: PrimState,
    pub right: PrimState,
}

impl DataDocument {
    pub fn to_data(&self) -> crate::Result<RiemannData> {
        RiemannData::new(GasModel::new(self.c_v)?, self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyDocument {
    pub c_v: f64,
    pub row: u8,
    pub description: String,
    pub pattern: WavePattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub xi: f64,
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solve1dDocument {
    pub c_v: f64,
    pub row: u8,
    pub description: String,
    /// Leftmost and rightmost signal speeds.
    pub extent: [f64; 2],
    pub jumps: Vec<Jump>,
    pub samples: Vec<Sample>,
}

/// A quintuple with its gas; also the input of `subsolution verify`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuintupleDocument {
    pub c_v: f64,
    #[serde(flatten)]
    pub quintuple: FanQuintuple,
}

/// Output of `subsolution find`; accepted as is by `subsolution verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindDocument {
    pub c_v: f64,
    #[serde(flatten)]
    pub quintuple: FanQuintuple,
    pub h: f64,
    pub rho_k: f64,
    pub eps: [f64; 2],
    pub eps_tilde: [f64; 2],
    pub normalization: Normalization,
    pub report: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub c_v: f64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub report: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchDocument {
    pub c_v: f64,
    #[serde(flatten)]
    pub solution: PatchedSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdDocument {
    pub c_v: f64,
    pub rho_minus: f64,
    pub p_minus: f64,
    pub p_plus: f64,
    /// `rho- (v- - v+)^2` of the normalised input.
    pub w: f64,
    pub upper: f64,
    /// Boundary of the implemented search, not a proven threshold.
    pub v_est: f64,
    pub inside: bool,
}

/// One row of the `curves` table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub p: f64,
    pub v_shock1: f64,
    pub v_wave3: f64,
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Lib(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Lib(Error::Domain(_) | Error::Vacuum { .. }) => EXIT_DOMAIN,
            Failure::Lib(Error::NotFound(_)) => EXIT_NOT_FOUND,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Parse(m) => format!("parse error: {m}"),
            Failure::Lib(e) => e.to_string(),
            Failure::Verification(m) => format!("verification failed: {m}"),
        }
    }
}

/// Payload plus a failure that should still be reported after writing it.
struct Outcome {
    payload: Vec<u8>,
    failure: Option<Failure>,
}

fn json<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("documents serialise");
    out.push(b'\n');
    out
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(e.to_string()))
}

fn read_data(text: &str) -> Result<RiemannData, Failure> {
    Ok(parse::<DataDocument>(text)?.to_data()?)
}

fn cmd_classify(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_data(text)?;
    let pattern = classify_with(&d, cfg.tol.cls)?;
    let doc = ClassifyDocument { c_v: d.gas.c_v(), row: pattern.row(), description: pattern.description(), pattern };
    Ok(Outcome { payload: json(&doc), failure: None })
}

fn cmd_solve1d(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_data(text)?;
    let sol = SelfSimilarSolution::new(&d, cfg.tol.cls)?;
    let extent = sol.extent();
    let pad = (0.25 * (extent[1] - extent[0])).max(1.0);
    let (a, b) = (extent[0] - pad, extent[1] + pad);
    let n = cfg.samples;
    let samples = (0..n)
        .map(|i| {
            let xi = a + (b - a) * i as f64 / (n - 1) as f64;
            let s = sol.sample(xi);
            Sample { xi, rho: s.rho, u: s.u, v: s.v, p: s.p }
        })
        .collect();
    let doc = Solve1dDocument {
        c_v: d.gas.c_v(),
        row: sol.pattern.row(),
        description: sol.pattern.description(),
        extent,
        jumps: sol.jumps(),
        samples,
    };
    Ok(Outcome { payload: json(&doc), failure: None })
}

fn cmd_find(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_data(text)?;
    let n = normalize(&d)?;
    let res = find(&n.normalized, &d.gas, &cfg.search())?;
    let sub = res.subsolution;
    let doc = FindDocument {
        c_v: d.gas.c_v(),
        quintuple: sub.quintuple(),
        h: res.h,
        rho_k: sub.rho_k,
        eps: sub.eps,
        eps_tilde: sub.eps_tilde,
        normalization: n,
        report: res.report,
    };
    let failure = (!doc.report.passed).then(|| Failure::Verification(doc.report.failures().join(", ")));
    Ok(Outcome { payload: json(&doc), failure })
}

fn cmd_verify(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let doc: QuintupleDocument = parse(text)?;
    let g = GasModel::new(doc.c_v)?;
    let report = verify_subsolution(&doc.quintuple, &g, &cfg.tol)?;
    let failures = report.failures();
    let out = VerifyDocument { c_v: doc.c_v, passed: report.passed, failures: failures.clone(), report };
    let failure = (!out.passed).then(|| Failure::Verification(failures.join(", ")));
    Ok(Outcome { payload: json(&out), failure })
}

fn cmd_patch(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_data(text)?;
    let pc = PatchConfig { delta0: cfg.delta0, tol_cls: cfg.tol.cls, search: cfg.search(), ..PatchConfig::default() };
    let solution = assemble(&d, &pc)?;
    let ok = solution.fan.report.passed && solution.trailing_report.as_ref().map_or(true, |r| r.passed);
    let doc = PatchDocument { c_v: d.gas.c_v(), solution };
    let failure = (!ok).then(|| Failure::Verification("patched composite does not verify".into()));
    Ok(Outcome { payload: json(&doc), failure })
}

fn cmd_threshold(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_data(text)?;
    let n = normalize(&d)?.normalized;
    let (l, r) = (n.left, n.right);
    let upper = smallness_upper(&d.gas, l.p, r.p)?;
    let win = estimate_threshold(&d.gas, l.rho, l.p, r.p, &cfg.search())?;
    let w = l.rho * l.v * l.v;
    let doc = ThresholdDocument {
        c_v: d.gas.c_v(),
        rho_minus: l.rho,
        p_minus: l.p,
        p_plus: r.p,
        w,
        upper,
        v_est: win.v_est,
        inside: l.v > 0.0 && win.contains(w),
    };
    Ok(Outcome { payload: json(&doc), failure: None })
}

/// Log-uniform pressures over `[p_M / 10, 10 p_M]`.
pub fn curve_rows(d: &RiemannData, samples: usize) -> crate::Result<Vec<CurveRow>> {
    let pm = solve_middle(d)?.p;
    let (lo, hi) = ((pm / 10.0).ln(), (pm * 10.0).ln());
    let g = &d.gas;
    (0..samples)
        .map(|i| {
            let p = if 2 * i + 1 == samples { pm } else { (lo + (hi - lo) * i as f64 / (samples - 1) as f64).exp() };
            Ok(CurveRow {
                p,
                v_shock1: d.left.v - wave_curve(g, d.left.rho, d.left.p, p)?,
                v_wave3: d.right.v + wave_curve(g, d.right.rho, d.right.p, p)?,
            })
        })
        .collect()
}

fn cmd_curves(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let d = read_data(text)?;
    let rows = curve_rows(&d, cfg.samples)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Failure::Parse(e.to_string()))?;
    }
    let payload = w.into_inner().map_err(|e| Failure::Parse(e.to_string()))?;
    Ok(Outcome { payload, failure: None })
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure::Parse(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure::Parse(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, payload: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, payload).map_err(|e| Failure::Parse(format!("cannot write {}: {e}", p.display())))
        }
        _ => stdout.write_all(payload).map_err(|e| Failure::Parse(format!("cannot write stdout: {e}"))),
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let text = read_input(&cli.input, stdin)?;
        let outcome = match cli.command {
            Command::Classify => cmd_classify(&text, &cfg),
            Command::Solve1d => cmd_solve1d(&text, &cfg),
            Command::Subsolution(SubsolutionCommand::Find) => cmd_find(&text, &cfg),
            Command::Subsolution(SubsolutionCommand::Verify) => cmd_verify(&text, &cfg),
            Command::Patch => cmd_patch(&text, &cfg),
            Command::Threshold => cmd_threshold(&text, &cfg),
            Command::Curves => cmd_curves(&text, &cfg),
        }?;
        write_output(&cli.output, &outcome.payload, stdout)?;
        outcome.failure.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "euler-fan: {}", f.message());
            f.code()
        }
    }
}
