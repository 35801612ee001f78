//! Command-line surface.
//!
//! Every command returns a [`CommandOutput`]: canonical JSON (or CSV for
//! `sequences`) destined for stdout, diagnostics for stderr, and an
//! [`ExitStatus`]. The binary only parses arguments and prints.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::constants::EULER_GOMPERTZ;
use crate::distribution::{
    cdf_w3, cdf_w_exact, cdf_y_exact, g_derivatives, logistic, SequenceIndex,
};
use crate::inversion::{cdf_wn, kappa, InversionError, InversionResult, QuadratureConfig};
use crate::json::to_canonical_string;
use crate::monte_carlo::{
    clt_report, moment_check, sample_wn, symmetry_report, two_sample_check, DistTestReport, Parity,
    SampleMethod,
};
use crate::sequences::CoefficientTable;
use crate::taylor::{remainder_shape, SeriesQuery, TaylorEngine, MAX_PARTIAL_ORDER};
use crate::verify::{run_all, Profile, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Numerical = 2,
    VerifyFailed = 3,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub stderr: String,
    pub status: ExitStatus,
}

impl CommandOutput {
    fn usage(msg: impl Into<String>) -> Self {
        Self {
            stdout: String::new(),
            stderr: msg.into() + "\n",
            status: ExitStatus::Usage,
        }
    }
}

/// Echoed into every report so each run can be reproduced from its output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub artifact_version: String,
    pub wall_time_ms: u64,
}

impl RunManifest {
    fn new(command: &str, parameters: &[(&str, String)], started: Instant) -> Self {
        Self {
            command: command.to_string(),
            parameters: parameters
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nestexp",
    version,
    about = "Nested exponential distributions: constants, CDFs, series and simulation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Y,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Nested,
    LogSum,
}

impl From<MethodArg> for SampleMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Nested => SampleMethod::Nested,
            MethodArg::LogSum => SampleMethod::LogSum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum TestArg {
    Moments,
    KsClosedForm,
    Clt,
    Equivalence,
    Symmetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// κₙ = P(Yₙ ≤ 1) by characteristic-function inversion.
    Kappa {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// CDF of Yₙ or Wₙ = ln Yₙ at a point.
    Cdf {
        #[arg(long, value_enum)]
        scale: Scale,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        at: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Bell and Gould numbers as CSV.
    Sequences {
        #[arg(long)]
        upto: usize,
    },
    /// Monte Carlo draws of Wₙ with optional distributional tests.
    Simulate {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "nested")]
        method: MethodArg,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "moments")]
        tests: Vec<TestArg>,
    },
    /// Taylor partial sum of G^{(k)} around 0 against the direct value.
    Taylor {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        w: f64,
        #[arg(long)]
        m: usize,
    },
    /// Run the acceptance suite.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        profile: ProfileArg,
    },
}

pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-4;
pub const MAX_SEQUENCE_INDEX: usize = 500;
pub const MAX_SAMPLES: usize = 100_000_000;

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                CommandOutput::usage(text.trim_end())
            } else {
                // --help and --version
                CommandOutput {
                    stdout: text,
                    stderr: String::new(),
                    status: ExitStatus::Success,
                }
            }
        }
    }
}

pub fn run(command: Command) -> CommandOutput {
    match command {
        Command::Kappa { n, tol } => cmd_kappa(n, tol),
        Command::Cdf { scale, n, at, tol } => cmd_cdf(scale, n, at, tol),
        Command::Sequences { upto } => cmd_sequences(upto),
        Command::Simulate {
            n,
            samples,
            seed,
            method,
            tests,
        } => cmd_simulate(n, samples, seed, method.into(), &tests),
        Command::Taylor { k, w, m } => cmd_taylor(k, w, m),
        Command::Verify { profile } => {
            let profile = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            cmd_verify(&VerifyOptions::new(profile))
        }
    }
}

fn json_output(
    mut body: Value,
    manifest: RunManifest,
    status: ExitStatus,
    stderr: String,
) -> CommandOutput {
    body["manifest"] = serde_json::to_value(manifest).expect("manifest serializes");
    let mut stdout = to_canonical_string(&body).expect("report serializes");
    stdout.push('\n');
    CommandOutput {
        stdout,
        stderr,
        status,
    }
}

fn index(n: u32) -> Result<SequenceIndex, CommandOutput> {
    SequenceIndex::new(n).map_err(|e| CommandOutput::usage(format!("invalid --n: {e}")))
}

fn check_tol(tol: f64) -> Result<(), CommandOutput> {
    if (MIN_TOL..=MAX_TOL).contains(&tol) {
        Ok(())
    } else {
        Err(CommandOutput::usage(format!(
            "--tol must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol:e}"
        )))
    }
}

fn config_parameters(cfg: &QuadratureConfig) -> Vec<(&'static str, String)> {
    vec![
        ("z_max", format!("{:e}", cfg.z_max)),
        ("max_nodes", cfg.max_nodes.to_string()),
        ("small_z_cut", format!("{:e}", cfg.small_z_cut)),
    ]
}

fn inversion_body(r: &InversionResult, method: &str) -> Value {
    json!({
        "value": r.value,
        "est_error": r.est_error,
        "nodes_used": r.nodes_used,
        "truncation_bound": r.truncation_bound,
        "method": method,
    })
}

fn inversion_failure(e: &InversionError) -> (Value, String) {
    let body = match e {
        InversionError::ToleranceNotMet { best } => {
            let mut b = inversion_body(best, "gil_pelaez");
            b["error"] = json!(e.to_string());
            b
        }
        _ => json!({ "error": e.to_string(), "method": "gil_pelaez" }),
    };
    (body, format!("numerical failure: {e}\n"))
}

pub fn cmd_kappa(n: u32, tol: f64) -> CommandOutput {
    let started = Instant::now();
    let n = match index(n) {
        Ok(n) => n,
        Err(e) => return e,
    };
    if let Err(e) = check_tol(tol) {
        return e;
    }
    let cfg = QuadratureConfig::for_index(n).with_tol(tol);
    let mut params = vec![("n", n.to_string()), ("tol", format!("{tol:e}"))];
    params.extend(config_parameters(&cfg));
    let method = if n.get() == 1 {
        "closed_form"
    } else if n.is_even() {
        "symmetry"
    } else {
        "gil_pelaez"
    };
    let (body, status, stderr) = match kappa(n, &cfg) {
        Ok(r) => (
            inversion_body(&r, method),
            ExitStatus::Success,
            String::new(),
        ),
        Err(e) => {
            let (b, msg) = inversion_failure(&e);
            (b, ExitStatus::Numerical, msg)
        }
    };
    json_output(
        body,
        RunManifest::new("kappa", &params, started),
        status,
        stderr,
    )
}

pub fn cmd_cdf(scale: Scale, n: u32, at: f64, tol: f64) -> CommandOutput {
    let started = Instant::now();
    let n = match index(n) {
        Ok(n) => n,
        Err(e) => return e,
    };
    if let Err(e) = check_tol(tol) {
        return e;
    }
    if !at.is_finite() {
        return CommandOutput::usage("--at must be finite");
    }
    let w = match scale {
        Scale::Y if at <= 0.0 => {
            return CommandOutput::usage(format!("--scale y needs --at > 0, got {at}"))
        }
        Scale::Y => at.ln(),
        Scale::W => at,
    };
    let scale_name = match scale {
        Scale::Y => "y",
        Scale::W => "w",
    };
    let mut params = vec![
        ("scale", scale_name.to_string()),
        ("n", n.to_string()),
        ("at", format!("{at:e}")),
        ("tol", format!("{tol:e}")),
    ];
    let closed = match scale {
        Scale::Y => cdf_y_exact(n, at),
        Scale::W => cdf_w_exact(n, w),
    };
    let (mut body, status, stderr) = if let Ok(p) = closed {
        (
            json!({ "value": p.value(), "est_error": 0.0, "method": "closed_form" }),
            ExitStatus::Success,
            String::new(),
        )
    } else {
        let cfg = QuadratureConfig::for_index(n).with_tol(tol);
        params.extend(config_parameters(&cfg));
        match cdf_wn(n, w, &cfg) {
            Ok(r) => (
                inversion_body(&r, "gil_pelaez"),
                ExitStatus::Success,
                String::new(),
            ),
            Err(e) => {
                let (b, msg) = inversion_failure(&e);
                (b, ExitStatus::Numerical, msg)
            }
        }
    };
    body["scale"] = json!(scale_name);
    body["n"] = json!(n.get());
    body["at"] = json!(at);
    json_output(
        body,
        RunManifest::new("cdf", &params, started),
        status,
        stderr,
    )
}

pub fn cmd_sequences(upto: usize) -> CommandOutput {
    let started = Instant::now();
    if upto > MAX_SEQUENCE_INDEX {
        return CommandOutput::usage(format!(
            "--upto must be at most {MAX_SEQUENCE_INDEX}, got {upto}"
        ));
    }
    let table = match CoefficientTable::new(upto + 1) {
        Ok(t) => t,
        Err(e) => return CommandOutput::usage(e.to_string()),
    };
    let mut csv = String::from("k,bell,gould,ratio_gap\n");
    for row in table.rows() {
        let gap = table.ratio_gap(row.k, EULER_GOMPERTZ).unwrap_or(f64::NAN);
        let _ = writeln!(csv, "{},{},{},{:.16e}", row.k, row.bell, row.gould, gap);
    }
    let manifest = RunManifest::new("sequences", &[("upto", upto.to_string())], started);
    let mut stderr = to_canonical_string(&manifest).expect("manifest serializes");
    stderr.push('\n');
    CommandOutput {
        stdout: csv,
        stderr,
        status: ExitStatus::Success,
    }
}

fn closed_form_reference(n: SequenceIndex) -> Option<fn(f64) -> f64> {
    match n.get() {
        1 => Some(|w: f64| -(-w.exp()).exp_m1()),
        2 => Some(logistic),
        3 => Some(|w: f64| cdf_w3(w).value()),
        _ => None,
    }
}

pub fn cmd_simulate(
    n: u32,
    samples: usize,
    seed: u64,
    method: SampleMethod,
    tests: &[TestArg],
) -> CommandOutput {
    let started = Instant::now();
    let n = match index(n) {
        Ok(n) => n,
        Err(e) => return e,
    };
    if samples == 0 || samples > MAX_SAMPLES {
        return CommandOutput::usage(format!(
            "--samples must lie in [1, {MAX_SAMPLES}], got {samples}"
        ));
    }
    let mut tests = tests.to_vec();
    tests.sort();
    tests.dedup();
    if tests.contains(&TestArg::KsClosedForm) && closed_form_reference(n).is_none() {
        return CommandOutput::usage("ks-closed-form needs n <= 3");
    }
    if tests.contains(&TestArg::Clt) && (n.get() < 100 || samples < 10_000) {
        return CommandOutput::usage("clt needs n >= 100 and samples >= 10000");
    }
    if tests.contains(&TestArg::Symmetry) && n.is_odd() {
        return CommandOutput::usage("symmetry needs even n");
    }
    let other = match method {
        SampleMethod::Nested => SampleMethod::LogSum,
        SampleMethod::LogSum => SampleMethod::Nested,
    };
    let comparison_seed = seed.wrapping_add(1);
    let params = vec![
        ("n", n.to_string()),
        ("samples", samples.to_string()),
        ("seed", seed.to_string()),
        ("method", method.name().to_string()),
        (
            "tests",
            tests
                .iter()
                .map(|t| {
                    t.to_possible_value()
                        .map(|v| v.get_name().to_string())
                        .unwrap_or_default()
                })
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("comparison_method", other.name().to_string()),
        ("comparison_seed", comparison_seed.to_string()),
    ];

    let batch = match sample_wn(n, samples, seed, method) {
        Ok(b) => b,
        Err(e) => return CommandOutput::usage(e.to_string()),
    };
    let moments = moment_check(&batch);
    let mut reports: BTreeMap<&str, Value> = BTreeMap::new();
    let mut all_pass = true;
    let mut push = |name: &'static str, r: DistTestReport| {
        all_pass &= r.pass;
        reports.insert(name, serde_json::to_value(r).expect("report serializes"));
    };
    let mut moments_pass = true;
    for t in &tests {
        match t {
            TestArg::Moments => moments_pass = moments.pass,
            TestArg::KsClosedForm => {
                if let Some(f) = closed_form_reference(n) {
                    push("ks_closed_form", crate::monte_carlo::ks_test(&batch, f));
                }
            }
            TestArg::Clt => {
                let centre = if n.is_odd() {
                    Parity::Odd
                } else {
                    Parity::Even
                };
                push("clt", clt_report(&batch, centre));
            }
            TestArg::Equivalence => match sample_wn(n, samples, comparison_seed, other) {
                Ok(b) => push("equivalence", two_sample_check(&batch, &b)),
                Err(e) => return CommandOutput::usage(e.to_string()),
            },
            TestArg::Symmetry => push("symmetry", symmetry_report(&batch)),
        }
    }
    let pass = all_pass && moments_pass;
    let body = json!({
        "n": n.get(),
        "samples": samples,
        "seed": seed,
        "method": method.name(),
        "moments": moments,
        "tests": reports,
        "pass": pass,
    });
    let (status, stderr) = if pass {
        (ExitStatus::Success, String::new())
    } else {
        (ExitStatus::Numerical, "requested test failed\n".to_string())
    };
    json_output(
        body,
        RunManifest::new("simulate", &params, started),
        status,
        stderr,
    )
}

pub fn cmd_taylor(k: usize, w: f64, m: usize) -> CommandOutput {
    let started = Instant::now();
    if k + m > MAX_PARTIAL_ORDER {
        return CommandOutput::usage(format!(
            "k + m must be at most {MAX_PARTIAL_ORDER}, got {}",
            k + m
        ));
    }
    let q = match SeriesQuery::new(k, w, m, EULER_GOMPERTZ) {
        Ok(q) => q,
        Err(e) => return CommandOutput::usage(e.to_string()),
    };
    let partial = match TaylorEngine::new(k + m).and_then(|e| e.partial_sum(&q)) {
        Ok(p) => p,
        Err(e) => return CommandOutput::usage(e.to_string()),
    };
    let derivs = g_derivatives(w, k);
    let oracle = derivs.values[k];
    let shape = remainder_shape(m, k, w);
    let params = vec![
        ("k", k.to_string()),
        ("w", format!("{w:e}")),
        ("m", m.to_string()),
        ("delta_ref", format!("{EULER_GOMPERTZ:e}")),
    ];
    let body = json!({
        "k": k,
        "w": w,
        "m": m,
        "partial_sum": partial,
        "oracle": oracle,
        "gap": (partial - oracle).abs(),
        "remainder_shape": shape.bound_shape,
        "converged": shape.converged,
        "oracle_accuracy_warning": derivs.accuracy_warning,
    });
    json_output(
        body,
        RunManifest::new("taylor", &params, started),
        ExitStatus::Success,
        String::new(),
    )
}

pub fn cmd_verify(opts: &VerifyOptions) -> CommandOutput {
    let started = Instant::now();
    let reports = run_all(opts);
    let mut stderr = String::new();
    for r in &reports {
        stderr.push_str(&r.summary_line());
        stderr.push('\n');
    }
    let pass = reports.iter().all(|r| r.pass);
    let profile = match opts.profile {
        Profile::Quick => "quick",
        Profile::Full => "full",
    };
    let params = vec![
        ("profile", profile.to_string()),
        ("delta_ref", format!("{:e}", opts.delta_ref)),
        ("gamma_ref", format!("{:e}", opts.gamma_ref)),
        ("mc_samples", opts.profile.mc_samples().to_string()),
    ];
    let body = json!({ "profile": profile, "criteria": reports, "pass": pass });
    let status = if pass {
        ExitStatus::Success
    } else {
        ExitStatus::VerifyFailed
    };
    json_output(
        body,
        RunManifest::new("verify", &params, started),
        status,
        stderr,
    )
}
