//! `doublepower` command-line tool.
//!
//! Exit codes: 0 success or condition holds, 2 invalid input, 3 condition
//! false or no solution, 4 indeterminate, 5 equivalence violation, 6 solver
//! failure, 7 I/O failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use doublepower::conditions::{self, Range, Resolution, SampleConfig, DEFAULT_SEED};
use doublepower::format::{bool_str, sig17, to_json};
use doublepower::shooting::{self, GroundStateSummary};
use doublepower::{
    ConditionError, ConditionId, ConditionReport, Controls, Method, ParamError, Params,
    ShootingError, Thresholds,
};

const EXIT_INVALID: u8 = 2;
const EXIT_FALSE: u8 = 3;
const EXIT_INDETERMINATE: u8 = 4;
const EXIT_VIOLATION: u8 = 5;
const EXIT_SOLVER: u8 = 6;
const EXIT_IO: u8 = 7;

#[derive(Parser, Debug)]
#[command(name = "doublepower", version, about = "Double-power nonlinearity: thresholds, conditions and ground states")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Output::Human)]
    output: Output,
    /// Write the main artifact to this file instead of stdout (the profile
    /// CSV for `solve`).
    #[arg(long = "out", visible_alias = "output-path", global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Analytic,
    Numeric,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Analytic => Method::Analytic,
            MethodArg::Numeric => Method::Numeric,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical frequencies and their maximizers.
    Thresholds {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
    /// Evaluate one existence or uniqueness condition.
    Check {
        #[command(flatten)]
        params: ParamArgs,
        /// existence, uniqueness, potential-tilde or f-positive.
        #[arg(long, default_value = "existence")]
        condition: ConditionId,
        /// Defaults to analytic where available.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Check the condition equivalences on seeded random instances.
    Verify {
        #[arg(long, default_value = "1:6")]
        p_range: Range,
        #[arg(long, default_value = "1:6")]
        q_range: Range,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Compute the radial ground state by shooting.
    Solve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        controls: ControlArgs,
        /// Also write the JSON summary to this file.
        #[arg(long, value_name = "PATH")]
        summary: Option<PathBuf>,
    },
    /// Phase table over an inclusive (p, q, omega) grid.
    Sweep {
        #[arg(long)]
        p: Range,
        #[arg(long)]
        q: Range,
        #[arg(long)]
        omega: Range,
        /// Grid points per axis.
        #[arg(long, default_value_t = 10)]
        res: usize,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    omega: f64,
    #[arg(long, allow_negative_numbers = true)]
    p: f64,
    #[arg(long, allow_negative_numbers = true)]
    q: f64,
    /// Space dimension.
    #[arg(long, default_value_t = 3)]
    n: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Failure> {
        Params::new(self.omega, self.p, self.q, self.n).map_err(Failure::invalid)
    }
}

#[derive(Args, Debug)]
struct ControlArgs {
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    /// Integration radius (default 50/sqrt(omega)).
    #[arg(long)]
    r_max: Option<f64>,
    /// Profile sample spacing (default 0.01/sqrt(omega)).
    #[arg(long)]
    spacing: Option<f64>,
    /// Relative bisection width.
    #[arg(long)]
    alpha_tol: Option<f64>,
    #[arg(long)]
    scan_points: Option<usize>,
}

impl ControlArgs {
    fn controls(&self) -> Result<Controls, Failure> {
        let mut c = Controls::default();
        let positive = |name: &str, x: Option<f64>| -> Result<Option<f64>, Failure> {
            match x {
                Some(v) if !(v.is_finite() && v > 0.0) => Err(Failure::new(
                    EXIT_INVALID,
                    format!("--{name} must be positive and finite (got {v})"),
                )),
                other => Ok(other),
            }
        };
        if let Some(v) = positive("rtol", self.rtol)? {
            c.rtol = v;
        }
        if let Some(v) = positive("atol", self.atol)? {
            c.atol = v;
        }
        if let Some(v) = positive("alpha-tol", self.alpha_tol)? {
            c.alpha_tol = v;
        }
        c.r_max = positive("r-max", self.r_max)?.or(c.r_max);
        c.sample_spacing = positive("spacing", self.spacing)?.or(c.sample_spacing);
        if let Some(k) = self.scan_points {
            if k < 2 {
                return Err(Failure::new(EXIT_INVALID, "--scan-points must be at least 2"));
            }
            c.scan_points = k;
            c.max_scan_points = c.max_scan_points.max(k);
        }
        Ok(c)
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn invalid(e: ParamError) -> Self {
        Self::new(EXIT_INVALID, format!("invalid parameters: {e}"))
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self::new(EXIT_IO, format!("cannot write {}: {e}", path.display()))
    }
}

impl From<ConditionError> for Failure {
    fn from(e: ConditionError) -> Self {
        let code = match e {
            ConditionError::InvalidParams(_) | ConditionError::InvalidRange(_) => EXIT_INVALID,
            ConditionError::IndeterminateNearThreshold { .. }
            | ConditionError::IndeterminateSign { .. } => EXIT_INDETERMINATE,
            ConditionError::EquivalenceViolation { .. } => EXIT_VIOLATION,
        };
        Self::new(code, e.to_string())
    }
}

/// Where the main artifact goes.
struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.path {
            Some(path) => {
                let write = || -> io::Result<()> {
                    let mut w = BufWriter::new(File::create(path)?);
                    w.write_all(text.as_bytes())?;
                    w.flush()
                };
                write().map_err(|e| Failure::io(path, e))
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| Failure::new(EXIT_IO, format!("cannot write to stdout: {e}")))
            }
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = to_json(value).expect("report types serialize");
    s.push('\n');
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(sig17).unwrap_or_default()
}

#[derive(Serialize)]
struct ThresholdReport {
    omega_crit: f64,
    eta_crit: f64,
    u_star_potential: f64,
    u_star_f: f64,
}

fn cmd_thresholds(p: f64, q: f64, output: Output, sink: &Sink) -> Result<u8, Failure> {
    let th = Thresholds::new(p, q).map_err(Failure::invalid)?;
    let report = ThresholdReport {
        omega_crit: th.omega_crit,
        eta_crit: th.eta_crit,
        u_star_potential: th.u_star_potential,
        u_star_f: th.u_star_f,
    };
    let text = match output {
        Output::Json => json(&report),
        Output::Csv => format!(
            "omega_crit,eta_crit,u_star_potential,u_star_f\n{},{},{},{}\n",
            sig17(report.omega_crit),
            sig17(report.eta_crit),
            sig17(report.u_star_potential),
            sig17(report.u_star_f)
        ),
        Output::Human => format!(
            "omega_crit       = {}\neta_crit         = {}\nu_star_potential = {}\nu_star_f         = {}\n",
            sig17(report.omega_crit),
            sig17(report.eta_crit),
            sig17(report.u_star_potential),
            sig17(report.u_star_f)
        ),
    };
    sink.emit(&text)?;
    Ok(0)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "analytic",
        Method::Numeric => "numeric",
    }
}

fn cmd_check(
    params: &ParamArgs,
    condition: ConditionId,
    method: Option<MethodArg>,
    output: Output,
    sink: &Sink,
) -> Result<u8, Failure> {
    let numeric_only = matches!(condition, ConditionId::FtildeBig | ConditionId::FPositiveSomewhere);
    if numeric_only && method == Some(MethodArg::Analytic) {
        return Err(Failure::new(
            EXIT_INVALID,
            format!("condition {condition} has no analytic method"),
        ));
    }
    let params = params.params()?;
    let method = match method {
        Some(m) => m.into(),
        None if numeric_only => Method::Numeric,
        None => Method::Analytic,
    };
    let report: ConditionReport = conditions::check(&params, condition, method)?;
    let text = match output {
        Output::Json => json(&report),
        Output::Csv => format!(
            "condition,method,holds,margin,witness\n{},{},{},{},{}\n",
            report.condition,
            method_name(report.method),
            bool_str(report.holds),
            sig17(report.margin),
            opt(report.witness)
        ),
        Output::Human => {
            let mut s = format!(
                "{} {} ({}, margin {})\n",
                report.condition,
                if report.holds { "holds" } else { "does not hold" },
                method_name(report.method),
                sig17(report.margin)
            );
            if let Some(w) = report.witness {
                s.push_str(&format!("witness u = {}\n", sig17(w)));
            }
            s
        }
    };
    sink.emit(&text)?;
    Ok(if report.holds { 0 } else { EXIT_FALSE })
}

fn cmd_verify(config: SampleConfig, output: Output, sink: &Sink) -> Result<u8, Failure> {
    let summary = conditions::verify_sampled(&config)?;
    let text = match output {
        Output::Json => json(&summary),
        Output::Csv => {
            let mut s = String::from("samples,passed,skipped_in_band,failed,corollary_failed\n");
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                summary.samples,
                summary.passed,
                summary.skipped_in_band,
                summary.failed,
                summary.corollary_failed
            ));
            s
        }
        Output::Human => {
            let mut s = format!(
                "samples={} passed={} skipped-in-band={} failed={} corollary-failed={}\n",
                summary.samples,
                summary.passed,
                summary.skipped_in_band,
                summary.failed,
                summary.corollary_failed
            );
            for (omega, p, q) in &summary.failures {
                s.push_str(&format!(
                    "failure omega={} p={} q={}\n",
                    sig17(*omega),
                    sig17(*p),
                    sig17(*q)
                ));
            }
            s
        }
    };
    sink.emit(&text)?;
    if summary.failed > 0 {
        for (omega, p, q) in &summary.failures {
            eprintln!("equivalence violation at omega={omega} p={p} q={q}");
        }
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}

#[derive(Serialize)]
struct SolveReport<'a> {
    omega: f64,
    p: f64,
    q: f64,
    n: u32,
    #[serde(flatten)]
    summary: &'a GroundStateSummary,
}

fn cmd_solve(
    params: &ParamArgs,
    controls: &ControlArgs,
    summary_path: Option<&Path>,
    output: Output,
    sink: &Sink,
) -> Result<u8, Failure> {
    let params = params.params()?;
    let controls = controls.controls()?;
    let gs = match shooting::find_ground_state(&params, &controls) {
        Ok(gs) => gs,
        Err(ShootingError::NoExistence { omega, omega_crit }) => {
            eprintln!(
                "no positive ground state: omega = {omega} is not below omega_crit = {omega_crit}"
            );
            return Ok(EXIT_FALSE);
        }
        Err(e) => {
            eprintln!("solver failure: {e}");
            eprintln!("diagnostics: params = {params:?}");
            eprintln!("diagnostics: controls = {controls:?}");
            eprintln!("diagnostics: error = {e:?}");
            if let Ok(interval) = shooting::shooting_interval(&params) {
                eprintln!("diagnostics: shooting interval = {interval:?}");
            }
            return Ok(EXIT_SOLVER);
        }
    };
    let summary = gs.summary();
    let report = SolveReport {
        omega: params.omega(),
        p: params.p(),
        q: params.q(),
        n: params.n(),
        summary: &summary,
    };
    if let Some(path) = summary_path {
        Sink {
            path: Some(path.to_path_buf()),
        }
        .emit(&json(&report))?;
    }
    let profile_csv = gs.profile.to_csv();
    match (&sink.path, output) {
        (Some(_), _) => {
            sink.emit(&profile_csv)?;
            print_solve(&report, output)?;
        }
        (None, Output::Csv) => sink.emit(&profile_csv)?,
        (None, _) => print_solve(&report, output)?,
    }
    Ok(0)
}

fn print_solve(report: &SolveReport<'_>, output: Output) -> Result<(), Failure> {
    let s = report.summary;
    let text = match output {
        Output::Json => json(report),
        Output::Csv => format!(
            "alpha,bracket_lo,bracket_hi,decay_rate,ode_residual,max_energy_violation,restarts,samples,r_end\n{},{},{},{},{},{},{},{},{}\n",
            sig17(s.alpha),
            sig17(s.bracket.0),
            sig17(s.bracket.1),
            sig17(s.decay_rate),
            sig17(s.ode_residual),
            sig17(s.max_energy_violation),
            s.restarts,
            s.samples,
            sig17(s.r_end)
        ),
        Output::Human => format!(
            "alpha*            = {}\nbracket           = [{}, {}]\ndecay_rate        = {}\node_residual      = {}\nenergy_violation  = {}\nrestarts          = {}\nsamples           = {}\nr_end             = {}\n",
            sig17(s.alpha),
            sig17(s.bracket.0),
            sig17(s.bracket.1),
            sig17(s.decay_rate),
            sig17(s.ode_residual),
            sig17(s.max_energy_violation),
            s.restarts,
            s.samples,
            sig17(s.r_end)
        ),
    };
    Sink { path: None }.emit(&text)
}

fn cmd_sweep(
    p: Range,
    q: Range,
    omega: Range,
    res: usize,
    output: Output,
    sink: &Sink,
) -> Result<u8, Failure> {
    if res == 0 {
        return Err(Failure::new(EXIT_INVALID, "--res must be at least 1"));
    }
    if let Some(path) = &sink.path {
        // Fail on an unwritable path before the grid is computed.
        File::create(path).map_err(|e| Failure::io(path, e))?;
    }
    let table = conditions::sweep(p, q, omega, Resolution::uniform(res))?;
    let text = match output {
        Output::Json => json(&table.rows),
        Output::Csv | Output::Human => table.to_csv(),
    };
    sink.emit(&text)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let sink = Sink { path: cli.out };
    match cli.command {
        Command::Thresholds { p, q } => cmd_thresholds(p, q, cli.output, &sink),
        Command::Check {
            params,
            condition,
            method,
        } => cmd_check(&params, condition, method, cli.output, &sink),
        Command::Verify {
            p_range,
            q_range,
            samples,
            seed,
        } => {
            if samples == 0 {
                return Err(Failure::new(EXIT_INVALID, "--samples must be at least 1"));
            }
            let config = SampleConfig {
                p: p_range,
                q: q_range,
                samples,
                seed,
            };
            cmd_verify(config, cli.output, &sink)
        }
        Command::Solve {
            params,
            controls,
            summary,
        } => cmd_solve(&params, &controls, summary.as_deref(), cli.output, &sink),
        Command::Sweep { p, q, omega, res } => cmd_sweep(p, q, omega, res, cli.output, &sink),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
