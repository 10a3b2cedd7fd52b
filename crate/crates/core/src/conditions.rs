//! Existence and uniqueness conditions, evaluated by two independent routes.
//!
//! The *analytic* route compares `ω` with the closed-form critical
//! frequencies `ω_{p,q}` and `η_{p,q}`. The *numeric* route builds the
//! relevant power sum (`F`, `f̃`, `F̃` or `f`) and runs sign analysis on it.
//! The four conditions are
//!
//! | id                         | statement                       |
//! |----------------------------|---------------------------------|
//! | `ExistenceF`               | `F(u) > 0` for some `u > 0`     |
//! | `UniquenessFtildeSmall`    | `f̃(u) < 0` for every `u > 0`    |
//! | `FtildeBig`                | `F̃(u) < 0` for every `u > 0`    |
//! | `FPositiveSomewhere`       | `f(u) > 0` for some `u > 0`     |
//!
//! The first and third are equivalent to `ω < ω_{p,q}`, the second and
//! fourth to `ω < η_{p,q}`.

use std::fmt;
use std::io;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{bool_str, sig17};
use crate::nonlinearity::{validate_exponents, ParamError, Params, Thresholds};
use crate::power_algebra::{AlgebraError, PowerSum, Sign};

/// `check_*` refuse to decide when `|ω − threshold| < CHECK_BAND·threshold`.
pub const CHECK_BAND: f64 = 1e-9;
/// Equivalence assertions skip instances with `|ω − threshold|` below this
/// relative distance.
pub const EQUIVALENCE_BAND: f64 = 1e-6;
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionId {
    ExistenceF,
    UniquenessFtildeSmall,
    FtildeBig,
    FPositiveSomewhere,
}

impl ConditionId {
    pub fn name(self) -> &'static str {
        match self {
            ConditionId::ExistenceF => "existence",
            ConditionId::UniquenessFtildeSmall => "uniqueness",
            ConditionId::FtildeBig => "potential-tilde",
            ConditionId::FPositiveSomewhere => "f-positive",
        }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConditionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "existence" => Ok(ConditionId::ExistenceF),
            "uniqueness" => Ok(ConditionId::UniquenessFtildeSmall),
            "potential-tilde" => Ok(ConditionId::FtildeBig),
            "f-positive" => Ok(ConditionId::FPositiveSomewhere),
            other => Err(format!(
                "unknown condition '{other}' (expected existence, uniqueness, potential-tilde or f-positive)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub holds: bool,
    pub method: Method,
    /// `ω − threshold` for analytic reports, the supremum of the reduced
    /// power sum for numeric ones.
    pub margin: f64,
    pub witness: Option<f64>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConditionError {
    #[error(transparent)]
    InvalidParams(#[from] ParamError),
    #[error("omega = {omega} is within the indeterminate band of the {condition} threshold {threshold}")]
    IndeterminateNearThreshold {
        condition: ConditionId,
        omega: f64,
        threshold: f64,
    },
    #[error("sign analysis for {condition} is indeterminate: {source}")]
    IndeterminateSign {
        condition: ConditionId,
        source: AlgebraError,
    },
    #[error(
        "equivalence violated at {params:?}: {first:?} gives {first_holds}, {second:?} gives {second_holds}"
    )]
    EquivalenceViolation {
        params: Params,
        first: (ConditionId, Method),
        first_holds: bool,
        second: (ConditionId, Method),
        second_holds: bool,
    },
    #[error("invalid range: {0}")]
    InvalidRange(String),
}

fn band_check(
    condition: ConditionId,
    omega: f64,
    threshold: f64,
    band: f64,
) -> Result<(), ConditionError> {
    if (omega - threshold).abs() < band * threshold {
        Err(ConditionError::IndeterminateNearThreshold {
            condition,
            omega,
            threshold,
        })
    } else {
        Ok(())
    }
}

fn analytic(condition: ConditionId, omega: f64, threshold: f64, witness: f64) -> ConditionReport {
    let margin = omega - threshold;
    let holds = margin < 0.0;
    ConditionReport {
        condition,
        holds,
        method: Method::Analytic,
        margin,
        witness: holds.then_some(witness),
    }
}

/// Numeric report for "`ps` is positive somewhere" (`positive = true`) or
/// "`ps` is negative everywhere" (`positive = false`).
fn numeric(
    condition: ConditionId,
    ps: &PowerSum,
    positive: bool,
) -> Result<ConditionReport, ConditionError> {
    let verdict = ps
        .analyze_sign()
        .map_err(|source| ConditionError::IndeterminateSign { condition, source })?;
    let is_positive = verdict.verdict == Sign::PositiveSomewhere;
    Ok(ConditionReport {
        condition,
        holds: if positive { is_positive } else { !is_positive },
        method: Method::Numeric,
        margin: verdict.sup_value,
        witness: verdict.witness,
    })
}

/// `F > 0` somewhere.
pub fn check_existence(params: &Params, method: Method) -> Result<ConditionReport, ConditionError> {
    let th = params.thresholds();
    let id = ConditionId::ExistenceF;
    band_check(id, params.omega(), th.omega_crit, CHECK_BAND)?;
    match method {
        Method::Analytic => Ok(analytic(id, params.omega(), th.omega_crit, th.u_star_potential)),
        Method::Numeric => numeric(id, &params.potential(), true),
    }
}

/// `f̃ < 0` everywhere. The numeric route is cross-checked against `f > 0`
/// somewhere and reports that positivity witness.
pub fn check_uniqueness(
    params: &Params,
    method: Method,
) -> Result<ConditionReport, ConditionError> {
    let th = params.thresholds();
    let id = ConditionId::UniquenessFtildeSmall;
    band_check(id, params.omega(), th.eta_crit, CHECK_BAND)?;
    match method {
        Method::Analytic => Ok(analytic(id, params.omega(), th.eta_crit, th.u_star_f)),
        Method::Numeric => {
            let mut report = numeric(id, &params.f_tilde(), false)?;
            let f_pos = numeric(ConditionId::FPositiveSomewhere, &params.f(), true)?;
            if f_pos.holds != report.holds {
                return Err(ConditionError::EquivalenceViolation {
                    params: *params,
                    first: (id, Method::Numeric),
                    first_holds: report.holds,
                    second: (ConditionId::FPositiveSomewhere, Method::Numeric),
                    second_holds: f_pos.holds,
                });
            }
            report.witness = f_pos.witness;
            Ok(report)
        }
    }
}

/// `F̃ < 0` everywhere (numeric only).
pub fn check_potential_tilde(params: &Params) -> Result<ConditionReport, ConditionError> {
    let th = params.thresholds();
    let id = ConditionId::FtildeBig;
    band_check(id, params.omega(), th.omega_crit, CHECK_BAND)?;
    numeric(id, &params.potential_tilde(), false)
}

/// `f > 0` somewhere (numeric only).
pub fn check_f_positive(params: &Params) -> Result<ConditionReport, ConditionError> {
    let th = params.thresholds();
    let id = ConditionId::FPositiveSomewhere;
    band_check(id, params.omega(), th.eta_crit, CHECK_BAND)?;
    numeric(id, &params.f(), true)
}

/// Dispatches on the condition id. Conditions without an analytic route
/// ignore `method`.
pub fn check(
    params: &Params,
    condition: ConditionId,
    method: Method,
) -> Result<ConditionReport, ConditionError> {
    match condition {
        ConditionId::ExistenceF => check_existence(params, method),
        ConditionId::UniquenessFtildeSmall => check_uniqueness(params, method),
        ConditionId::FtildeBig => check_potential_tilde(params),
        ConditionId::FPositiveSomewhere => check_f_positive(params),
    }
}

/// All six verdicts behind the two condition equivalences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremRecord {
    pub params: Params,
    pub thresholds: Thresholds,
    pub existence_analytic: bool,
    pub existence_numeric: bool,
    pub potential_tilde_negative: bool,
    pub uniqueness_analytic: bool,
    pub f_tilde_negative: bool,
    pub f_positive: bool,
    pub consistent: bool,
}

impl TheoremRecord {
    fn first_disagreement(&self) -> Option<ConditionError> {
        use ConditionId::*;
        use Method::*;
        let groups = [
            [
                ((ExistenceF, Analytic), self.existence_analytic),
                ((ExistenceF, Numeric), self.existence_numeric),
                ((FtildeBig, Numeric), self.potential_tilde_negative),
            ],
            [
                ((UniquenessFtildeSmall, Analytic), self.uniqueness_analytic),
                ((UniquenessFtildeSmall, Numeric), self.f_tilde_negative),
                ((FPositiveSomewhere, Numeric), self.f_positive),
            ],
        ];
        groups.iter().find_map(|group| {
            let (first, first_holds) = group[0];
            group[1..]
                .iter()
                .find(|(_, holds)| *holds != first_holds)
                .map(|&(second, second_holds)| ConditionError::EquivalenceViolation {
                    params: self.params,
                    first,
                    first_holds,
                    second,
                    second_holds,
                })
        })
    }
}

fn theorem_verdicts(params: &Params) -> Result<TheoremRecord, ConditionError> {
    let th = params.thresholds();
    let omega = params.omega();
    let holds = |id: ConditionId, ps: PowerSum, positive: bool| -> Result<bool, ConditionError> {
        Ok(numeric(id, &ps, positive)?.holds)
    };
    let mut record = TheoremRecord {
        params: *params,
        thresholds: th,
        existence_analytic: omega < th.omega_crit,
        existence_numeric: holds(ConditionId::ExistenceF, params.potential(), true)?,
        potential_tilde_negative: holds(ConditionId::FtildeBig, params.potential_tilde(), false)?,
        uniqueness_analytic: omega < th.eta_crit,
        f_tilde_negative: holds(ConditionId::UniquenessFtildeSmall, params.f_tilde(), false)?,
        f_positive: holds(ConditionId::FPositiveSomewhere, params.f(), true)?,
        consistent: false,
    };
    record.consistent = record.first_disagreement().is_none();
    Ok(record)
}

/// Checks both equivalences at an off-boundary instance.
///
/// Fails with [`ConditionError::IndeterminateNearThreshold`] when `ω` lies
/// within [`EQUIVALENCE_BAND`] of either threshold, and with
/// [`ConditionError::EquivalenceViolation`] when two routes disagree.
pub fn verify_theorem(params: &Params) -> Result<TheoremRecord, ConditionError> {
    let th = params.thresholds();
    band_check(ConditionId::ExistenceF, params.omega(), th.omega_crit, EQUIVALENCE_BAND)?;
    band_check(
        ConditionId::UniquenessFtildeSmall,
        params.omega(),
        th.eta_crit,
        EQUIVALENCE_BAND,
    )?;
    let record = theorem_verdicts(params)?;
    match record.first_disagreement() {
        Some(err) => Err(err),
        None => Ok(record),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollarySample {
    pub omega: f64,
    pub existence: bool,
    pub uniqueness: bool,
    /// `f ≤ 0` on `(0, ∞)` per sign analysis; `None` when indeterminate.
    pub f_nonpositive: Option<bool>,
    /// `F > 0` somewhere per sign analysis; `None` when indeterminate.
    pub potential_positive: Option<bool>,
}

impl CorollarySample {
    fn falsifies(&self) -> bool {
        let implication = !self.existence || self.uniqueness;
        let contrapositive = !(self.f_nonpositive == Some(true) && self.potential_positive == Some(true));
        !(implication && contrapositive)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryEvidence {
    pub p: f64,
    pub q: f64,
    pub omega_crit: f64,
    pub eta_crit: f64,
    /// `omega_crit ≤ eta_crit`.
    pub ordered: bool,
    /// `omega_crit < eta_crit`.
    pub strict: bool,
    pub samples: Vec<CorollarySample>,
    pub falsifying: Option<CorollarySample>,
    pub holds: bool,
}

/// Existence implies uniqueness: threshold ordering, the implication on
/// every sampled `ω`, and the function-level contrapositive (`f ≤ 0`
/// everywhere forces `F ≤ 0` everywhere).
pub fn verify_corollary(
    p: f64,
    q: f64,
    omega_samples: &[f64],
) -> Result<CorollaryEvidence, ParamError> {
    let th = Thresholds::new(p, q)?;
    let samples = omega_samples
        .iter()
        .map(|&omega| {
            let params = Params::new(omega, p, q, 1)?;
            let positive = |ps: PowerSum| {
                ps.analyze_sign()
                    .ok()
                    .map(|v| v.verdict == Sign::PositiveSomewhere)
            };
            Ok(CorollarySample {
                omega,
                existence: omega < th.omega_crit,
                uniqueness: omega < th.eta_crit,
                f_nonpositive: positive(params.f()).map(|b| !b),
                potential_positive: positive(params.potential()),
            })
        })
        .collect::<Result<Vec<_>, ParamError>>()?;
    let ordered = th.omega_crit <= th.eta_crit;
    let falsifying = samples.iter().find(|s| s.falsifies()).copied();
    Ok(CorollaryEvidence {
        p,
        q,
        omega_crit: th.omega_crit,
        eta_crit: th.eta_crit,
        ordered,
        strict: th.omega_crit < th.eta_crit,
        holds: ordered && falsifying.is_none(),
        samples,
        falsifying,
    })
}

/// Closed interval `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Result<Self, ConditionError> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(ConditionError::InvalidRange(format!("{lo}:{hi}")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// `count` points including both endpoints; a single point for a
    /// degenerate range or `count == 1`.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        if count <= 1 || self.lo == self.hi {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (count - 1) as f64;
        (0..count)
            .map(|i| if i + 1 == count { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }
}

impl FromStr for Range {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConditionError::InvalidRange(s.to_string());
        let (lo, hi) = match s.split_once(':') {
            Some((lo, hi)) => (lo, hi),
            None => (s, s),
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        Range::new(lo, hi).map_err(|_| bad())
    }
}

/// Grid points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub p: usize,
    pub q: usize,
    pub omega: usize,
}

impl Resolution {
    pub fn uniform(n: usize) -> Self {
        Self { p: n, q: n, omega: n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub p: f64,
    pub q: f64,
    pub omega: f64,
    pub omega_crit: f64,
    pub eta_crit: f64,
    pub existence: bool,
    pub uniqueness: bool,
    /// Numeric routes agree with the thresholds. Points inside the
    /// indeterminate band count as consistent.
    pub consistent: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub rows: Vec<PhaseRow>,
}

pub const PHASE_HEADER: &str = "p,q,omega,omega_crit,eta_crit,existence,uniqueness,consistent";

impl PhaseTable {
    pub fn write_csv<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{PHASE_HEADER}")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                sig17(r.p),
                sig17(r.q),
                sig17(r.omega),
                sig17(r.omega_crit),
                sig17(r.eta_crit),
                bool_str(r.existence),
                bool_str(r.uniqueness),
                bool_str(r.consistent)
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("CSV is ASCII")
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h == PHASE_HEADER => {}
            other => return Err(format!("unexpected header {other:?}")),
        }
        let real = |s: &str| s.parse::<f64>().map_err(|e| format!("{s}: {e}"));
        let boolean = |s: &str| s.parse::<bool>().map_err(|e| format!("{s}: {e}"));
        let rows = lines
            .map(|line| {
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != 8 {
                    return Err(format!("expected 8 fields in '{line}'"));
                }
                Ok(PhaseRow {
                    p: real(f[0])?,
                    q: real(f[1])?,
                    omega: real(f[2])?,
                    omega_crit: real(f[3])?,
                    eta_crit: real(f[4])?,
                    existence: boolean(f[5])?,
                    uniqueness: boolean(f[6])?,
                    consistent: boolean(f[7])?,
                })
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(Self { rows })
    }
}

fn phase_row(p: f64, q: f64, omega: f64) -> Result<PhaseRow, ConditionError> {
    let params = Params::new(omega, p, q, 1)?;
    let th = params.thresholds();
    let near = |t: f64| (omega - t).abs() < EQUIVALENCE_BAND * t;
    let in_band = near(th.omega_crit) || near(th.eta_crit);
    let consistent = match theorem_verdicts(&params) {
        Ok(record) => record.consistent || in_band,
        Err(ConditionError::IndeterminateSign { .. }) => in_band,
        Err(e) => return Err(e),
    };
    Ok(PhaseRow {
        p,
        q,
        omega,
        omega_crit: th.omega_crit,
        eta_crit: th.eta_crit,
        existence: omega < th.omega_crit,
        uniqueness: omega < th.eta_crit,
        consistent,
    })
}

/// Row-major (`p`, then `q`, then `ω`) evaluation over an inclusive grid.
/// Points with `q ≤ p` are skipped. Rows are computed in parallel and
/// returned in grid order.
pub fn sweep(
    p: Range,
    q: Range,
    omega: Range,
    resolution: Resolution,
) -> Result<PhaseTable, ConditionError> {
    if p.lo <= 1.0 {
        return Err(ConditionError::InvalidRange(format!(
            "p range {}:{} must lie above 1",
            p.lo, p.hi
        )));
    }
    if q.lo <= 1.0 {
        return Err(ConditionError::InvalidRange(format!(
            "q range {}:{} must lie above 1",
            q.lo, q.hi
        )));
    }
    if omega.lo <= 0.0 {
        return Err(ConditionError::InvalidRange(format!(
            "omega range {}:{} must be positive",
            omega.lo, omega.hi
        )));
    }
    if resolution.p == 0 || resolution.q == 0 || resolution.omega == 0 {
        return Err(ConditionError::InvalidRange("resolution must be at least 1".into()));
    }
    let ps = p.grid(resolution.p);
    let qs = q.grid(resolution.q);
    let omegas = omega.grid(resolution.omega);
    let points: Vec<(f64, f64, f64)> = ps
        .iter()
        .flat_map(|&p| qs.iter().filter(move |&&q| q > p).map(move |&q| (p, q)))
        .flat_map(|(p, q)| omegas.iter().map(move |&w| (p, q, w)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(p, q, w)| phase_row(p, q, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PhaseTable { rows })
}

/// Sampling setup for random-instance checks of the condition equivalences
/// and of the threshold ordering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub p: Range,
    pub q: Range,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            p: Range { lo: 1.0, hi: 6.0 },
            q: Range { lo: 1.0, hi: 6.0 },
            samples: 1000,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    pub samples: usize,
    pub passed: usize,
    pub skipped_in_band: usize,
    pub failed: usize,
    pub corollary_failed: usize,
    /// `(ω, p, q)` of every failing instance, in sample order.
    pub failures: Vec<(f64, f64, f64)>,
}

/// Draws `(p, q, ω)` instances. `p`, `q` are uniform in their ranges
/// (`q > p` enforced by resampling; the lower end of each range is
/// exclusive when it equals 1), `ω` is a log-uniform multiple in
/// `[1/5, 5]` of one of the two thresholds.
pub fn sample_instances(config: &SampleConfig) -> Result<Vec<Params>, ConditionError> {
    let invalid = |msg: String| ConditionError::InvalidRange(msg);
    if config.p.lo < 1.0 || config.q.lo < 1.0 {
        return Err(invalid("p and q ranges must lie in [1, ∞)".into()));
    }
    if config.q.hi <= config.p.lo || config.p.hi <= 1.0 {
        return Err(invalid(format!(
            "no q > p > 1 in p {}:{}, q {}:{}",
            config.p.lo, config.p.hi, config.q.lo, config.q.hi
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let draw = |rng: &mut ChaCha8Rng, r: Range| -> f64 {
        if r.lo == r.hi {
            return r.lo;
        }
        loop {
            let x = rng.gen_range(r.lo..=r.hi);
            if x > 1.0 {
                return x;
            }
        }
    };
    let mut out = Vec::with_capacity(config.samples);
    let mut attempts = 0usize;
    while out.len() < config.samples {
        attempts += 1;
        if attempts > 1000 * (config.samples + 1) {
            return Err(invalid("could not draw q > p within the given ranges".into()));
        }
        let p = draw(&mut rng, config.p);
        let q = draw(&mut rng, config.q);
        if validate_exponents(p, q).is_err() {
            continue;
        }
        let th = Thresholds::new(p, q)?;
        let base = if rng.gen_bool(0.5) { th.omega_crit } else { th.eta_crit };
        let factor = rng.gen_range(0.2f64.ln()..5f64.ln()).exp();
        out.push(Params::new(base * factor, p, q, 1)?);
    }
    Ok(out)
}

enum Outcome {
    Pass,
    Skip,
    Fail,
}

/// Runs [`verify_theorem`] and [`verify_corollary`] on every sampled
/// instance. Output depends only on `config`.
pub fn verify_sampled(config: &SampleConfig) -> Result<VerificationSummary, ConditionError> {
    let instances = sample_instances(config)?;
    let outcomes: Vec<(Outcome, bool)> = instances
        .par_iter()
        .map(|params| {
            let theorem = match verify_theorem(params) {
                Ok(_) => Outcome::Pass,
                Err(ConditionError::IndeterminateNearThreshold { .. }) => Outcome::Skip,
                Err(_) => Outcome::Fail,
            };
            let corollary = verify_corollary(params.p(), params.q(), &[params.omega()])
                .map(|e| e.holds)
                .unwrap_or(false);
            (theorem, corollary)
        })
        .collect();

    let mut summary = VerificationSummary {
        samples: instances.len(),
        passed: 0,
        skipped_in_band: 0,
        failed: 0,
        corollary_failed: 0,
        failures: Vec::new(),
    };
    for (params, (theorem, corollary)) in instances.iter().zip(outcomes) {
        let failed = match theorem {
            Outcome::Pass => false,
            Outcome::Skip => {
                summary.skipped_in_band += 1;
                false
            }
            Outcome::Fail => true,
        };
        if !corollary {
            summary.corollary_failed += 1;
        }
        if failed || !corollary {
            summary.failed += 1;
            summary.failures.push((params.omega(), params.p(), params.q()));
        } else if !matches!(theorem, Outcome::Skip) {
            summary.passed += 1;
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega: f64, p: f64, q: f64) -> Params {
        Params::new(omega, p, q, 3).unwrap()
    }

    #[test]
    fn existence_examples() {
        let pr = params(0.1, 2.0, 3.0);
        let a = check_existence(&pr, Method::Analytic).unwrap();
        assert!(a.holds);
        assert!((a.margin - (0.1 - 2.0 / 9.0)).abs() < 1e-15);
        let n = check_existence(&pr, Method::Numeric).unwrap();
        assert!(n.holds);
        let w = n.witness.unwrap();
        assert!(pr.potential_value(w) > 0.0);
        // F(1/2) = −0.0125 + 1/24 − 1/64
        assert!((pr.potential_value(0.5) - 0.013541666666666667).abs() < 1e-15);

        for m in [Method::Analytic, Method::Numeric] {
            assert!(!check_existence(&params(0.24, 2.0, 3.0), m).unwrap().holds);
            assert!(matches!(
                check_existence(&params(2.0 / 9.0, 2.0, 3.0), m),
                Err(ConditionError::IndeterminateNearThreshold { .. })
            ));
        }
    }

    #[test]
    fn uniqueness_examples() {
        for m in [Method::Analytic, Method::Numeric] {
            assert!(check_uniqueness(&params(0.1, 2.0, 3.0), m).unwrap().holds);
            assert!(!check_uniqueness(&params(0.3, 2.0, 3.0), m).unwrap().holds);
            // gap region: uniqueness without existence
            assert!(check_uniqueness(&params(0.24, 2.0, 3.0), m).unwrap().holds);
        }
        let r = check_uniqueness(&params(0.1, 2.0, 3.0), Method::Numeric).unwrap();
        assert!(params(0.1, 2.0, 3.0).f_value(r.witness.unwrap()) > 0.0);
        assert!(matches!(
            check_uniqueness(&params(0.25, 2.0, 3.0), Method::Numeric),
            Err(ConditionError::IndeterminateNearThreshold { .. })
        ));
    }

    #[test]
    fn potential_tilde_examples() {
        assert!(check_potential_tilde(&params(0.1, 2.0, 3.0)).unwrap().holds);
        assert!(!check_potential_tilde(&params(0.24, 2.0, 3.0)).unwrap().holds);
        assert!(check_potential_tilde(&params(0.001, 2.0, 3.0)).unwrap().holds);
    }

    #[test]
    fn theorem_examples() {
        let r = verify_theorem(&params(0.1, 2.0, 3.0)).unwrap();
        assert!(r.consistent && r.existence_analytic && r.uniqueness_analytic);
        let r = verify_theorem(&params(0.24, 2.0, 3.0)).unwrap();
        assert!(!r.existence_analytic && r.uniqueness_analytic);
        let r = verify_theorem(&params(0.3, 2.0, 3.0)).unwrap();
        assert!(!r.existence_analytic && !r.uniqueness_analytic && r.f_tilde_negative == false);
        assert!(matches!(
            verify_theorem(&params(0.25 * (1.0 + 1e-7), 2.0, 3.0)),
            Err(ConditionError::IndeterminateNearThreshold { .. })
        ));
    }

    #[test]
    fn corollary_examples() {
        let e = verify_corollary(2.0, 3.0, &[0.1, 0.24, 0.3]).unwrap();
        assert!(e.holds && e.ordered && e.strict);
        assert!(!e.samples[1].existence && e.samples[1].uniqueness);
        let e = verify_corollary(1.5, 5.0, &[0.01, 0.2, 0.5]).unwrap();
        assert!(e.holds);
        let th = Thresholds::new(1.5, 5.0).unwrap();
        assert_eq!(e.omega_crit, th.omega_crit);
        assert!(verify_corollary(3.0, 2.0, &[0.1]).is_err());
    }

    #[test]
    fn sweep_degenerate_and_skips() {
        let t = sweep(
            Range::point(2.0),
            Range::point(3.0),
            Range::point(0.1),
            Resolution::uniform(1),
        )
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        let row = t.rows[0];
        assert!(row.existence && row.uniqueness && row.consistent);

        // p = q points on the diagonal are skipped
        let t = sweep(
            Range::new(2.0, 3.0).unwrap(),
            Range::new(2.0, 3.0).unwrap(),
            Range::point(0.1),
            Resolution::uniform(2),
        )
        .unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!((t.rows[0].p, t.rows[0].q), (2.0, 3.0));

        assert!(sweep(
            Range::point(1.0),
            Range::point(3.0),
            Range::point(0.1),
            Resolution::uniform(1)
        )
        .is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!("2:3".parse::<Range>().unwrap(), Range { lo: 2.0, hi: 3.0 });
        assert_eq!("2.5".parse::<Range>().unwrap(), Range::point(2.5));
        assert!("3:2".parse::<Range>().is_err());
        assert!("a:2".parse::<Range>().is_err());
        assert_eq!(Range { lo: 0.0, hi: 1.0 }.grid(3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn csv_round_trip() {
        let t = sweep(
            Range::new(1.5, 2.5).unwrap(),
            Range::new(3.0, 4.0).unwrap(),
            Range::new(0.05, 0.3).unwrap(),
            Resolution::uniform(3),
        )
        .unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with(PHASE_HEADER));
        let back = PhaseTable::from_csv(&csv).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_csv(), csv);
    }

    #[test]
    fn sampled_verification_is_reproducible() {
        let config = SampleConfig {
            samples: 50,
            ..SampleConfig::default()
        };
        let a = verify_sampled(&config).unwrap();
        let b = verify_sampled(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.failed, 0, "{:?}", a.failures);
        assert_eq!(a.passed + a.skipped_in_band, 50);

        let single = SampleConfig {
            p: Range::point(2.0),
            q: Range::point(3.0),
            samples: 1,
            seed: 1,
        };
        assert_eq!(verify_sampled(&single).unwrap().failed, 0);
        let empty = SampleConfig {
            p: Range::point(3.0),
            q: Range::point(2.0),
            samples: 1,
            seed: 1,
        };
        assert!(verify_sampled(&empty).is_err());
    }
}
