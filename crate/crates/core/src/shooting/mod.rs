//! Radial ground states of `u_rr + (n−1)/r·u_r + f(u) = 0`, `u_r(0) = 0`,
//! `u(r) → 0`, computed by shooting in the initial height `α = u(0)`.
//!
//! Each shot is integrated with an adaptive Dormand–Prince 5(4) pair and
//! stopped at the first classification event:
//!
//! * **Crossing**: `u` reaches 0 with `u_r < 0` (α on the overshoot side);
//! * **Rebound**: `u_r` returns to 0 with `u > 0` (undershoot);
//! * **Decay**: the orbit enters the cone `u < 1e-8·α`, `|u_r| < 2√ω·u`
//!   around the stable manifold of the origin.
//!
//! The ground state sits at the boundary between rebounding and crossing
//! heights and is located by bisection.

mod dopri;
mod ground_state;
mod plateau;
mod radial;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::sig17;
use crate::nonlinearity::Params;

pub use ground_state::{
    count_ground_states, decay_rate, find_ground_state, ode_residual, scan_alpha,
    shooting_interval, GroundState, GroundStateSummary,
};
pub use radial::{classify_orbit, energy, integrate_radial};

/// Descent is detected once `u_r < −EPS_V·√ω·α`.
pub const EPS_V: f64 = 1e-6;
/// `α` is an equilibrium when `|f(α)| < EPS_F·ω·α`.
pub const EPS_F: f64 = 1e-9;
/// Relative size of the decay box (and of the rebound floor) against `α`.
pub const DECAY_BOX: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShootingError {
    #[error("no positive solution: omega = {omega} is not below omega_crit = {omega_crit}")]
    NoExistence { omega: f64, omega_crit: f64 },
    #[error("no rebound/crossing transition found with {scan_points} scan points on ({lo}, {hi})")]
    BracketNotFound { scan_points: usize, lo: f64, hi: f64 },
    #[error("step size underflow at r = {r} (h = {h:e})")]
    StepSizeUnderflow { r: f64, h: f64 },
    #[error("non-finite state at r = {r}")]
    NonFiniteState { r: f64 },
    #[error("decay-rate fit needs {required} tail samples, got {samples}")]
    InsufficientTail { samples: usize, required: usize },
    #[error("initial height must be positive and finite (got {0})")]
    InvalidAlpha(f64),
    #[error("{what} requires n >= {required} (got n = {n})")]
    InvalidDimension {
        what: &'static str,
        n: u32,
        required: u32,
    },
    #[error("energy at u = {u} < 0 needs integer exponents")]
    DomainError { u: f64 },
    #[error("profile continuation stalled at r = {r} after {restarts} restarts")]
    ProfileStalled { r: f64, restarts: usize },
    #[error("the lower positive zero of F is too small to resolve in double precision (p = {p})")]
    ZeroUnderflow { p: f64 },
}

/// Integration and shooting controls. Lengths left as `None` scale with
/// `1/√ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Controls {
    pub rtol: f64,
    /// Absolute tolerance at unit height; shots from `α < 1` use `atol·α`.
    pub atol: f64,
    /// Default `50/√ω`.
    pub r_max: Option<f64>,
    /// Output grid spacing, default `0.01/√ω`.
    pub sample_spacing: Option<f64>,
    /// Relative bracket width at which bisection stops.
    pub alpha_tol: f64,
    /// Initial scan resolution on `(β, b₂)`; doubled up to `max_scan_points`.
    pub scan_points: usize,
    pub max_scan_points: usize,
    pub max_steps: usize,
    /// Stop at the decay box. Disabled for bisection shots, whose side must
    /// be resolved as rebound or crossing.
    pub decay_box: bool,
}

impl Default for Controls {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            r_max: None,
            sample_spacing: None,
            alpha_tol: 1e-12,
            scan_points: 64,
            max_scan_points: 4096,
            max_steps: 2_000_000,
            decay_box: true,
        }
    }
}

impl Controls {
    pub fn r_max_for(&self, params: &Params) -> f64 {
        self.r_max.unwrap_or(50.0 / params.omega().sqrt())
    }

    pub fn spacing_for(&self, params: &Params) -> f64 {
        self.sample_spacing
            .unwrap_or(0.01 / params.omega().sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState {
    pub r: f64,
    pub u: f64,
    /// `u_r`.
    pub v: f64,
}

impl RadialState {
    pub fn new(r: f64, u: f64, v: f64) -> Self {
        Self { r, u, v }
    }
}

impl Serialize for RadialState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.r, self.u, self.v].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RadialState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [r, u, v] = <[f64; 3]>::deserialize(d)?;
        Ok(Self { r, u, v })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitClass {
    Crossing,
    Rebound,
    Decay,
    Equilibrium,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalReason {
    ZeroCrossing,
    SlopeReversal,
    DecayBox,
    EquilibriumStart,
    RadiusLimit,
    StepLimit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub steps: usize,
    pub rejected_steps: usize,
    pub min_energy: f64,
    /// For `n ≥ 2`, the largest increase of `E` between consecutive samples;
    /// for `n = 1`, the largest `|E(r) − E(r₀)|`.
    pub max_energy_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<RadialState>,
    pub orbit_class: OrbitClass,
    pub terminal_reason: TerminalReason,
    pub stats: TrajectoryStats,
}

impl Trajectory {
    pub fn first(&self) -> RadialState {
        self.samples[0]
    }

    pub fn last(&self) -> RadialState {
        *self.samples.last().expect("trajectories are never empty")
    }

    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r,u,u_r")?;
        for s in &self.samples {
            writeln!(w, "{},{},{}", sig17(s.r), sig17(s.u), sig17(s.v))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to a Vec cannot fail");
        String::from_utf8(out).expect("CSV is ASCII")
    }
}
