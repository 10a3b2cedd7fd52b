//! Single shots: integration from a start state to the first event.

use super::dopri::{DenseStep, StepError, Stepper};
use super::{
    Controls, OrbitClass, RadialState, ShootingError, TerminalReason, Trajectory, TrajectoryStats,
    DECAY_BOX, EPS_F, EPS_V,
};
use crate::nonlinearity::Params;

impl From<StepError> for ShootingError {
    fn from(e: StepError) -> Self {
        match e {
            StepError::Underflow { r, h } => ShootingError::StepSizeUnderflow { r, h },
            StepError::NonFinite { r } => ShootingError::NonFiniteState { r },
        }
    }
}

/// `E = u_r²/2 + F(u)`.
pub fn energy(state: &RadialState, params: &Params) -> Result<f64, ShootingError> {
    if state.u < 0.0 && !params.integer_exponents() {
        return Err(ShootingError::DomainError { u: state.u });
    }
    Ok(0.5 * state.v * state.v + params.potential_value(state.u))
}

/// `f` on the whole line: the formula itself for integer exponents, the odd
/// extension otherwise. Only Runge–Kutta stages straddling a zero crossing
/// ever see `u < 0`.
fn f_extended(params: &Params, u: f64) -> f64 {
    if u >= 0.0 || params.integer_exponents() {
        params.f_value(u)
    } else {
        -params.f_value(-u)
    }
}

/// Where a shot starts and how its events are judged.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Shot {
    pub start: RadialState,
    /// Height used to scale the event thresholds.
    pub alpha_ref: f64,
    pub descent_begun: bool,
    pub decay_box: bool,
    pub atol: f64,
    /// Added to `r_max`, for shots that start far from the origin.
    pub r_shift: f64,
}

impl Shot {
    pub fn from_origin(alpha: f64, controls: &Controls) -> Self {
        Self {
            start: RadialState::new(0.0, alpha, 0.0),
            alpha_ref: alpha,
            descent_begun: false,
            decay_box: controls.decay_box,
            atol: controls.atol * alpha.min(1.0),
            r_shift: 0.0,
        }
    }
}

struct Thresholds {
    eps_v: f64,
    delta: f64,
    sqrt_omega: f64,
}

impl Thresholds {
    fn new(params: &Params, alpha: f64) -> Self {
        let sqrt_omega = params.omega().sqrt();
        Self {
            eps_v: EPS_V * sqrt_omega * alpha,
            delta: DECAY_BOX * alpha,
            sqrt_omega,
        }
    }

    fn in_decay_box(&self, s: &RadialState) -> bool {
        s.u > 0.0 && s.u < self.delta && s.v < 0.0 && -s.v < 2.0 * self.sqrt_omega * s.u
    }
}

/// Integrates from `(r, u, u_r) = (0, α, 0)` to the first classification
/// event or `r_max`.
pub fn integrate_radial(
    params: &Params,
    alpha: f64,
    controls: &Controls,
) -> Result<Trajectory, ShootingError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(ShootingError::InvalidAlpha(alpha));
    }
    run(params, controls, Shot::from_origin(alpha, controls))
}

/// Root of component `i` of the interpolant on `[r0, r1]`, given a sign
/// change between the ends.
fn dense_root(step: &DenseStep<2>, i: usize) -> f64 {
    let (mut a, mut b) = (step.r0, step.r1());
    let sa = step.at(a)[i] > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (step.at(m)[i] > 0.0) == sa {
            a = m;
        } else {
            b = m;
        }
    }
    b
}

pub(crate) fn run(
    params: &Params,
    controls: &Controls,
    shot: Shot,
) -> Result<Trajectory, ShootingError> {
    let th = Thresholds::new(params, shot.alpha_ref);
    let r_max = controls.r_max_for(params) + shot.r_shift;
    let dr = controls.spacing_for(params);
    let n = f64::from(params.n());
    let start = shot.start;

    let mut samples = vec![start];
    let mut next_k = (start.r / dr).round() as u64 + 1;
    let grid_r = |k: u64| k as f64 * dr;

    if start.r == 0.0 {
        let f_alpha = params.f_value(start.u);
        if f_alpha.abs() < EPS_F * params.omega() * start.u {
            samples.push(RadialState::new(r_max, start.u, 0.0));
            return Ok(finish(params, samples, OrbitClass::Equilibrium, TerminalReason::EquilibriumStart, 0, 0));
        }
    }

    // Series start u = α − f(α)r²/(2n), u_r = −f(α)r/n across the 0/0 in the
    // damping term.
    let (r0, y0, h_init) = if start.r == 0.0 {
        let alpha = start.u;
        let f_alpha = params.f_value(alpha);
        let h0 = 1e-3f64.min(1e-2 / (params.f_prime_value(alpha).abs() + params.omega()).sqrt());
        let series = |r: f64| RadialState::new(r, alpha - f_alpha * r * r / (2.0 * n), -f_alpha * r / n);
        while grid_r(next_k) <= h0 {
            samples.push(series(grid_r(next_k)));
            next_k += 1;
        }
        let s = series(h0);
        (h0, [s.u, s.v], h0)
    } else {
        (start.r, [start.u, start.v], 1e-3 * dr)
    };

    let damping = n - 1.0;
    let rhs = |r: f64, y: &[f64; 2]| [y[1], -damping / r * y[1] - f_extended(params, y[0])];
    let mut stepper = Stepper::new(rhs, r0, y0, h_init, controls.rtol, shot.atol);
    let mut descent = shot.descent_begun || y0[1] < -th.eps_v;

    let (class, reason) = loop {
        if stepper.r >= r_max {
            break (OrbitClass::Indeterminate, TerminalReason::RadiusLimit);
        }
        if stepper.steps >= controls.max_steps {
            break (OrbitClass::Indeterminate, TerminalReason::StepLimit);
        }
        let step = stepper.step(r_max)?;
        let [u1, v1] = step.y1;

        let crossing = (u1 <= 0.0).then(|| dense_root(&step, 0));
        let rebound = (descent && v1 >= 0.0).then(|| dense_root(&step, 1));
        let event = match (crossing, rebound) {
            (Some(c), Some(b)) if b < c => Some((b, false)),
            (Some(c), _) => Some((c, true)),
            (None, Some(b)) => Some((b, false)),
            (None, None) => None,
        };
        let limit = event.map_or(step.r1(), |e| e.0);
        while grid_r(next_k) < limit || (event.is_none() && grid_r(next_k) <= limit) {
            let [u, v] = step.at(grid_r(next_k));
            samples.push(RadialState::new(grid_r(next_k), u, v));
            next_k += 1;
        }

        if let Some((r_event, is_crossing)) = event {
            let [u, v] = step.at(r_event);
            if is_crossing {
                samples.push(RadialState::new(r_event, 0.0, v));
                break (OrbitClass::Crossing, TerminalReason::ZeroCrossing);
            }
            let s = RadialState::new(r_event, u, 0.0);
            samples.push(s);
            if shot.decay_box && s.u <= th.delta {
                break (OrbitClass::Decay, TerminalReason::DecayBox);
            }
            break (OrbitClass::Rebound, TerminalReason::SlopeReversal);
        }

        let end = RadialState::new(step.r1(), u1, v1);
        if shot.decay_box && th.in_decay_box(&end) {
            if samples.last().map(|s| s.r) != Some(end.r) {
                samples.push(end);
            }
            break (OrbitClass::Decay, TerminalReason::DecayBox);
        }
        if v1 < -th.eps_v {
            descent = true;
        }
    };
    if reason == TerminalReason::RadiusLimit && samples.last().map(|s| s.r) != Some(stepper.r) {
        samples.push(RadialState::new(stepper.r, stepper.y[0], stepper.y[1]));
    }
    Ok(finish(params, samples, class, reason, stepper.steps, stepper.rejected))
}

pub(crate) fn finish(
    params: &Params,
    samples: Vec<RadialState>,
    orbit_class: OrbitClass,
    terminal_reason: TerminalReason,
    steps: usize,
    rejected_steps: usize,
) -> Trajectory {
    let stats = energy_stats(params, &samples, steps, rejected_steps);
    Trajectory {
        samples,
        orbit_class,
        terminal_reason,
        stats,
    }
}

pub(crate) fn energy_stats(
    params: &Params,
    samples: &[RadialState],
    steps: usize,
    rejected_steps: usize,
) -> TrajectoryStats {
    let energies: Vec<f64> = samples
        .iter()
        .filter_map(|s| energy(s, params).ok())
        .collect();
    let min_energy = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let max_energy_violation = if params.n() >= 2 {
        energies
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .fold(0.0, f64::max)
    } else {
        let e0 = energies.first().copied().unwrap_or(0.0);
        energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    };
    TrajectoryStats {
        steps,
        rejected_steps,
        min_energy,
        max_energy_violation,
    }
}

/// Classifies a sampled trajectory after the fact: crossing, then rebound,
/// then decay box, then equilibrium start; anything else is indeterminate.
pub fn classify_orbit(trajectory: &Trajectory, params: &Params) -> OrbitClass {
    let samples = &trajectory.samples;
    let Some(first) = samples.first() else {
        return OrbitClass::Indeterminate;
    };
    let alpha = first.u;
    let th = Thresholds::new(params, alpha);

    if samples.iter().any(|s| s.u <= 0.0) {
        return OrbitClass::Crossing;
    }
    let mut descent = false;
    for s in samples {
        if descent && s.r > 0.0 && s.v >= 0.0 && s.u > th.delta {
            return OrbitClass::Rebound;
        }
        descent |= s.v < -th.eps_v;
    }
    if samples.iter().any(|s| th.in_decay_box(s)) {
        return OrbitClass::Decay;
    }
    if first.r == 0.0 && params.f_value(alpha).abs() < EPS_F * params.omega() * alpha {
        return OrbitClass::Equilibrium;
    }
    OrbitClass::Indeterminate
}
