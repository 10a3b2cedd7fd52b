//! Bracketing, bisection and profile assembly for the ground state.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plateau::Plateau;
use super::radial::{energy_stats, run, Shot};
use super::{
    Controls, OrbitClass, RadialState, ShootingError, TerminalReason, Trajectory,
};
use crate::nonlinearity::Params;

/// Relative separation of the two bracket shots at which the profile is
/// restarted from the midpoint shot.
const DIVERGENCE: f64 = 1e-6;
const MAX_RESTARTS: usize = 32;
/// A classification shot that reaches `r_max` unresolved is repeated with
/// `r_max` extended by its default, up to this many times.
const MAX_EXTENSIONS: usize = 4;
/// Tail window for the decay-rate fit: `u < TAIL_FRACTION·α`.
const TAIL_FRACTION: f64 = 1e-3;
const MIN_TAIL_SAMPLES: usize = 20;
/// Resamplings of a profile whose tail window is too short for the fit.
const MAX_REFINEMENTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    /// `α* = u(0)`. For `n = 1` this is the first positive zero of `F`.
    pub alpha: f64,
    pub profile: Trajectory,
    /// Heights shot on the rebound and crossing sides of `α*`.
    pub bracket: (f64, f64),
    pub decay_rate: f64,
    pub ode_residual: f64,
    /// Number of slope re-shootings needed to follow the profile into the
    /// decay box.
    pub restarts: usize,
    /// `b₂ − α*` when the ground state was shot from the linearization at
    /// `b₂`, where this gap can be below the resolution of `alpha`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateau_gap: Option<f64>,
}

/// Everything in [`GroundState`] except the sampled profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub alpha: f64,
    pub bracket: (f64, f64),
    pub decay_rate: f64,
    pub ode_residual: f64,
    pub restarts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plateau_gap: Option<f64>,
    pub orbit_class: OrbitClass,
    pub samples: usize,
    pub r_end: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub max_energy_violation: f64,
}

impl GroundState {
    pub fn summary(&self) -> GroundStateSummary {
        let p = &self.profile;
        GroundStateSummary {
            alpha: self.alpha,
            bracket: self.bracket,
            decay_rate: self.decay_rate,
            ode_residual: self.ode_residual,
            restarts: self.restarts,
            plateau_gap: self.plateau_gap,
            orbit_class: p.orbit_class,
            samples: p.samples.len(),
            r_end: p.last().r,
            steps: p.stats.steps,
            rejected_steps: p.stats.rejected_steps,
            max_energy_violation: p.stats.max_energy_violation,
        }
    }
}

fn require_existence(params: &Params) -> Result<(), ShootingError> {
    let omega_crit = params.thresholds().omega_crit;
    if params.omega() >= omega_crit {
        return Err(ShootingError::NoExistence {
            omega: params.omega(),
            omega_crit,
        });
    }
    Ok(())
}

/// `(β, b₂)`: the first positive zero of `F` and the last positive zero of
/// `f`. Every ground-state height lies strictly between them when `n ≥ 2`.
pub fn shooting_interval(params: &Params) -> Result<(f64, f64), ShootingError> {
    require_existence(params)?;
    let no = || ShootingError::NoExistence {
        omega: params.omega(),
        omega_crit: params.thresholds().omega_crit,
    };
    let zp = params.positive_zeros_potential();
    let zf = params.positive_zeros_f();
    if zp.tangent {
        return Err(no());
    }
    let beta = *zp.roots.first().ok_or_else(no)?;
    let b2 = *zf.roots.last().ok_or_else(no)?;
    // For p close to 1 the lower zero is of order (ω(p+1)/2)^{1/(p−1)}; below
    // MIN_POSITIVE/EPSILON its ulp is subnormal.
    if beta > params.thresholds().u_star_potential || beta < f64::MIN_POSITIVE / f64::EPSILON {
        return Err(ShootingError::ZeroUnderflow { p: params.p() });
    }
    Ok((beta, b2))
}

fn shooting_mode(controls: &Controls) -> Controls {
    Controls {
        decay_box: false,
        ..*controls
    }
}

fn classify_alpha(params: &Params, controls: &Controls, alpha: f64) -> Result<OrbitClass, ShootingError> {
    Family::Height.classify(params, &shooting_mode(controls), alpha)
}

/// Classifies `β` followed by `points` heights spaced uniformly inside the
/// open interval `(β, b₂)`, with the decay box disabled. Shots still
/// unresolved at `r_max` are repeated with `r_max` extended.
///
/// `β` anchors the scan on the rebound side: `E(0) = F(β) = 0` and `E`
/// decreases strictly for `n ≥ 2`, so that shot cannot cross. Without it a
/// ground state lying within one grid cell of `β` has no rebound neighbour.
pub fn scan_alpha(
    params: &Params,
    points: usize,
    controls: &Controls,
) -> Result<Vec<(f64, OrbitClass)>, ShootingError> {
    let (beta, b2) = shooting_interval(params)?;
    let step = (b2 - beta) / (points + 1) as f64;
    (0..=points)
        .into_par_iter()
        .map(|i| {
            let alpha = beta + step * i as f64;
            classify_alpha(params, controls, alpha).map(|c| (alpha, c))
        })
        .collect()
}

/// Number of changes between rebound and crossing along [`scan_alpha`];
/// each change brackets a ground state. Other classes are skipped.
pub fn count_ground_states(
    params: &Params,
    scan_resolution: usize,
    controls: &Controls,
) -> Result<usize, ShootingError> {
    require_existence(params)?;
    if params.n() < 2 {
        return Err(ShootingError::InvalidDimension {
            what: "count_ground_states",
            n: params.n(),
            required: 2,
        });
    }
    let classes: Vec<OrbitClass> = scan_alpha(params, scan_resolution, controls)?
        .into_iter()
        .map(|(_, c)| c)
        .filter(|c| matches!(c, OrbitClass::Rebound | OrbitClass::Crossing))
        .collect();
    Ok(classes.windows(2).filter(|w| w[0] != w[1]).count())
}

/// A one-parameter family of start states.
#[derive(Debug, Clone, Copy)]
enum Family {
    /// `(0, α, 0)`.
    Height,
    /// Linearized start near `b₂` with `s = ln(b₂ − α)`.
    Plateau(Plateau),
    /// `(r, u, s)` with `s` the slope; used to restart along the profile.
    Slope {
        start: RadialState,
        alpha_ref: f64,
        atol: f64,
        r_shift: f64,
    },
}

impl Family {
    fn shot(&self, s: f64, controls: &Controls, decay_box: bool) -> Shot {
        match *self {
            Family::Height => Shot {
                decay_box,
                ..Shot::from_origin(s, controls)
            },
            Family::Plateau(pl) => {
                let start = pl.start(s);
                Shot {
                    start,
                    alpha_ref: pl.b2,
                    descent_begun: false,
                    decay_box,
                    atol: controls.atol * pl.b2.min(1.0),
                    r_shift: start.r,
                }
            }
            Family::Slope {
                start,
                alpha_ref,
                atol,
                r_shift,
            } => Shot {
                start: RadialState::new(start.r, start.u, s),
                alpha_ref,
                descent_begun: true,
                decay_box,
                atol,
                r_shift,
            },
        }
    }

    fn r_shift(&self, s: f64) -> f64 {
        match *self {
            Family::Height => 0.0,
            Family::Plateau(pl) => pl.start(s).r,
            Family::Slope { r_shift, .. } => r_shift,
        }
    }

    fn height(&self, s: f64) -> f64 {
        match *self {
            Family::Plateau(pl) => pl.height(s),
            _ => s,
        }
    }

    fn classify(&self, params: &Params, controls: &Controls, s: f64) -> Result<OrbitClass, ShootingError> {
        let mut shot = self.shot(s, controls, false);
        for _ in 0..MAX_EXTENSIONS {
            let t = run(params, controls, shot)?;
            if t.terminal_reason != TerminalReason::RadiusLimit {
                return Ok(t.orbit_class);
            }
            shot.r_shift += controls.r_max_for(params);
        }
        Ok(run(params, controls, shot)?.orbit_class)
    }
}

/// Shrinks a (rebound, crossing) parameter pair to relative width `tol`.
/// Stops early if a midpoint cannot be resolved before `r_max`.
fn bisect(
    params: &Params,
    controls: &Controls,
    family: Family,
    mut rebound: f64,
    mut crossing: f64,
) -> Result<(f64, f64), ShootingError> {
    while (crossing - rebound).abs() > controls.alpha_tol * rebound.abs().max(crossing.abs()) {
        let mid = 0.5 * (rebound + crossing);
        if mid == rebound || mid == crossing {
            break;
        }
        match family.classify(params, controls, mid)? {
            OrbitClass::Rebound => rebound = mid,
            OrbitClass::Crossing => crossing = mid,
            _ => break,
        }
    }
    Ok((rebound, crossing))
}

/// (rebound, crossing) slopes around `v` at a restart point. Usually the
/// steeper slope crosses; inside the front of a plateau profile it is the
/// other way round.
fn slope_bracket(
    params: &Params,
    controls: &Controls,
    family: Family,
    v: f64,
) -> Result<Option<(f64, f64)>, ShootingError> {
    let mut width = 1e-7;
    while width < 0.5 {
        let (flat, steep) = (v * (1.0 - width), v * (1.0 + width));
        let a = family.classify(params, controls, flat)?;
        let b = family.classify(params, controls, steep)?;
        match (a, b) {
            (OrbitClass::Rebound, OrbitClass::Crossing) => return Ok(Some((flat, steep))),
            (OrbitClass::Crossing, OrbitClass::Rebound) => return Ok(Some((steep, flat))),
            _ => {}
        }
        width *= 10.0;
    }
    Ok(None)
}

/// Follows the ground state from a converged (rebound, crossing) height
/// bracket into the decay box.
///
/// A single shot from inside the bracket tracks the decaying solution only
/// until rounding in the unstable direction has grown to order one. Where the
/// two bracket shots separate by [`DIVERGENCE`] relative to the midpoint
/// shot, the midpoint state is kept and the slope alone is re-bisected from
/// there. Each restart buys several more e-folds of decay.
fn assemble_profile(
    params: &Params,
    controls: &Controls,
    mut family: Family,
    bracket: (f64, f64),
) -> Result<(Trajectory, usize), ShootingError> {
    let (mut rebound, mut crossing) = bracket;
    let alpha_ref = family.height(0.5 * (rebound + crossing));
    let atol_ref = controls.atol * alpha_ref.min(1.0);
    // r_max counts from the front, which a long plateau pushes far out.
    let front = run(params, controls, family.shot(crossing, controls, false))?.last().r;
    let mut r_shift = family.r_shift(crossing).max(front);
    let shoot = |family: Family, s: f64, decay_box: bool, r_shift: f64| {
        let shot = family.shot(s, controls, decay_box);
        run(params, controls, Shot { r_shift, ..shot })
    };
    let mut samples: Vec<RadialState> = match family {
        Family::Plateau(pl) => pl.prefix(0.5 * (rebound + crossing), controls.spacing_for(params)),
        _ => Vec::new(),
    };
    let (mut steps, mut rejected) = (0, 0);
    let (mut restarts, mut extensions) = (0, 0);

    while restarts <= MAX_RESTARTS {
        let mid = 0.5 * (rebound + crossing);
        let main = shoot(family, mid, true, r_shift)?;
        steps += main.stats.steps;
        rejected += main.stats.rejected_steps;
        match main.orbit_class {
            OrbitClass::Decay => {
                samples.extend_from_slice(&main.samples);
                let stats = energy_stats(params, &samples, steps, rejected);
                let profile = Trajectory {
                    samples,
                    orbit_class: OrbitClass::Decay,
                    terminal_reason: TerminalReason::DecayBox,
                    stats,
                };
                return Ok((profile, restarts));
            }
            OrbitClass::Equilibrium => {
                return Err(ShootingError::ProfileStalled {
                    r: main.first().r,
                    restarts,
                })
            }
            _ => {}
        }

        let lo = shoot(family, rebound, false, r_shift)?;
        let hi = shoot(family, crossing, false, r_shift)?;
        // The final sample of each shot is its event, off the shared grid.
        let end = |t: &Trajectory| t.samples[t.samples.len().saturating_sub(2)].r;
        let r_common = end(&lo).min(end(&hi));
        let diverged = (0..main.samples.len().saturating_sub(1)).find(|&j| {
            let m = main.samples[j];
            if m.u <= 0.0 {
                return true;
            }
            match (u_at(&lo, m.r), u_at(&hi, m.r)) {
                (Some(a), Some(b)) => (b - a).abs() > DIVERGENCE * m.u.abs(),
                _ => false,
            }
        });
        // All three shots still agree where the radius limit stopped them:
        // the tail is just longer than r_max.
        let limited = [&main, &lo, &hi]
            .iter()
            .all(|t| t.terminal_reason == TerminalReason::RadiusLimit);
        if diverged.is_none() && limited && extensions < MAX_EXTENSIONS {
            r_shift += controls.r_max_for(params);
            extensions += 1;
            continue;
        }
        let split = diverged
            .into_iter()
            .chain(main.samples.iter().position(|m| m.r >= r_common))
            .min()
            .unwrap_or(main.samples.len().saturating_sub(1));
        let restart = split.saturating_sub(1);
        if restart == 0 {
            return Err(ShootingError::ProfileStalled {
                r: main.first().r,
                restarts,
            });
        }

        samples.extend_from_slice(&main.samples[..restart]);
        let at = main.samples[restart];
        family = Family::Slope {
            start: at,
            alpha_ref,
            atol: atol_ref * (at.u / alpha_ref).min(1.0),
            r_shift,
        };
        let Some((flat, steep)) = slope_bracket(params, controls, family, at.v)? else {
            return Err(ShootingError::ProfileStalled { r: at.r, restarts });
        };
        (rebound, crossing) = bisect(params, controls, family, flat, steep)?;
        restarts += 1;
    }
    Err(ShootingError::ProfileStalled {
        r: samples.last().map_or(0.0, |s| s.r),
        restarts: MAX_RESTARTS,
    })
}

/// `u` of the sample of `t` at radius `r`, if there is one.
fn u_at(t: &Trajectory, r: f64) -> Option<f64> {
    let i = t.samples.partition_point(|s| s.r < r);
    let tol = 1e-9 * r.max(1.0);
    [i.checked_sub(1), Some(i)]
        .into_iter()
        .flatten()
        .filter_map(|k| t.samples.get(k))
        .find(|s| (s.r - r).abs() <= tol)
        .map(|s| s.u)
}

/// Locates the positive radial ground state.
///
/// For `n ≥ 2` the heights in `(β, b₂)` are scanned for an adjacent
/// (rebound, crossing) pair, which is bisected to `controls.alpha_tol`. For
/// `n = 1` energy is conserved and the ground state is the zero-energy
/// orbit, so `α* = β`; a bracket around it is still bisected to build the
/// profile.
pub fn find_ground_state(params: &Params, controls: &Controls) -> Result<GroundState, ShootingError> {
    let (beta, b2) = shooting_interval(params)?;

    let (family, alpha, bracket) = if params.n() == 1 {
        let below = beta * (1.0 - 1e-3);
        let above = 0.5 * (beta + b2);
        let family = Family::Height;
        if family.classify(params, controls, below)? != OrbitClass::Rebound
            || family.classify(params, controls, above)? != OrbitClass::Crossing
        {
            return Err(ShootingError::BracketNotFound {
                scan_points: 2,
                lo: below,
                hi: above,
            });
        }
        (family, beta, bisect(params, controls, family, below, above)?)
    } else {
        let (family, bracket) = scan_bracket(params, controls, beta, b2)?;
        let bracket = bisect(params, controls, family, bracket.0, bracket.1)?;
        (family, family.height(0.5 * (bracket.0 + bracket.1)), bracket)
    };

    let (mut profile, mut restarts) = assemble_profile(params, controls, family, bracket)?;
    let plateau_gap = match family {
        Family::Plateau(_) => Some((0.5 * (bracket.0 + bracket.1)).exp()),
        _ => None,
    };
    let mut spacing = controls.spacing_for(params);
    let mut refinements = 0;
    let decay_rate = loop {
        match decay_rate(&profile, params) {
            Err(ShootingError::InsufficientTail { .. }) if refinements < MAX_REFINEMENTS => {
                // A steep tail crosses the fit window between a few grid
                // points; resample it more finely.
                let alpha = profile.first().u;
                let entry = profile.samples.iter().rposition(|s| s.u >= TAIL_FRACTION * alpha);
                let span = entry.map_or(0.0, |i| profile.last().r - profile.samples[i].r);
                spacing = (0.25 * spacing).min(span / (2 * MIN_TAIL_SAMPLES) as f64);
                let finer = Controls {
                    sample_spacing: Some(spacing),
                    ..*controls
                };
                (profile, restarts) = assemble_profile(params, &finer, family, bracket)?;
                refinements += 1;
            }
            rate => break rate?,
        }
    };
    let ode_residual = ode_residual(&profile, params);
    Ok(GroundState {
        alpha,
        profile,
        bracket: (family.height(bracket.0), family.height(bracket.1)),
        decay_rate,
        ode_residual,
        restarts,
        plateau_gap,
    })
}

fn first_transition(scan: &[(f64, OrbitClass)]) -> Option<(f64, f64)> {
    scan.windows(2)
        .find(|w| w[0].1 == OrbitClass::Rebound && w[1].1 == OrbitClass::Crossing)
        .map(|w| (w[0].0, w[1].0))
}

/// Heights `b₂ − (b₂ − from)·2^{−k}` for `k = 1, 2, …` until they reach the
/// equilibrium band, classified in parallel.
fn approach_b2(
    params: &Params,
    controls: &Controls,
    from: f64,
    b2: f64,
) -> Result<Vec<(f64, OrbitClass)>, ShootingError> {
    let mut heights = Vec::new();
    let mut gap = 0.5 * (b2 - from);
    while gap > 4.0 * f64::EPSILON * b2 {
        heights.push(b2 - gap);
        gap *= 0.5;
    }
    let mut classes = heights
        .into_par_iter()
        .map(|alpha| classify_alpha(params, controls, alpha).map(|c| (alpha, c)))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(stop) = classes.iter().position(|c| c.1 == OrbitClass::Equilibrium) {
        classes.truncate(stop);
    }
    Ok(classes)
}

/// `s = ln(b₂ − α)` from just below the linearization range down to its
/// limit in unit steps, until the first crossing.
fn plateau_scan(params: &Params, controls: &Controls, pl: Plateau) -> Result<Option<(f64, f64)>, ShootingError> {
    const CHUNK: usize = 32;
    let family = Family::Plateau(pl);
    let grid: Vec<f64> = (1..)
        .map(|k| pl.s_max() - k as f64)
        .take_while(|&s| s >= pl.s_min())
        .collect();
    let mut prev: Option<(f64, OrbitClass)> = None;
    for chunk in grid.chunks(CHUNK) {
        let classes = chunk
            .par_iter()
            .map(|&s| family.classify(params, controls, s).map(|c| (s, c)))
            .collect::<Result<Vec<_>, _>>()?;
        let scan: Vec<_> = prev.into_iter().chain(classes).collect();
        if let Some(pair) = first_transition(&scan) {
            return Ok(Some(pair));
        }
        prev = scan.last().copied();
    }
    Ok(None)
}

/// A family and adjacent (rebound, crossing) parameters. Near `ω_{p,q}` the
/// ground state approaches `b₂` faster than any uniform grid can resolve, so
/// a scan that ends on the rebound side is continued geometrically towards
/// `b₂` and then in `ln(b₂ − α)` from the linearization at `b₂`.
fn scan_bracket(
    params: &Params,
    controls: &Controls,
    beta: f64,
    b2: f64,
) -> Result<(Family, (f64, f64)), ShootingError> {
    let mut points = controls.scan_points.max(2);
    loop {
        let mut scan = scan_alpha(params, points, controls)?;
        if let Some(pair) = first_transition(&scan) {
            return Ok((Family::Height, pair));
        }
        if let Some(&(last, OrbitClass::Rebound)) = scan.last() {
            scan = vec![(last, OrbitClass::Rebound)];
            scan.extend(approach_b2(params, controls, last, b2)?);
            let pair = first_transition(&scan);
            let plateau = Plateau::new(params, b2);
            // Heights within the linearization range are resolved better in
            // ln(b₂ − α).
            let inside = |pl: &Plateau, (rebound, _): (f64, f64)| (b2 - rebound).ln() < pl.s_max() - 1.0;
            match (pair, plateau) {
                (Some(pair), Some(pl)) if !inside(&pl, pair) => return Ok((Family::Height, pair)),
                (Some(pair), None) => return Ok((Family::Height, pair)),
                _ => {}
            }
            if let Some(pl) = plateau {
                if let Some(pl_pair) = plateau_scan(params, controls, pl)? {
                    return Ok((Family::Plateau(pl), pl_pair));
                }
            }
            if let Some(pair) = pair {
                return Ok((Family::Height, pair));
            }
        }
        if points >= controls.max_scan_points {
            return Err(ShootingError::BracketNotFound {
                scan_points: points,
                lo: beta,
                hi: b2,
            });
        }
        points = (points * 2).min(controls.max_scan_points);
    }
}

/// Exponential decay rate of the profile tail.
///
/// Fits `ln(r^{(n−1)/2}·u)` against `r` by least squares over the samples
/// with `u < 1e-3·α`. The factor `r^{(n−1)/2}` removes the algebraic
/// prefactor of the decaying solution of the linearized equation, whose
/// exponential rate is `√ω`.
pub fn decay_rate(profile: &Trajectory, params: &Params) -> Result<f64, ShootingError> {
    let alpha = profile.first().u;
    let half_damping = 0.5 * (f64::from(params.n()) - 1.0);
    let tail: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .filter(|s| s.r > 0.0 && s.u > 0.0 && s.u < TAIL_FRACTION * alpha)
        .map(|s| (s.r, s.u.ln() + half_damping * s.r.ln()))
        .collect();
    if tail.len() < MIN_TAIL_SAMPLES {
        return Err(ShootingError::InsufficientTail {
            samples: tail.len(),
            required: MIN_TAIL_SAMPLES,
        });
    }
    let m = tail.len() as f64;
    let mean_r = tail.iter().map(|t| t.0).sum::<f64>() / m;
    let mean_y = tail.iter().map(|t| t.1).sum::<f64>() / m;
    let sxy: f64 = tail.iter().map(|t| (t.0 - mean_r) * (t.1 - mean_y)).sum();
    let sxx: f64 = tail.iter().map(|t| (t.0 - mean_r).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Largest `|u_rr + (n−1)/r·u_r + f(u)|` over the profile, with `u_rr`
/// taken as the fourth-order central difference of the sampled `u_r` on runs
/// of five equally spaced samples.
pub fn ode_residual(profile: &Trajectory, params: &Params) -> f64 {
    let s = &profile.samples;
    let damping = f64::from(params.n()) - 1.0;
    let mut worst: f64 = 0.0;
    for i in 2..s.len().saturating_sub(2) {
        if s[i].r <= 0.0 || s[i].u <= 0.0 {
            continue;
        }
        let h = s[i + 1].r - s[i].r;
        let uniform = (i - 2..i + 2).all(|j| ((s[j + 1].r - s[j].r) - h).abs() <= 1e-9 * h);
        if !uniform {
            continue;
        }
        let dv = (s[i - 2].v - 8.0 * s[i - 1].v + 8.0 * s[i + 1].v - s[i + 2].v) / (12.0 * h);
        let residual = dv + damping / s[i].r * s[i].v + params.f_value(s[i].u);
        worst = worst.max(residual.abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega: f64, n: u32) -> Params {
        Params::new(omega, 2.0, 3.0, n).unwrap()
    }

    #[test]
    fn three_dimensional_ground_state() {
        let gs = find_ground_state(&params(0.1, 3), &Controls::default()).unwrap();
        assert!((gs.alpha - 0.446_320_984_870_157).abs() < 1e-7, "{}", gs.alpha);
        assert_eq!(gs.profile.orbit_class, OrbitClass::Decay);
        assert!((gs.decay_rate - 0.1f64.sqrt()).abs() < 0.05 * 0.1f64.sqrt(), "{}", gs.decay_rate);
        assert!(gs.ode_residual < 1e-6, "{}", gs.ode_residual);
        let last = gs.profile.last();
        assert!(last.u < 1e-8 * gs.alpha * 1.0001);
    }

    #[test]
    fn one_dimensional_height_is_beta() {
        let p = params(0.1, 1);
        let (beta, _) = shooting_interval(&p).unwrap();
        let gs = find_ground_state(&p, &Controls::default()).unwrap();
        assert_eq!(gs.alpha, beta);
        assert!((gs.bracket.0 - beta).abs() < 1e-9 * beta, "{:?}", gs.bracket);
    }

    #[test]
    fn no_existence_above_threshold() {
        let err = find_ground_state(&params(0.25, 3), &Controls::default()).unwrap_err();
        assert!(matches!(err, ShootingError::NoExistence { .. }));
    }

    #[test]
    fn single_transition_for_unique_case() {
        let n = count_ground_states(&params(0.1, 3), 64, &Controls::default()).unwrap();
        assert_eq!(n, 1);
        assert!(matches!(
            count_ground_states(&params(0.1, 1), 8, &Controls::default()),
            Err(ShootingError::InvalidDimension { .. })
        ));
    }
}
