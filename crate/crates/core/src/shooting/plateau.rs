//! Shots that leave the upper equilibrium `b₂` from its linearization.
//!
//! Close to `ω_{p,q}` the ground state stays near `b₂` up to a radius `R`
//! and then drops through a front. Its height satisfies
//! `b₂ − α* ~ e^{−κR}` with `κ² = −f′(b₂)`, far below the resolution of `α`
//! once `R` is a few dozen `1/κ`. Such shots are parametrized by
//! `s = ln(b₂ − α)` instead: with `w = b₂ − u` the linearized equation
//! `w″ + (n−1)/r·w′ = κ²w` has the regular solution `w = e^s·Λ(κr)`,
//! `Λ(x) = Γ(ν+1)(2/x)^ν I_ν(x)`, `ν = (n−2)/2`, and the shot starts where
//! `w` reaches [`START_DEVIATION`]`·b₂`.

use super::RadialState;
use crate::nonlinearity::Params;

/// `w/b₂` at the start radius. The neglected quadratic term is of relative
/// size `w·|f″(b₂)|/κ²`.
pub(crate) const START_DEVIATION: f64 = 1e-7;
/// Smallest admissible `s − ln(START_DEVIATION·b₂)`; keeps `Λ` finite.
pub(crate) const MIN_LOG_RATIO: f64 = -650.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Plateau {
    pub b2: f64,
    pub kappa: f64,
    nu: f64,
}

impl Plateau {
    pub fn new(params: &Params, b2: f64) -> Option<Self> {
        let k2 = -params.f_prime_value(b2);
        (k2 > 0.0).then(|| Self {
            b2,
            kappa: k2.sqrt(),
            nu: 0.5 * (f64::from(params.n()) - 2.0),
        })
    }

    /// `ln(START_DEVIATION·b₂)`: shots need `s` below this.
    pub fn s_max(&self) -> f64 {
        (START_DEVIATION * self.b2).ln()
    }

    pub fn s_min(&self) -> f64 {
        self.s_max() + MIN_LOG_RATIO
    }

    /// `(Λ(x), Λ′(x))` from the power series, whose terms are all positive.
    /// Overflows to infinity beyond `x ≈ 700`.
    fn lambda(&self, x: f64) -> (f64, f64) {
        let z = 0.25 * x * x;
        let (mut term, mut sum, mut dsum) = (1.0, 1.0, 0.0);
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= z / (k * (k + self.nu));
            sum += term;
            dsum += term * 2.0 * k;
            if !sum.is_finite() || (term < f64::EPSILON * sum && k > z.sqrt()) {
                break;
            }
        }
        (sum, if x > 0.0 { dsum / x } else { 0.0 })
    }

    /// `x` with `ln Λ(x) = target`, `target ≥ 0`.
    fn lambda_inverse(&self, target: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.lambda(hi).0.ln() < target {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.lambda(mid).0.ln() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Start state for parameter `s`.
    pub fn start(&self, s: f64) -> RadialState {
        let w0 = START_DEVIATION * self.b2;
        let x0 = self.lambda_inverse(self.s_max() - s);
        let (l, dl) = self.lambda(x0);
        RadialState::new(x0 / self.kappa, self.b2 - w0, -w0 * self.kappa * dl / l)
    }

    /// The linearized solution on the grid `k·dr` below the start radius.
    pub fn prefix(&self, s: f64, dr: f64) -> Vec<RadialState> {
        let r0 = self.start(s).r;
        let delta = s.exp();
        (0..)
            .map(|k| k as f64 * dr)
            .take_while(|&r| r < r0)
            .map(|r| {
                let (l, dl) = self.lambda(self.kappa * r);
                RadialState::new(r, self.b2 - delta * l, -delta * self.kappa * dl)
            })
            .collect()
    }

    /// `α = b₂ − e^s`, rounded.
    pub fn height(&self, s: f64) -> f64 {
        self.b2 - s.exp()
    }
}
