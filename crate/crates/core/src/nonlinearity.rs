//! The double-power nonlinearity `f(u) = −ωu + u^p − u^q` and its
//! closed-form critical frequencies.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::power_algebra::PowerSum;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("omega must be a positive finite number (got {0})")]
    OmegaNotPositive(f64),
    #[error("p must be a finite number greater than 1 (got {0})")]
    PNotAboveOne(f64),
    #[error("q must be greater than p (got p = {p}, q = {q})")]
    QNotAboveP { p: f64, q: f64 },
    #[error("dimension n must be at least 1 (got {0})")]
    DimensionZero(u32),
}

/// A validated problem instance: `ω > 0`, `q > p > 1`, `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    omega: f64,
    p: f64,
    q: f64,
    n: u32,
}

pub(crate) fn validate_exponents(p: f64, q: f64) -> Result<(), ParamError> {
    if !(p.is_finite() && p > 1.0) {
        return Err(ParamError::PNotAboveOne(p));
    }
    if !(q.is_finite() && q > p) {
        return Err(ParamError::QNotAboveP { p, q });
    }
    Ok(())
}

impl Params {
    pub fn new(omega: f64, p: f64, q: f64, n: u32) -> Result<Self, ParamError> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(ParamError::OmegaNotPositive(omega));
        }
        validate_exponents(p, q)?;
        if n == 0 {
            return Err(ParamError::DimensionZero(n));
        }
        Ok(Self { omega, p, q, n })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Same exponents and dimension, different frequency.
    pub fn with_omega(&self, omega: f64) -> Result<Self, ParamError> {
        Self::new(omega, self.p, self.q, self.n)
    }

    pub fn thresholds(&self) -> Thresholds {
        Thresholds::from_valid(self.p, self.q)
    }

    /// Whether both exponents are integers, so that `f` and `F` extend to
    /// `u < 0` by the same formula.
    pub fn integer_exponents(&self) -> bool {
        self.p.fract() == 0.0 && self.q.fract() == 0.0
    }

    /// `f(u)` for `u ≥ 0`.
    pub fn f_value(&self, u: f64) -> f64 {
        -self.omega * u + u.powf(self.p) - u.powf(self.q)
    }

    /// `F(u) = ∫₀ᵘ f` for `u ≥ 0`.
    pub fn potential_value(&self, u: f64) -> f64 {
        -0.5 * self.omega * u * u + u.powf(self.p + 1.0) / (self.p + 1.0)
            - u.powf(self.q + 1.0) / (self.q + 1.0)
    }

    /// `f′(u)` for `u > 0`.
    pub fn f_prime_value(&self, u: f64) -> f64 {
        -self.omega + self.p * u.powf(self.p - 1.0) - self.q * u.powf(self.q - 1.0)
    }

    pub fn f(&self) -> PowerSum {
        PowerSum::new([(-self.omega, 1.0), (1.0, self.p), (-1.0, self.q)])
    }

    /// `F`, the primitive of `f` vanishing at 0.
    pub fn potential(&self) -> PowerSum {
        self.f()
            .antiderivative()
            .expect("exponents of f are all positive")
    }

    pub fn f_prime(&self) -> PowerSum {
        self.f().differentiate()
    }

    /// `f̃ = (u f′)′ f − u f′²`.
    pub fn f_tilde(&self) -> PowerSum {
        self.f_prime()
            .tilde()
            .expect("exponents of f' exceed -1")
    }

    /// `F̃ = (u f)′ F − u f²`.
    pub fn potential_tilde(&self) -> PowerSum {
        self.f().tilde().expect("exponents of f are all positive")
    }

    pub fn positive_zeros_f(&self) -> PositiveZeros {
        let th = self.thresholds();
        let (omega, p, q) = (self.omega, self.p, self.q);
        let reduced = move |u: f64| -omega + u.powf(p - 1.0) - u.powf(q - 1.0);
        let scale = move |u: f64| omega + u.powf(p - 1.0) + u.powf(q - 1.0);
        unimodal_zeros(reduced, scale, th.u_star_f)
    }

    pub fn positive_zeros_potential(&self) -> PositiveZeros {
        let th = self.thresholds();
        let (omega, p, q) = (self.omega, self.p, self.q);
        let reduced =
            move |u: f64| -0.5 * omega + u.powf(p - 1.0) / (p + 1.0) - u.powf(q - 1.0) / (q + 1.0);
        let scale =
            move |u: f64| 0.5 * omega + u.powf(p - 1.0) / (p + 1.0) + u.powf(q - 1.0) / (q + 1.0);
        unimodal_zeros(reduced, scale, th.u_star_potential)
    }
}

/// Critical frequencies and the interior maximizers realizing them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `ω_{p,q}`: a ground state exists iff `ω < omega_crit`.
    pub omega_crit: f64,
    /// `η_{p,q}`: `f` is positive somewhere iff `ω < eta_crit`.
    pub eta_crit: f64,
    /// Maximizer of `2u^{p−1}/(p+1) − 2u^{q−1}/(q+1)`.
    pub u_star_potential: f64,
    /// Maximizer of `u^{p−1} − u^{q−1}`.
    pub u_star_f: f64,
}

impl Thresholds {
    pub fn new(p: f64, q: f64) -> Result<Self, ParamError> {
        validate_exponents(p, q)?;
        Ok(Self::from_valid(p, q))
    }

    fn from_valid(p: f64, q: f64) -> Self {
        let ratio_potential = (p - 1.0) * (q + 1.0) / ((p + 1.0) * (q - 1.0));
        let ratio_f = (p - 1.0) / (q - 1.0);
        let power = (p - 1.0) / (q - p);
        Self {
            omega_crit: 2.0 * (q - p) / ((p + 1.0) * (q - 1.0)) * ratio_potential.powf(power),
            eta_crit: (q - p) / (q - 1.0) * ratio_f.powf(power),
            u_star_potential: ratio_potential.powf(1.0 / (q - p)),
            u_star_f: ratio_f.powf(1.0 / (q - p)),
        }
    }
}

/// Positive zeros in ascending order. `tangent` marks the boundary case
/// where the function touches zero at a single double root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositiveZeros {
    pub roots: Vec<f64>,
    pub tangent: bool,
}

const ROOT_REL_WIDTH: f64 = 1e-12;
const TANGENT_SLOPE: f64 = 1e-8;

/// Zeros of a function that increases then decreases in `log u`, with its
/// maximum at `peak`. `scale` gives the magnitude of the summands at `u`
/// for rounding-aware comparisons.
fn unimodal_zeros<G, S>(g: G, scale: S, peak: f64) -> PositiveZeros
where
    G: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    let top = g(peak);
    let rounding = 8.0 * f64::EPSILON * scale(peak);
    if top < -rounding {
        return PositiveZeros {
            roots: Vec::new(),
            tangent: false,
        };
    }
    if top <= rounding {
        return PositiveZeros {
            roots: vec![peak],
            tangent: true,
        };
    }

    let lower_end = expand_until_negative(&g, peak, 1e-6);
    let upper_end = expand_until_negative(&g, peak, 1e6);
    let lower = lower_end.map(|lo| log_bisect(&g, lo, peak));
    let upper = upper_end.map(|hi| log_bisect(&g, peak, hi));

    let slope_small = |z: f64| {
        let h = 1e-6 * z;
        let dg = (g(z + h) - g(z - h)) / (2.0 * h);
        (z * dg).abs() < TANGENT_SLOPE * scale(z)
    };
    let roots: Vec<f64> = lower.into_iter().chain(upper).collect();
    let tangent = roots.iter().any(|&z| slope_small(z));
    PositiveZeros { roots, tangent }
}

fn expand_until_negative<G: Fn(f64) -> f64>(g: &G, from: f64, factor: f64) -> Option<f64> {
    let mut u = from;
    for _ in 0..60 {
        u *= factor;
        if !(u.is_finite() && u > 0.0) {
            return None;
        }
        if g(u) < 0.0 {
            return Some(u);
        }
    }
    None
}

/// Bisection in `log u` between points of opposite sign.
fn log_bisect<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64) -> f64 {
    let ga_positive = g(a) > 0.0;
    let geometric_mean = |a: f64, b: f64| (0.5 * (a.ln() + b.ln())).exp();
    while b / a - 1.0 > ROOT_REL_WIDTH {
        let mid = geometric_mean(a, b);
        if mid <= a || mid >= b {
            break;
        }
        if (g(mid) > 0.0) == ga_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    geometric_mean(a, b)
}
