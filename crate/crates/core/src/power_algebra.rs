//! Finite sums of power terms `Σ cᵢ·u^{eᵢ}` with real exponents.
//!
//! A [`PowerSum`] is kept in normal form: exponents strictly ascending,
//! like exponents merged, vanishing coefficients dropped. All functions of
//! the double-power family (the nonlinearity, its primitive, derivative and
//! the two tilde expressions) are exact members of this class, so the
//! algebra below never approximates anything except through floating-point
//! rounding of the coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Two exponents are merged when `|e₁ − e₂| ≤ EXPONENT_MERGE_TOL·max(1, |e₁|)`.
pub const EXPONENT_MERGE_TOL: f64 = 1e-12;

/// A merged coefficient is dropped when it is this small relative to the sum
/// of the magnitudes that produced it. Products such as `(p+1)·(1/(p+1)) − 1`
/// otherwise leave rounding debris that changes the asymptotic sign.
const CANCELLATION_TOL: f64 = 64.0 * f64::EPSILON;

/// Number of log-spaced samples used by the general sign scan.
pub const SIGN_GRID_POINTS: usize = 4096;
/// Lower end of the sign-scan window.
pub const SIGN_GRID_LO: f64 = 1e-8;
/// Upper end of the sign-scan window.
pub const SIGN_GRID_HI: f64 = 1e8;
/// A supremum smaller than `SIGN_TOL·Σ|cᵢ|u^{dᵢ}`, the term magnitudes of the
/// reduced sum at the maximizer, is reported as
/// [`AlgebraError::IndeterminateSign`].
pub const SIGN_TOL: f64 = 1e-11;

const GOLDEN_WIDTH: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("power sums are evaluated on u > 0 only (got u = {0})")]
    Domain(f64),
    #[error("term with exponent {0} has no power-law antiderivative")]
    ExponentMinusOne(f64),
    #[error("sign is indeterminate: supremum {sup:e} is within {tolerance:e} of zero")]
    IndeterminateSign {
        sup: f64,
        sup_arg: Option<f64>,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTerm {
    pub coeff: f64,
    pub exponent: f64,
}

impl PowerTerm {
    pub fn new(coeff: f64, exponent: f64) -> Self {
        Self { coeff, exponent }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PowerSum {
    terms: Vec<PowerTerm>,
}

fn same_exponent(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXPONENT_MERGE_TOL * a.abs().max(1.0)
}

impl PowerSum {
    /// Builds a normalized sum from `(coeff, exponent)` pairs.
    pub fn new<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::from_terms(terms.into_iter().map(|(c, e)| PowerTerm::new(c, e)))
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = PowerTerm>,
    {
        let mut raw: Vec<PowerTerm> = terms.into_iter().filter(|t| t.coeff != 0.0).collect();
        raw.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));

        let mut out: Vec<PowerTerm> = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            let exponent = raw[i].exponent;
            let mut coeff = 0.0;
            let mut magnitude = 0.0;
            while i < raw.len() && same_exponent(exponent, raw[i].exponent) {
                coeff += raw[i].coeff;
                magnitude += raw[i].coeff.abs();
                i += 1;
            }
            if coeff != 0.0 && coeff.abs() > CANCELLATION_TOL * magnitude {
                out.push(PowerTerm { coeff, exponent });
            }
        }
        Self { terms: out }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self::new([(coeff, exponent)])
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `u^exponent` (0 when absent).
    pub fn coeff_of(&self, exponent: f64) -> f64 {
        self.terms
            .iter()
            .find(|t| same_exponent(t.exponent, exponent))
            .map_or(0.0, |t| t.coeff)
    }

    /// Evaluates the sum at `u > 0`.
    pub fn eval(&self, u: f64) -> Result<f64, AlgebraError> {
        if u.is_nan() || u <= 0.0 {
            return Err(AlgebraError::Domain(u));
        }
        Ok(self.value(u))
    }

    /// Unchecked evaluation. Callers guarantee `u > 0`, or `u ≤ 0` with
    /// integer exponents.
    pub fn value(&self, u: f64) -> f64 {
        self.terms.iter().map(|t| t.coeff * u.powf(t.exponent)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| PowerTerm::new(t.coeff * c, t.exponent)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn multiply(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|a| {
            other
                .terms
                .iter()
                .map(move |b| PowerTerm::new(a.coeff * b.coeff, a.exponent + b.exponent))
        }))
    }

    pub fn differentiate(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| PowerTerm::new(t.coeff * t.exponent, t.exponent - 1.0)),
        )
    }

    /// Term-wise antiderivative with zero integration constant, i.e. the
    /// definite integral from 0 whenever every exponent exceeds −1.
    pub fn antiderivative(&self) -> Result<Self, AlgebraError> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let e1 = t.exponent + 1.0;
            if same_exponent(t.exponent, -1.0) {
                return Err(AlgebraError::ExponentMinusOne(t.exponent));
            }
            out.push(PowerTerm::new(t.coeff / e1, e1));
        }
        Ok(Self::from_terms(out))
    }

    /// `(u·h)′·H − u·h²` where `h = self` and `H` is its antiderivative.
    ///
    /// With `h = f` this is `F̃`; with `h = f′` (and `f(0) = 0`, so the
    /// antiderivative of `f′` is `f` itself) it is `f̃`.
    ///
    /// Expanded over pairs of terms `cᵢu^{aᵢ}`, `cⱼu^{aⱼ}`: the diagonal
    /// vanishes and each unordered pair contributes
    /// `cᵢcⱼ(aᵢ − aⱼ)²/((aᵢ+1)(aⱼ+1))·u^{aᵢ+aⱼ+1}`. Composing the products
    /// instead would cancel terms of size `aᵢ² + aⱼ²` down to `(aᵢ − aⱼ)²`.
    pub fn tilde(&self) -> Result<Self, AlgebraError> {
        if let Some(t) = self.terms.iter().find(|t| same_exponent(t.exponent, -1.0)) {
            return Err(AlgebraError::ExponentMinusOne(t.exponent));
        }
        let t = &self.terms;
        let pairs = (0..t.len()).flat_map(|i| (i + 1..t.len()).map(move |j| (i, j)));
        Ok(Self::from_terms(pairs.map(|(i, j)| {
            let (a, b) = (t[i].exponent, t[j].exponent);
            let coeff = t[i].coeff * t[j].coeff * (a - b).powi(2) / ((a + 1.0) * (b + 1.0));
            PowerTerm::new(coeff, a + b + 1.0)
        })))
    }

    /// Decides the sign of the sum on `(0, ∞)`.
    ///
    /// The sum is divided by `u^{e_min}`; the reduced sum `g` has a constant
    /// term and positive exponents, so its limit at `0⁺` is that constant and
    /// its behaviour at infinity is fixed by the leading term. Interior
    /// maxima are found in closed form when `g` has at most two non-constant
    /// terms (one critical point at most), otherwise by a log-spaced scan
    /// refined with golden-section search. `sup_value` and `sup_arg` refer to
    /// `g`, which has the same sign as the sum everywhere.
    pub fn analyze_sign(&self) -> Result<SignVerdict, AlgebraError> {
        if self.is_zero() {
            return Ok(SignVerdict {
                verdict: Sign::ZeroEverywhere,
                witness: None,
                sup_value: 0.0,
                sup_arg: None,
            });
        }
        let reduced = Reduced::new(self);
        let leading = reduced.terms.last().map_or(0.0, |t| t.0);

        // Candidates: limit at 0⁺, interior maxima, limit at ∞. The
        // tolerance scales with the size of the terms where the supremum is
        // attained; the limit at 0⁺ is a single coefficient and exact.
        let mut sup = reduced.terms[0].0;
        let mut ln_magnitude = sup.abs().ln();
        let mut sup_arg = None;
        for m in reduced.interior_maxima() {
            if m.value > sup {
                sup = m.value;
                ln_magnitude = m.ln_magnitude;
                sup_arg = (m.u.is_finite() && m.u > 0.0).then_some(m.u);
            }
        }
        if leading > 0.0 && reduced.terms.len() > 1 {
            sup = f64::INFINITY;
        }

        if sup.is_finite() && sup.abs().ln() < SIGN_TOL.ln() + ln_magnitude {
            return Err(AlgebraError::IndeterminateSign {
                sup,
                sup_arg,
                tolerance: SIGN_TOL * ln_magnitude.exp(),
            });
        }
        if sup < 0.0 {
            return Ok(SignVerdict {
                verdict: Sign::NegativeEverywhere,
                witness: None,
                sup_value: sup,
                sup_arg,
            });
        }

        let witness = [
            sup_arg,
            reduced.positive_near_zero(),
            reduced.positive_near_infinity(),
        ]
        .into_iter()
        .flatten()
        .find(|&u| self.value(u) > 0.0);
        Ok(SignVerdict {
            verdict: Sign::PositiveSomewhere,
            witness,
            sup_value: sup,
            sup_arg,
        })
    }
}

struct LocalMax {
    u: f64,
    value: f64,
    /// `ln Σ|cᵢ|·u^{dᵢ}`; the rounding scale of `value` is its exponential.
    ln_magnitude: f64,
}

/// `u^{-e_min}·ps` as `(coeff, shifted exponent)` pairs; the first pair has
/// exponent 0.
struct Reduced {
    terms: Vec<(f64, f64)>,
}

impl Reduced {
    fn new(ps: &PowerSum) -> Self {
        let e_min = ps.terms[0].exponent;
        let terms = ps
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.coeff, if i == 0 { 0.0 } else { t.exponent - e_min }))
            .collect();
        Self { terms }
    }

    /// `ln Σ|cᵢ|·u^{dᵢ}` at `u = e^{ln_u}`, safe against overflow.
    fn ln_magnitude(&self, ln_u: f64) -> f64 {
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|&(c, d)| c.abs().ln() + d * ln_u)
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
    }

    fn value(&self, u: f64) -> f64 {
        self.terms.iter().map(|&(c, d)| c * u.powf(d)).sum()
    }

    fn interior_maxima(&self) -> Vec<LocalMax> {
        match self.terms.len() {
            0..=2 => Vec::new(),
            3 => {
                // g′ = u^{d₁−1}(c₁d₁ + c₂d₂u^{d₂−d₁}); a maximum needs c₁ > 0 > c₂.
                let (c1, d1) = self.terms[1];
                let (c2, d2) = self.terms[2];
                // Worked in ln u: when d₂ − d₁ is tiny the maximizer can lie
                // far outside the f64 range, where g = c₀ + c₁(1 − d₁/d₂)u^{d₁}.
                if c1 > 0.0 && c2 < 0.0 {
                    let ln_u = (-(c1 * d1) / (c2 * d2)).ln() / (d2 - d1);
                    let value = self.terms[0].0 + c1 * (1.0 - d1 / d2) * (d1 * ln_u).exp();
                    if !value.is_nan() {
                        return vec![LocalMax {
                            u: ln_u.exp(),
                            value,
                            ln_magnitude: self.ln_magnitude(ln_u),
                        }];
                    }
                }
                Vec::new()
            }
            _ => self.scan_maxima(),
        }
    }

    fn scan_maxima(&self) -> Vec<LocalMax> {
        let (t_lo, t_hi) = (SIGN_GRID_LO.ln(), SIGN_GRID_HI.ln());
        let dt = (t_hi - t_lo) / (SIGN_GRID_POINTS - 1) as f64;
        let ts: Vec<f64> = (0..SIGN_GRID_POINTS).map(|i| t_lo + dt * i as f64).collect();
        let gs: Vec<f64> = ts.iter().map(|t| self.value(t.exp())).collect();

        let mut maxima = Vec::new();
        for i in 1..SIGN_GRID_POINTS - 1 {
            if gs[i] >= gs[i - 1] && gs[i] > gs[i + 1] {
                let t = golden_max(|t| self.value(t.exp()), ts[i - 1], ts[i + 1]);
                let u = t.exp();
                maxima.push(LocalMax {
                    u,
                    value: self.value(u),
                    ln_magnitude: self.ln_magnitude(t),
                });
            }
        }
        maxima
    }

    fn positive_near_zero(&self) -> Option<f64> {
        let mut u = 1.0;
        while u > 1e-300 {
            if self.value(u) > 0.0 {
                return Some(u);
            }
            u *= 1e-2;
        }
        None
    }

    fn positive_near_infinity(&self) -> Option<f64> {
        let mut u = 1.0;
        while u < 1e300 {
            if self.value(u) > 0.0 {
                return Some(u);
            }
            u *= 1e2;
        }
        None
    }
}

/// Golden-section search for a maximum of `g` on `[a, b]`.
fn golden_max<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while (b - a) > GOLDEN_WIDTH {
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1);
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    NegativeEverywhere,
    PositiveSomewhere,
    ZeroEverywhere,
}

/// Outcome of [`PowerSum::analyze_sign`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignVerdict {
    pub verdict: Sign,
    /// A `u > 0` where the sum is strictly positive.
    pub witness: Option<f64>,
    /// Supremum of the reduced sum `u^{-e_min}·ps` over `(0, ∞)`; may be `+∞`.
    pub sup_value: f64,
    /// Interior point attaining `sup_value`, `None` when it is a limit.
    pub sup_arg: Option<f64>,
}

impl Add for &PowerSum {
    type Output = PowerSum;
    fn add(self, rhs: Self) -> PowerSum {
        PowerSum::add(self, rhs)
    }
}

impl Sub for &PowerSum {
    type Output = PowerSum;
    fn sub(self, rhs: Self) -> PowerSum {
        PowerSum::add(self, &rhs.scale(-1.0))
    }
}

impl Mul for &PowerSum {
    type Output = PowerSum;
    fn mul(self, rhs: Self) -> PowerSum {
        self.multiply(rhs)
    }
}

impl Neg for &PowerSum {
    type Output = PowerSum;
    fn neg(self) -> PowerSum {
        self.scale(-1.0)
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0.0 { "-" } else { "+" };
            if i == 0 {
                if t.coeff < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}*u^{}", t.coeff.abs(), t.exponent)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f_of(omega: f64, p: f64, q: f64) -> PowerSum {
        PowerSum::new([(-omega, 1.0), (1.0, p), (-1.0, q)])
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn normalization_cancels_merges_and_sorts() {
        assert!(PowerSum::new([(1.0, 2.0), (-1.0, 2.0)]).is_zero());
        assert!(PowerSum::new(Vec::<(f64, f64)>::new()).is_zero());

        let f = PowerSum::new([(-0.1, 1.0), (1.0, 2.0), (-1.0, 3.0)]);
        let exps: Vec<f64> = f.terms().iter().map(|t| t.exponent).collect();
        assert_eq!(exps, vec![1.0, 2.0, 3.0]);

        let merged = PowerSum::new([(1.0, 3.0), (2.0, 1.0), (0.5, 3.0)]);
        assert_eq!(
            merged.terms(),
            &[PowerTerm::new(2.0, 1.0), PowerTerm::new(1.5, 3.0)]
        );
    }

    #[test]
    fn exponents_within_merge_tolerance_collapse() {
        let ps = PowerSum::new([(1.0, 2.0), (1.0, 2.0 + 1e-13)]);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps.coeff_of(2.0), 2.0);
        let apart = PowerSum::new([(1.0, 2.0), (1.0, 2.0 + 1e-9)]);
        assert_eq!(apart.len(), 2);
    }

    #[test]
    fn evaluation() {
        let f = f_of(0.1, 2.0, 3.0);
        assert!(close(f.eval(1.0).unwrap(), -0.1, 1e-15));
        assert!(close(f.eval(0.5).unwrap(), 0.075, 1e-15));
        assert_eq!(PowerSum::zero().eval(3.7).unwrap(), 0.0);
        assert_eq!(f.eval(0.0), Err(AlgebraError::Domain(0.0)));
        assert!(f.eval(-1.0).is_err());
        assert!(f.eval(f64::NAN).is_err());
    }

    #[test]
    fn ring_operations() {
        let f = f_of(0.1, 2.0, 3.0);
        assert!((&f + &-&f).is_zero());
        assert!((&f - &f).is_zero());

        let p = 2.7;
        let prod = PowerSum::monomial(1.0, 1.0).multiply(&PowerSum::monomial(1.0, p - 1.0));
        assert_eq!(prod.len(), 1);
        assert!(close(prod.terms()[0].exponent, p, 1e-15));
        assert_eq!(prod.terms()[0].coeff, 1.0);

        assert!(close((&f * &f).eval(1.0).unwrap(), 0.01, 1e-14));
    }

    #[test]
    fn derivative_and_antiderivative() {
        let omega = 0.1;
        let f = f_of(omega, 2.0, 3.0);
        let df = f.differentiate();
        assert_eq!(
            df.terms(),
            &[
                PowerTerm::new(-omega, 0.0),
                PowerTerm::new(2.0, 1.0),
                PowerTerm::new(-3.0, 2.0)
            ]
        );
        assert!(PowerSum::zero().differentiate().is_zero());
        assert!(PowerSum::monomial(4.0, 0.0).differentiate().is_zero());

        let big_f = f.antiderivative().unwrap();
        assert!(close(big_f.coeff_of(2.0), -0.05, 1e-15));
        assert!(close(big_f.coeff_of(3.0), 1.0 / 3.0, 1e-15));
        assert!(close(big_f.coeff_of(4.0), -0.25, 1e-15));
        assert_eq!(big_f.differentiate(), f);
        assert!(PowerSum::zero().antiderivative().unwrap().is_zero());

        let bad = PowerSum::new([(1.0, -1.0), (1.0, 2.0)]);
        assert!(matches!(
            bad.antiderivative(),
            Err(AlgebraError::ExponentMinusOne(_))
        ));
    }

    #[test]
    fn tilde_values_at_one() {
        let f = f_of(0.1, 2.0, 3.0);
        let f_tilde = f.differentiate().tilde().unwrap();
        assert!(close(f_tilde.eval(1.0).unwrap(), -0.7, 1e-13));
        let big_f_tilde = f.tilde().unwrap();
        assert!(close(big_f_tilde.eval(1.0).unwrap(), -0.05, 1e-13));
        assert!(PowerSum::zero().tilde().unwrap().is_zero());
    }

    #[test]
    fn tilde_matches_composition() {
        let h = PowerSum::new([(0.7, -0.4), (-1.3, 0.5), (2.1, 1.25), (-0.6, 3.0)]);
        let primitive = h.antiderivative().unwrap();
        let uh = h.multiply(&PowerSum::monomial(1.0, 1.0));
        let composed = &uh.differentiate().multiply(&primitive) - &uh.multiply(&h);
        let tilde = h.tilde().unwrap();
        for u in [0.2, 1.0, 3.5] {
            let (a, b) = (tilde.eval(u).unwrap(), composed.eval(u).unwrap());
            assert!(close(a, b, 1e-12), "{a} vs {b}");
        }
        assert!(matches!(
            PowerSum::new([(1.0, -1.0)]).tilde(),
            Err(AlgebraError::ExponentMinusOne(_))
        ));
    }

    #[test]
    fn tilde_of_f_reduces_to_three_terms() {
        // One term per pair: u^{p+2}, u^{q+2}, u^{p+q+1}.
        let (omega, p, q) = (0.37, 1.7, 4.3);
        let big_f_tilde = f_of(omega, p, q).tilde().unwrap();
        let exps: Vec<f64> = big_f_tilde.terms().iter().map(|t| t.exponent).collect();
        assert_eq!(exps.len(), 3, "{big_f_tilde}");
        assert!(close(exps[0], p + 2.0, 1e-14));
        assert!(close(exps[1], q + 2.0, 1e-14));
        assert!(close(exps[2], p + q + 1.0, 1e-14));
    }

    #[test]
    fn sign_of_f() {
        let v = f_of(0.1, 2.0, 3.0).analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::PositiveSomewhere);
        let w = v.witness.unwrap();
        assert!(f_of(0.1, 2.0, 3.0).eval(w).unwrap() > 0.0);
        // reduced sum −0.1 + u − u² peaks at u = 1/2.
        assert!(close(v.sup_arg.unwrap(), 0.5, 1e-12));
        assert!(close(v.sup_value, 0.15, 1e-12));

        let v = f_of(0.3, 2.0, 3.0).analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::NegativeEverywhere);
        assert!(close(v.sup_value, 0.25 - 0.3, 1e-12));
        assert!(v.witness.is_none());

        let v = PowerSum::zero().analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::ZeroEverywhere);
    }

    #[test]
    fn maximizer_beyond_f64_range() {
        // −10⁻⁶ + 2u^{0.5} − u^{0.5001}: the maximum sits near u = e^{13863}
        // but the sum is already positive at u = 1.
        let ps = PowerSum::new([(-1e-6, 1.0), (2.0, 1.5), (-1.0, 1.5001)]);
        let v = ps.analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::PositiveSomewhere);
        assert!(v.sup_arg.is_none());
        assert!(ps.value(v.witness.unwrap()) > 0.0);
        // Same shape with a dominant negative constant stays negative on
        // every representable u, but not on (0, ∞).
        let ps = PowerSum::new([(-1e300, 1.0), (2.0, 1.5), (-1.0, 1.5001)]);
        assert_eq!(ps.analyze_sign().unwrap().verdict, Sign::PositiveSomewhere);
    }

    #[test]
    fn sign_two_term_cases() {
        // −1 + u²: positive beyond u = 1
        let v = PowerSum::new([(-1.0, 1.0), (1.0, 3.0)]).analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::PositiveSomewhere);
        assert!(v.sup_value.is_infinite());
        assert!(v.witness.unwrap() > 1.0);
        // 1 − u: positive near 0
        let v = PowerSum::new([(1.0, 0.5), (-1.0, 1.5)]).analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::PositiveSomewhere);
        assert!(v.witness.unwrap() < 1.0);
        // −u − u²
        let v = PowerSum::new([(-1.0, 1.0), (-1.0, 2.0)]).analyze_sign().unwrap();
        assert_eq!(v.verdict, Sign::NegativeEverywhere);
        assert_eq!(v.sup_value, -1.0);
        // single terms
        assert_eq!(
            PowerSum::monomial(-2.0, 1.5).analyze_sign().unwrap().verdict,
            Sign::NegativeEverywhere
        );
        assert_eq!(
            PowerSum::monomial(2.0, 1.5).analyze_sign().unwrap().verdict,
            Sign::PositiveSomewhere
        );
    }

    #[test]
    fn tangent_case_is_indeterminate() {
        // −1/4 + u − u² touches zero at u = 1/2.
        let ps = PowerSum::new([(-0.25, 1.0), (1.0, 2.0), (-1.0, 3.0)]);
        match ps.analyze_sign() {
            Err(AlgebraError::IndeterminateSign { sup_arg, .. }) => {
                assert!(close(sup_arg.unwrap(), 0.5, 1e-9))
            }
            other => panic!("expected indeterminate, got {other:?}"),
        }
    }

    #[test]
    fn scan_path_finds_interior_maximum() {
        // −1 + 3u − 3u² + u³ − 0.1u⁴·... : four-term sum forcing the grid scan.
        let ps = PowerSum::new([(-1.0, 1.0), (3.0, 2.0), (-3.5, 3.0), (0.4, 4.0), (-0.05, 5.0)]);
        let v = ps.analyze_sign().unwrap();
        let brute = (0..200_000)
            .map(|i| 1e-3 * 10f64.powf(i as f64 * 5.0 / 200_000.0))
            .map(|u| ps.value(u) / u)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(close(v.sup_value, brute, 1e-8), "{} vs {}", v.sup_value, brute);
    }

    #[test]
    fn display() {
        let f = f_of(0.1, 2.0, 3.0);
        assert_eq!(f.to_string(), "-0.1*u^1 + 1*u^2 - 1*u^3");
        assert_eq!(PowerSum::zero().to_string(), "0");
    }
}
