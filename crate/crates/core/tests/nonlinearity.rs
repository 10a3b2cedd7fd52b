use doublepower::{ParamError, Params, Thresholds};
use proptest::prelude::*;

/// Golden-section maximum of `h` on `[a, b]` in `ln u`.
fn maximize(h: impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (a.ln(), b.ln());
    while hi - lo > 1e-13 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if h(x1.exp()) < h(x2.exp()) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let u = (0.5 * (lo + hi)).exp();
    (u, h(u))
}

fn exponents() -> impl Strategy<Value = (f64, f64)> {
    (1.05f64..6.0, 0.05f64..5.0).prop_map(|(p, d)| (p, p + d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn thresholds_are_maxima((p, q) in exponents()) {
        let th = Thresholds::new(p, q).unwrap();
        let h_f = |u: f64| 2.0 * u.powf(p - 1.0) / (p + 1.0) - 2.0 * u.powf(q - 1.0) / (q + 1.0);
        let h_eta = |u: f64| u.powf(p - 1.0) - u.powf(q - 1.0);
        let (u1, m1) = maximize(h_f, 1e-12, 1.0);
        let (u2, m2) = maximize(h_eta, 1e-12, 1.0);
        prop_assert!((m1 - th.omega_crit).abs() <= 1e-8 * th.omega_crit);
        prop_assert!((m2 - th.eta_crit).abs() <= 1e-8 * th.eta_crit);
        prop_assert!((h_f(th.u_star_potential) - th.omega_crit).abs() <= 1e-12 * th.omega_crit);
        prop_assert!((h_eta(th.u_star_f) - th.eta_crit).abs() <= 1e-12 * th.eta_crit);
        // Maximizers: the analytic ones sit at the numeric ones.
        prop_assert!((u1 - th.u_star_potential).abs() <= 1e-4 * th.u_star_potential);
        prop_assert!((u2 - th.u_star_f).abs() <= 1e-4 * th.u_star_f);
        prop_assert!(th.omega_crit < th.eta_crit);
        prop_assert!(th.u_star_f < th.u_star_potential && th.u_star_potential < 1.0);
    }

    #[test]
    fn potential_is_primitive_of_f(omega in 0.01f64..2.0, (p, q) in exponents(), u in 0.05f64..3.0) {
        let params = Params::new(omega, p, q, 2).unwrap();
        let h = 1e-6 * u;
        let fd = (params.potential_value(u + h) - params.potential_value(u - h)) / (2.0 * h);
        let scale = omega * u + u.powf(p) + u.powf(q);
        prop_assert!((fd - params.f_value(u)).abs() <= 1e-7 * scale);
        prop_assert!((params.f().value(u) - params.f_value(u)).abs() <= 1e-13 * scale);
    }

    #[test]
    fn zero_counts_switch_at_thresholds((p, q) in exponents(), factor in 0.2f64..0.98) {
        let th = Thresholds::new(p, q).unwrap();
        let below = Params::new(factor * th.omega_crit, p, q, 1).unwrap();
        let above = Params::new(th.omega_crit / factor, p, q, 1).unwrap();
        prop_assert_eq!(below.positive_zeros_potential().roots.len(), 2);
        prop_assert_eq!(above.positive_zeros_potential().roots.len(), 0);
        let below = Params::new(factor * th.eta_crit, p, q, 1).unwrap();
        let above = Params::new(th.eta_crit / factor, p, q, 1).unwrap();
        let zeros = below.positive_zeros_f();
        prop_assert_eq!(zeros.roots.len(), 2);
        for r in zeros.roots {
            prop_assert!(below.f_value(r).abs() <= 1e-9 * (below.omega() * r));
        }
        prop_assert_eq!(above.positive_zeros_f().roots.len(), 0);
    }
}

#[test]
fn reference_values_for_two_three() {
    let th = Thresholds::new(2.0, 3.0).unwrap();
    assert!((th.omega_crit - 2.0 / 9.0).abs() < 1e-15);
    assert!((th.eta_crit - 0.25).abs() < 1e-15);
    let params = Params::new(0.1, 2.0, 3.0, 3).unwrap();
    // F(1) = −0.05 + 1/3 − 1/4.
    assert!((params.potential_value(1.0) - (1.0 / 3.0 - 0.25 - 0.05)).abs() < 1e-15);
    // Zeros of f: roots of u² − u + 0.1.
    let zf = params.positive_zeros_f().roots;
    let disc = (1.0f64 - 0.4).sqrt();
    assert!((zf[0] - 0.5 * (1.0 - disc)).abs() < 1e-12);
    assert!((zf[1] - 0.5 * (1.0 + disc)).abs() < 1e-12);
    // Zeros of F/u²: roots of u²/4 − u/3 + 0.05.
    let zp = params.positive_zeros_potential().roots;
    let disc = (1.0f64 / 9.0 - 0.05).sqrt();
    assert!((zp[0] - 2.0 * (1.0 / 3.0 - disc)).abs() < 1e-12);
    assert!((zp[1] - 2.0 * (1.0 / 3.0 + disc)).abs() < 1e-12);
}

#[test]
fn validation_names_the_constraint() {
    assert!(matches!(Params::new(0.0, 2.0, 3.0, 1), Err(ParamError::OmegaNotPositive(_))));
    assert!(matches!(Params::new(0.1, 1.0, 3.0, 1), Err(ParamError::PNotAboveOne(_))));
    assert!(matches!(Params::new(0.1, 3.0, 2.0, 1), Err(ParamError::QNotAboveP { .. })));
    assert!(matches!(Params::new(0.1, 2.0, 3.0, 0), Err(ParamError::DimensionZero(_))));
}
