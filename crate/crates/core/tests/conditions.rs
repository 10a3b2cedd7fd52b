use doublepower::conditions::{self, Range, Resolution, SampleConfig};
use doublepower::{
    check_existence, check_potential_tilde, check_uniqueness, verify_corollary, ConditionError,
    Method, Params, PhaseTable, Thresholds,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_exponents(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let p: f64 = rng.gen_range(1.0..=6.0);
        let q: f64 = rng.gen_range(1.0..=6.0);
        if p > 1.0 && q > p {
            return (p, q);
        }
    }
}

fn in_band(omega: f64, threshold: f64) -> bool {
    (omega - threshold).abs() < conditions::EQUIVALENCE_BAND * threshold
}

#[test]
fn existence_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..1000 {
        let (p, q) = random_exponents(&mut rng);
        let th = Thresholds::new(p, q).unwrap();
        for factor in [0.5, 0.99, 1.01, 2.0] {
            let omega = factor * th.omega_crit;
            if in_band(omega, th.omega_crit) {
                continue;
            }
            let params = Params::new(omega, p, q, 1).unwrap();
            let analytic = check_existence(&params, Method::Analytic).unwrap();
            let numeric = check_existence(&params, Method::Numeric).unwrap();
            let tilde = check_potential_tilde(&params).unwrap();
            assert_eq!(analytic.holds, factor < 1.0);
            assert_eq!(analytic.holds, numeric.holds, "{params:?}");
            assert_eq!(analytic.holds, tilde.holds, "{params:?}");
            if numeric.holds {
                let w = numeric.witness.unwrap();
                assert!(params.potential_value(w) > 0.0);
            }
            checked += 1;
        }
    }
    assert_eq!(checked, 4000);
}

#[test]
fn uniqueness_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let (p, q) = random_exponents(&mut rng);
        let th = Thresholds::new(p, q).unwrap();
        for factor in [0.5, 0.99, 1.01, 2.0] {
            let params = Params::new(factor * th.eta_crit, p, q, 1).unwrap();
            let analytic = check_uniqueness(&params, Method::Analytic).unwrap();
            let numeric = check_uniqueness(&params, Method::Numeric).unwrap();
            assert_eq!(analytic.holds, factor < 1.0);
            assert_eq!(analytic.holds, numeric.holds, "{params:?}");
            if numeric.holds {
                assert!(params.f_value(numeric.witness.unwrap()) > 0.0);
            }
        }
    }
}

#[test]
fn boundary_is_indeterminate() {
    let params = Params::new(2.0 / 9.0, 2.0, 3.0, 3).unwrap();
    for method in [Method::Analytic, Method::Numeric] {
        assert!(matches!(
            check_existence(&params, method),
            Err(ConditionError::IndeterminateNearThreshold { .. })
        ));
    }
    assert!(conditions::verify_theorem(&params).is_err());
}

#[test]
fn corollary_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let (p, q) = random_exponents(&mut rng);
        let th = Thresholds::new(p, q).unwrap();
        let omegas: Vec<f64> = [0.5, 0.999, 1.0005, 1.5]
            .iter()
            .flat_map(|f| [f * th.omega_crit, f * th.eta_crit])
            .collect();
        let evidence = verify_corollary(p, q, &omegas).unwrap();
        assert!(evidence.ordered && evidence.strict, "{p} {q}");
        assert!(evidence.holds, "{evidence:?}");
    }
}

#[test]
fn sampled_verification_passes_and_is_reproducible() {
    let config = SampleConfig::default();
    let a = conditions::verify_sampled(&config).unwrap();
    assert_eq!(a.samples, 1000);
    assert_eq!(a.failed, 0, "{:?}", a.failures);
    assert_eq!(a.passed + a.skipped_in_band, 1000);
    let b = conditions::verify_sampled(&config).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_matches_checks_and_round_trips() {
    let table = conditions::sweep(
        "1.5:4".parse().unwrap(),
        "2:6".parse().unwrap(),
        "0.01:0.5".parse().unwrap(),
        Resolution::uniform(10),
    )
    .unwrap();
    assert!(!table.rows.is_empty() && table.rows.len() <= 1000);
    for row in &table.rows {
        assert!(row.consistent, "{row:?}");
        assert!(!row.existence || row.uniqueness, "{row:?}");
        assert!(row.q > row.p);
    }
    let csv = table.to_csv();
    assert_eq!(PhaseTable::from_csv(&csv).unwrap().to_csv(), csv);

    let single = conditions::sweep(
        Range::point(2.0),
        Range::point(3.0),
        Range::point(0.1),
        Resolution::uniform(1),
    )
    .unwrap();
    assert_eq!(single.rows.len(), 1);
    let params = Params::new(0.1, 2.0, 3.0, 1).unwrap();
    assert_eq!(
        single.rows[0].existence,
        check_existence(&params, Method::Analytic).unwrap().holds
    );
    assert_eq!(
        single.rows[0].uniqueness,
        check_uniqueness(&params, Method::Analytic).unwrap().holds
    );
}

#[test]
fn malformed_ranges_are_rejected() {
    assert!("3:2".parse::<Range>().is_err());
    assert!("a:2".parse::<Range>().is_err());
    let config = SampleConfig {
        p: "3:4".parse().unwrap(),
        q: "1.5:2".parse().unwrap(),
        ..SampleConfig::default()
    };
    assert!(conditions::verify_sampled(&config).is_err());
}
