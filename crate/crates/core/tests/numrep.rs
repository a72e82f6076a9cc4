use kappa_double::numrep::{
    build_deformed_operators, check_standard_limit, check_uncertainty_suite, dispersion, random_low_occupation_states,
    write_csv, NumrepError, MARGIN_TOL,
};
use proptest::prelude::*;

#[test]
fn small_suite_passes_and_exports_rows() {
    let states = random_low_occupation_states(7, 6, 24, 2);
    let ops = build_deformed_operators(1.0, 1, 24).unwrap();
    let out = check_uncertainty_suite(&ops, &states).unwrap();
    assert!(out.report.passed(), "{:?}", out.report.failures().collect::<Vec<_>>());
    assert!(out.rows.iter().all(|r| r.margin >= -MARGIN_TOL));

    let mut buf = Vec::new();
    write_csv(&out.rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("state,kappa_hbar,pair,kind,lhs,rhs,margin"));
    assert_eq!(lines.count(), out.rows.len());
}

#[test]
fn large_kappa_recovers_the_undeformed_bounds() {
    let states = random_low_occupation_states(3, 4, 24, 2);
    let ops = build_deformed_operators(1e12, 1, 24).unwrap();
    assert!(check_standard_limit(&ops, &states).passed());
}

#[test]
fn states_are_reproducible_from_the_seed() {
    let a = random_low_occupation_states(11, 5, 16, 2);
    let b = random_low_occupation_states(11, 5, 16, 2);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.amplitudes, y.amplitudes);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(matches!(build_deformed_operators(-1.0, 1, 16), Err(NumrepError::InvalidParameter(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dispersions_are_nonnegative(seed in any::<u64>(), kh in 0.2f64..20.0) {
        let states = random_low_occupation_states(seed, 2, 16, 2);
        let ops = build_deformed_operators(kh, 1, 16).unwrap();
        for psi in &states {
            for op in [&ops.x0, &ops.p0, &ops.x[0], &ops.p[0]] {
                prop_assert!(dispersion(op, psi).unwrap() >= -1e-12);
            }
        }
    }
}
