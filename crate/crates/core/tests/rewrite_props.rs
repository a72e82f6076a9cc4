use std::sync::OnceLock;

use kappa_double::kappa::phase::{build_phase_space, phase_generators};
use kappa_double::kappa::presentations::build_weyl;
use kappa_double::kappa::ConventionProfile;
use kappa_double::ncalg::{Gen, NCPoly, NormalOrderer, RewriteSystem};
use kappa_double::scalars::{with_truncation, Gauss, Scalar, Truncation};
use proptest::prelude::*;

fn phase() -> &'static RewriteSystem {
    static RS: OnceLock<RewriteSystem> = OnceLock::new();
    RS.get_or_init(|| {
        with_truncation(Truncation::new(4, 1).unwrap(), || build_phase_space(&ConventionProfile::default()).unwrap().rewrite)
    })
}

fn poly(gens: Vec<Gen>) -> impl Strategy<Value = NCPoly> {
    let word = prop::collection::vec(prop::sample::select(gens), 0..=3);
    prop::collection::vec((word, -3i64..=3, 0i32..=1), 1..=3).prop_map(|terms| {
        NCPoly::from_terms(terms.into_iter().map(|(w, c, b)| (w, Scalar::monomial(Gauss::int(c, 0), 0, b))))
    })
}

fn weyl_gens() -> Vec<Gen> {
    vec![Gen::Xh(0), Gen::Xh(1), Gen::Ph(0), Gen::Ph(1)]
}

fn small<R>(f: impl FnOnce() -> R) -> R {
    with_truncation(Truncation::new(4, 1).unwrap(), f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phase_space_normal_form_is_idempotent(p in poly(phase_generators())) {
        small(|| {
            let o = NormalOrderer::new(phase());
            let n = o.normal_order(&p).unwrap();
            prop_assert!(n.is_normal_ordered());
            prop_assert_eq!(o.normal_order(&n).unwrap(), n);
            Ok(())
        })?;
    }

    #[test]
    fn phase_space_product_is_associative(a in poly(phase_generators()), b in poly(phase_generators()), c in poly(phase_generators())) {
        small(|| {
            let o = NormalOrderer::new(phase());
            let left = o.product(&o.product(&a, &b).unwrap(), &c).unwrap();
            let right = o.product(&a, &o.product(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            Ok(())
        })?;
    }

    #[test]
    fn normal_ordering_is_multiplicative(a in poly(phase_generators()), b in poly(phase_generators())) {
        small(|| {
            let o = NormalOrderer::new(phase());
            let whole = o.normal_order(&a.multiply(&b)).unwrap();
            let parts = o.normal_order(&o.normal_order(&a).unwrap().multiply(&o.normal_order(&b).unwrap())).unwrap();
            prop_assert_eq!(whole, parts);
            Ok(())
        })?;
    }

    #[test]
    fn weyl_jacobi_vanishes(a in poly(weyl_gens()), b in poly(weyl_gens()), c in poly(weyl_gens())) {
        small(|| {
            let weyl = build_weyl();
            let o = NormalOrderer::new(&weyl);
            prop_assert!(o.jacobi(&a, &b, &c).unwrap().is_zero());
            Ok(())
        })?;
    }

    #[test]
    fn commutator_is_antisymmetric(a in poly(phase_generators()), b in poly(phase_generators())) {
        small(|| {
            let o = NormalOrderer::new(phase());
            let ab = o.commutator(&a, &b).unwrap();
            let ba = o.commutator(&b, &a).unwrap();
            prop_assert!((&ab + &ba).is_zero());
            Ok(())
        })?;
    }
}
