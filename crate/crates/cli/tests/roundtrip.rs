use kappa_cli::parse::{parse, parse_scalar};
use kappa_double::ncalg::{Gen, NCPoly};
use kappa_double::scalars::{with_truncation, Gauss, Scalar, Truncation};
use proptest::prelude::*;

fn gen() -> impl Strategy<Value = Gen> {
    prop_oneof![
        (0u8..4).prop_map(Gen::X),
        (0u8..4).prop_map(Gen::P),
        (0u8..4).prop_map(Gen::Xh),
        (0u8..4).prop_map(Gen::Ph),
        (0u8..4, 0u8..4).prop_filter_map("antisymmetric", |(a, b)| (a < b).then_some(Gen::M(a, b))),
        (0u8..4, 0u8..4).prop_map(|(m, n)| Gen::Lambda(m, n)),
    ]
}

fn coeff() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, -5i64..=5, 1i64..=4, -2i32..=2, -1i32..=4).prop_map(|(re, im, den, a, b)| {
        let c = &Gauss::ratio(re, den) + &Gauss::i().mul_ref(&Gauss::ratio(im, den));
        Scalar::monomial(c, a, b)
    })
}

fn poly() -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((prop::collection::vec(gen(), 0..=4), coeff()), 0..=4).prop_map(NCPoly::from_terms)
}

fn order<R>(f: impl FnOnce() -> R) -> R {
    with_truncation(Truncation::new(6, 1).unwrap(), f)
}

proptest! {
    #[test]
    fn rendered_polynomials_parse_back(p in poly()) {
        order(|| {
            let text = p.to_string();
            prop_assert_eq!(parse(&text).unwrap(), p, "{}", text);
            Ok(())
        })?;
    }

    #[test]
    fn rendered_scalars_parse_back(s in coeff()) {
        order(|| {
            let text = s.to_string();
            prop_assert_eq!(parse_scalar(&text).unwrap(), s, "{}", text);
            Ok(())
        })?;
    }
}
