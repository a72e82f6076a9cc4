use kappa_double::scalars::{solve_linear, with_truncation, Gauss, Scalar, Truncation};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(((-3i64..=3, -3i64..=3, 1i64..=4), (0i32..=3, 0i32..=6)), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Scalar::zero(), |acc, ((re, im, den), (a, b))| {
            let c = &Gauss::ratio(re, den) + &Gauss::i().mul_ref(&Gauss::ratio(im, den));
            &acc + &Scalar::monomial(c, a, b)
        })
    })
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_a_commutative_ring(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
    }

    #[test]
    fn products_respect_the_truncation(a in scalar(), b in scalar()) {
        let p = with_truncation(Truncation::with_order(3), || &a * &b);
        prop_assert!(p.max_lambda().is_none_or(|m| m <= 3));
    }

    #[test]
    fn lambda_division_undoes_multiplication(a in scalar()) {
        let a = a.truncated(5);
        prop_assert_eq!((&a * &Scalar::lam()).divide_by_lambda().unwrap(), a);
    }

    #[test]
    fn invertible_series_have_inverses(a in scalar()) {
        // unit constant term makes the series invertible in the truncated ring
        let s = &Scalar::one() + &(&a * &Scalar::lam());
        let inv = s.try_inverse().unwrap();
        prop_assert_eq!(&s * &inv, Scalar::one());
    }
}

#[test]
fn division_needs_a_vanishing_constant_term() {
    assert!(Scalar::one().divide_by_lambda().is_err());
    let d = (&Scalar::int(4) * &Scalar::lam()).divide_by_lambda().unwrap();
    assert_eq!(d, Scalar::int(4));
}

#[test]
fn linear_solve_over_series() {
    // [[1, lam], [lam, 1]] X = [[1], [0]]
    let a = vec![vec![Scalar::one(), Scalar::lam()], vec![Scalar::lam(), Scalar::one()]];
    let b = vec![vec![Scalar::one()], vec![Scalar::zero()]];
    let x = solve_linear(&a, &b).unwrap();
    let back0 = &(&a[0][0] * &x[0][0]) + &(&a[0][1] * &x[1][0]);
    let back1 = &(&a[1][0] * &x[0][0]) + &(&a[1][1] * &x[1][0]);
    assert_eq!(back0, Scalar::one());
    assert!(back1.is_zero());
    let singular = vec![vec![Scalar::zero(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]];
    assert!(solve_linear(&singular, &b).is_err());
}

#[test]
fn rendering() {
    let s = &Scalar::i() - &Scalar::monomial(Gauss::ratio(1, 2), 2, 1);
    assert_eq!(s.to_string(), "i - 1/2 hbar^2 lam");
    assert_eq!(Scalar::zero().to_string(), "0");
    assert_eq!(Scalar::monomial(Gauss::int(1, -2), -1, 0).to_string(), "(1 - 2 i) hbar^-1");
}
