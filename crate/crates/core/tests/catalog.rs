//! Reference values computed independently with a computer-algebra system and frozen here.

use kappa_double::hopf::{HopfEngine, Pairing, PairingStrategy};
use kappa_double::kappa::basis::tilde_momenta;
use kappa_double::kappa::dual::{check_dual_basis, difference_operator, finite_difference_apply, solve_dual_basis, CommPoly};
use kappa_double::kappa::phase::{build_phase_space, printed_erratum_residual, table_jacobi};
use kappa_double::kappa::presentations::{boost_momentum_function, build_kappa_algebra, build_weyl, p, x};
use kappa_double::kappa::weyl::{realization_images, weyl_realization_check};
use kappa_double::kappa::ConventionProfile;
use kappa_double::ncalg::{Gen, NCPoly, NormalOrderer};
use kappa_double::report::Status;
use kappa_double::scalars::{with_truncation, Truncation};

fn default_order<R>(f: impl FnOnce() -> R) -> R {
    with_truncation(Truncation::new(6, 1).unwrap(), f)
}

#[test]
fn boost_momentum_series() {
    default_order(|| {
        let time_part = NCPoly::from_terms(
            boost_momentum_function().truncated(3).into_terms().filter(|(w, _)| w.iter().all(|g| *g == Gen::P(0))),
        );
        assert_eq!(time_part.to_string(), "hbar P0 - lam P0^2 + 2/3 hbar^-1 lam^2 P0^3 - 1/3 hbar^-2 lam^3 P0^4");
    });
}

#[test]
fn first_classical_momentum() {
    default_order(|| {
        assert_eq!(
            tilde_momenta()[0].truncated(2).to_string(),
            "1/2 hbar^-1 lam P1^2 + 1/2 hbar^-2 lam^2 P1^2 P0 + 1/2 hbar^-1 lam P2^2 + 1/2 hbar^-2 lam^2 P2^2 P0 \
             + 1/2 hbar^-1 lam P3^2 + 1/2 hbar^-2 lam^2 P3^2 P0 + P0 + 1/6 hbar^-2 lam^2 P0^3"
        );
    });
}

#[test]
fn phase_space_brackets() {
    default_order(|| {
        let ps = build_phase_space(&ConventionProfile::default()).unwrap();
        let o = NormalOrderer::new(&ps.rewrite);
        assert_eq!(o.commutator(&x(0), &x(1)).unwrap().to_string(), "-i lam x1");
        assert_eq!(o.commutator(&p(0), &x(0)).unwrap().to_string(), "i hbar");
        assert_eq!(o.commutator(&p(1), &x(1)).unwrap().to_string(), "-i hbar");
    });
}

#[test]
fn coordinate_momentum_pairings() {
    default_order(|| {
        let ps = build_phase_space(&ConventionProfile::default()).unwrap();
        let pairing = Pairing::new(&ps.coords, &ps.momenta, &ps.pairing, PairingStrategy::GroupFirst);
        let pair = |g: &NCPoly, a: &NCPoly| pairing.pair(g, a).unwrap().to_string();
        assert_eq!(pair(&x(0).multiply(&x(0)), &p(0).multiply(&p(0))), "-2 hbar^2");
        for r in 1..4 {
            for s in 1..4 {
                let want = if r == s { "-hbar lam" } else { "0" };
                assert_eq!(pair(&x(s).multiply(&x(0)), &p(r)), want, "s={s} r={r}");
            }
        }
    });
}

#[test]
fn time_momentum_coproduct_square() {
    default_order(|| {
        let alg = build_kappa_algebra(&ConventionProfile::default());
        let d = HopfEngine::new(&alg).coproduct(&p(0).pow(2)).unwrap();
        assert_eq!(d.to_string(), "1 (x) P0^2 + 2 P0 (x) P0 + P0^2 (x) 1");
    });
}

#[test]
fn shift_difference_of_time_square() {
    default_order(|| {
        let f = CommPoly::from_ncpoly(&x(0).multiply(&x(0)));
        let d = difference_operator(&f).unwrap();
        assert_eq!(d.terms.get(&[0, 0, 0, 0]).unwrap().to_string(), "2 lam");
        assert_eq!(d.terms.get(&[1, 0, 0, 0]).unwrap().to_string(), "-2 i");
        assert_eq!(d.terms.len(), 2);
    });
}

#[test]
fn finite_differences_of_low_monomials() {
    default_order(|| {
        let apply = |f: &NCPoly, m, n, r| finite_difference_apply(&CommPoly::from_ncpoly(f), m, n, r).unwrap();
        assert_eq!(apply(&x(0), 1, 0, 1).to_string(), "-i");
        for s in 1..4u8 {
            assert!(apply(&x(s), 0, 1, s as usize).is_one());
        }
        assert!(apply(&NCPoly::one(), 1, 0, 1).is_zero());
    });
}

#[test]
fn dual_basis_is_the_coordinates_and_one_time_item_fails() {
    default_order(|| {
        let ps = build_phase_space(&ConventionProfile::default()).unwrap();
        let sol = solve_dual_basis(&ps, 3).unwrap();
        for (mu, f) in sol.f.iter().enumerate() {
            assert_eq!(*f, NCPoly::gen(Gen::X(mu as u8)));
        }
        let report = check_dual_basis(&sol, 3).unwrap();
        let failing: Vec<_> = report.failures().map(|i| (i.id.clone(), i.residual.clone())).collect();
        assert_eq!(failing, vec![("time:k=3,m=1".to_string(), "i lam^2".to_string())]);
    });
}

#[test]
fn printed_table_jacobi_erratum() {
    default_order(|| {
        let profile = ConventionProfile::paper_literal();
        assert_eq!(printed_erratum_residual(&profile, 2, 2).to_string(), "2 hbar lam");
        let report = table_jacobi(&profile).unwrap();
        let errata: Vec<_> = report.items.iter().filter(|i| i.status == Status::DocumentedErratum).map(|i| i.id.clone()).collect();
        assert_eq!(errata, ["jacobi:(x0,x1,P1)", "jacobi:(x0,x2,P2)", "jacobi:(x0,x3,P3)"]);
        assert!(report.items.iter().all(|i| i.status != Status::Fail));
    });
}

#[test]
fn weyl_realization_reproduces_the_brackets() {
    default_order(|| {
        let profile = ConventionProfile::default();
        let report = weyl_realization_check(&profile).unwrap();
        assert!(report.items.iter().all(|i| i.status != Status::Fail));
        let weyl = build_weyl();
        let o = NormalOrderer::new(&weyl);
        let img = realization_images(&profile);
        let bracket = |a: Gen, b: Gen| o.commutator(&img[&a], &img[&b]).unwrap().to_string();
        assert_eq!(bracket(Gen::X(0), Gen::X(1)), "-i lam xh1");
        assert_eq!(bracket(Gen::X(0), Gen::P(1)), "i lam ph1");
        assert_eq!(bracket(Gen::X(0), Gen::P(0)), "-i hbar");
        assert_eq!(bracket(Gen::X(1), Gen::P(1)), "i hbar");
    });
}
