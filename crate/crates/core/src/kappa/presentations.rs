//! Bundled presentations: kappa-Poincare algebra (bicrossproduct basis), kappa-Poincare
//! group, the translation sector that generates the deformed phase space, and the
//! canonical Weyl algebra.
//!
//! Every series in `lam = 1/kappa` is truncated at the active order.

use crate::hopf::{HopfPresentation, PairingTable, Side};
use crate::ncalg::{cpoly, delta, exp_series, metric, Gen, NCPoly, RewriteSystem, TensorPoly};
use crate::scalars::{factorial, Gauss, Scalar};

use super::{ConventionProfile, IndexMode, SignPolicy};

pub const ROTATIONS: [(u8, u8); 3] = [(1, 2), (1, 3), (2, 3)];
pub const BOOSTS: [(u8, u8); 3] = [(0, 1), (0, 2), (0, 3)];

pub fn i_hbar() -> Scalar {
    Scalar::monomial(Gauss::i(), 1, 0)
}

pub fn i_lam() -> Scalar {
    Scalar::monomial(Gauss::i(), 0, 1)
}

pub fn p(m: u8) -> NCPoly {
    NCPoly::gen(Gen::P(m))
}

pub fn x(m: u8) -> NCPoly {
    NCPoly::gen(Gen::X(m))
}

pub fn lorentz(m: u8, n: u8) -> NCPoly {
    NCPoly::gen(Gen::Lambda(m, n))
}

/// `M_{ab}` for any index order.
pub fn m(a: u8, b: u8) -> NCPoly {
    Gen::m_poly(a, b)
}

fn int(n: i64) -> Scalar {
    Scalar::int(n)
}

pub fn all_m() -> Vec<Gen> {
    ROTATIONS.iter().chain(BOOSTS.iter()).map(|&(a, b)| Gen::M(a, b)).collect()
}

pub fn all_lambda() -> Vec<Gen> {
    (0..4).flat_map(|m| (0..4).map(move |n| Gen::Lambda(m, n))).collect()
}

/// `exp(sign * lam * P0 / hbar)`.
pub fn exp_p0(sign: i64) -> NCPoly {
    exp_series(&Scalar::monomial(Gauss::int(sign, 0), -1, 1), &p(0))
}

/// `P1^2 + P2^2 + P3^2`
pub fn p_vec_sq() -> NCPoly {
    (1..4).fold(NCPoly::zero(), |acc, k| &acc + &p(k).multiply(&p(k)))
}

/// `hbar^2 kappa sinh(P0/hbar kappa) exp(-P0/hbar kappa) + P^2 / 2 kappa`, expanded in `lam`.
pub fn boost_momentum_function() -> NCPoly {
    // (hbar^2 / 2 lam)(1 - exp(-2 lam P0 / hbar)) = sum_{n>=1} (-1)^{n+1} 2^{n-1} lam^{n-1} hbar^{2-n} P0^n / n!
    let order = crate::scalars::truncation().order;
    let mut out = NCPoly::zero();
    for n in 1..=(order + 1) {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let num = Gauss::int(sign * (1i64 << (n - 1)), 0);
        let c = num.mul_ref(&factorial(n as u32).inverse().unwrap());
        out += &NCPoly::term(vec![Gen::P(0); n as usize], Scalar::monomial(c, 2 - n, n - 1));
    }
    &out + &p_vec_sq().scale(&Scalar::monomial(Gauss::ratio(1, 2), 0, 1))
}

fn primitive(g: Gen) -> TensorPoly {
    let gp = NCPoly::gen(g);
    &TensorPoly::tensor(&gp, &NCPoly::one()) + &TensorPoly::tensor(&NCPoly::one(), &gp)
}

/// `[M_ab, M_cd]` from the Lorentz bracket, for any indices.
pub fn lorentz_bracket(a: u8, b: u8, c: u8, d: u8) -> NCPoly {
    let g = |u, v| int(metric(u, v));
    let sum = &(&(&m(b, c).scale(&g(a, d)) + &m(a, d).scale(&g(b, c))) - &m(b, d).scale(&g(a, c))) - &m(a, c).scale(&g(b, d));
    sum.scale(&i_hbar())
}

/// `[M_ab, P_mu]` for stored generators `a < b`.
///
/// The printed boost brackets carry the opposite sign to the covariant rule obeyed by the
/// rotations and by the pairing; `SignPolicy::Derive` uses the covariant sign, which makes the
/// coproduct a bialgebra map and the double Jacobi-consistent.
pub fn m_p_bracket(a: u8, b: u8, mu: u8, policy: SignPolicy) -> NCPoly {
    let boost = match policy {
        SignPolicy::Derive => int(-1),
        SignPolicy::PaperLiteral => int(1),
    };
    if a != 0 {
        // [M_ij, P_mu] = -i hbar (g_{i mu} P_j - g_{j mu} P_i)
        let t = &p(b).scale(&int(metric(a, mu))) - &p(a).scale(&int(metric(b, mu)));
        return t.scale(&-i_hbar());
    }
    // boosts: M(0,k) = -M_{k0}
    let k = b;
    if mu == 0 {
        // printed: [M_k0, P0] = i hbar P_k
        return p(k).scale(&-i_hbar()).scale(&boost);
    }
    // printed: [M_k0, P_j] = i delta_kj S - i lam P_k P_j
    let j = mu;
    let s = boost_momentum_function().scale(&Scalar::i()).scale(&int(delta(k, j)));
    let pp = p(k).multiply(&p(j)).scale(&i_lam());
    (&pp - &s).scale(&boost)
}

/// kappa-Poincare algebra: generators `P_mu`, `M_ab`; relations and coproducts in the
/// bicrossproduct basis.
pub fn build_kappa_algebra(profile: &ConventionProfile) -> HopfPresentation {
    let mut rs = RewriteSystem::new("kappa-Poincare algebra");
    let ms = all_m();
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            rs.commute(Gen::P(mu), Gen::P(nu)).expect("P rule");
        }
    }
    for (i, &g) in ms.iter().enumerate() {
        let Gen::M(a, b) = g else { unreachable!() };
        for &h in &ms[i + 1..] {
            let Gen::M(c, d) = h else { unreachable!() };
            rs.set_commutator(g, h, lorentz_bracket(a, b, c, d)).expect("M rule");
        }
        for mu in 0..4 {
            rs.set_commutator(g, Gen::P(mu), m_p_bracket(a, b, mu, profile.sign_policy)).expect("MP rule");
        }
    }
    let mut h = HopfPresentation::new("kappa-Poincare algebra", Side::Algebra, rs);
    let e_minus = exp_p0(-1);
    h.add_generator(Gen::P(0), primitive(Gen::P(0)), Scalar::zero());
    for k in 1..4 {
        let d = &TensorPoly::tensor(&p(k), &e_minus) + &TensorPoly::tensor(&NCPoly::one(), &p(k));
        h.add_generator(Gen::P(k), d, Scalar::zero());
    }
    for (a, b) in ROTATIONS {
        h.add_generator(Gen::M(a, b), primitive(Gen::M(a, b)), Scalar::zero());
    }
    for (_, k) in BOOSTS {
        // Delta(M_k0) = M_k0 (x) e^{-P0/hbar kappa} + 1 (x) M_k0 + (1/hbar kappa) M_kl (x) P_l
        let mk0 = m(k, 0);
        let mut d = &TensorPoly::tensor(&mk0, &e_minus) + &TensorPoly::tensor(&NCPoly::one(), &mk0);
        for l in 1..4 {
            d += &TensorPoly::tensor(&m(k, l), &p(l)).scale(&Scalar::monomial(Gauss::one(), -1, 1));
        }
        // stored generator is M(0,k) = -M_k0
        h.add_generator(Gen::M(0, k), d.scale(&int(-1)), Scalar::zero());
    }
    h
}

/// `[Lambda^mu_nu, x^lam]` of the group.
///
/// As printed, `-(i/kappa)((L^mu_0 - d^mu_0) L^lam_nu + (L^0_nu - d^0_nu) g^{mu lam})` violates
/// Jacobi with `[x^0, x^k]` (the residual is linear in `Lambda`, so orthogonality cannot absorb
/// it). `SignPolicy::Derive` flips the sign of the `g^{mu lam}` term.
pub fn lambda_x_bracket(mu: u8, nu: u8, l: u8, policy: SignPolicy) -> NCPoly {
    let d = |a, b| int(delta(a, b));
    let t1 = (&lorentz(mu, 0) - &NCPoly::scalar(d(mu, 0))).multiply(&lorentz(l, nu));
    let t2 = (&lorentz(0, nu) - &NCPoly::scalar(d(0, nu))).scale(&int(metric(mu, l)));
    let t2 = match policy {
        SignPolicy::Derive => -t2,
        SignPolicy::PaperLiteral => t2,
    };
    (&t1 + &t2).scale(&-i_lam())
}

/// kappa-Poincare group: coordinates `x^mu` (upper index) and Lorentz matrix entries.
pub fn build_kappa_group(profile: &ConventionProfile) -> HopfPresentation {
    let mut rs = RewriteSystem::new("kappa-Poincare group");
    for mu in 0..4u8 {
        for nu in (mu + 1)..4 {
            // [x^mu, x^nu] = i lam (delta^mu_0 x^nu - delta^nu_0 x^mu)
            let c = (&x(nu).scale(&int(delta(mu, 0))) - &x(mu).scale(&int(delta(nu, 0)))).scale(&i_lam());
            rs.set_commutator(Gen::X(mu), Gen::X(nu), c).expect("xx rule");
        }
    }
    let ls = all_lambda();
    for (i, &g) in ls.iter().enumerate() {
        for &h in &ls[i + 1..] {
            rs.commute(g, h).expect("LL rule");
        }
        let Gen::Lambda(mu, nu) = g else { unreachable!() };
        for l in 0..4 {
            rs.set_commutator(g, Gen::X(l), lambda_x_bracket(mu, nu, l, profile.sign_policy)).expect("Lx rule");
        }
    }
    let mut h = HopfPresentation::new("kappa-Poincare group", Side::Group, rs);
    for mu in 0..4u8 {
        let mut d = TensorPoly::tensor(&x(mu), &NCPoly::one());
        for a in 0..4 {
            d += &TensorPoly::tensor(&lorentz(mu, a), &x(a));
        }
        h.add_generator(Gen::X(mu), d, Scalar::zero());
    }
    for mu in 0..4u8 {
        for nu in 0..4u8 {
            let mut d = TensorPoly::zero();
            for a in 0..4 {
                d += &TensorPoly::tensor(&lorentz(mu, a), &lorentz(a, nu));
            }
            h.add_generator(Gen::Lambda(mu, nu), d, int(delta(mu, nu)));
        }
    }
    h
}

/// `<Lambda^mu_nu, M_ab> = i hbar (delta^mu_a g_{nu b} - delta^mu_b g_{nu a})`
pub fn lambda_m_pairing(mu: u8, nu: u8, a: u8, b: u8) -> Scalar {
    i_hbar().scale(&Gauss::int(delta(mu, a) * metric(nu, b) - delta(mu, b) * metric(nu, a), 0))
}

/// Base pairing of the full group and algebra.
pub fn kappa_pairing() -> PairingTable {
    let mut t = PairingTable::default();
    for mu in 0..4u8 {
        for nu in 0..4u8 {
            t.set(Gen::X(mu), Gen::P(nu), i_hbar().scale(&Gauss::int(delta(mu, nu), 0)));
            for g in all_m() {
                let Gen::M(a, b) = g else { unreachable!() };
                t.set(Gen::X(mu), g, Scalar::zero());
                t.set(Gen::Lambda(mu, nu), g, lambda_m_pairing(mu, nu, a, b));
            }
            for s in 0..4u8 {
                t.set(Gen::Lambda(mu, nu), Gen::P(s), Scalar::zero());
            }
        }
    }
    t
}

/// Momentum sub-bialgebra: `P_mu` with the bicrossproduct coproduct.
pub fn build_momentum_algebra() -> HopfPresentation {
    let full = build_kappa_algebra(&ConventionProfile::default());
    let mut rs = RewriteSystem::new("momenta");
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            rs.commute(Gen::P(mu), Gen::P(nu)).expect("P rule");
        }
    }
    let mut h = HopfPresentation::new("momenta", Side::Algebra, rs);
    for mu in 0..4u8 {
        let g = Gen::P(mu);
        h.add_generator(g, full.coproduct[&g].clone(), Scalar::zero());
    }
    h
}

/// `<x_mu, P_nu>` in the phase-space coordinates of the given profile.
pub fn phase_pairing_value(profile: &ConventionProfile, mu: u8, nu: u8) -> Scalar {
    let sign = match profile.index_mode {
        IndexMode::Lowered => metric(mu, nu),
        IndexMode::Plain => delta(mu, nu),
    };
    i_hbar().scale(&Gauss::int(sign, 0))
}

pub fn phase_pairing(profile: &ConventionProfile) -> PairingTable {
    let mut t = PairingTable::default();
    for mu in 0..4u8 {
        for nu in 0..4u8 {
            t.set(Gen::X(mu), Gen::P(nu), phase_pairing_value(profile, mu, nu));
        }
    }
    t
}

/// Phase-space coordinates with primitive coproducts (Lorentz part at the identity) and the
/// given coordinate commutators `[x_0, x_k] = coeff * x_k`.
pub fn build_phase_coordinates(x0_xk_coeff: &Scalar) -> HopfPresentation {
    let mut rs = RewriteSystem::new("phase-space coordinates");
    for mu in 0..4u8 {
        for nu in (mu + 1)..4 {
            let c = if mu == 0 { x(nu).scale(x0_xk_coeff) } else { NCPoly::zero() };
            rs.set_commutator(Gen::X(mu), Gen::X(nu), c).expect("xx rule");
        }
    }
    let mut h = HopfPresentation::new("phase-space coordinates", Side::Group, rs);
    for mu in 0..4u8 {
        h.add_generator(Gen::X(mu), primitive(Gen::X(mu)), Scalar::zero());
    }
    h
}

/// The ten phase-space brackets as printed, for the given profile.
///
/// Under `SignPolicy::Derive` the coordinate bracket is replaced by the Jacobi-consistent
/// `[x_0, x_k] = -(i/kappa) x_k`. `IndexMode::Plain` reads `x0` as `x^0 = -x_0`.
pub fn phase_space_table(profile: &ConventionProfile) -> Vec<(Gen, Gen, NCPoly)> {
    let s0 = match profile.index_mode {
        IndexMode::Lowered => 1,
        IndexMode::Plain => -1,
    };
    let x0xk = match profile.sign_policy {
        SignPolicy::Derive => -1,
        SignPolicy::PaperLiteral => 1,
    };
    let mut t = Vec::new();
    for k in 1..4u8 {
        for l in (k + 1)..4u8 {
            t.push((Gen::X(k), Gen::X(l), NCPoly::zero()));
        }
    }
    for mu in 0..4u8 {
        for nu in (mu + 1)..4u8 {
            t.push((Gen::P(mu), Gen::P(nu), NCPoly::zero()));
        }
    }
    for k in 1..4u8 {
        t.push((Gen::X(0), Gen::X(k), x(k).scale(&i_lam()).scale(&int(x0xk * s0))));
        for l in 1..4u8 {
            t.push((Gen::X(k), Gen::P(l), cpoly(Gauss::i(), 1, 0).scale(&int(delta(k, l)))));
        }
        t.push((Gen::X(k), Gen::P(0), NCPoly::zero()));
        t.push((Gen::X(0), Gen::P(k), p(k).scale(&i_lam()).scale(&int(s0))));
    }
    t.push((Gen::X(0), Gen::P(0), cpoly(Gauss::int(0, -1), 1, 0).scale(&int(s0))));
    t
}

pub fn rewrite_from_table(name: &str, table: &[(Gen, Gen, NCPoly)]) -> RewriteSystem {
    let mut rs = RewriteSystem::new(name);
    for (a, b, c) in table {
        rs.set_commutator(*a, *b, c.clone()).expect("table rule");
    }
    rs
}

/// Hard-coded cross relations of the double, written as `[algebra, group]` with `x^mu` upper.
pub fn printed_cross_table() -> Vec<(Gen, Gen, NCPoly)> {
    let g = |a, b| int(metric(a, b));
    let mut t = Vec::new();
    // x_alpha = g_{alpha rho} x^rho
    let x_low = |a: u8| x(a).scale(&g(a, a));
    for k in 1..4u8 {
        for l in 1..4u8 {
            t.push((Gen::P(k), Gen::X(l), cpoly(Gauss::int(0, -1), 1, 0).scale(&int(delta(k, l)))));
        }
        // [P_k, x_0] = -(i/kappa) P_k with x_0 = -x^0
        t.push((Gen::P(k), Gen::X(0), p(k).scale(&i_lam())));
        t.push((Gen::P(0), Gen::X(k), NCPoly::zero()));
    }
    // [P_0, x_0] = i hbar
    t.push((Gen::P(0), Gen::X(0), cpoly(Gauss::int(0, -1), 1, 0)));
    for mu in 0..4u8 {
        for lam_gen in all_lambda() {
            t.push((Gen::P(mu), lam_gen, NCPoly::zero()));
        }
    }
    for mg in all_m() {
        let Gen::M(a, b) = mg else { unreachable!() };
        for lg in all_lambda() {
            let Gen::Lambda(mu, nu) = lg else { unreachable!() };
            // i hbar (delta^mu_b Lambda_{a nu} - delta^mu_a Lambda_{b nu})
            let l_low = |r: u8| lorentz(r, nu).scale(&g(r, r));
            let v = (&l_low(a).scale(&int(delta(mu, b))) - &l_low(b).scale(&int(delta(mu, a)))).scale(&i_hbar());
            t.push((mg, lg, v));
        }
        for mu in 0..4u8 {
            let hb = (&x_low(a).scale(&int(delta(mu, b))) - &x_low(b).scale(&int(delta(mu, a)))).scale(&i_hbar());
            // M_alpha^mu = g^{mu rho} M_{alpha rho}
            let m_up = |r: u8| m(r, mu).scale(&g(mu, mu));
            let lm = (&m_up(a).scale(&int(delta(0, b))) - &m_up(b).scale(&int(delta(0, a)))).scale(&i_lam());
            t.push((mg, Gen::X(mu), &hb + &lm));
        }
    }
    t
}

/// Weyl algebra `[xh_mu, ph_nu] = i hbar g_{mu nu}`, everything else commuting.
pub fn build_weyl() -> RewriteSystem {
    let mut rs = RewriteSystem::new("Weyl algebra");
    for mu in 0..4u8 {
        for nu in 0..4u8 {
            rs.set_commutator(Gen::Xh(mu), Gen::Ph(nu), cpoly(Gauss::i(), 1, 0).scale(&int(metric(mu, nu))))
                .expect("weyl rule");
            if mu < nu {
                rs.commute(Gen::Xh(mu), Gen::Xh(nu)).expect("weyl rule");
                rs.commute(Gen::Ph(mu), Gen::Ph(nu)).expect("weyl rule");
            }
        }
    }
    rs
}
