//! Change of momentum basis that turns the bicrossproduct relations into the classical
//! Poincare brackets.

use crate::hopf::HopfError;
use crate::ncalg::{delta, metric, Gen, NCPoly, NormalOrderer, RewriteSystem};
use crate::report::{CheckItem, CheckReport};
use crate::scalars::{Gauss, Scalar};

use super::presentations::{all_m, build_kappa_algebra, exp_p0, i_hbar, lorentz_bracket, m, p, p_vec_sq, ROTATIONS};
use super::{ConventionProfile, SignPolicy};

/// `hbar kappa sinh(P0 / hbar kappa) = sum_{n odd} lam^{n-1} hbar^{1-n} P0^n / n!`
fn sinh_term() -> NCPoly {
    let order = crate::scalars::truncation().order;
    let mut out = NCPoly::zero();
    for n in (1..=(order + 1)).step_by(2) {
        let c = crate::scalars::factorial(n as u32).inverse().expect("nonzero");
        out += &NCPoly::term(vec![Gen::P(0); n as usize], Scalar::monomial(c, 1 - n, n - 1));
    }
    out
}

/// `[P~1, P~2, P~3, P~0]` indexed by `mu`: `P~_i = P_i e^{P0/kappa hbar}`,
/// `P~_0 = kappa hbar sinh(P0/kappa hbar) + (1/2 kappa hbar) P^2 e^{P0/kappa hbar}`.
pub fn tilde_momenta() -> Vec<NCPoly> {
    let e = exp_p0(1);
    let mut out: Vec<NCPoly> = vec![NCPoly::zero(); 4];
    for i in 1..4u8 {
        out[i as usize] = p(i).multiply(&e);
    }
    let half = Scalar::monomial(Gauss::ratio(1, 2), -1, 1);
    out[0] = &sinh_term() + &p_vec_sq().multiply(&e).scale(&half);
    out
}

/// Sign of the boost brackets in the profile: `[M_i0, P_0] = s i hbar P_i`.
pub fn boost_sign(profile: &ConventionProfile) -> i64 {
    match profile.sign_policy {
        SignPolicy::Derive => -1,
        SignPolicy::PaperLiteral => 1,
    }
}

/// The four classical bracket families in the new basis, verified to the active order.
pub fn classical_basis_change(profile: &ConventionProfile) -> Result<CheckReport, HopfError> {
    let alg = build_kappa_algebra(profile);
    let o = NormalOrderer::new(&alg.rewrite);
    let t = tilde_momenta();
    let s = Scalar::int(boost_sign(profile));
    let mut report = CheckReport::new("basis-change");
    let mut push = |id: String, residual: NCPoly| {
        report.push(CheckItem::from_poly(id.clone(), id, &residual));
    };
    for mu in 0..4usize {
        for nu in (mu + 1)..4 {
            push(format!("[P~{mu},P~{nu}]"), o.commutator(&t[mu], &t[nu])?);
        }
    }
    for (a, b) in ROTATIONS {
        for mu in 0..4u8 {
            // -i hbar (g_{a mu} P~_b - g_{b mu} P~_a)
            let want = (&t[b as usize].scale(&Scalar::int(metric(a, mu))) - &t[a as usize].scale(&Scalar::int(metric(b, mu))))
                .scale(&-i_hbar());
            let got = o.commutator(&m(a, b), &t[mu as usize])?;
            push(format!("[M{a}{b},P~{mu}]"), &got - &want);
        }
    }
    for i in 1..4u8 {
        let mi0 = m(i, 0);
        for j in 1..4u8 {
            let want = t[0].scale(&i_hbar()).scale(&s).scale(&Scalar::int(delta(i, j)));
            push(format!("[M{i}0,P~{j}]"), &o.commutator(&mi0, &t[j as usize])? - &want);
        }
        let want = t[i as usize].scale(&i_hbar()).scale(&s);
        push(format!("[M{i}0,P~0]"), &o.commutator(&mi0, &t[0])? - &want);
    }
    Ok(report)
}

/// Classical Poincare algebra with boost sign `s`.
pub fn classical_poincare(s: i64) -> RewriteSystem {
    let mut rs = RewriteSystem::new("Poincare algebra");
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
        for mu in 0..4u8 {
            let br = if a != 0 {
                (&p(b).scale(&Scalar::int(metric(a, mu))) - &p(a).scale(&Scalar::int(metric(b, mu)))).scale(&-i_hbar())
            } else {
                // M(0,k) = -M_k0; [M_k0, P_0] = s i hbar P_k, [M_k0, P_j] = s i hbar delta_kj P_0
                let k = b;
                let v = if mu == 0 { p(k) } else { p(0).scale(&Scalar::int(delta(k, mu))) };
                v.scale(&i_hbar()).scale(&Scalar::int(-s))
            };
            rs.set_commutator(g, Gen::P(mu), br).expect("MP rule");
        }
    }
    rs
}

/// Dropping every positive power of `lam` from the algebra rules gives the Poincare algebra.
pub fn check_classical_limit(profile: &ConventionProfile) -> CheckReport {
    let limit = build_kappa_algebra(profile).rewrite.classical();
    let want = classical_poincare(boost_sign(profile));
    let mut report = CheckReport::new("classical-limit");
    for ((g, h), rem) in want.sorted_rules() {
        let got = limit.rule(g, h).cloned().unwrap_or_else(NCPoly::zero);
        report.push(CheckItem::from_poly(format!("limit:[{g},{h}]"), format!("[{g}, {h}] = {rem}"), &(&got - &rem)));
    }
    if limit.len() != want.len() {
        report.push(CheckItem::failed("limit:rule-count", "", format!("{} vs {}", limit.len(), want.len())));
    }
    report
}
