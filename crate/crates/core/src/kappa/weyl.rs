//! Realization of the deformed phase space inside the undeformed Weyl algebra, and the
//! adjoint series `exp(ad_A) X`.

use std::collections::HashMap;

use crate::ncalg::{Gen, NCPoly, NormalOrderer, RewriteSystem};
use crate::report::{CheckItem, CheckReport, Status};
use crate::scalars::{Gauss, Scalar};

use super::phase::{build_phase_space, phase_generators};
use super::presentations::{build_weyl, phase_space_table};
use super::{ConventionProfile, IndexMode, KappaError, SignPolicy};

fn xh(m: u8) -> NCPoly {
    NCPoly::gen(Gen::Xh(m))
}

fn ph(m: u8) -> NCPoly {
    NCPoly::gen(Gen::Ph(m))
}

/// `sum_i (xh_i ph_i + ph_i xh_i)`
pub fn dilatation() -> NCPoly {
    (1..4u8).fold(NCPoly::zero(), |acc, i| &(&acc + &xh(i).multiply(&ph(i))) + &ph(i).multiply(&xh(i)))
}

/// `xh0 + sign (1/2 kappa hbar) sum_i (xh_i ph_i + ph_i xh_i)`
pub fn realized_time(sign: i64) -> NCPoly {
    &xh(0) + &dilatation().scale(&Scalar::monomial(Gauss::ratio(sign, 2), -1, 1))
}

/// Images of the phase-space generators: `x_k -> xh_k`, `x_0 -> realized_time(+1)`,
/// `P_mu -> ph_mu`. With plain indices `x0` stands for `-x_0`.
pub fn realization_images(profile: &ConventionProfile) -> HashMap<Gen, NCPoly> {
    let s0 = match profile.index_mode {
        IndexMode::Lowered => 1,
        IndexMode::Plain => -1,
    };
    let mut images = HashMap::new();
    images.insert(Gen::X(0), realized_time(1).scale(&Scalar::int(s0)));
    for k in 1..4u8 {
        images.insert(Gen::X(k), xh(k));
    }
    for mu in 0..4u8 {
        images.insert(Gen::P(mu), ph(mu));
    }
    images
}

/// Every derived phase-space bracket is reproduced by the realization; the printed
/// `[x0, xk]` is compared too and, when it differs only by sign, marked as the documented
/// erratum.
pub fn weyl_realization_check(profile: &ConventionProfile) -> Result<CheckReport, KappaError> {
    let weyl = build_weyl();
    let o = NormalOrderer::new(&weyl);
    let images = realization_images(profile);
    let ps = build_phase_space(profile)?;
    let mut report = CheckReport::new("weyl-realization");
    let gens = phase_generators();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i + 1..] {
            let realized = o.commutator(&images[&a], &images[&b])?;
            let derived = o.substitute(&ps.bracket(a, b)?, &images)?;
            let id = format!("realize:[{a},{b}]");
            report.push(CheckItem::from_poly(id, format!("[{a}, {b}]"), &(&realized - &derived)));
        }
    }
    let printed = phase_space_table(&ConventionProfile { sign_policy: SignPolicy::PaperLiteral, ..*profile });
    for (a, b, c) in printed.into_iter().filter(|(a, b, _)| *a == Gen::X(0) && matches!(b, Gen::X(_))) {
        let realized = o.commutator(&images[&a], &images[&b])?;
        let image = o.substitute(&c, &images)?;
        let mut item = CheckItem::from_poly(format!("printed:[{a},{b}]"), format!("printed [{a}, {b}] = {c}"), &(&realized - &image));
        if !item.passed() && (&realized + &image).is_zero() {
            item.status = Status::DocumentedErratum;
        }
        report.push(item);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugationResult {
    pub value: NCPoly,
    /// Number of nonzero commutator terms `ad_A^n X / n!`, `n >= 1`.
    pub nontrivial_terms: usize,
}

/// `exp(ad_A) X = X + [A, X] + [A, [A, X]] / 2 + ...`, summed until a term vanishes.
pub fn conjugation_series(a: &NCPoly, x: &NCPoly, max_terms: usize, rs: &RewriteSystem) -> Result<ConjugationResult, KappaError> {
    let o = NormalOrderer::new(rs);
    let mut term = o.normal_order(x)?;
    let mut value = term.clone();
    for n in 1..=max_terms {
        term = o.commutator(a, &term)?.scale(&Scalar::ratio(1, n as i64));
        if term.is_zero() {
            return Ok(ConjugationResult { value, nontrivial_terms: n - 1 });
        }
        value += &term;
    }
    Err(KappaError::SeriesNotTerminated(max_terms))
}

/// `sign (i / 2 kappa hbar^2) (xh_k ph_k + ph_k xh_k) ph_0`: the exponent of `U` for `sign = 1`.
pub fn conjugation_exponent(sign: i64) -> NCPoly {
    dilatation().multiply(&ph(0)).scale(&Scalar::monomial(Gauss::i().mul_ref(&Gauss::ratio(sign, 2)), -2, 1))
}

/// The adjoint series for `x0 = U xh0 U^-1` against the realization.
pub fn conjugation_check() -> Result<CheckReport, KappaError> {
    let weyl = build_weyl();
    let o = NormalOrderer::new(&weyl);
    let plus = o.normal_order(&realized_time(1))?;
    let minus = o.normal_order(&realized_time(-1))?;
    let mut report = CheckReport::new("adjoint-series");
    let u = conjugation_series(&conjugation_exponent(1), &xh(0), 8, &weyl)?;
    report.push(if u.nontrivial_terms == 1 {
        CheckItem::pass("adjoint:terms", "U xh0 U^-1")
    } else {
        CheckItem::failed("adjoint:terms", "U xh0 U^-1", format!("{} nontrivial terms", u.nontrivial_terms))
    });
    let mut item = CheckItem::from_poly("adjoint:U", format!("U xh0 U^-1 = {}", u.value), &(&u.value - &plus));
    if !item.passed() && u.value == minus {
        item.status = Status::DocumentedErratum;
    }
    report.push(item);
    let inv = conjugation_series(&conjugation_exponent(-1), &xh(0), 8, &weyl)?;
    report.push(CheckItem::from_poly("adjoint:U^-1", format!("U^-1 xh0 U = {}", inv.value), &(&inv.value - &plus)));
    let p0 = conjugation_series(&conjugation_exponent(1), &ph(0), 8, &weyl)?;
    report.push(CheckItem::from_poly("adjoint:ph0", format!("U ph0 U^-1 = {}", p0.value), &(&p0.value - &ph(0))));
    Ok(report)
}
