//! Heisenberg double of the kappa-Poincare algebra and group.

use crate::hopf::{double_rewrite_system, CrossRelation, HopfError, HopfPresentation, PairingTable};
use crate::ncalg::{Gen, NCPoly, NormalOrderer, RewriteSystem};
use crate::report::{CheckItem, CheckReport};

use super::lorentz::poly_vanishes;
use super::presentations::{build_kappa_algebra, build_kappa_group, kappa_pairing, printed_cross_table};
use super::ConventionProfile;

pub struct FullDouble {
    pub algebra: HopfPresentation,
    pub group: HopfPresentation,
    pub pairing: PairingTable,
    pub rewrite: RewriteSystem,
    pub cross: Vec<CrossRelation>,
}

pub fn build_full_double(profile: &ConventionProfile) -> Result<FullDouble, HopfError> {
    let algebra = build_kappa_algebra(profile);
    let group = build_kappa_group(profile);
    let pairing = kappa_pairing();
    let (rewrite, cross) = double_rewrite_system(&algebra, &group, &pairing)?;
    Ok(FullDouble { algebra, group, pairing, rewrite, cross })
}

impl FullDouble {
    /// `[a, b]` for algebra generator `a` and group generator `b`.
    pub fn cross_bracket(&self, a: Gen, b: Gen) -> Option<NCPoly> {
        self.cross.iter().find(|r| r.algebra_gen == a && r.group_gen == b).map(|r| -&r.commutator)
    }

    /// Derived cross relations against the hard-coded table, one item per entry.
    pub fn compare_with_printed(&self) -> CheckReport {
        let mut report = CheckReport::new("cross-vs-table");
        for (a, b, printed) in printed_cross_table() {
            let id = format!("cross:[{a},{b}]");
            match self.cross_bracket(a, b) {
                Some(derived) => {
                    let mut item = CheckItem::from_poly(id, format!("table [{a}, {b}] = {printed}"), &(&derived - &printed));
                    if !item.passed() {
                        item.residual = format!("derived {derived}; table {printed}");
                    }
                    report.push(item);
                }
                None => report.push(CheckItem::failed(id, format!("[{a}, {b}]"), "no derived relation")),
            }
        }
        report
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut g = self.group.generators.clone();
        g.extend(self.algebra.generators.iter().copied());
        g
    }

    /// Jacobi identity on every triple of distinct generators drawn from `gens`, modulo the
    /// Lorentz orthogonality relations.
    pub fn jacobi_sweep(&self, gens: &[Gen]) -> Result<CheckReport, HopfError> {
        jacobi_sweep_modulo(&self.rewrite, gens, "jacobi/double", &poly_vanishes)
    }
}

/// Jacobi residual on all triples `i < j < k` of `gens`; an item passes when `holds` accepts
/// the normal-ordered residual.
pub fn jacobi_sweep_modulo(
    rs: &RewriteSystem,
    gens: &[Gen],
    id: &str,
    holds: &dyn Fn(&NCPoly) -> bool,
) -> Result<CheckReport, HopfError> {
    let o = NormalOrderer::new(rs);
    let mut report = CheckReport::new(id);
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            for k in (j + 1)..gens.len() {
                let (a, b, c) = (gens[i], gens[j], gens[k]);
                let r = o.jacobi(&NCPoly::gen(a), &NCPoly::gen(b), &NCPoly::gen(c))?;
                let (id, inputs) = (format!("jacobi:({a},{b},{c})"), format!("({a}, {b}, {c})"));
                if holds(&r) {
                    report.push(CheckItem::pass(id, inputs));
                } else {
                    report.push(CheckItem::from_poly(id, inputs, &r));
                }
            }
        }
    }
    Ok(report)
}
