//! The deformed phase space: momenta with the bicrossproduct coproduct, their dual coordinates,
//! and the cross relations of the translation-sector double.

use std::collections::BTreeMap;

use crate::hopf::{
    cross_rewrite_system, CrossRelation, HopfError, HopfPresentation, Pairing, PairingStrategy, PairingTable,
};
use crate::ncalg::{Gen, NCPoly, NcError, NormalOrderer, RewriteSystem, Word};
use crate::report::{CheckItem, CheckReport, Status};
use crate::scalars::{solve_linear, Scalar};

use super::double::jacobi_sweep_modulo;
use super::presentations::{
    build_momentum_algebra, build_phase_coordinates, i_lam, phase_pairing, phase_space_table,
    rewrite_from_table,
};
use super::{ConventionProfile, IndexMode, SignPolicy};

pub fn phase_generators() -> Vec<Gen> {
    (0..4).map(Gen::X).chain((0..4).map(Gen::P)).collect()
}

/// Ordered momentum monomials `P0^a P1^b P2^c P3^d` of total degree `1..=max_degree`.
pub fn momentum_monomials(max_degree: u32) -> Vec<Word> {
    let mut out = Vec::new();
    for a in 0..=max_degree {
        for b in 0..=(max_degree - a) {
            for c in 0..=(max_degree - a - b) {
                for d in 0..=(max_degree - a - b - c) {
                    let mut w = Vec::new();
                    for (g, n) in [(Gen::P(0), a), (Gen::P(1), b), (Gen::P(2), c), (Gen::P(3), d)] {
                        w.extend(std::iter::repeat_n(g, n as usize));
                    }
                    if !w.is_empty() {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

/// The coordinate commutator `[a, b]` forced by duality: the element of `span{1, basis}` whose
/// pairings with every momentum monomial of degree `<= max_degree` equal those of `a b - b a`.
///
/// Pairings of products of coordinates are computed by splitting the coordinate word, which
/// uses only the momentum coproduct, so no coordinate relations are assumed.
pub fn derive_coordinate_bracket(
    a: Gen,
    b: Gen,
    basis: &[Gen],
    momenta: &HopfPresentation,
    coords: &HopfPresentation,
    table: &PairingTable,
    max_degree: u32,
) -> Result<NCPoly, HopfError> {
    let pairing = Pairing::new(coords, momenta, table, PairingStrategy::GroupFirst);
    let comm = |m: &[Gen]| -> Result<Scalar, HopfError> {
        Ok(&pairing.pair_words(&[a, b], m)? - &pairing.pair_words(&[b, a], m)?)
    };
    let degree_one: Vec<Word> = momenta.generators.iter().map(|&g| vec![g]).collect();
    let lhs: Vec<Vec<Scalar>> = degree_one
        .iter()
        .map(|m| basis.iter().map(|&x| pairing.pair_words(&[x], m)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let rhs: Vec<Vec<Scalar>> = degree_one.iter().map(|m| comm(m).map(|v| vec![v])).collect::<Result<_, _>>()?;
    let sol = solve_linear(&lhs, &rhs).map_err(|_| HopfError::MalformedCross(a.name(), b.name()))?;
    let constant = comm(&[])?;
    let mut out = NCPoly::scalar(constant);
    for (x, row) in basis.iter().zip(&sol) {
        out += &NCPoly::gen(*x).scale(&row[0]);
    }
    // the candidate must reproduce every higher pairing too
    for m in momentum_monomials(max_degree) {
        let mut cand = Scalar::zero();
        for (w, c) in out.terms() {
            cand += &(c * &pairing.pair_words(w, &m)?);
        }
        if !(&cand - &comm(&m)?).is_zero() {
            return Err(HopfError::MalformedCross(a.name(), b.name()));
        }
    }
    Ok(out)
}

pub struct PhaseSpace {
    pub profile: ConventionProfile,
    pub momenta: HopfPresentation,
    pub coords: HopfPresentation,
    pub pairing: PairingTable,
    /// `c` in `[x0, xk] = c xk`, as forced by duality.
    pub x0_xk: Scalar,
    pub cross: Vec<CrossRelation>,
    pub rewrite: RewriteSystem,
}

/// Derives the phase space from the momentum bialgebra and the pairing of the profile.
pub fn build_phase_space(profile: &ConventionProfile) -> Result<PhaseSpace, HopfError> {
    let momenta = build_momentum_algebra();
    let pairing = phase_pairing(profile);
    let xs: Vec<Gen> = (0..4).map(Gen::X).collect();
    let free = build_phase_coordinates(&Scalar::zero());
    let c01 = derive_coordinate_bracket(Gen::X(0), Gen::X(1), &xs, &momenta, &free, &pairing, 3)?;
    let x0_xk = c01.coeff(&[Gen::X(1)]);
    let mut rules = RewriteSystem::new("phase-space coordinates");
    for i in 0..4u8 {
        for j in (i + 1)..4 {
            let c = derive_coordinate_bracket(Gen::X(i), Gen::X(j), &xs, &momenta, &free, &pairing, 3)?;
            rules.set_commutator(Gen::X(i), Gen::X(j), c)?;
        }
    }
    let mut coords = build_phase_coordinates(&x0_xk);
    coords.rewrite = rules;
    let (cross_rs, cross) = cross_rewrite_system(&momenta, &coords, &pairing)?;
    let mut rewrite = RewriteSystem::new("phase space");
    rewrite.extend_from(&coords.rewrite);
    rewrite.extend_from(&momenta.rewrite);
    rewrite.extend_from(&cross_rs);
    Ok(PhaseSpace { profile: *profile, momenta, coords, pairing, x0_xk, cross, rewrite })
}

/// Generator class used to group the phase-space relations into ten families.
fn class(g: Gen) -> &'static str {
    match g {
        Gen::X(0) => "x0",
        Gen::X(_) => "xk",
        Gen::P(0) => "P0",
        _ => "Pk",
    }
}

/// The ten unordered class pairs of `{x0, xk, P0, Pk}`.
pub const FAMILIES: [(&str, &str); 10] = [
    ("x0", "x0"),
    ("x0", "xk"),
    ("xk", "xk"),
    ("x0", "P0"),
    ("x0", "Pk"),
    ("xk", "P0"),
    ("xk", "Pk"),
    ("P0", "P0"),
    ("P0", "Pk"),
    ("Pk", "Pk"),
];

fn family_of(a: Gen, b: Gen) -> String {
    let (ca, cb) = (class(a), class(b));
    let pos = |c: &str| ["x0", "xk", "P0", "Pk"].iter().position(|x| *x == c).unwrap();
    if pos(ca) <= pos(cb) {
        format!("[{ca},{cb}]")
    } else {
        format!("[{cb},{ca}]")
    }
}

/// Normal-ordered `[a, b]` for every ordered pair `a < b` of phase-space generators.
pub fn bracket_table(rs: &RewriteSystem) -> Result<Vec<(Gen, Gen, NCPoly)>, NcError> {
    let o = NormalOrderer::new(rs);
    let gens = phase_generators();
    let mut out = Vec::new();
    for (i, &a) in gens.iter().enumerate() {
        for &b in &gens[i..] {
            out.push((a, b, o.commutator(&NCPoly::gen(a), &NCPoly::gen(b))?));
        }
    }
    Ok(out)
}

impl PhaseSpace {
    pub fn bracket(&self, a: Gen, b: Gen) -> Result<NCPoly, NcError> {
        NormalOrderer::new(&self.rewrite).commutator(&NCPoly::gen(a), &NCPoly::gen(b))
    }

    pub fn table(&self) -> Result<Vec<(Gen, Gen, NCPoly)>, NcError> {
        bracket_table(&self.rewrite)
    }

    /// The derived table against the printed one (same index mode), grouped in ten families.
    /// A `[x0,xk]` family that differs from the printed one exactly by sign is the documented
    /// erratum.
    pub fn compare_with_printed(&self) -> Result<CheckReport, NcError> {
        let printed = ConventionProfile { sign_policy: SignPolicy::PaperLiteral, ..self.profile };
        let printed = phase_space_table(&printed);
        let mut report = compare_tables(&self.table()?, &printed, "phase-space-vs-printed")?;
        let flipped = (1..4u8).all(|k| {
            let want = printed.iter().find(|(a, b, _)| (*a, *b) == (Gen::X(0), Gen::X(k))).map(|(_, _, c)| c.clone());
            matches!((want, self.bracket(Gen::X(0), Gen::X(k))), (Some(w), Ok(d)) if (&w + &d).is_zero() && !d.is_zero())
        });
        if let Some(item) = report.items.iter_mut().find(|i| i.id == "family:[x0,xk]") {
            if item.status == Status::Fail && flipped && self.x0_xk == expected_x0_xk(&self.profile) {
                item.status = Status::DocumentedErratum;
            }
        }
        Ok(report)
    }

    /// The derived table against the shipped table of the same profile.
    pub fn compare_with_shipped(&self) -> Result<CheckReport, NcError> {
        compare_tables(&self.table()?, &phase_space_table(&self.profile), "phase-space-vs-shipped")
    }

    pub fn jacobi(&self) -> Result<CheckReport, HopfError> {
        jacobi_sweep_modulo(&self.rewrite, &phase_generators(), "jacobi/phase-space", &NCPoly::is_zero)
    }

    /// Every cross relation stays inside the span of coordinate and momentum words.
    pub fn closure(&self) -> CheckReport {
        let mut report = CheckReport::new("phase-space-closure");
        for r in &self.cross {
            let id = format!("closure:[{},{}]", r.group_gen, r.algebra_gen);
            let stray: Vec<Gen> =
                r.commutator.generators().into_iter().filter(|g| !matches!(g, Gen::X(_) | Gen::P(_))).collect();
            if stray.is_empty() {
                report.push(CheckItem::pass(id, r.commutator.to_string()));
            } else {
                report.push(CheckItem::failed(id, r.commutator.to_string(), format!("{stray:?}")));
            }
        }
        report
    }
}

/// One item per family: passes when every member bracket agrees.
pub fn compare_tables(
    derived: &[(Gen, Gen, NCPoly)],
    printed: &[(Gen, Gen, NCPoly)],
    id: &str,
) -> Result<CheckReport, NcError> {
    let mut fams: BTreeMap<String, Vec<String>> = FAMILIES.iter().map(|(a, b)| (format!("[{a},{b}]"), vec![])).collect();
    let lookup = |a: Gen, b: Gen| -> NCPoly {
        for (p, q, c) in printed {
            if (*p, *q) == (a, b) {
                return c.clone();
            }
            if (*p, *q) == (b, a) {
                return -c;
            }
        }
        NCPoly::zero()
    };
    for (a, b, c) in derived {
        let want = lookup(*a, *b);
        let fam = fams.get_mut(&family_of(*a, *b)).expect("known family");
        if &want != c {
            fam.push(format!("[{a},{b}]: derived {c}; printed {want}"));
        }
    }
    let mut report = CheckReport::new(id);
    for (fam, misses) in fams {
        if misses.is_empty() {
            report.push(CheckItem::pass(format!("family:{fam}"), fam));
        } else {
            report.push(CheckItem::failed(format!("family:{fam}"), fam, misses.join("; ")));
        }
    }
    Ok(report)
}

/// Predicted Jacobi residual of `(x0, xk, Pl)` for the printed table: `2 hbar delta_kl / kappa`
/// (sign of `x0` follows the index mode).
pub fn printed_erratum_residual(profile: &ConventionProfile, k: u8, l: u8) -> NCPoly {
    if k != l {
        return NCPoly::zero();
    }
    let s = match profile.index_mode {
        IndexMode::Lowered => 2,
        IndexMode::Plain => -2,
    };
    NCPoly::scalar(Scalar::monomial(crate::scalars::Gauss::int(s, 0), 1, 1))
}

/// Jacobi suite on the hard-coded table of `profile`. Under the paper-literal policy, failures
/// on `(x0, xk, Pl)` equal to the predicted erratum are marked as documented.
pub fn table_jacobi(profile: &ConventionProfile) -> Result<CheckReport, HopfError> {
    let rs = rewrite_from_table("phase space (table)", &phase_space_table(profile));
    let mut report = jacobi_sweep_modulo(&rs, &phase_generators(), "jacobi/phase-space-table", &NCPoly::is_zero)?;
    if profile.sign_policy == SignPolicy::PaperLiteral {
        let o = NormalOrderer::new(&rs);
        for item in report.items.iter_mut().filter(|i| i.status == Status::Fail) {
            for k in 1..4u8 {
                for l in 1..4u8 {
                    if item.id != format!("jacobi:(x0,x{k},P{l})") {
                        continue;
                    }
                    let r = o.jacobi(&NCPoly::gen(Gen::X(0)), &NCPoly::gen(Gen::X(k)), &NCPoly::gen(Gen::P(l)))?;
                    if r == printed_erratum_residual(profile, k, l) {
                        item.status = Status::DocumentedErratum;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `[x0, xk]` coefficient expected from the derivation: `-i lam` for lowered `x0`.
pub fn expected_x0_xk(profile: &ConventionProfile) -> Scalar {
    match profile.index_mode {
        IndexMode::Lowered => -i_lam(),
        IndexMode::Plain => i_lam(),
    }
}
