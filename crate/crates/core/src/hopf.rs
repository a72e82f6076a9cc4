//! Bialgebra presentations, the duality pairing, and Heisenberg-double cross relations.
//!
//! A [`HopfPresentation`] is a rewrite system plus coproduct and counit on generators.
//! Coproducts of words are obtained multiplicatively with both legs normal-ordered.
//!
//! The pairing between a group-side presentation (coordinates) and an algebra-side
//! presentation (momenta, Lorentz generators) is computed recursively from a base table:
//!
//! - `<b b~, a> = <b, a_(1)> <b~, a_(2)>`
//! - `<b, a a~> = <b_(1), a> <b_(2), a~>`
//!
//! Either rule may be applied first; [`PairingStrategy`] selects which, and agreement of the
//! two is itself a check. Cross relations of the double come from
//! `b a = a_(1) <b_(1), a_(2)> b_(2)`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::ncalg::{Gen, NCPoly, NcError, NormalOrderer, RewriteSystem, TensorPoly, Word};
use crate::report::{CheckItem, CheckReport};
use crate::scalars::{join_terms, render_term, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error(transparent)]
    Rewrite(#[from] NcError),
    #[error("no base pairing for <{0}, {1}>")]
    UnknownBasePair(String, String),
    #[error("generator {0} has no coproduct in presentation {1}")]
    NoCoproduct(String, String),
    #[error("generator {0} has no counit in presentation {1}")]
    NoCounit(String, String),
    #[error("cross product for <{0}, {1}> lacks the leading term with coefficient 1")]
    MalformedCross(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Algebra,
    Group,
}

#[derive(Debug, Clone)]
pub struct HopfPresentation {
    pub name: String,
    pub generators: Vec<Gen>,
    pub rewrite: RewriteSystem,
    pub coproduct: HashMap<Gen, TensorPoly>,
    pub counit: HashMap<Gen, Scalar>,
    pub side: Side,
}

impl HopfPresentation {
    pub fn new(name: impl Into<String>, side: Side, rewrite: RewriteSystem) -> Self {
        HopfPresentation {
            name: name.into(),
            generators: Vec::new(),
            rewrite,
            coproduct: HashMap::new(),
            counit: HashMap::new(),
            side,
        }
    }

    pub fn add_generator(&mut self, g: Gen, coproduct: TensorPoly, counit: Scalar) {
        if !self.generators.contains(&g) {
            self.generators.push(g);
            self.generators.sort();
        }
        self.coproduct.insert(g, coproduct);
        self.counit.insert(g, counit);
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.coproduct.contains_key(&g)
    }

    pub fn counit_word(&self, w: &[Gen]) -> Result<Scalar, HopfError> {
        let mut acc = Scalar::one();
        for g in w {
            let e = self.counit.get(g).ok_or_else(|| HopfError::NoCounit(g.name(), self.name.clone()))?;
            acc = &acc * e;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    pub fn counit_poly(&self, p: &NCPoly) -> Result<Scalar, HopfError> {
        let mut acc = Scalar::zero();
        for (w, c) in p.terms() {
            acc += &(c * &self.counit_word(w)?);
        }
        Ok(acc)
    }
}

/// Normal ordering plus cached word coproducts for one presentation.
pub struct HopfEngine<'a> {
    pub pres: &'a HopfPresentation,
    pub orderer: NormalOrderer<'a>,
    coproducts: RefCell<HashMap<Word, TensorPoly>>,
}

impl<'a> HopfEngine<'a> {
    pub fn new(pres: &'a HopfPresentation) -> Self {
        HopfEngine { pres, orderer: NormalOrderer::new(&pres.rewrite), coproducts: RefCell::new(HashMap::new()) }
    }

    fn normal_legs(&self, t: &TensorPoly) -> Result<TensorPoly, NcError> {
        t.map_legs(|l| self.orderer.normal_order_word(l), |r| self.orderer.normal_order_word(r))
    }

    /// Coproduct of a single word, legs normal-ordered.
    pub fn coproduct_word(&self, w: &[Gen]) -> Result<TensorPoly, HopfError> {
        if let Some(hit) = self.coproducts.borrow().get(w) {
            return Ok(hit.clone());
        }
        let out = match w.len() {
            0 => TensorPoly::one(),
            1 => {
                let g = w[0];
                let d = self
                    .pres
                    .coproduct
                    .get(&g)
                    .ok_or_else(|| HopfError::NoCoproduct(g.name(), self.pres.name.clone()))?;
                self.normal_legs(d)?
            }
            n => {
                let head = self.coproduct_word(&w[..n - 1])?;
                let last = self.coproduct_word(&w[n - 1..])?;
                self.normal_legs(&head.multiply(&last))?
            }
        };
        self.coproducts.borrow_mut().insert(w.to_vec(), out.clone());
        Ok(out)
    }

    /// Multiplicative extension of the coproduct.
    pub fn coproduct(&self, p: &NCPoly) -> Result<TensorPoly, HopfError> {
        let mut out = TensorPoly::zero();
        for (w, c) in p.terms() {
            out += &self.coproduct_word(w)?.scale(c);
        }
        Ok(out)
    }
}

/// One-shot coproduct of a polynomial.
pub fn coproduct_extend(p: &NCPoly, h: &HopfPresentation) -> Result<TensorPoly, HopfError> {
    HopfEngine::new(h).coproduct(p)
}

/// Base pairings `<group generator, algebra generator>`. Pairs with the unit are counits.
#[derive(Debug, Clone, Default)]
pub struct PairingTable {
    pub base: HashMap<(Gen, Gen), Scalar>,
}

impl PairingTable {
    pub fn set(&mut self, b: Gen, a: Gen, s: Scalar) {
        self.base.insert((b, a), s);
    }

    pub fn get(&self, b: Gen, a: Gen) -> Result<&Scalar, HopfError> {
        self.base.get(&(b, a)).ok_or_else(|| HopfError::UnknownBasePair(b.name(), a.name()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairingStrategy {
    /// Split multi-letter group words first, using algebra coproducts.
    GroupFirst,
    /// Split multi-letter algebra words first, using group coproducts.
    AlgebraFirst,
}

/// Recursive pairing engine between a group side and an algebra side.
pub struct Pairing<'a> {
    pub group: HopfEngine<'a>,
    pub algebra: HopfEngine<'a>,
    pub table: &'a PairingTable,
    pub strategy: PairingStrategy,
    cache: RefCell<HashMap<(Word, Word), Scalar>>,
}

impl<'a> Pairing<'a> {
    pub fn new(
        group: &'a HopfPresentation,
        algebra: &'a HopfPresentation,
        table: &'a PairingTable,
        strategy: PairingStrategy,
    ) -> Self {
        Pairing {
            group: HopfEngine::new(group),
            algebra: HopfEngine::new(algebra),
            table,
            strategy,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn pair(&self, b: &NCPoly, a: &NCPoly) -> Result<Scalar, HopfError> {
        let mut acc = Scalar::zero();
        for (bw, bc) in b.terms() {
            for (aw, ac) in a.terms() {
                let v = self.pair_words(bw, aw)?;
                if !v.is_zero() {
                    acc += &(&(bc * ac) * &v);
                }
            }
        }
        Ok(acc)
    }

    pub fn pair_words(&self, b: &[Gen], a: &[Gen]) -> Result<Scalar, HopfError> {
        if b.is_empty() {
            return self.algebra.pres.counit_word(a);
        }
        if a.is_empty() {
            return self.group.pres.counit_word(b);
        }
        if b.len() == 1 && a.len() == 1 {
            return self.table.get(b[0], a[0]).cloned();
        }
        let key = (b.to_vec(), a.to_vec());
        if let Some(hit) = self.cache.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let split_group = match self.strategy {
            PairingStrategy::GroupFirst => b.len() >= 2,
            PairingStrategy::AlgebraFirst => a.len() < 2,
        };
        let mut acc = Scalar::zero();
        if split_group {
            // <b0 b', a> = <b0, a_(1)> <b', a_(2)>
            let delta = self.algebra.coproduct_word(a)?;
            for ((l, r), c) in delta.terms() {
                let first = self.pair_words(&b[..1], l)?;
                if first.is_zero() {
                    continue;
                }
                let rest = self.pair_words(&b[1..], r)?;
                acc += &(&(c * &first) * &rest);
            }
        } else {
            // <b, a0 a'> = <b_(1), a0> <b_(2), a'>
            let delta = self.group.coproduct_word(b)?;
            for ((l, r), c) in delta.terms() {
                let first = self.pair_words(l, &a[..1])?;
                if first.is_zero() {
                    continue;
                }
                let rest = self.pair_words(r, &a[1..])?;
                acc += &(&(c * &first) * &rest);
            }
        }
        self.cache.borrow_mut().insert(key, acc.clone());
        Ok(acc)
    }

    /// The double product `b a` of generators, written algebra-left:
    /// `sum <b_(1), a_(2)> a_(1) b_(2)`.
    pub fn cross_product(&self, b: Gen, a: Gen) -> Result<NCPoly, HopfError> {
        let da = self.algebra.coproduct_word(&[a])?;
        let db = self.group.coproduct_word(&[b])?;
        let mut out = NCPoly::zero();
        for ((a1, a2), ca) in da.terms() {
            for ((b1, b2), cb) in db.terms() {
                let s = self.pair_words(b1, a2)?;
                if s.is_zero() {
                    continue;
                }
                let mut w = a1.clone();
                w.extend_from_slice(b2);
                out.add_term(w, &(&(ca * cb) * &s));
            }
        }
        Ok(out)
    }

    /// `[b, a] = b a - a b` derived from the double product.
    pub fn cross_commutator(&self, b: Gen, a: Gen) -> Result<NCPoly, HopfError> {
        let prod = self.cross_product(b, a)?;
        if !prod.coeff(&[a, b]).is_one() {
            return Err(HopfError::MalformedCross(b.name(), a.name()));
        }
        Ok(&prod - &NCPoly::term(vec![a, b], Scalar::one()))
    }
}

/// Result of [`heisenberg_cross`]: `b a` in algebra-left form and `[b, a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossRelation {
    pub group_gen: Gen,
    pub algebra_gen: Gen,
    pub product: NCPoly,
    pub commutator: NCPoly,
}

pub fn heisenberg_cross(
    b: Gen,
    a: Gen,
    algebra: &HopfPresentation,
    group: &HopfPresentation,
    table: &PairingTable,
) -> Result<CrossRelation, HopfError> {
    let engine = Pairing::new(group, algebra, table, PairingStrategy::AlgebraFirst);
    let product = engine.cross_product(b, a)?;
    let commutator = engine.cross_commutator(b, a)?;
    Ok(CrossRelation { group_gen: b, algebra_gen: a, product, commutator })
}

/// All cross relations between the two generator sets, as rewrite rules in the global order.
pub fn cross_rewrite_system(
    algebra: &HopfPresentation,
    group: &HopfPresentation,
    table: &PairingTable,
) -> Result<(RewriteSystem, Vec<CrossRelation>), HopfError> {
    let engine = Pairing::new(group, algebra, table, PairingStrategy::AlgebraFirst);
    let mut rs = RewriteSystem::new(format!("cross({}, {})", group.name, algebra.name));
    let mut rels = Vec::new();
    for &b in &group.generators {
        for &a in &algebra.generators {
            let product = engine.cross_product(b, a)?;
            let commutator = engine.cross_commutator(b, a)?;
            rs.set_commutator(b, a, commutator.clone())?;
            rels.push(CrossRelation { group_gen: b, algebra_gen: a, product, commutator });
        }
    }
    Ok((rs, rels))
}

/// Heisenberg double: both sides' relations plus the derived cross relations.
pub fn double_rewrite_system(
    algebra: &HopfPresentation,
    group: &HopfPresentation,
    table: &PairingTable,
) -> Result<(RewriteSystem, Vec<CrossRelation>), HopfError> {
    let (cross, rels) = cross_rewrite_system(algebra, group, table)?;
    let mut rs = RewriteSystem::new(format!("H({}, {})", group.name, algebra.name));
    rs.extend_from(&group.rewrite);
    rs.extend_from(&algebra.rewrite);
    rs.extend_from(&cross);
    Ok((rs, rels))
}

type Tensor3 = BTreeMap<(Word, Word, Word), Scalar>;

fn add3(t: &mut Tensor3, k: (Word, Word, Word), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k.clone()).or_default();
    *e += &c;
    if e.is_zero() {
        t.remove(&k);
    }
}

fn render3(t: &Tensor3) -> String {
    let leg = |w: &Word| NCPoly::term(w.clone(), Scalar::one()).to_string();
    join_terms(t.iter().flat_map(|((a, b, c), s)| {
        let rest = format!("{} (x) {} (x) {}", leg(a), leg(b), leg(c));
        s.terms().map(move |((e, f), g)| render_term(g, *e, *f, &rest)).collect::<Vec<_>>()
    }))
}

fn all_words(gens: &[Gen], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &g in gens {
                let mut nw = w.clone();
                nw.push(g);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `(Delta (x) id) Delta(w) = (id (x) Delta) Delta(w)` for all words up to `max_len`.
pub fn check_coassociativity(h: &HopfPresentation, max_len: usize) -> Result<CheckReport, HopfError> {
    let eng = HopfEngine::new(h);
    let mut report = CheckReport::new(format!("coassociativity/{}", h.name));
    for w in all_words(&h.generators, max_len) {
        let d = eng.coproduct_word(&w)?;
        let mut diff = Tensor3::new();
        for ((l, r), c) in d.terms() {
            for ((l1, l2), c2) in eng.coproduct_word(l)?.terms() {
                add3(&mut diff, (l1.clone(), l2.clone(), r.clone()), c * c2);
            }
            for ((r1, r2), c2) in eng.coproduct_word(r)?.terms() {
                add3(&mut diff, (l.clone(), r1.clone(), r2.clone()), -(c * c2));
            }
        }
        let label = NCPoly::term(w.clone(), Scalar::one()).to_string();
        let first = diff.values().filter_map(Scalar::min_lambda).min();
        let mut item = CheckItem::pass(format!("coassoc:{label}"), label);
        if !diff.is_empty() {
            item = CheckItem::failed(item.id, item.inputs, render3(&diff));
            item.first_failure_order = first;
        }
        report.push(item);
    }
    Ok(report)
}

/// `(eps (x) id) Delta(g) = g = (id (x) eps) Delta(g)` on every generator.
pub fn check_counit(h: &HopfPresentation) -> Result<CheckReport, HopfError> {
    let eng = HopfEngine::new(h);
    let mut report = CheckReport::new(format!("counit/{}", h.name));
    for &g in &h.generators {
        let d = eng.coproduct_word(&[g])?;
        let left = d.contract_left(|w| h.counit_word(w))?;
        let right = d.contract_right(|w| h.counit_word(w))?;
        let gp = NCPoly::gen(g);
        report.push(CheckItem::from_poly(format!("counit-left:{g}"), g.name(), &(&left - &gp)));
        report.push(CheckItem::from_poly(format!("counit-right:{g}"), g.name(), &(&right - &gp)));
    }
    Ok(report)
}

/// For every rule `g h = h g + r`: `Delta(g) Delta(h) - Delta(h) Delta(g) - Delta(r) = 0`.
pub fn check_bialgebra_compat(h: &HopfPresentation) -> Result<CheckReport, HopfError> {
    check_bialgebra_compat_modulo(h, &TensorPoly::is_zero)
}

/// As [`check_bialgebra_compat`], but a residual passes when `holds` accepts it (used for
/// relations that are only implied by the presentation, not rewritten by it).
pub fn check_bialgebra_compat_modulo(
    h: &HopfPresentation,
    holds: &dyn Fn(&TensorPoly) -> bool,
) -> Result<CheckReport, HopfError> {
    let eng = HopfEngine::new(h);
    let mut report = CheckReport::new(format!("bialgebra/{}", h.name));
    for ((g, k), rem) in h.rewrite.sorted_rules() {
        if !h.contains(g) || !h.contains(k) {
            continue;
        }
        let dg = eng.coproduct_word(&[g])?;
        let dk = eng.coproduct_word(&[k])?;
        let lhs = eng.normal_legs(&(&dg.multiply(&dk) - &dk.multiply(&dg)))?;
        let rhs = eng.coproduct(&rem)?;
        let residual = &lhs - &rhs;
        let (id, inputs) = (format!("delta-hom:[{g},{k}]"), format!("[{g}, {k}] = {rem}"));
        if holds(&residual) {
            report.push(CheckItem::pass(id, inputs));
        } else {
            report.push(CheckItem::from_tensor(id, inputs, &residual));
        }
    }
    Ok(report)
}

/// Both pairing recursions agree on each sample pair.
pub fn check_pairing_bilinearity(
    table: &PairingTable,
    algebra: &HopfPresentation,
    group: &HopfPresentation,
    samples: &[(NCPoly, NCPoly)],
) -> Result<CheckReport, HopfError> {
    let gf = Pairing::new(group, algebra, table, PairingStrategy::GroupFirst);
    let af = Pairing::new(group, algebra, table, PairingStrategy::AlgebraFirst);
    let mut report = CheckReport::new("pairing-recursions");
    for (k, (b, a)) in samples.iter().enumerate() {
        let v1 = gf.pair(b, a)?;
        let v2 = af.pair(b, a)?;
        report.push(CheckItem::from_scalar(format!("pair-agree:{k}"), format!("<{b}, {a}> = {v1}"), &(&v1 - &v2)));
    }
    Ok(report)
}

/// One-shot pairing (group-first recursion).
pub fn pair(
    b: &NCPoly,
    a: &NCPoly,
    table: &PairingTable,
    algebra: &HopfPresentation,
    group: &HopfPresentation,
) -> Result<Scalar, HopfError> {
    Pairing::new(group, algebra, table, PairingStrategy::GroupFirst).pair(b, a)
}
