//! Free associative algebra over [`Scalar`] and a normal-ordering rewrite engine.
//!
//! Generators carry a fixed global order (coordinates leftmost, `P0` rightmost).
//! A [`RewriteSystem`] holds one rule per out-of-order pair `g > h`:
//! `g h -> h g + remainder`. Normal forms are computed by repeatedly swapping the
//! leftmost descent; confluence is checked, not assumed.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::scalars::{join_terms, render_term, truncation, Gauss, Scalar, Truncation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcError {
    #[error("no rewrite rule for out-of-order pair {0} {1}")]
    MissingRule(String, String),
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("rule for {0} {1} is not an out-of-order pair")]
    RuleNotDescending(String, String),
    #[error("rule remainder for {0} {1} has graded degree {2} (must be < 2)")]
    RuleDegree(String, String, i32),
    #[error("rewrite step budget {0} exceeded")]
    StepBudget(usize),
}

/// Role of a generator; used for reporting and for splitting double presentations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenClass {
    CoordinateTime,
    CoordinateSpace,
    LorentzMatrix,
    Boost,
    Rotation,
    MomentumTime,
    MomentumSpace,
    Auxiliary,
}

/// An algebra generator.
///
/// `M(a, b)` is stored with `a < b`; `Lambda(mu, nu)` is the matrix entry with upper `mu`
/// and lower `nu`. `X(mu)` is a coordinate whose index position (upper or lowered) is fixed by
/// the presentation it belongs to. `Xh`/`Ph` are canonical Weyl pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    X(u8),
    Xh(u8),
    Lambda(u8, u8),
    M(u8, u8),
    P(u8),
    Ph(u8),
}

impl Gen {
    /// Rank in the global total order.
    pub fn order_weight(&self) -> u32 {
        // momenta: P1 < P2 < P3 < P0
        let mom = |m: u8| if m == 0 { 3 } else { m as u32 - 1 };
        match *self {
            Gen::X(m) => m as u32,
            Gen::Xh(m) => 4 + m as u32,
            Gen::Lambda(m, n) => 10 + 4 * m as u32 + n as u32,
            Gen::M(a, b) => {
                if a == 0 {
                    30 + b as u32 + 2
                } else {
                    30 + a as u32 + b as u32 - 3
                }
            }
            Gen::P(m) => 40 + mom(m),
            Gen::Ph(m) => 44 + mom(m),
        }
    }

    pub fn class(&self) -> GenClass {
        match *self {
            Gen::X(0) => GenClass::CoordinateTime,
            Gen::X(_) => GenClass::CoordinateSpace,
            Gen::Lambda(..) => GenClass::LorentzMatrix,
            Gen::M(0, _) => GenClass::Boost,
            Gen::M(..) => GenClass::Rotation,
            Gen::P(0) => GenClass::MomentumTime,
            Gen::P(_) => GenClass::MomentumSpace,
            Gen::Xh(_) | Gen::Ph(_) => GenClass::Auxiliary,
        }
    }

    pub fn indices(&self) -> Vec<u8> {
        match *self {
            Gen::X(m) | Gen::Xh(m) | Gen::P(m) | Gen::Ph(m) => vec![m],
            Gen::Lambda(a, b) | Gen::M(a, b) => vec![a, b],
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Gen::X(m) => format!("x{m}"),
            Gen::Xh(m) => format!("xh{m}"),
            Gen::Lambda(a, b) => format!("L[{a},{b}]"),
            Gen::M(a, b) => format!("M[{a},{b}]"),
            Gen::P(m) => format!("P{m}"),
            Gen::Ph(m) => format!("ph{m}"),
        }
    }

    /// `M_{ab}` for arbitrary indices as a polynomial (antisymmetry applied; zero when `a == b`).
    pub fn m_poly(a: u8, b: u8) -> NCPoly {
        match a.cmp(&b) {
            Ordering::Less => NCPoly::gen(Gen::M(a, b)),
            Ordering::Greater => -NCPoly::gen(Gen::M(b, a)),
            Ordering::Equal => NCPoly::zero(),
        }
    }
}

impl PartialOrd for Gen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_weight().cmp(&other.order_weight())
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub type Word = Vec<Gen>;

pub fn word_is_ordered(w: &[Gen]) -> bool {
    w.windows(2).all(|p| p[0] <= p[1])
}

fn render_word(w: &[Gen]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = i;
        while j < w.len() && w[j] == w[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(w[i].name());
        } else {
            parts.push(format!("{}^{}", w[i].name(), j - i));
        }
        i = j;
    }
    parts.join(" ")
}

/// Noncommutative polynomial: finite sum of scalar-weighted words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::scalar(Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        NCPoly::term(Vec::new(), s)
    }

    pub fn gen(g: Gen) -> Self {
        NCPoly::term(vec![g], Scalar::one())
    }

    pub fn term(w: Word, s: Scalar) -> Self {
        let mut p = NCPoly::zero();
        if !s.is_zero() {
            p.terms.insert(w, s);
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = NCPoly::zero();
        for (w, s) in terms {
            p.add_term(w, &s);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(cur) => {
                *cur += s;
                if cur.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, s.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, Scalar)> {
        self.terms.into_iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[Gen]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Coefficient of the empty word.
    pub fn constant(&self) -> Scalar {
        self.coeff(&[])
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| word_is_ordered(w))
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn scale(&self, s: &Scalar) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c * s)))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    /// Drops every coefficient term above `lam^order`.
    pub fn truncated(&self, order: i32) -> NCPoly {
        self.map_coeffs(|c| c.truncated(order))
    }

    /// `lam -> 0` limit.
    pub fn classical(&self) -> NCPoly {
        self.map_coeffs(Scalar::classical)
    }

    /// Lowest `lam` power among all coefficients.
    pub fn first_order(&self) -> Option<i32> {
        self.terms.values().filter_map(Scalar::min_lambda).min()
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut gs: Vec<Gen> = self.terms.keys().flatten().copied().collect();
        gs.sort();
        gs.dedup();
        gs
    }

    /// Free-algebra product (concatenation); not normal-ordered.
    pub fn multiply(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let c = c1 * c2;
                if c.is_zero() {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, &c);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> NCPoly {
        let mut acc = NCPoly::one();
        for _ in 0..e {
            acc = acc.multiply(self);
        }
        acc
    }
}

impl AddAssign<&NCPoly> for NCPoly {
    fn add_assign(&mut self, o: &NCPoly) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), c);
        }
    }
}

impl SubAssign<&NCPoly> for NCPoly {
    fn sub_assign(&mut self, o: &NCPoly) {
        for (w, c) in &o.terms {
            self.add_term(w.clone(), &-c);
        }
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for NCPoly {
    type Output = NCPoly;
    fn add(mut self, o: NCPoly) -> NCPoly {
        self += &o;
        self
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(mut self, o: NCPoly) -> NCPoly {
        self -= &o;
        self
    }
}

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect() }
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -self.clone()
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, o: &NCPoly) -> NCPoly {
        self.multiply(o)
    }
}

impl Mul<&NCPoly> for &Scalar {
    type Output = NCPoly;
    fn mul(self, p: &NCPoly) -> NCPoly {
        p.scale(self)
    }
}

/// Canonical rendering: one `(a+bi) hbar^n lam^m word` per coefficient monomial, sorted by
/// word and then exponents, joined by ` + `.
impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().flat_map(|(w, c)| {
            let rest = render_word(w);
            c.terms().map(move |((a, b), g)| render_term(g, *a, *b, &rest)).collect::<Vec<_>>()
        });
        f.write_str(&join_terms(terms))
    }
}

/// Sum of scalar-weighted `left (x) right` word pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorPoly {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorPoly {
    pub fn zero() -> Self {
        TensorPoly::default()
    }

    /// `1 (x) 1`
    pub fn one() -> Self {
        TensorPoly::tensor(&NCPoly::one(), &NCPoly::one())
    }

    pub fn tensor(a: &NCPoly, b: &NCPoly) -> Self {
        let mut out = TensorPoly::zero();
        for (w1, c1) in a.terms() {
            for (w2, c2) in b.terms() {
                out.add_term(w1.clone(), w2.clone(), &(c1 * c2));
            }
        }
        out
    }

    pub fn add_term(&mut self, l: Word, r: Word, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        let key = (l, r);
        match self.terms.get_mut(&key) {
            Some(cur) => {
                *cur += s;
                if cur.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, s.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), r.clone(), &(c * s));
        }
        out
    }

    /// Componentwise product `(a (x) b)(c (x) d) = ac (x) bd` in the free algebra.
    pub fn multiply(&self, o: &TensorPoly) -> TensorPoly {
        let mut out = TensorPoly::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &o.terms {
                let c = c1 * c2;
                if c.is_zero() {
                    continue;
                }
                let mut l = l1.clone();
                l.extend_from_slice(l2);
                let mut r = r1.clone();
                r.extend_from_slice(r2);
                out.add_term(l, r, &c);
            }
        }
        out
    }

    /// Applies linear maps to each leg: `sum c f(l) (x) g(r)`.
    pub fn map_legs<E>(
        &self,
        mut left: impl FnMut(&Word) -> Result<NCPoly, E>,
        mut right: impl FnMut(&Word) -> Result<NCPoly, E>,
    ) -> Result<TensorPoly, E> {
        let mut out = TensorPoly::zero();
        for ((l, r), c) in &self.terms {
            let lp = left(l)?;
            let rp = right(r)?;
            for (lw, lc) in lp.terms() {
                for (rw, rc) in rp.terms() {
                    out.add_term(lw.clone(), rw.clone(), &(&(c * lc) * rc));
                }
            }
        }
        Ok(out)
    }

    /// Contracts the left leg with a scalar functional.
    pub fn contract_left<E>(&self, mut f: impl FnMut(&Word) -> Result<Scalar, E>) -> Result<NCPoly, E> {
        let mut out = NCPoly::zero();
        for ((l, r), c) in &self.terms {
            let s = f(l)?;
            out.add_term(r.clone(), &(c * &s));
        }
        Ok(out)
    }

    /// Contracts the right leg with a scalar functional.
    pub fn contract_right<E>(&self, mut f: impl FnMut(&Word) -> Result<Scalar, E>) -> Result<NCPoly, E> {
        let mut out = NCPoly::zero();
        for ((l, r), c) in &self.terms {
            let s = f(r)?;
            out.add_term(l.clone(), &(c * &s));
        }
        Ok(out)
    }

    pub fn first_order(&self) -> Option<i32> {
        self.terms.values().filter_map(Scalar::min_lambda).min()
    }
}

impl AddAssign<&TensorPoly> for TensorPoly {
    fn add_assign(&mut self, o: &TensorPoly) {
        for ((l, r), c) in &o.terms {
            self.add_term(l.clone(), r.clone(), c);
        }
    }
}

impl Sub for &TensorPoly {
    type Output = TensorPoly;
    fn sub(self, o: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        for ((l, r), c) in &o.terms {
            out.add_term(l.clone(), r.clone(), &-c);
        }
        out
    }
}

impl Add for &TensorPoly {
    type Output = TensorPoly;
    fn add(self, o: &TensorPoly) -> TensorPoly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let leg = |w: &Word| if w.is_empty() { "1".to_string() } else { render_word(w) };
        let terms = self.terms.iter().flat_map(|((l, r), c)| {
            let rest = format!("{} (x) {}", leg(l), leg(r));
            c.terms().map(move |((a, b), g)| render_term(g, *a, *b, &rest)).collect::<Vec<_>>()
        });
        f.write_str(&join_terms(terms))
    }
}

/// Metric signature `diag(-1, 1, 1, 1)`.
pub fn metric(mu: u8, nu: u8) -> i64 {
    match (mu, nu) {
        (0, 0) => -1,
        (a, b) if a == b => 1,
        _ => 0,
    }
}

pub fn delta(a: u8, b: u8) -> i64 {
    i64::from(a == b)
}

/// Commutation rules `g h -> h g + remainder` for every pair `g > h` that may occur.
#[derive(Debug, Clone, Default)]
pub struct RewriteSystem {
    pub name: String,
    rules: HashMap<(Gen, Gen), NCPoly>,
}

impl RewriteSystem {
    pub fn new(name: impl Into<String>) -> Self {
        RewriteSystem { name: name.into(), rules: HashMap::new() }
    }

    /// Installs `g h = h g + remainder` for `g > h`.
    pub fn add_rule(&mut self, g: Gen, h: Gen, remainder: NCPoly) -> Result<(), NcError> {
        if g <= h {
            return Err(NcError::RuleNotDescending(g.name(), h.name()));
        }
        for (w, c) in remainder.terms() {
            let graded = w.len() as i32 - c.min_lambda().unwrap_or(0);
            if graded >= 2 {
                return Err(NcError::RuleDegree(g.name(), h.name(), graded));
            }
        }
        self.rules.insert((g, h), remainder);
        Ok(())
    }

    /// Installs the relation `[a, b] = c` for distinct `a`, `b` in whichever orientation
    /// the global order requires.
    pub fn set_commutator(&mut self, a: Gen, b: Gen, c: NCPoly) -> Result<(), NcError> {
        match a.cmp(&b) {
            Ordering::Greater => self.add_rule(a, b, c),
            Ordering::Less => self.add_rule(b, a, -c),
            Ordering::Equal => Ok(()),
        }
    }

    pub fn commute(&mut self, a: Gen, b: Gen) -> Result<(), NcError> {
        self.set_commutator(a, b, NCPoly::zero())
    }

    pub fn rule(&self, g: Gen, h: Gen) -> Option<&NCPoly> {
        self.rules.get(&(g, h))
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(Gen, Gen), &NCPoly)> {
        self.rules.iter()
    }

    /// Rules sorted by pair, for stable output.
    pub fn sorted_rules(&self) -> Vec<((Gen, Gen), NCPoly)> {
        let mut v: Vec<_> = self.rules.iter().map(|(k, p)| (*k, p.clone())).collect();
        v.sort_by_key(|a| a.0);
        v
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut gs: Vec<Gen> = self.rules.keys().flat_map(|(a, b)| [*a, *b]).collect();
        gs.sort();
        gs.dedup();
        gs
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Adds every rule of `other`, replacing clashes.
    pub fn extend_from(&mut self, other: &RewriteSystem) {
        for (k, v) in &other.rules {
            self.rules.insert(*k, v.clone());
        }
    }

    /// The same rules with every coefficient sent to `lam = 0`.
    pub fn classical(&self) -> RewriteSystem {
        RewriteSystem {
            name: format!("{} (classical)", self.name),
            rules: self.rules.iter().map(|(k, v)| (*k, v.classical())).collect(),
        }
    }
}

/// Normal-ordering engine with a word cache; one instance per rewrite system and truncation.
pub struct NormalOrderer<'a> {
    rs: &'a RewriteSystem,
    trunc: Truncation,
    cache: RefCell<HashMap<Word, NCPoly>>,
    steps: RefCell<usize>,
}

impl<'a> NormalOrderer<'a> {
    pub fn new(rs: &'a RewriteSystem) -> Self {
        NormalOrderer { rs, trunc: truncation(), cache: RefCell::new(HashMap::new()), steps: RefCell::new(0) }
    }

    pub fn system(&self) -> &RewriteSystem {
        self.rs
    }

    /// Number of swap steps performed so far (cache hits excluded).
    pub fn steps(&self) -> usize {
        *self.steps.borrow()
    }

    pub fn normal_order(&self, p: &NCPoly) -> Result<NCPoly, NcError> {
        assert_eq!(self.trunc, truncation(), "normal orderer used under a different truncation");
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let budget = 20_000 * (w.len() + 1).pow(2) * (self.trunc.order.max(0) as usize + 1);
            let start = self.steps();
            let nf = self.word(w, start + budget)?;
            out += &nf.scale(c);
        }
        Ok(out)
    }

    pub fn normal_order_word(&self, w: &[Gen]) -> Result<NCPoly, NcError> {
        self.normal_order(&NCPoly::term(w.to_vec(), Scalar::one()))
    }

    fn word(&self, w: &[Gen], limit: usize) -> Result<NCPoly, NcError> {
        if let Some(hit) = self.cache.borrow().get(w) {
            return Ok(hit.clone());
        }
        let Some(i) = w.windows(2).position(|p| p[0] > p[1]) else {
            return Ok(NCPoly::term(w.to_vec(), Scalar::one()));
        };
        {
            let mut s = self.steps.borrow_mut();
            *s += 1;
            if *s > limit {
                return Err(NcError::StepBudget(limit));
            }
        }
        let (g, h) = (w[i], w[i + 1]);
        let rem = self.rs.rule(g, h).ok_or_else(|| NcError::MissingRule(g.name(), h.name()))?;
        let mut swapped = w.to_vec();
        swapped.swap(i, i + 1);
        let mut out = self.word(&swapped, limit)?;
        for (u, c) in rem.terms() {
            let mut nw = w[..i].to_vec();
            nw.extend_from_slice(u);
            nw.extend_from_slice(&w[i + 2..]);
            let nf = self.word(&nw, limit)?;
            out += &nf.scale(c);
        }
        self.cache.borrow_mut().insert(w.to_vec(), out.clone());
        Ok(out)
    }

    pub fn commutator(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly, NcError> {
        self.normal_order(&(&a.multiply(b) - &b.multiply(a)))
    }

    /// Normal-ordered product.
    pub fn product(&self, a: &NCPoly, b: &NCPoly) -> Result<NCPoly, NcError> {
        self.normal_order(&a.multiply(b))
    }

    /// `[a, [b, c]] + [b, [c, a]] + [c, [a, b]]`
    pub fn jacobi(&self, a: &NCPoly, b: &NCPoly, c: &NCPoly) -> Result<NCPoly, NcError> {
        let t1 = self.commutator(a, &self.commutator(b, c)?)?;
        let t2 = self.commutator(b, &self.commutator(c, a)?)?;
        let t3 = self.commutator(c, &self.commutator(a, b)?)?;
        Ok(&(&t1 + &t2) + &t3)
    }

    /// Diamond check on a descending triple `g > h > k`: normal form after swapping `g h`
    /// first minus normal form after swapping `h k` first.
    pub fn diamond(&self, g: Gen, h: Gen, k: Gen) -> Result<NCPoly, NcError> {
        let rule = |a: Gen, b: Gen| self.rs.rule(a, b).ok_or_else(|| NcError::MissingRule(a.name(), b.name()));
        let left = {
            let rem = rule(g, h)?;
            let swapped = NCPoly::term(vec![h, g, k], Scalar::one());
            &swapped + &rem.multiply(&NCPoly::gen(k))
        };
        let right = {
            let rem = rule(h, k)?;
            let swapped = NCPoly::term(vec![g, k, h], Scalar::one());
            &swapped + &NCPoly::gen(g).multiply(rem)
        };
        Ok(&self.normal_order(&left)? - &self.normal_order(&right)?)
    }

    /// Homomorphic image of `p` under `images`, normal-ordered here.
    pub fn substitute(&self, p: &NCPoly, images: &HashMap<Gen, NCPoly>) -> Result<NCPoly, NcError> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NCPoly::scalar(c.clone());
            for g in w {
                let img = images.get(g).ok_or_else(|| NcError::MissingImage(g.name()))?;
                acc = self.normal_order(&acc.multiply(img))?;
            }
            out += &acc;
        }
        Ok(out)
    }
}

/// One-shot normal ordering.
pub fn normal_order(p: &NCPoly, rs: &RewriteSystem) -> Result<NCPoly, NcError> {
    NormalOrderer::new(rs).normal_order(p)
}

/// One-shot commutator `normal_order(ab - ba)`.
pub fn commutator(a: &NCPoly, b: &NCPoly, rs: &RewriteSystem) -> Result<NCPoly, NcError> {
    NormalOrderer::new(rs).commutator(a, b)
}

pub fn substitute(p: &NCPoly, images: &HashMap<Gen, NCPoly>, rs: &RewriteSystem) -> Result<NCPoly, NcError> {
    NormalOrderer::new(rs).substitute(p, images)
}

/// `c * hbar^a * lam^b` as a constant polynomial.
pub fn cpoly(c: Gauss, a: i32, b: i32) -> NCPoly {
    NCPoly::scalar(Scalar::monomial(c, a, b))
}

/// `exp(t * P0)` truncated to the active order, where `t` has positive `lam` order.
pub fn exp_series(t: &Scalar, x: &NCPoly) -> NCPoly {
    let order = truncation().order;
    let mut acc = NCPoly::one();
    let mut term = NCPoly::one();
    for k in 1..=(order + truncation().floor + 2) {
        let step = x.scale(t).scale(&Scalar::ratio(1, k as i64));
        term = term.multiply(&step);
        if term.is_zero() {
            break;
        }
        acc += &term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> RewriteSystem {
        let mut rs = RewriteSystem::new("toy");
        // [x_k, P_l] = i hbar delta_kl, everything else commuting
        for k in 0..4u8 {
            for l in 0..4u8 {
                let c = if k == l && k != 0 { cpoly(Gauss::i(), 1, 0) } else { NCPoly::zero() };
                rs.set_commutator(Gen::X(k), Gen::P(l), c).unwrap();
                if k < l {
                    rs.commute(Gen::X(k), Gen::X(l)).unwrap();
                    rs.commute(Gen::P(k), Gen::P(l)).unwrap();
                }
            }
        }
        rs
    }

    #[test]
    fn global_order() {
        let mut gs = vec![Gen::P(0), Gen::P(1), Gen::M(0, 1), Gen::M(1, 2), Gen::Lambda(0, 0), Gen::X(3), Gen::X(0)];
        gs.sort();
        assert_eq!(
            gs,
            vec![Gen::X(0), Gen::X(3), Gen::Lambda(0, 0), Gen::M(1, 2), Gen::M(0, 1), Gen::P(1), Gen::P(0)]
        );
        let all: Vec<u32> = [Gen::M(1, 2), Gen::M(1, 3), Gen::M(2, 3), Gen::M(0, 1), Gen::M(0, 2), Gen::M(0, 3)]
            .iter()
            .map(Gen::order_weight)
            .collect();
        assert_eq!(all, vec![30, 31, 32, 33, 34, 35]);
    }

    #[test]
    fn multiply_examples() {
        let p0 = NCPoly::gen(Gen::P(0));
        assert_eq!(NCPoly::one().multiply(&p0), p0);
        let x = cpoly(Gauss::i(), 1, 0).multiply(&NCPoly::gen(Gen::X(0)));
        let p = cpoly(Gauss::one(), 0, 1).multiply(&NCPoly::gen(Gen::P(1)));
        let prod = x.multiply(&p);
        assert_eq!(prod.coeff(&[Gen::X(0), Gen::P(1)]), Scalar::monomial(Gauss::i(), 1, 1));
        assert_eq!(prod.len(), 1);
    }

    #[test]
    fn normal_order_swaps_and_reports_missing() {
        let rs = heisenberg();
        let w = NCPoly::term(vec![Gen::P(1), Gen::X(1)], Scalar::one());
        let nf = normal_order(&w, &rs).unwrap();
        let expect = &NCPoly::term(vec![Gen::X(1), Gen::P(1)], Scalar::one()) - &cpoly(Gauss::i(), 1, 0);
        assert_eq!(nf, expect);

        let bad = NCPoly::term(vec![Gen::M(0, 1), Gen::M(1, 2)], Scalar::one());
        assert!(matches!(normal_order(&bad, &rs), Err(NcError::MissingRule(..))));
    }

    #[test]
    fn rule_degree_guard() {
        let mut rs = RewriteSystem::new("bad");
        let quad = NCPoly::term(vec![Gen::P(1), Gen::P(1)], Scalar::one());
        assert!(matches!(rs.set_commutator(Gen::X(1), Gen::P(1), quad), Err(NcError::RuleDegree(..))));
        let quad_lam = NCPoly::term(vec![Gen::P(1), Gen::P(1)], Scalar::lam());
        assert!(rs.set_commutator(Gen::X(1), Gen::P(1), quad_lam).is_ok());
        assert!(matches!(rs.add_rule(Gen::X(0), Gen::P(0), NCPoly::zero()), Err(NcError::RuleNotDescending(..))));
    }

    #[test]
    fn display_renders_powers() {
        let p = NCPoly::term(vec![Gen::X(0), Gen::X(0), Gen::P(1)], Scalar::monomial(Gauss::ratio(1, 2), -1, 2));
        assert_eq!(p.to_string(), "1/2 hbar^-1 lam^2 x0^2 P1");
        assert_eq!(NCPoly::zero().to_string(), "0");
    }

    #[test]
    fn exp_series_truncates() {
        let t = Scalar::monomial(Gauss::int(-1, 0), -1, 1);
        let e = exp_series(&t, &NCPoly::gen(Gen::P(0)));
        assert_eq!(e.len(), 7);
        assert_eq!(e.coeff(&[Gen::P(0), Gen::P(0)]), Scalar::monomial(Gauss::ratio(1, 2), -2, 2));
    }

    #[test]
    fn tensor_product_is_componentwise() {
        let a = TensorPoly::tensor(&NCPoly::gen(Gen::P(0)), &NCPoly::one());
        let b = TensorPoly::tensor(&NCPoly::one(), &NCPoly::gen(Gen::P(0)));
        let ab = a.multiply(&b);
        assert_eq!(ab, TensorPoly::tensor(&NCPoly::gen(Gen::P(0)), &NCPoly::gen(Gen::P(0))));
    }
}
