//! Exact coefficients: Gaussian rationals times monomials `hbar^a lam^b`,
//! where `lam = 1/kappa` is the deformation parameter.
//!
//! The `lam` direction is a truncated series. Products with a `lam` power above
//! the active truncation order vanish, and powers below `-floor` are rejected.
//! The truncation is a per-thread setting; see [`with_truncation`].

use std::cell::Cell;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("lambda power {power} is below the configured floor -{floor}")]
    BelowFloor { power: i32, floor: i32 },
    #[error("invalid truncation: order {order}, floor {floor}")]
    BadTruncation { order: i32, floor: i32 },
    #[error("not divisible by lambda: the lambda^0 component is {0}")]
    NotDivisible(String),
    #[error("scalar {0} has no inverse in the truncated ring")]
    NotInvertible(String),
    #[error("linear system is singular (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },
}

/// Truncation order `N` and intermediate floor `L` for the `lam` series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    pub order: i32,
    pub floor: i32,
}

impl Truncation {
    pub const DEFAULT: Truncation = Truncation { order: 6, floor: 1 };

    pub fn new(order: i32, floor: i32) -> Result<Self, ScalarError> {
        if order < 0 || floor < 0 {
            return Err(ScalarError::BadTruncation { order, floor });
        }
        Ok(Truncation { order, floor })
    }

    pub fn with_order(order: i32) -> Self {
        Truncation { order, floor: Self::DEFAULT.floor }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self::DEFAULT
    }
}

thread_local! {
    static ACTIVE: Cell<Truncation> = const { Cell::new(Truncation::DEFAULT) };
}

/// The truncation in effect on this thread.
pub fn truncation() -> Truncation {
    ACTIVE.with(|c| c.get())
}

/// Runs `f` with `t` as the active truncation, restoring the previous one afterwards
/// (also on unwind).
pub fn with_truncation<R>(t: Truncation, f: impl FnOnce() -> R) -> R {
    struct Restore(Truncation);
    impl Drop for Restore {
        fn drop(&mut self) {
            ACTIVE.with(|c| c.set(self.0));
        }
    }
    let _guard = Restore(ACTIVE.with(|c| c.replace(t)));
    f()
}

/// Exact complex rational `re + im i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gauss {
    pub re: BigRational,
    pub im: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Gauss {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    pub fn int(re: i64, im: i64) -> Self {
        Gauss { re: rat(re), im: rat(im) }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Gauss {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Gauss::int(0, 0)
    }

    pub fn one() -> Self {
        Gauss::int(1, 0)
    }

    pub fn i() -> Self {
        Gauss::int(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Gauss { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn mul_ref(&self, o: &Gauss) -> Gauss {
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn pow(&self, e: u32) -> Gauss {
        let mut acc = Gauss::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Gauss {
    type Output = Gauss;
    fn sub(self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re, im: -self.im }
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        self.mul_ref(o)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = render_term(self, 0, 0, "");
        write!(f, "{}{body}", if neg { "-" } else { "" })
    }
}

/// Canonical text of `c hbar^a lam^b rest` as `(negative, magnitude)`. Factors are separated
/// by spaces; a mixed complex coefficient is parenthesized.
pub fn render_term(c: &Gauss, a: i32, b: i32, rest: &str) -> (bool, String) {
    let mut parts = Vec::new();
    let mut neg = false;
    let unit = |r: &BigRational| r.abs().is_one();
    if c.im.is_zero() {
        neg = c.re.is_negative();
        if !unit(&c.re) {
            parts.push(fmt_rat(&c.re.abs()));
        }
    } else if c.re.is_zero() {
        neg = c.im.is_negative();
        if !unit(&c.im) {
            parts.push(fmt_rat(&c.im.abs()));
        }
        parts.push("i".to_string());
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        let im = if unit(&c.im) { "i".to_string() } else { format!("{} i", fmt_rat(&c.im.abs())) };
        parts.push(format!("({} {sign} {im})", fmt_rat(&c.re)));
    }
    for (name, e) in [("hbar", a), ("lam", b)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    if !rest.is_empty() {
        parts.push(rest.to_string());
    }
    if parts.is_empty() {
        parts.push("1".to_string());
    }
    (neg, parts.join(" "))
}

/// Joins rendered terms with ` + ` / ` - `; `0` when empty.
pub fn join_terms(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (neg, body) in terms {
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Exponent pair `(hbar power, lam power)`.
pub type Exponents = (i32, i32);

/// Finite sum of `c * hbar^a * lam^b` with Gaussian-rational `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    terms: BTreeMap<Exponents, Gauss>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::monomial(Gauss::one(), 0, 0)
    }

    pub fn i() -> Self {
        Scalar::monomial(Gauss::i(), 0, 0)
    }

    pub fn hbar() -> Self {
        Scalar::monomial(Gauss::one(), 1, 0)
    }

    pub fn lam() -> Self {
        Scalar::monomial(Gauss::one(), 0, 1)
    }

    pub fn int(n: i64) -> Self {
        Scalar::monomial(Gauss::int(n, 0), 0, 0)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::monomial(Gauss::ratio(num, den), 0, 0)
    }

    pub fn gauss(c: Gauss) -> Self {
        Scalar::monomial(c, 0, 0)
    }

    /// `c * hbar^a * lam^b`. Terms above the truncation order give zero.
    ///
    /// Panics when `b` is below the floor; use [`Scalar::try_monomial`] to get an error instead.
    pub fn monomial(c: Gauss, a: i32, b: i32) -> Self {
        Self::try_monomial(c, a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_monomial(c: Gauss, a: i32, b: i32) -> Result<Self, ScalarError> {
        let t = truncation();
        if b < -t.floor {
            return Err(ScalarError::BelowFloor { power: b, floor: t.floor });
        }
        let mut s = Scalar::zero();
        if b <= t.order && !c.is_zero() {
            s.terms.insert((a, b), c);
        }
        Ok(s)
    }

    /// Builds a scalar from raw terms, dropping zeros and terms above the truncation order.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Gauss)>) -> Result<Self, ScalarError> {
        let mut s = Scalar::zero();
        for ((a, b), c) in terms {
            s += &Scalar::try_monomial(c, a, b)?;
        }
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| *c == Gauss::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Gauss)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_lambda(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).min()
    }

    pub fn max_lambda(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// The part of `self` carrying exactly `lam^b` (as a scalar still containing `lam^b`).
    pub fn lambda_part(&self, b: i32) -> Scalar {
        Scalar {
            terms: self.terms.iter().filter(|(k, _)| k.1 == b).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Drops every term with `lam` power above `order`.
    pub fn truncated(&self, order: i32) -> Scalar {
        Scalar {
            terms: self.terms.iter().filter(|(k, _)| k.1 <= order).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Sets `lam = 0`.
    pub fn classical(&self) -> Scalar {
        self.lambda_part(0)
    }

    pub fn scale(&self, c: &Gauss) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiplies by `hbar^a lam^b`.
    pub fn shift(&self, a: i32, b: i32) -> Scalar {
        let mut out = Scalar::zero();
        for ((ha, lb), c) in &self.terms {
            out += &Scalar::monomial(c.clone(), ha + a, lb + b);
        }
        out
    }

    /// The same series with `hbar = 1`.
    pub fn unit_hbar(&self) -> Scalar {
        let mut out = Scalar::zero();
        for ((_, lb), c) in &self.terms {
            out += &Scalar::monomial(c.clone(), 0, *lb);
        }
        out
    }

    /// Exact division by `lam`; requires the `lam^0` component to vanish.
    pub fn divide_by_lambda(&self) -> Result<Scalar, ScalarError> {
        let constant = self.lambda_part(0);
        if !constant.is_zero() {
            return Err(ScalarError::NotDivisible(constant.to_string()));
        }
        Scalar::from_terms(self.terms.iter().map(|(k, v)| ((k.0, k.1 - 1), v.clone())))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Series inverse. Exists when the lowest-`lam` component is a single `c hbar^a` term.
    pub fn try_inverse(&self) -> Result<Scalar, ScalarError> {
        let not_inv = || ScalarError::NotInvertible(self.to_string());
        let low = self.min_lambda().ok_or_else(not_inv)?;
        let lead = self.lambda_part(low);
        if lead.len() != 1 {
            return Err(not_inv());
        }
        let (&(a, b), c) = lead.terms.iter().next().unwrap();
        let c_inv = c.inverse().ok_or_else(not_inv)?;
        let lead_inv = Scalar::try_monomial(c_inv, -a, -b)?;
        // self = lead (1 + r) with r of positive lam order; 1/(1+r) = sum (-r)^k.
        let r = &(&lead_inv * self) - &Scalar::one();
        let order = truncation().order;
        let mut acc = Scalar::one();
        let mut power = Scalar::one();
        let minus_r = -r;
        for _ in 0..=(order + truncation().floor + 1) {
            power = &power * &minus_r;
            if power.is_zero() {
                break;
            }
            acc += &power;
        }
        Ok(&acc * &lead_inv)
    }

    /// Numerical value at given `hbar` and `lam`.
    pub fn eval(&self, hbar: f64, lam: f64) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for ((a, b), c) in &self.terms {
            let f = hbar.powi(*a) * lam.powi(*b);
            let (cr, ci) = c.to_f64();
            re += cr * f;
            im += ci * f;
        }
        (re, im)
    }

    /// Lowest `lam` power whose component is nonzero; used to report where a residual starts.
    pub fn first_order(&self) -> Option<i32> {
        self.min_lambda()
    }
}

impl From<Gauss> for Scalar {
    fn from(c: Gauss) -> Self {
        Scalar::gauss(c)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        for (k, v) in &o.terms {
            match self.terms.get_mut(k) {
                Some(cur) => {
                    let sum = &*cur + v;
                    if sum.is_zero() {
                        self.terms.remove(k);
                    } else {
                        *cur = sum;
                    }
                }
                None => {
                    self.terms.insert(*k, v.clone());
                }
            }
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self += &(-o.clone());
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, o: Scalar) -> Scalar {
        self += &o;
        self
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, o: Scalar) -> Scalar {
        self -= &o;
        self
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let t = truncation();
        let mut out: BTreeMap<Exponents, Gauss> = BTreeMap::new();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                let b = b1 + b2;
                if b > t.order {
                    continue;
                }
                assert!(b >= -t.floor, "{}", ScalarError::BelowFloor { power: b, floor: t.floor });
                let c = c1 * c2;
                let e = out.entry((a1 + a2, b)).or_insert_with(Gauss::zero);
                *e = &*e + &c;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Scalar { terms: out }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_terms(self.terms.iter().map(|((a, b), c)| render_term(c, *a, *b, ""))))
    }
}

/// `n!` as a Gaussian rational.
pub fn factorial(n: u32) -> Gauss {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Gauss::new(BigRational::from_integer(acc), BigRational::zero())
}

/// Solves `a X = b` exactly for square `a` (Gauss-Jordan with row pivoting). `b` holds one
/// column per right-hand side. A pivot must be invertible in the truncated series ring.
pub fn solve_linear(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>, ScalarError> {
    let n = a.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> = a.iter().zip(b).map(|(r, rhs)| r.iter().chain(rhs).cloned().collect()).collect();
    for c in 0..n {
        let found = (c..n).find_map(|r| m[r][c].try_inverse().ok().map(|inv| (r, inv)));
        let Some((piv, inv)) = found else {
            return Err(ScalarError::Singular { rank: c, size: n });
        };
        m.swap(c, piv);
        for v in m[c].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..(n + cols) {
                    let t = &f * &m[c][k];
                    m[r][k] -= &t;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::int(-1));
    }

    #[test]
    fn product_above_order_vanishes() {
        let top = Scalar::lam().pow(6);
        assert!(!top.is_zero());
        assert!((&top * &Scalar::lam()).is_zero());
    }

    #[test]
    fn kappa_prefactor_cancels_lambda() {
        // (hbar kappa / 2) * (2 lam / hbar) = 1
        let half_hbar_kappa = Scalar::monomial(Gauss::ratio(1, 2), 1, -1);
        let two_lam_over_hbar = Scalar::monomial(Gauss::int(2, 0), -1, 1);
        assert_eq!(&half_hbar_kappa * &two_lam_over_hbar, Scalar::one());
    }

    #[test]
    fn below_floor_rejected() {
        let err = Scalar::try_monomial(Gauss::one(), 0, -2).unwrap_err();
        assert_eq!(err, ScalarError::BelowFloor { power: -2, floor: 1 });
        assert!(Scalar::try_monomial(Gauss::one(), 0, -1).is_ok());
    }

    #[test]
    fn divide_by_lambda_examples() {
        let two_i_lam = Scalar::monomial(Gauss::int(0, 2), 0, 1);
        assert_eq!(two_i_lam.divide_by_lambda().unwrap(), Scalar::monomial(Gauss::int(0, 2), 0, 0));

        let s = &Scalar::lam().pow(2) - &Scalar::monomial(Gauss::int(3, 0), 0, 1);
        let expect = &Scalar::lam() - &Scalar::int(3);
        assert_eq!(s.divide_by_lambda().unwrap(), expect);

        assert!(matches!(Scalar::one().divide_by_lambda(), Err(ScalarError::NotDivisible(_))));
    }

    #[test]
    fn shift_difference_of_square() {
        // psi(x) = x^2: psi(x) - psi(x + 2 i lam) = -4 i lam x + 4 lam^2
        let shift = Scalar::monomial(Gauss::int(0, 2), 0, 1);
        let coeff_x = -(&Scalar::int(2) * &shift);
        assert_eq!(coeff_x.divide_by_lambda().unwrap(), Scalar::gauss(Gauss::int(0, -4)));
    }

    #[test]
    fn inverse_of_unit_series() {
        let s = &Scalar::monomial(Gauss::int(0, 1), 1, 0) + &Scalar::monomial(Gauss::int(3, 0), 0, 1);
        let inv = s.try_inverse().unwrap();
        assert_eq!(&s * &inv, Scalar::one());
        let two_terms = &Scalar::hbar() + &Scalar::one();
        assert!(two_terms.try_inverse().is_err());
    }

    #[test]
    fn truncation_is_scoped() {
        let inner = with_truncation(Truncation::with_order(2), || {
            (&Scalar::lam().pow(2) * &Scalar::lam()).is_zero()
        });
        assert!(inner);
        assert_eq!(truncation(), Truncation::DEFAULT);
        assert!(Truncation::new(-1, 0).is_err());
    }

    #[test]
    fn display_is_canonical() {
        let s = &Scalar::monomial(Gauss::ratio(-1, 2), 2, 1) + &Scalar::i();
        assert_eq!(s.to_string(), "i - 1/2 hbar^2 lam");
    }
}
