//! Coordinates dual to the classical momentum basis, and the finite-difference conditions
//! they are expected to satisfy.
//!
//! The solver works only through the pairing engine. The finite-difference check works only
//! on commuting polynomials; neither calls the other.

use std::collections::BTreeMap;

use crate::hopf::{Pairing, PairingStrategy};
use crate::ncalg::{Gen, NCPoly, NormalOrderer, Word};
use crate::report::{CheckItem, CheckReport};
use crate::scalars::{factorial, solve_linear, truncation, with_truncation, Gauss, Scalar, Truncation};

use super::basis::tilde_momenta;
use super::phase::PhaseSpace;
use super::KappaError;

/// Commuting polynomial in `x0..x3`, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CommPoly {
    pub terms: BTreeMap<[u32; 4], Scalar>,
}

impl CommPoly {
    pub fn constant(c: Scalar) -> Self {
        let mut p = CommPoly::default();
        p.add([0; 4], &c);
        p
    }

    /// Reads each word of `p` as a commuting monomial.
    pub fn from_ncpoly(p: &NCPoly) -> Self {
        let mut out = CommPoly::default();
        for (w, c) in p.terms() {
            let mut e = [0u32; 4];
            for g in w {
                match g {
                    Gen::X(i) => e[*i as usize] += 1,
                    other => panic!("{other} is not a coordinate"),
                }
            }
            out.add(e, c);
        }
        out
    }

    fn add(&mut self, e: [u32; 4], c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_default();
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, o: &CommPoly) -> CommPoly {
        let mut out = CommPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                out.add([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]], &(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        (0..k).fold(CommPoly::constant(Scalar::one()), |acc, _| acc.mul(self))
    }

    fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> CommPoly {
        let mut out = CommPoly::default();
        for (e, c) in &self.terms {
            out.add(*e, &f(c));
        }
        out
    }

    /// `p(x0 + c, x)`, expanded binomially.
    pub fn shift_time(&self, c: &Scalar) -> CommPoly {
        let mut out = CommPoly::default();
        for (e, coeff) in &self.terms {
            let a = e[0];
            let mut binom = 1i64;
            for j in 0..=a {
                // C(a, j) x0^j c^(a-j)
                let mut ne = *e;
                ne[0] = j;
                out.add(ne, &(&(coeff * &c.pow(a - j)) * &Scalar::int(binom)));
                binom = binom * (a - j) as i64 / (j + 1) as i64;
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> CommPoly {
        let mut out = CommPoly::default();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = *e;
                ne[var] -= 1;
                out.add(ne, &(c * &Scalar::int(e[var] as i64)));
            }
        }
        out
    }

    pub fn at_origin(&self) -> Scalar {
        self.terms.get(&[0; 4]).cloned().unwrap_or_default()
    }
}

fn two_i_lam() -> Scalar {
    Scalar::monomial(Gauss::int(0, 2), 0, 1)
}

/// `(kappa/2)(1 - e^{2i lam d0}) - (lam/2) Laplacian`, with `e^{2i lam d0}` the exact shift
/// `x0 -> x0 + 2 i lam` and the `kappa/2` prefactor applied by exact division.
pub fn difference_operator(p: &CommPoly) -> Result<CommPoly, KappaError> {
    let shifted = p.shift_time(&two_i_lam());
    let mut out = CommPoly::default();
    let keys: std::collections::BTreeSet<[u32; 4]> = p.terms.keys().chain(shifted.terms.keys()).copied().collect();
    for e in keys {
        let diff = &p.terms.get(&e).cloned().unwrap_or_default() - &shifted.terms.get(&e).cloned().unwrap_or_default();
        out.add(e, &diff.divide_by_lambda()?.scale(&Gauss::ratio(1, 2)));
    }
    let half_lam = Scalar::monomial(Gauss::ratio(1, 2), 0, 1);
    for r in 1..4 {
        let lap = p.derivative(r).derivative(r);
        for (e, c) in &lap.terms {
            out.add(*e, &-(c * &half_lam));
        }
    }
    Ok(out)
}

/// `D^m d_r^n [F(x0 - i (m+n) lam, x)]` at `x = 0` with `hbar = 1`, where `D` is
/// [`difference_operator`]. Exact to order `N - m` of the active truncation.
pub fn finite_difference_apply(f: &CommPoly, m: u32, n: u32, r: usize) -> Result<Scalar, KappaError> {
    let outer = truncation();
    let shift = Scalar::monomial(Gauss::int(0, -((m + n) as i64)), 0, 1);
    let value = with_truncation(Truncation::with_order(outer.order + m as i32), || -> Result<Scalar, KappaError> {
        let mut g = f.map_coeffs(Scalar::unit_hbar).shift_time(&shift);
        for _ in 0..n {
            g = g.derivative(r);
        }
        for _ in 0..m {
            g = difference_operator(&g)?;
        }
        Ok(g.at_origin())
    })?;
    Ok(value.truncated(outer.order - m as i32))
}

/// Ordered exponent vectors of total degree `<= d`.
pub fn exponent_box(d: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=(d - a) {
            for c in 0..=(d - a - b) {
                for e in 0..=(d - a - b - c) {
                    out.push([a, b, c, e]);
                }
            }
        }
    }
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(*e)));
    out
}

fn coordinate_word(e: &[u32; 4]) -> Word {
    (0..4u8).flat_map(|i| std::iter::repeat_n(Gen::X(i), e[i as usize] as usize)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualBasisSolution {
    /// `[F0, F1, F2, F3]` as ordered coordinate polynomials.
    pub f: Vec<NCPoly>,
    pub degree: u32,
}

/// Coordinates `x~_mu = :F_mu:` with `<x~_l, P~_k> = i hbar d_kl`, `<x~_0, P~_0> = -i hbar` and
/// vanishing pairings with every other classical momentum monomial of degree `<= d`.
pub fn solve_dual_basis(ps: &PhaseSpace, d: u32) -> Result<DualBasisSolution, KappaError> {
    let engine = Pairing::new(&ps.coords, &ps.momenta, &ps.pairing, PairingStrategy::GroupFirst);
    let o = NormalOrderer::new(&ps.momenta.rewrite);
    let t = tilde_momenta();
    let exps = exponent_box(d);
    // rows: momentum monomials P~^alpha; columns: coordinate words x^beta
    let mut matrix = Vec::with_capacity(exps.len());
    for alpha in &exps {
        let mut mono = NCPoly::one();
        for (mu, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                mono = o.product(&mono, &t[mu])?;
            }
        }
        let row = exps.iter().map(|beta| engine.pair(&NCPoly::term(coordinate_word(beta), Scalar::one()), &mono)).collect::<Result<Vec<_>, _>>()?;
        matrix.push(row);
    }
    let targets: Vec<Vec<Scalar>> = exps
        .iter()
        .map(|alpha| {
            (0..4usize)
                .map(|mu| {
                    let mut unit = [0u32; 4];
                    unit[mu] = 1;
                    if *alpha == unit {
                        ps.pairing.get(Gen::X(mu as u8), Gen::P(mu as u8)).cloned().unwrap_or_default()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    let sol = solve_linear(&matrix, &targets).map_err(|e| KappaError::SingularSystem { degree: d, detail: e.to_string() })?;
    let f = (0..4)
        .map(|mu| {
            let mut p = NCPoly::zero();
            for (beta, row) in exps.iter().zip(&sol) {
                p.add_term(coordinate_word(beta), &row[mu]);
            }
            p
        })
        .collect();
    Ok(DualBasisSolution { f, degree: d })
}

/// Leading order and the finite-difference conditions for the time coordinate (`k, m <= kmax`)
/// and the space coordinates (`l, n <= kmax`, `r, s` spatial).
pub fn check_dual_basis(sol: &DualBasisSolution, kmax: u32) -> Result<CheckReport, KappaError> {
    let mut report = CheckReport::new("dual-basis");
    for mu in 0..4u8 {
        let lead = sol.f[mu as usize].classical();
        let want = NCPoly::gen(Gen::X(mu));
        report.push(CheckItem::from_poly(format!("leading:F{mu}"), sol.f[mu as usize].to_string(), &(&lead - &want)));
    }
    let f0 = CommPoly::from_ncpoly(&sol.f[0]);
    for k in 0..=kmax {
        let fk = f0.pow(k);
        for m in 0..=kmax {
            let got = finite_difference_apply(&fk, m, 0, 0)?;
            let want = if k == m { Scalar::gauss(Gauss::int(0, -1).pow(k).mul_ref(&factorial(k))) } else { Scalar::zero() };
            report.push(CheckItem::from_scalar(format!("time:k={k},m={m}"), format!("F0^{k}, D^{m}"), &(&got - &want)));
        }
    }
    for s in 1..4u8 {
        let fs = CommPoly::from_ncpoly(&sol.f[s as usize]);
        for l in 0..=kmax {
            let fl = fs.pow(l);
            for r in 1..4u8 {
                for n in 0..=kmax {
                    let got = finite_difference_apply(&fl, 0, n, r as usize)?;
                    let hit = l == n && (l == 0 || r == s);
                    let want = if hit { Scalar::gauss(factorial(n)) } else { Scalar::zero() };
                    report.push(CheckItem::from_scalar(format!("space:s={s},l={l},r={r},n={n}"), format!("F{s}^{l}, d{r}^{n}"), &(&got - &want)));
                }
            }
        }
    }
    Ok(report)
}
