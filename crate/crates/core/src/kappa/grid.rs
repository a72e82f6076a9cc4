//! Closed-form pairings of ordered coordinate and momentum monomials, and the pairing as
//! formal differentiation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hopf::{HopfError, Pairing, PairingStrategy};
use crate::ncalg::{Gen, NCPoly, Word};
use crate::report::{CheckItem, CheckReport};
use crate::scalars::{factorial, Gauss, Scalar};

use super::phase::PhaseSpace;

fn word(parts: &[(Gen, u32)]) -> Word {
    parts.iter().flat_map(|&(g, n)| std::iter::repeat_n(g, n as usize)).collect()
}

fn i_pow(e: u32, sign: i64) -> Gauss {
    Gauss::int(0, sign).pow(e)
}

/// `<x0^k xs^l, Pr^n P0^m> = hbar^{k+l} d_rs d^{ln} d^{km} k! l! (-i)^k i^l`.
///
/// `d_rs` only constrains the value when a spatial factor is present (`l = n > 0`).
pub fn closed_form_a(k: u32, l: u32, m: u32, n: u32, r: u8, s: u8) -> Scalar {
    if l != n || k != m || (l > 0 && r != s) {
        return Scalar::zero();
    }
    let c = factorial(k).mul_ref(&factorial(l)).mul_ref(&i_pow(k, -1)).mul_ref(&i_pow(l, 1));
    Scalar::monomial(c, (k + l) as i32, 0)
}

/// `<xs^l x0^k, Pr^n P0^m> = hbar^{k+l} d_rs d^{ln} k! l! / (k-m)! (-n / kappa hbar)^{k-m} (-i)^k i^l`
/// for `k >= m`, zero for `k < m`.
pub fn closed_form_b(k: u32, l: u32, m: u32, n: u32, r: u8, s: u8) -> Scalar {
    if k < m || l != n || (l > 0 && r != s) {
        return Scalar::zero();
    }
    let d = k - m;
    let c = factorial(k)
        .mul_ref(&factorial(l))
        .mul_ref(&factorial(d).inverse().expect("factorial is nonzero"))
        .mul_ref(&Gauss::int(-(n as i64), 0).pow(d))
        .mul_ref(&i_pow(k, -1))
        .mul_ref(&i_pow(l, 1));
    if c.is_zero() {
        return Scalar::zero();
    }
    Scalar::monomial(c, (k + l) as i32 - d as i32, d as i32)
}

/// Engine pairings against both closed forms over the index box; one item per tuple and form.
pub fn verify_closed_form_pairings(ps: &PhaseSpace, kmax: u32, lmax: u32, mmax: u32, nmax: u32) -> Result<CheckReport, HopfError> {
    let engine = Pairing::new(&ps.coords, &ps.momenta, &ps.pairing, PairingStrategy::GroupFirst);
    let mut report = CheckReport::new("pairing-grid");
    for k in 0..=kmax {
        for l in 0..=lmax {
            for m in 0..=mmax {
                for n in 0..=nmax {
                    for r in 1..4u8 {
                        for s in 1..4u8 {
                            let p = word(&[(Gen::P(r), n), (Gen::P(0), m)]);
                            let inputs = format!("k={k} l={l} m={m} n={n} r={r} s={s}");
                            let a = engine.pair_words(&word(&[(Gen::X(0), k), (Gen::X(s), l)]), &p)?;
                            let want = closed_form_a(k, l, m, n, r, s);
                            report.push(CheckItem::from_scalar(format!("ordered:{inputs}"), inputs.clone(), &(&a - &want)));
                            let b = engine.pair_words(&word(&[(Gen::X(s), l), (Gen::X(0), k)]), &p)?;
                            let want = closed_form_b(k, l, m, n, r, s);
                            report.push(CheckItem::from_scalar(format!("reversed:{inputs}"), inputs, &(&b - &want)));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

fn exponents(w: &[Gen]) -> Option<[u32; 4]> {
    let mut e = [0u32; 4];
    for g in w {
        match g {
            Gen::X(i) | Gen::P(i) => e[*i as usize] += 1,
            _ => return None,
        }
    }
    Some(e)
}

/// `f(d)` applied to `psi` at `x = 0`, where each `P_mu` acts as `<x_mu, P_mu> d/dx_mu`.
///
/// `psi` must be normal-ordered in the coordinates (`x0` powers leftmost); its words are read
/// as commuting monomials. `f` is a polynomial in the commuting momenta.
pub fn pair_by_differentiation(psi: &NCPoly, f: &NCPoly, ps: &PhaseSpace) -> Result<Scalar, HopfError> {
    let mut unit = Vec::with_capacity(4);
    for mu in 0..4u8 {
        unit.push(ps.pairing.get(Gen::X(mu), Gen::P(mu))?.clone());
    }
    let mut acc = Scalar::zero();
    for (pw, pc) in psi.terms() {
        let e = exponents(pw).expect("coordinate word");
        for (fw, fc) in f.terms() {
            let d = exponents(fw).expect("momentum word");
            if e != d {
                continue;
            }
            let mut v = pc * fc;
            for mu in 0..4 {
                v = &(&v * &unit[mu].pow(d[mu])) * &Scalar::gauss(factorial(d[mu]));
            }
            acc += &v;
        }
    }
    Ok(acc)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let g = Gauss::int(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if !g.is_zero() {
            return Scalar::gauss(g);
        }
    }
}

fn random_exponents(rng: &mut ChaCha8Rng, max_degree: u32) -> [u32; 4] {
    let total = rng.gen_range(0..=max_degree);
    let mut e = [0u32; 4];
    for _ in 0..total {
        e[rng.gen_range(0..4)] += 1;
    }
    e
}

/// Random ordered coordinate polynomial and momentum polynomial of degree `<= max_degree`.
/// Momentum monomials reuse coordinate exponents half of the time so pairings are nonzero.
pub fn random_pair(rng: &mut ChaCha8Rng, max_degree: u32) -> (NCPoly, NCPoly) {
    let mut psi = NCPoly::zero();
    let mut f = NCPoly::zero();
    let mut seen = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let e = random_exponents(rng, max_degree);
        seen.push(e);
        let w = word(&[(Gen::X(0), e[0]), (Gen::X(1), e[1]), (Gen::X(2), e[2]), (Gen::X(3), e[3])]);
        psi += &NCPoly::term(w, random_coeff(rng));
    }
    for _ in 0..rng.gen_range(1..=4) {
        let e = if rng.gen_bool(0.5) { seen[rng.gen_range(0..seen.len())] } else { random_exponents(rng, max_degree) };
        let w = word(&[(Gen::P(1), e[1]), (Gen::P(2), e[2]), (Gen::P(3), e[3]), (Gen::P(0), e[0])]);
        f += &NCPoly::term(w, random_coeff(rng));
    }
    (psi, f)
}

/// Differentiation against the recursive engine on `count` seeded random pairs.
pub fn check_differentiation_pairing(ps: &PhaseSpace, seed: u64, count: usize, max_degree: u32) -> Result<CheckReport, HopfError> {
    let engine = Pairing::new(&ps.coords, &ps.momenta, &ps.pairing, PairingStrategy::GroupFirst);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CheckReport::new("differentiation-pairing");
    for i in 0..count {
        let (psi, f) = random_pair(&mut rng, max_degree);
        let by_diff = pair_by_differentiation(&psi, &f, ps)?;
        let by_engine = engine.pair(&psi, &f)?;
        let inputs = format!("psi = {psi}; f = {f}");
        report.push(CheckItem::from_scalar(format!("diff-pair:{i}"), inputs, &(&by_diff - &by_engine)));
    }
    Ok(report)
}
