//! Truncated-oscillator matrices for the deformed phase space, with `hbar = 1`.
//!
//! Mode 0 is the time direction, modes `1..=s` are spatial. With the metric `(-,+,+,+)` the
//! time momentum is `-p`, so that `[xh_0, ph_0] = -i`.

use std::io::Write;

use nalgebra::{Complex, DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::report::{CheckItem, CheckReport};

pub type C64 = Complex<f64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const MARGIN_TOL: f64 = 1e-10;
pub const RELATIVE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum NumrepError {
    #[error("negative variance {0:e}: operator is not Hermitian")]
    NegativeVariance(f64),
    #[error("{label} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { label: String, deviation: f64 },
    #[error("state {state} has mean occupation {occupation} above the limit {limit}")]
    TruncationEdge { state: usize, occupation: f64, limit: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone)]
pub struct MatrixOperator {
    pub label: String,
    pub entries: DMatrix<C64>,
    pub hermitian: bool,
    /// Compressed copy of `entries`, used for every product with a state.
    sparse: CsrMatrix<C64>,
}

impl MatrixOperator {
    /// Sets the Hermitian flag after checking it elementwise.
    pub fn hermitian(label: impl Into<String>, entries: DMatrix<C64>) -> Result<Self, NumrepError> {
        let label = label.into();
        let deviation = hermitian_deviation(&entries);
        if deviation > HERMITIAN_TOL {
            return Err(NumrepError::NotHermitian { label, deviation });
        }
        Ok(MatrixOperator::new(label, entries, true))
    }

    /// No check; `hermitian` is taken as given.
    pub fn new(label: impl Into<String>, entries: DMatrix<C64>, hermitian: bool) -> Self {
        let sparse = CsrMatrix::from(&entries);
        MatrixOperator { label: label.into(), entries, hermitian, sparse }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.sparse * v
    }
}

pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct StateVector {
    pub amplitudes: DVector<C64>,
    /// Mean occupation of each mode.
    pub occupation: Vec<f64>,
}

impl StateVector {
    /// Normalizes `amplitudes` over `modes` modes of `n_levels` levels each.
    pub fn new(amplitudes: DVector<C64>, n_levels: usize, modes: usize) -> Self {
        let norm = amplitudes.norm();
        let amplitudes = amplitudes / C64::new(norm, 0.0);
        let mut occupation = vec![0.0; modes];
        for (idx, a) in amplitudes.iter().enumerate() {
            let w = a.norm_sqr();
            let mut rest = idx;
            for m in (0..modes).rev() {
                occupation[m] += w * (rest % n_levels) as f64;
                rest /= n_levels;
            }
        }
        StateVector { amplitudes, occupation }
    }

    pub fn max_occupation(&self) -> f64 {
        self.occupation.iter().cloned().fold(0.0, f64::max)
    }
}

fn annihilation(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |i, j| if j == i + 1 { C64::new((j as f64).sqrt(), 0.0) } else { C64::new(0.0, 0.0) })
}

/// `x = (a + a^dag)/sqrt 2`, `p = i (a^dag - a)/sqrt 2`. Their commutator is `i` except in the
/// last diagonal entry, which is `-i (n - 1)`.
pub fn build_canonical_pair(n_levels: usize) -> (MatrixOperator, MatrixOperator) {
    let a = annihilation(n_levels);
    let ad = a.adjoint();
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let x = (&a + &ad) * s;
    let p = (&ad - &a) * (s * C64::i());
    (
        MatrixOperator::hermitian("x", x).expect("x is Hermitian"),
        MatrixOperator::hermitian("p", p).expect("p is Hermitian"),
    )
}

/// `op` acting on mode `mode` of `modes`.
fn embed(op: &DMatrix<C64>, mode: usize, modes: usize) -> DMatrix<C64> {
    let n = op.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    let mut out = DMatrix::<C64>::identity(1, 1);
    for m in 0..modes {
        out = out.kronecker(if m == mode { op } else { &id });
    }
    out
}

/// The deformed generators and the undeformed time coordinate.
#[derive(Debug, Clone)]
pub struct DeformedOperators {
    pub kappa_hbar: f64,
    pub n_levels: usize,
    pub x0: MatrixOperator,
    pub hat_x0: MatrixOperator,
    pub p0: MatrixOperator,
    /// `x_1 .. x_s`
    pub x: Vec<MatrixOperator>,
    pub p: Vec<MatrixOperator>,
}

impl DeformedOperators {
    pub fn modes(&self) -> usize {
        self.x.len() + 1
    }
}

/// `x0 = xh0 + (1/2 kappa hbar) sum_k (xh_k ph_k + ph_k xh_k)`, `x_k = xh_k`, `P_mu = ph_mu`.
pub fn build_deformed_operators(kappa_hbar: f64, space_modes: usize, n_levels: usize) -> Result<DeformedOperators, NumrepError> {
    if !(kappa_hbar > 0.0) {
        return Err(NumrepError::InvalidParameter(format!("kappa hbar must be positive, got {kappa_hbar}")));
    }
    if n_levels < 2 || space_modes == 0 {
        return Err(NumrepError::InvalidParameter(format!("need n_levels >= 2 and a spatial mode, got {n_levels}, {space_modes}")));
    }
    let modes = space_modes + 1;
    let (x, p) = build_canonical_pair(n_levels);
    let dil = &x.entries * &p.entries + &p.entries * &x.entries;
    let hat_x0 = embed(&x.entries, 0, modes);
    let mut x0 = hat_x0.clone();
    let scale = C64::new(1.0 / (2.0 * kappa_hbar), 0.0);
    let mut xs = Vec::new();
    let mut ps = Vec::new();
    for k in 1..modes {
        x0 += embed(&dil, k, modes) * scale;
        xs.push(MatrixOperator::hermitian(format!("x{k}"), embed(&x.entries, k, modes))?);
        ps.push(MatrixOperator::hermitian(format!("P{k}"), embed(&p.entries, k, modes))?);
    }
    Ok(DeformedOperators {
        kappa_hbar,
        n_levels,
        x0: MatrixOperator::hermitian("x0", x0)?,
        hat_x0: MatrixOperator::hermitian("xh0", hat_x0)?,
        p0: MatrixOperator::hermitian("P0", embed(&-&p.entries, 0, modes))?,
        x: xs,
        p: ps,
    })
}

/// `sqrt(<a^2> - <a>^2)`.
pub fn dispersion(op: &MatrixOperator, psi: &StateVector) -> Result<f64, NumrepError> {
    let v = &psi.amplitudes;
    let av = op.apply(v);
    let mean = v.dotc(&av).re;
    let second = v.dotc(&op.apply(&av)).re;
    let var = second - mean * mean;
    if var < -MARGIN_TOL {
        return Err(NumrepError::NegativeVariance(var));
    }
    Ok(var.max(0.0).sqrt())
}

pub fn expectation(op: &MatrixOperator, psi: &StateVector) -> f64 {
    psi.amplitudes.dotc(&op.apply(&psi.amplitudes)).re
}

/// Truncated coherent state of one mode.
pub fn coherent_amplitudes(alpha: C64, n_levels: usize) -> DVector<C64> {
    let mut out = DVector::zeros(n_levels);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for k in 0..n_levels {
        out[k] = c;
        c = c * alpha / ((k + 1) as f64).sqrt();
    }
    out
}

fn product_state(factors: &[DVector<C64>]) -> DVector<C64> {
    let mut out = DVector::from_element(1, C64::new(1.0, 0.0));
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// Seeded states: even indices are product coherent states with `|alpha| <= 1.5`, odd indices
/// random superpositions of the levels `0..4` in every mode.
pub fn random_low_occupation_states(seed: u64, count: usize, n_levels: usize, modes: usize) -> Vec<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let low = n_levels.min(4);
    (0..count)
        .map(|i| {
            let amps = if i % 2 == 0 {
                let factors: Vec<_> = (0..modes)
                    .map(|_| {
                        let r = rng.gen_range(0.0..1.5);
                        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                        coherent_amplitudes(C64::from_polar(r, phase), n_levels)
                    })
                    .collect();
                product_state(&factors)
            } else {
                let mut v = DVector::zeros(n_levels.pow(modes as u32));
                for idx in 0..low.pow(modes as u32) {
                    let mut full = 0;
                    let mut rest = idx;
                    for _ in 0..modes {
                        full = full * n_levels + rest % low;
                        rest /= low;
                    }
                    v[full] = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
                v
            };
            StateVector::new(amps, n_levels, modes)
        })
        .collect()
}

/// One inequality `lhs >= rhs` evaluated on one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub state: usize,
    pub kappa_hbar: f64,
    pub pair: String,
    pub kind: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone)]
pub struct UncertaintyOutcome {
    pub report: CheckReport,
    pub rows: Vec<BoundRow>,
}

/// `|<[A, B]>| / 2` from `<[A, B]> = 2 i Im <A psi, B psi>`.
fn robertson_rhs(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    a.dotc(b).im.abs()
}

fn relative_error(got: &DVector<C64>, want: &DVector<C64>) -> f64 {
    let scale = want.norm().max(1e-300);
    (got - want).norm() / scale
}

/// Robertson bounds and the four deformed uncertainty families on every state, plus the
/// matrix commutators against their symbolic values.
pub fn check_uncertainty_suite(ops: &DeformedOperators, states: &[StateVector]) -> Result<UncertaintyOutcome, NumrepError> {
    let limit = ops.n_levels as f64 / 8.0;
    let kappa = ops.kappa_hbar;
    let mut report = CheckReport::new("uncertainty");
    let mut rows = Vec::new();
    for (s, psi) in states.iter().enumerate() {
        if psi.max_occupation() > limit {
            return Err(NumrepError::TruncationEdge { state: s, occupation: psi.max_occupation(), limit });
        }
        let v = &psi.amplitudes;
        let mut commutators = Vec::new();
        let x0v = ops.x0.apply(v);
        let p0v = ops.p0.apply(v);
        let d_x0 = dispersion(&ops.x0, psi)?;
        let d_p0 = dispersion(&ops.p0, psi)?;
        let mut record = |pair: String, kind: &'static str, lhs: f64, rhs: f64| {
            let margin = lhs - rhs;
            report.push(CheckItem::from_margin(format!("state{s}:{kind}:{pair}"), format!("kappa hbar = {kappa}"), margin, MARGIN_TOL));
            rows.push(BoundRow { state: s, kappa_hbar: kappa, pair, kind, lhs, rhs, margin });
        };
        record("(x0,P0)".into(), "robertson", d_x0 * d_p0, robertson_rhs(&x0v, &p0v));
        record("(x0,P0)".into(), "deformed", d_x0 * d_p0, 0.5);
        for (k, (xk, pk)) in ops.x.iter().zip(&ops.p).enumerate() {
            let k = k + 1;
            let xkv = xk.apply(v);
            let pkv = pk.apply(v);
            let d_xk = dispersion(xk, psi)?;
            let d_pk = dispersion(pk, psi)?;
            record(format!("(x0,x{k})"), "robertson", d_x0 * d_xk, robertson_rhs(&x0v, &xkv));
            record(format!("(x0,x{k})"), "deformed", d_x0 * d_xk, v.dotc(&xkv).re.abs() / (2.0 * kappa));
            record(format!("(P{k},x0)"), "robertson", d_pk * d_x0, robertson_rhs(&pkv, &x0v));
            record(format!("(P{k},x0)"), "deformed", d_pk * d_x0, v.dotc(&pkv).re.abs() / (2.0 * kappa));
            for (l, xl) in ops.x.iter().enumerate() {
                let l = l + 1;
                let xlv = if l == k { xkv.clone() } else { xl.apply(v) };
                let d_xl = if l == k { d_xk } else { dispersion(xl, psi)? };
                let want = if l == k { 0.5 } else { 0.0 };
                record(format!("(P{k},x{l})"), "robertson", d_pk * d_xl, robertson_rhs(&pkv, &xlv));
                record(format!("(P{k},x{l})"), "deformed", d_pk * d_xl, want);
            }
            let i_over_kappa = C64::new(0.0, 1.0 / kappa);
            // [x0, x_k] = -(i/kappa) x_k, [x0, P_k] = (i/kappa) P_k, [x_k, P_k] = i
            let comm = &ops.x0.apply(&xkv) - &xk.apply(&x0v);
            let e = relative_error(&comm, &(&xkv * -i_over_kappa));
            commutators.push(margin_item(format!("state{s}:commutator:[x0,x{k}]"), e));
            let comm = &ops.x0.apply(&pkv) - &pk.apply(&x0v);
            let e = relative_error(&comm, &(&pkv * i_over_kappa));
            commutators.push(margin_item(format!("state{s}:commutator:[x0,P{k}]"), e));
            let comm = &xk.apply(&pkv) - &pk.apply(&xkv);
            let e = relative_error(&comm, &(v * C64::i()));
            commutators.push(margin_item(format!("state{s}:commutator:[x{k},P{k}]"), e));
        }
        let comm = &ops.x0.apply(&p0v) - &ops.p0.apply(&x0v);
        commutators.push(margin_item(format!("state{s}:commutator:[x0,P0]"), relative_error(&comm, &(v * -C64::i()))));
        report.items.extend(commutators);
    }
    Ok(UncertaintyOutcome { report, rows })
}

fn margin_item(id: String, relative: f64) -> CheckItem {
    CheckItem::from_margin(id, format!("relative error {relative:e}"), RELATIVE_TOL - relative, 0.0)
}

/// At large `kappa hbar`: `x0` is within `MARGIN_TOL` of `xh0` on every state, and the
/// kappa-dependent bounds fall below `MARGIN_TOL`.
pub fn check_standard_limit(ops: &DeformedOperators, states: &[StateVector]) -> CheckReport {
    let mut report = CheckReport::new("standard-limit");
    let kappa = ops.kappa_hbar;
    for (s, psi) in states.iter().enumerate() {
        let v = &psi.amplitudes;
        let gap = (ops.x0.apply(v) - ops.hat_x0.apply(v)).norm();
        report.push(CheckItem::from_margin(format!("state{s}:limit:x0"), "|x0 psi - xh0 psi|", MARGIN_TOL - gap, 0.0));
        for (k, (xk, pk)) in ops.x.iter().zip(&ops.p).enumerate() {
            let bx = expectation(xk, psi).abs() / (2.0 * kappa);
            let bp = expectation(pk, psi).abs() / (2.0 * kappa);
            report.push(CheckItem::from_margin(format!("state{s}:limit:(x0,x{})", k + 1), "kappa bound", MARGIN_TOL - bx, 0.0));
            report.push(CheckItem::from_margin(format!("state{s}:limit:(P{},x0)", k + 1), "kappa bound", MARGIN_TOL - bp, 0.0));
        }
    }
    report
}

pub fn write_csv<W: Write>(rows: &[BoundRow], out: W) -> Result<(), NumrepError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_commutator() {
        let (x, p) = build_canonical_pair(2);
        let c = &x.entries * &p.entries - &p.entries * &x.entries;
        assert!((c[(0, 0)] - C64::i()).norm() < 1e-14);
        assert!((c[(1, 1)] + C64::i()).norm() < 1e-14);
    }

    #[test]
    fn commutator_defect_sits_in_last_entry() {
        let n = 40;
        let (x, p) = build_canonical_pair(n);
        let c = &x.entries * &p.entries - &p.entries * &x.entries - DMatrix::<C64>::identity(n, n) * C64::i();
        for i in 0..n {
            for j in 0..n {
                if (i, j) != (n - 1, n - 1) {
                    assert!(c[(i, j)].norm() < 1e-12, "{i} {j}");
                }
            }
        }
        assert!((c[(n - 1, n - 1)] + C64::new(0.0, n as f64)).norm() < 1e-10);
    }

    #[test]
    fn vacuum_dispersion() {
        let (x, p) = build_canonical_pair(10);
        let mut v = DVector::zeros(10);
        v[0] = C64::new(1.0, 0.0);
        let psi = StateVector::new(v, 10, 1);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        assert!((dispersion(&x, &psi).unwrap() - half).abs() < 1e-12);
        assert!((dispersion(&x, &psi).unwrap() * dispersion(&p, &psi).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coherent_dispersion_is_vacuum_value() {
        let (x, _) = build_canonical_pair(40);
        let psi = StateVector::new(coherent_amplitudes(C64::new(1.0, 0.0), 40), 40, 1);
        assert!((dispersion(&x, &psi).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn eigenvector_has_zero_dispersion() {
        let n = 6;
        let number = MatrixOperator::hermitian("n", DMatrix::from_fn(n, n, |i, j| C64::new(if i == j { i as f64 } else { 0.0 }, 0.0))).unwrap();
        let mut v = DVector::zeros(n);
        v[3] = C64::new(0.0, 1.0);
        assert!(dispersion(&number, &StateVector::new(v, n, 1)).unwrap() < 1e-10);
    }

    #[test]
    fn non_hermitian_input_is_detected() {
        let (x, p) = build_canonical_pair(8);
        assert!(MatrixOperator::hermitian("xp", &x.entries * &p.entries).is_err());
        let bad = MatrixOperator::new("i", DMatrix::identity(8, 8) * C64::i(), false);
        let mut v = DVector::zeros(8);
        v[1] = C64::new(1.0, 0.0);
        assert!(matches!(dispersion(&bad, &StateVector::new(v, 8, 1)), Err(NumrepError::NegativeVariance(_))));
    }

    #[test]
    fn occupation_edge_is_refused() {
        let ops = build_deformed_operators(1.0, 1, 8).unwrap();
        let psi = StateVector::new(product_state(&[coherent_amplitudes(C64::new(1.5, 0.0), 8), coherent_amplitudes(C64::new(0.0, 0.0), 8)]), 8, 2);
        assert!(matches!(check_uncertainty_suite(&ops, &[psi]), Err(NumrepError::TruncationEdge { .. })));
    }
}
