//! Exact rational Lorentz matrices and evaluation of the commuting `Lambda` block.
//!
//! The group relations only close modulo `Lambda^T g Lambda = g`. An identity in the group
//! holds when every normal-ordered residual vanishes after its `Lambda` entries are replaced by
//! the entries of a Lorentz matrix, for matrices sampled from all four components.

use std::sync::OnceLock;

use crate::ncalg::{metric, Gen, NCPoly, TensorPoly, Word};
use crate::scalars::{solve_linear, Scalar};

pub type Mat4 = Vec<Vec<Scalar>>;

fn identity() -> Mat4 {
    (0..4).map(|r| (0..4).map(|c| if r == c { Scalar::one() } else { Scalar::zero() }).collect()).collect()
}

fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    (0..4)
        .map(|r| {
            (0..4)
                .map(|c| (0..4).fold(Scalar::zero(), |acc, k| &acc + &(&a[r][k] * &b[k][c])))
                .collect()
        })
        .collect()
}

fn diag(d: [i64; 4]) -> Mat4 {
    (0..4).map(|r| (0..4).map(|c| if r == c { Scalar::int(d[r]) } else { Scalar::zero() }).collect()).collect()
}

/// Cayley transform `(1 - K)^{-1} (1 + K)` with `K = g A`, `A` antisymmetric with the given
/// upper-triangle entries `(a01, a02, a03, a12, a13, a23)`.
pub fn cayley(upper: [(i64, i64); 6]) -> Mat4 {
    let mut a = vec![vec![Scalar::zero(); 4]; 4];
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for ((r, c), (num, den)) in pairs.into_iter().zip(upper) {
        a[r][c] = Scalar::ratio(num, den);
        a[c][r] = -Scalar::ratio(num, den);
    }
    let k: Mat4 = (0..4).map(|r| a[r].iter().map(|v| v * &Scalar::int(metric(r as u8, r as u8))).collect()).collect();
    let id = identity();
    let lhs: Mat4 = (0..4).map(|r| (0..4).map(|c| &id[r][c] - &k[r][c]).collect()).collect();
    let rhs: Mat4 = (0..4).map(|r| (0..4).map(|c| &id[r][c] + &k[r][c]).collect()).collect();
    solve_linear(&lhs, &rhs).expect("1 - K is invertible for the sample generators")
}

/// `Lambda^T g Lambda - g`, exactly.
pub fn orthogonality_defect(l: &Mat4) -> Mat4 {
    let g = diag([-1, 1, 1, 1]);
    let lt: Mat4 = (0..4).map(|r| (0..4).map(|c| l[c][r].clone()).collect()).collect();
    let p = matmul(&matmul(&lt, &g), l);
    (0..4).map(|r| (0..4).map(|c| &p[r][c] - &g[r][c]).collect()).collect()
}

/// Deterministic sample of Lorentz matrices: two Cayley transforms times each of the component
/// representatives `1`, parity, time reversal and their product.
pub fn sample_points() -> &'static [Mat4] {
    static POINTS: OnceLock<Vec<Mat4>> = OnceLock::new();
    POINTS.get_or_init(build_points)
}

fn build_points() -> Vec<Mat4> {
    let gens = [
        cayley([(1, 3), (1, 5), (-2, 7), (1, 2), (-1, 4), (2, 3)]),
        cayley([(-2, 5), (1, 7), (1, 4), (-3, 5), (1, 6), (1, 9)]),
    ];
    let reps = [diag([1, 1, 1, 1]), diag([1, -1, -1, -1]), diag([-1, 1, 1, 1]), diag([-1, -1, -1, -1])];
    let mut out = Vec::new();
    for g in &gens {
        for r in &reps {
            out.push(matmul(g, r));
        }
    }
    out
}

fn eval_word(w: &Word, l: &Mat4) -> (Word, Scalar) {
    let mut rest = Vec::with_capacity(w.len());
    let mut v = Scalar::one();
    for g in w {
        match g {
            Gen::Lambda(m, n) => v = &v * &l[*m as usize][*n as usize],
            _ => rest.push(*g),
        }
    }
    (rest, v)
}

/// Replace the `Lambda` entries of a normal-ordered polynomial by the entries of `l`.
pub fn eval_poly(p: &NCPoly, l: &Mat4) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in p.terms() {
        let (rest, v) = eval_word(w, l);
        out.add_term(rest, &(c * &v));
    }
    out
}

pub fn eval_tensor(t: &TensorPoly, left: &Mat4, right: &Mat4) -> TensorPoly {
    let mut out = TensorPoly::zero();
    for ((a, b), c) in t.terms() {
        let (ra, va) = eval_word(a, left);
        let (rb, vb) = eval_word(b, right);
        out.add_term(ra, rb, &(c * &(&va * &vb)));
    }
    out
}

/// True when `p` vanishes at every sample point.
pub fn poly_vanishes(p: &NCPoly) -> bool {
    p.is_zero() || sample_points().iter().all(|l| eval_poly(p, l).is_zero())
}

/// True when `t` vanishes for every pair of sample points on the two legs.
pub fn tensor_vanishes(t: &TensorPoly) -> bool {
    if t.is_zero() {
        return true;
    }
    let pts = sample_points();
    let n = pts.len();
    (0..n).all(|i| eval_tensor(t, &pts[i], &pts[(i + 3) % n]).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_lorentz() {
        for l in sample_points() {
            assert!(orthogonality_defect(l).iter().flatten().all(Scalar::is_zero));
        }
    }

    #[test]
    fn orthogonality_relation_vanishes() {
        // -(L^0_0)^2 + sum_k (L^k_0)^2 + 1 = 0
        let mut p = NCPoly::scalar(crate::scalars::Scalar::one());
        for k in 0..4u8 {
            let l = NCPoly::gen(Gen::Lambda(k, 0));
            p += &l.multiply(&l).scale(&crate::scalars::Scalar::int(metric(k, k)));
        }
        assert!(!p.is_zero());
        assert!(poly_vanishes(&p));
        assert!(!poly_vanishes(&NCPoly::gen(Gen::Lambda(0, 0))));
    }
}
