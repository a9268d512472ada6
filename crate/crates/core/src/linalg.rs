//! Small dense helpers over `nalgebra` complex matrices.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest entry modulus; 0 for an empty matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn frobenius(m: &CMatrix) -> f64 {
    libm::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// Numerical rank: singular values above `rel_tol` times the largest one.
pub fn rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Least-squares solution of `a x = b` and the max-abs residual `|a x - b|`.
pub fn lstsq(a: &CMatrix, b: &CVector) -> Option<(CVector, f64)> {
    if a.ncols() == 0 {
        let res = b.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()));
        return Some((CVector::zeros(0), res));
    }
    let svd = a.clone().svd(true, true);
    let x = svd.solve(b, 1e-13).ok()?;
    let r = a * &x - b;
    let res = r.iter().fold(0.0, |acc: f64, z| acc.max(z.norm()));
    Some((x, res))
}

pub fn dense_from_rows(rows: &[Vec<Complex64>]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| rows[i][j])
}
