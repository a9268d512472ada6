use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::GROUP_TOL;

/// Exact description carried alongside the float matrix when one is cheap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactForm {
    /// `perm[j]` is the image of basis vector `j`: `M e_j = e_{perm[j]}`.
    Permutation(Vec<usize>),
    /// Entry `i` is `exp(2πi k_i / n_i)`; stores `(k_i, n_i)`.
    Diagonal(Vec<(usize, usize)>),
    None,
}

/// A `d × d` complex matrix of finite order.
#[derive(Debug, Clone)]
pub struct GroupElement {
    dim: usize,
    matrix: Vec<Complex64>,
    exact: ExactForm,
    order_hint: Option<usize>,
}

/// `exp(2πi k / n)`, exact at multiples of a quarter turn.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let t = 2.0 * PI * k as f64 / n as f64;
    Complex64::new(libm::cos(t), libm::sin(t))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl GroupElement {
    pub fn from_matrix(dim: usize, matrix: Vec<Complex64>) -> Self {
        assert_eq!(matrix.len(), dim * dim, "matrix must be dim × dim");
        GroupElement { dim, matrix, exact: ExactForm::None, order_hint: None }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = vec![Complex64::zero(); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = Complex64::one();
        }
        GroupElement {
            dim,
            matrix: m,
            exact: ExactForm::Permutation((0..dim).collect()),
            order_hint: Some(1),
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Self {
        let dim = perm.len();
        let mut m = vec![Complex64::zero(); dim * dim];
        for (j, &pj) in perm.iter().enumerate() {
            m[pj * dim + j] = Complex64::one();
        }
        let order = permutation_order(&perm);
        GroupElement { dim, matrix: m, exact: ExactForm::Permutation(perm), order_hint: Some(order) }
    }

    /// `diag(ζ_{n_1}^{k_1}, …)` from `(k_i, n_i)` pairs.
    pub fn diagonal(entries: Vec<(usize, usize)>) -> Self {
        let dim = entries.len();
        let mut m = vec![Complex64::zero(); dim * dim];
        let mut order = 1;
        for (i, &(k, n)) in entries.iter().enumerate() {
            m[i * dim + i] = root_of_unity(k, n);
            order = lcm(order, n / gcd(k % n, n).max(1));
        }
        let entries = entries.into_iter().map(|(k, n)| (k % n, n)).collect();
        GroupElement { dim, matrix: m, exact: ExactForm::Diagonal(entries), order_hint: Some(order) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn exact(&self) -> &ExactForm {
        &self.exact
    }

    pub fn order_hint(&self) -> Option<usize> {
        self.order_hint
    }

    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j) * z[j]).sum())
            .collect()
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        match (&self.exact, &other.exact) {
            (ExactForm::Permutation(p), ExactForm::Permutation(q)) => {
                GroupElement::permutation(q.iter().map(|&j| p[j]).collect())
            }
            (ExactForm::Diagonal(a), ExactForm::Diagonal(b)) if a.len() == b.len() => {
                GroupElement::diagonal(
                    a.iter().zip(b).map(|(&(k1, n), &(k2, _))| ((k1 + k2) % n, n)).collect(),
                )
            }
            _ => {
                let d = self.dim;
                let mut m = vec![Complex64::zero(); d * d];
                for i in 0..d {
                    for j in 0..d {
                        m[i * d + j] = (0..d).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
                    }
                }
                GroupElement::from_matrix(d, m)
            }
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match &self.exact {
            ExactForm::Permutation(p) => {
                let mut inv = vec![0; p.len()];
                for (j, &pj) in p.iter().enumerate() {
                    inv[pj] = j;
                }
                GroupElement::permutation(inv)
            }
            ExactForm::Diagonal(e) => {
                GroupElement::diagonal(e.iter().map(|&(k, n)| ((n - k % n) % n, n)).collect())
            }
            ExactForm::None => {
                let m = crate::linalg::CMatrix::from_fn(self.dim, self.dim, |i, j| self.entry(i, j));
                let inv = m.try_inverse().expect("group elements are invertible");
                let d = self.dim;
                let mut out = GroupElement::from_matrix(d, (0..d * d).map(|t| inv[(t / d, t % d)]).collect());
                out.order_hint = self.order_hint;
                out
            }
        }
    }

    pub fn det(&self) -> Complex64 {
        match &self.exact {
            ExactForm::Permutation(p) => {
                if permutation_parity(p) {
                    Complex64::new(-1.0, 0.0)
                } else {
                    Complex64::one()
                }
            }
            ExactForm::Diagonal(e) => e.iter().map(|&(k, n)| root_of_unity(k, n)).product(),
            ExactForm::None => {
                let m = crate::linalg::CMatrix::from_fn(self.dim, self.dim, |i, j| self.entry(i, j));
                m.determinant()
            }
        }
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&GroupElement::identity(self.dim))
    }

    /// Entrywise equality within the group tolerance.
    pub fn approx_eq(&self, other: &GroupElement) -> bool {
        self.dim == other.dim
            && self.matrix.iter().zip(&other.matrix).all(|(a, b)| (a - b).norm() <= GROUP_TOL)
    }
}

fn permutation_order(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut order = 1;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        order = lcm(order, len);
    }
    order
}

/// True for odd permutations.
pub(crate) fn permutation_parity(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut j = start;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}
