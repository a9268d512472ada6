use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::Exponent;
use crate::PRUNE_TOL;

/// Sparse holomorphic polynomial `Σ c_a z^a` in `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::monomial(Exponent::zero(dim), c)
    }

    /// The coordinate function `z_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(dim, i), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(exp: Exponent, c: Complex64) -> Self {
        let mut p = MultiPoly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The linear form `Σ v_i z_i`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let dim = coeffs.len();
        let mut p = MultiPoly::zero(dim);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Exponent::unit(dim, i), c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Complex64)>>(dim: usize, terms: I) -> Self {
        let mut p = MultiPoly::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must equal the number of variables");
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Complex64)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    /// Adds `c z^exp`, dropping the term if it cancels below [`PRUNE_TOL`].
    pub fn add_term(&mut self, exp: Exponent, c: Complex64) {
        if c.norm() < PRUNE_TOL && !self.terms.contains_key(&exp) {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += c;
        if slot.norm() < PRUNE_TOL {
            self.terms.remove(&exp);
        }
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(Exponent, Complex64)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, *c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    pub fn max_exponent(&self) -> usize {
        self.terms.keys().map(|e| e.max_entry()).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients with modulus `≤ tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut p = MultiPoly::zero(self.dim);
        for (e, &c) in &self.terms {
            p.add_term(*e, c * s);
        }
        p
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = MultiPoly::one(self.dim);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        let mut sum = Complex64::default();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &zi) in z.iter().enumerate() {
                t *= zi.powu(e.get(i) as u32);
            }
            sum += t;
        }
        sum
    }

    /// Partial derivative in `z_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = MultiPoly::zero(self.dim);
        for (e, &c) in &self.terms {
            let k = e.get(i);
            if k > 0 {
                p.add_term(e.with(i, k - 1), c * k as f64);
            }
        }
        p
    }

    /// Polynomial with conjugated coefficients, `z ↦ conj(p(z̄))`.
    pub fn conj_coeffs(&self) -> Self {
        MultiPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }

    /// Substitutes polynomials for the variables: `p(q_1, ..., q_dim)`.
    pub fn substitute(&self, qs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(qs.len(), self.dim);
        let out_dim = qs.first().map(|q| q.dim()).unwrap_or(0);
        let mut cache: Vec<Vec<MultiPoly>> = qs.iter().map(|q| alloc::vec![MultiPoly::one(out_dim), q.clone()]).collect();
        let mut out = MultiPoly::zero(out_dim);
        for (e, &c) in &self.terms {
            let mut t = MultiPoly::constant(out_dim, c);
            for (i, q) in qs.iter().enumerate() {
                let k = e.get(i);
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap() * q;
                    cache[i].push(next);
                }
                t = &t * &cache[i][k];
            }
            out += &t;
        }
        out
    }

    /// Coefficients as a dense vector over `basis`. Terms outside the basis
    /// are reported in the second component as the largest dropped modulus.
    pub fn coefficients_on(&self, index: &BTreeMap<Exponent, usize>, len: usize) -> (Vec<Complex64>, f64) {
        let mut v = alloc::vec![Complex64::default(); len];
        let mut dropped = 0.0f64;
        for (e, &c) in &self.terms {
            match index.get(e) {
                Some(&i) => v[i] = c,
                None => dropped = dropped.max(c.norm()),
            }
        }
        (v, dropped)
    }

    pub(crate) fn remove_term(&mut self, exp: &Exponent) {
        self.terms.remove(exp);
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.dim, rhs.dim);
        for (e, &c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.dim, rhs.dim);
        for (e, &c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.dim, rhs.dim);
        let mut out = MultiPoly::zero(self.dim);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly { (&self).$m(&rhs) }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    fn z(i: usize) -> MultiPoly {
        MultiPoly::var(2, i)
    }

    #[test]
    fn arithmetic() {
        let p = &z(0) + &z(1);
        let sq = p.pow(2);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&Exponent::new(&[1, 1])), c(2.0, 0.0));
        let diff = &sq - &(&(&z(0) * &z(0)) + &(&z(1) * &z(1)));
        assert_eq!(diff, z(0).scale(c(2.0, 0.0)) * z(1));
        assert!((&p - &p).is_zero());
        assert_eq!(p.degree(), Some(1));
        assert_eq!(MultiPoly::zero(2).degree(), None);
    }

    #[test]
    fn eval_and_derivative() {
        let p = MultiPoly::from_terms(2, [(Exponent::new(&[2, 1]), c(3.0, 0.0)), (Exponent::zero(2), c(0.0, 1.0))]);
        let v = p.eval(&[c(1.0, 1.0), c(2.0, 0.0)]);
        assert!((v - (c(3.0, 0.0) * c(1.0, 1.0).powu(2) * 2.0 + c(0.0, 1.0))).norm() < 1e-14);
        let d = p.derivative(0);
        assert_eq!(d, MultiPoly::monomial(Exponent::new(&[1, 1]), c(6.0, 0.0)));
    }

    #[test]
    fn substitution() {
        // p(u, v) = u v evaluated at u = z0 + z1, v = z0 z1
        let uv = MultiPoly::var(2, 0) * MultiPoly::var(2, 1);
        let q = uv.substitute(&[&z(0) + &z(1), &z(0) * &z(1)]);
        let zz = [c(0.3, 0.1), c(-0.2, 0.5)];
        let want = (zz[0] + zz[1]) * zz[0] * zz[1];
        assert!((q.eval(&zz) - want).norm() < 1e-14);
    }

    #[test]
    fn leading_term_is_grlex_max() {
        let p = &z(0).pow(2) + &z(1).pow(3);
        assert_eq!(p.leading_term().unwrap().0.to_vec(), [0, 3]);
    }
}
