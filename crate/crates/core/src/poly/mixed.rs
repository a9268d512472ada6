use alloc::collections::BTreeMap;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{Exponent, MultiPoly};
use crate::PRUNE_TOL;

/// Sparse polynomial symbol `Σ c_{a,b} z^a z̄^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedSymbol {
    dim: usize,
    terms: BTreeMap<(Exponent, Exponent), Complex64>,
}

impl MixedSymbol {
    pub fn zero(dim: usize) -> Self {
        MixedSymbol { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::monomial(Exponent::zero(dim), Exponent::zero(dim), c)
    }

    /// `c z^a z̄^b`.
    pub fn monomial(a: Exponent, b: Exponent, c: Complex64) -> Self {
        assert_eq!(a.len(), b.len());
        let mut s = MixedSymbol::zero(a.len());
        s.add_term(a, b, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Exponent, Complex64)>>(dim: usize, terms: I) -> Self {
        let mut s = MixedSymbol::zero(dim);
        for (a, b, c) in terms {
            assert!(a.len() == dim && b.len() == dim, "exponent length must equal the number of variables");
            s.add_term(a, b, c);
        }
        s
    }

    /// The symbol `p(z)`.
    pub fn from_holomorphic(p: &MultiPoly) -> Self {
        let zero = Exponent::zero(p.dim());
        Self::from_terms(p.dim(), p.terms().map(|(e, c)| (*e, zero, *c)))
    }

    /// The symbol `conj(p(z))`.
    pub fn from_antiholomorphic(p: &MultiPoly) -> Self {
        let zero = Exponent::zero(p.dim());
        Self::from_terms(p.dim(), p.terms().map(|(e, c)| (zero, *e, c.conj())))
    }

    /// `p(z) · conj(q(z))`.
    pub fn from_product(p: &MultiPoly, q: &MultiPoly) -> Self {
        let mut s = MixedSymbol::zero(p.dim());
        for (a, ca) in p.terms() {
            for (b, cb) in q.terms() {
                s.add_term(*a, *b, ca * cb.conj());
            }
        }
        s
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

    /// Terms `(a, b, c)` for `c z^a z̄^b`.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Exponent, &Complex64)> + '_ {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn coeff(&self, a: &Exponent, b: &Exponent) -> Complex64 {
        self.terms.get(&(*a, *b)).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, a: Exponent, b: Exponent, c: Complex64) {
        let key = (a, b);
        if c.norm() < PRUNE_TOL && !self.terms.contains_key(&key) {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        *slot += c;
        if slot.norm() < PRUNE_TOL {
            self.terms.remove(&key);
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        let mut sum = Complex64::default();
        for ((a, b), &c) in &self.terms {
            let mut t = c;
            for (i, &zi) in z.iter().enumerate() {
                let (p, q) = (a.get(i) as u32, b.get(i) as u32);
                if p > 0 {
                    t *= zi.powu(p);
                }
                if q > 0 {
                    t *= zi.conj().powu(q);
                }
            }
            sum += t;
        }
        sum
    }

    /// Complex conjugate symbol.
    pub fn conjugate(&self) -> Self {
        MixedSymbol { dim: self.dim, terms: self.terms.iter().map(|((a, b), c)| ((*b, *a), c.conj())).collect() }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.degree() == 0)
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.terms.keys().all(|(a, _)| a.degree() == 0)
    }

    /// No term mixes `z` and `z̄`, i.e. the symbol is `f + conj(g)`.
    pub fn is_pluriharmonic(&self) -> bool {
        self.terms.keys().all(|(a, b)| a.degree() == 0 || b.degree() == 0)
    }

    /// Holomorphic part `f` (including the constant term).
    pub fn holomorphic_part(&self) -> MultiPoly {
        MultiPoly::from_terms(self.dim, self.terms.iter().filter(|((_, b), _)| b.degree() == 0).map(|((a, _), c)| (*a, *c)))
    }

    /// `g` with `conj(g)` the purely antiholomorphic non-constant part.
    pub fn antiholomorphic_part(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.dim,
            self.terms
                .iter()
                .filter(|((a, b), _)| a.degree() == 0 && b.degree() > 0)
                .map(|((_, b), c)| (*b, c.conj())),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = MixedSymbol::zero(self.dim);
        for ((a, b), &c) in &self.terms {
            out.add_term(*a, *b, c * s);
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `max_i |a_i - b_i|` over all terms: how far the Toeplitz operator moves
    /// a box-basis index in any coordinate.
    pub fn band(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|(a, b)| (0..self.dim).map(move |i| a.get(i).abs_diff(b.get(i))))
            .max()
            .unwrap_or(0)
    }

    /// Largest total-degree shift `| |a| - |b| |`.
    pub fn degree_band(&self) -> usize {
        self.terms.keys().map(|(a, b)| a.degree().abs_diff(b.degree())).max().unwrap_or(0)
    }

    pub fn max_exponent(&self) -> usize {
        self.terms.keys().map(|(a, b)| a.max_entry().max(b.max_entry())).max().unwrap_or(0)
    }

    /// `∂/∂z_i`.
    pub fn d_dz(&self, i: usize) -> Self {
        let mut out = MixedSymbol::zero(self.dim);
        for ((a, b), &c) in &self.terms {
            let k = a.get(i);
            if k > 0 {
                out.add_term(a.with(i, k - 1), *b, c * k as f64);
            }
        }
        out
    }

    /// `∂/∂z̄_i`.
    pub fn d_dzbar(&self, i: usize) -> Self {
        let mut out = MixedSymbol::zero(self.dim);
        for ((a, b), &c) in &self.terms {
            let k = b.get(i);
            if k > 0 {
                out.add_term(*a, b.with(i, k - 1), c * k as f64);
            }
        }
        out
    }

    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }
}

impl AddAssign<&MixedSymbol> for MixedSymbol {
    fn add_assign(&mut self, rhs: &MixedSymbol) {
        assert_eq!(self.dim, rhs.dim);
        for ((a, b), &c) in &rhs.terms {
            self.add_term(*a, *b, c);
        }
    }
}

impl Add for &MixedSymbol {
    type Output = MixedSymbol;
    fn add(self, rhs: &MixedSymbol) -> MixedSymbol {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MixedSymbol {
    type Output = MixedSymbol;
    fn sub(self, rhs: &MixedSymbol) -> MixedSymbol {
        let mut out = self.clone();
        out += &rhs.scale(Complex64::new(-1.0, 0.0));
        out
    }
}

impl Mul for &MixedSymbol {
    type Output = MixedSymbol;
    fn mul(self, rhs: &MixedSymbol) -> MixedSymbol {
        assert_eq!(self.dim, rhs.dim);
        let mut out = MixedSymbol::zero(self.dim);
        for ((a1, b1), &c1) in &self.terms {
            for ((a2, b2), &c2) in &rhs.terms {
                out.add_term(a1.add(a2), b1.add(b2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MixedSymbol {
    type Output = MixedSymbol;
    fn neg(self) -> MixedSymbol {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MixedSymbol {
            type Output = MixedSymbol;
            fn $m(self, rhs: MixedSymbol) -> MixedSymbol { (&self).$m(&rhs) }
        }
        impl $tr<&MixedSymbol> for MixedSymbol {
            type Output = MixedSymbol;
            fn $m(self, rhs: &MixedSymbol) -> MixedSymbol { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn parts_and_conjugate() {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let s = &MixedSymbol::from_holomorphic(&z1) + &MixedSymbol::from_antiholomorphic(&z2.scale(c(0.0, 2.0)));
        assert!(s.is_pluriharmonic());
        assert!(!s.is_holomorphic());
        assert_eq!(s.holomorphic_part(), z1);
        assert_eq!(s.antiholomorphic_part(), z2.scale(c(0.0, 2.0)));
        let zz = [c(0.2, 0.3), c(-0.4, 0.1)];
        assert!((s.conjugate().eval(&zz) - s.eval(&zz).conj()).norm() < 1e-15);
    }

    #[test]
    fn band_and_product() {
        let s = MixedSymbol::from_product(&MultiPoly::var(2, 0).pow(2), &MultiPoly::var(2, 1));
        assert_eq!(s.band(), 2);
        assert_eq!(s.degree_band(), 1);
        assert!(!s.is_pluriharmonic());
        let zz = [c(0.5, -0.1), c(0.3, 0.3)];
        assert!((s.eval(&zz) - zz[0] * zz[0] * zz[1].conj()).norm() < 1e-15);
        let sq = &s * &s;
        assert!((sq.eval(&zz) - s.eval(&zz).powu(2)).norm() < 1e-14);
    }

    #[test]
    fn wirtinger_derivatives() {
        let s = MixedSymbol::monomial(Exponent::new(&[2, 0]), Exponent::new(&[1, 0]), c(1.0, 0.0));
        assert_eq!(s.d_dz(0), MixedSymbol::monomial(Exponent::new(&[1, 0]), Exponent::new(&[1, 0]), c(2.0, 0.0)));
        assert_eq!(s.d_dzbar(0), MixedSymbol::monomial(Exponent::new(&[2, 0]), Exponent::zero(2), c(1.0, 0.0)));
        assert!(s.d_dz(1).is_zero());
    }
}
