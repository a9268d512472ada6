use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::basis::is_interior;
use super::quadrature::{QuadratureOrders, QuadratureRule};
use super::{monomial_value, BasisShape, Domain, MonomialBasis, Weight};
use crate::linalg::{max_abs, CMatrix};
use crate::poly::{Exponent, MixedSymbol};
use crate::{Error, Result};

/// A finite section of an operator in an orthonormal basis indexed by
/// exponent labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    matrix: CMatrix,
    labels: Vec<Exponent>,
    truncation: usize,
    band_margin: usize,
    shape: BasisShape,
}

impl TruncatedOperator {
    pub fn new(
        matrix: CMatrix,
        labels: Vec<Exponent>,
        truncation: usize,
        band_margin: usize,
        shape: BasisShape,
    ) -> Result<Self> {
        if matrix.nrows() != labels.len() || matrix.ncols() != labels.len() {
            return Err(Error::Size(format!(
                "{}x{} matrix for {} labels",
                matrix.nrows(),
                matrix.ncols(),
                labels.len()
            )));
        }
        Ok(TruncatedOperator { matrix, labels, truncation, band_margin, shape })
    }

    pub fn identity(labels: Vec<Exponent>, truncation: usize, shape: BasisShape) -> Self {
        let n = labels.len();
        TruncatedOperator { matrix: CMatrix::identity(n, n), labels, truncation, band_margin: 0, shape }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[Exponent] {
        &self.labels
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Largest index shift of the generating symbol.
    pub fn band_margin(&self) -> usize {
        self.band_margin
    }

    pub fn shape(&self) -> BasisShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Positions of the labels at least `margin` inside the truncation.
    pub fn interior_indices(&self, margin: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| is_interior(self.shape, self.truncation, &self.labels[i], margin)).collect()
    }

    /// The interior block at `margin`.
    pub fn restrict_interior(&self, margin: usize) -> TruncatedOperator {
        let idx = self.interior_indices(margin);
        let m = CMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
        TruncatedOperator {
            matrix: m,
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            truncation: self.truncation - margin.min(self.truncation),
            band_margin: self.band_margin,
            shape: self.shape,
        }
    }

    pub fn adjoint(&self) -> TruncatedOperator {
        TruncatedOperator { matrix: self.matrix.adjoint(), ..self.clone() }
    }

    fn check_compatible(&self, other: &TruncatedOperator) -> Result<()> {
        if self.labels != other.labels || self.truncation != other.truncation || self.shape != other.shape {
            return Err(Error::Size("operators live on different truncated bases".into()));
        }
        Ok(())
    }

    /// `max |A − B|` entrywise on the same basis.
    pub fn max_abs_diff(&self, other: &TruncatedOperator) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(max_abs(&(&self.matrix - &other.matrix)))
    }

    /// Plain matrix sum on the same basis.
    pub fn add(&self, other: &TruncatedOperator) -> Result<TruncatedOperator> {
        self.check_compatible(other)?;
        Ok(TruncatedOperator {
            matrix: &self.matrix + &other.matrix,
            band_margin: self.band_margin.max(other.band_margin),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: Complex64) -> TruncatedOperator {
        TruncatedOperator { matrix: self.matrix.map(|z| z * s), ..self.clone() }
    }
}

/// Natural basis shape of a domain.
pub(crate) fn default_shape(w: &Weight) -> BasisShape {
    match w.domain() {
        Domain::Polydisc => BasisShape::Box,
        Domain::Ball => BasisShape::Simplex,
    }
}

/// Finite section of `T_u` on the monomials with every exponent `≤ N`
/// (polydisc) or total degree `≤ N` (ball).
pub fn toeplitz_matrix(u: &MixedSymbol, w: &Weight, n: usize) -> Result<TruncatedOperator> {
    toeplitz_matrix_on(u, w, &MonomialBasis::new(w.dim(), n, default_shape(w)))
}

/// Finite section of `T_u` in the orthonormal basis `z^m/‖z^m‖`:
/// entry `(n, m) = Σ c_{a,b} [n = m+a−b] ‖z^{m+a}‖² / (‖z^m‖‖z^n‖)`.
pub fn toeplitz_matrix_on(u: &MixedSymbol, w: &Weight, basis: &MonomialBasis) -> Result<TruncatedOperator> {
    if u.dim() != w.dim() || basis.dim() != w.dim() {
        return Err(Error::Dimension { expected: w.dim(), got: u.dim() });
    }
    let n = basis.truncation();
    if u.max_exponent() > n {
        return Err(Error::Truncation { exponent: u.max_exponent(), truncation: n });
    }
    let mut norms: BTreeMap<Exponent, f64> = BTreeMap::new();
    let mut norm_sq = |e: &Exponent| *norms.entry(*e).or_insert_with(|| w.monomial_norm_sq(e));
    let len = basis.len();
    let mut m = CMatrix::zeros(len, len);
    let terms: Vec<(Exponent, Exponent, Complex64)> = u.terms().map(|(a, b, c)| (*a, *b, *c)).collect();
    for (col, em) in basis.indices().iter().enumerate() {
        let nm = norm_sq(em);
        for (a, b, c) in &terms {
            let Some(target) = em.shift(a, b) else { continue };
            let Some(row) = basis.position(&target) else { continue };
            let top = norm_sq(&em.add(a));
            let nn = norm_sq(&target);
            m[(row, col)] += c * (top / libm::sqrt(nm * nn));
        }
    }
    let band = match basis.shape() {
        BasisShape::Box => u.band(),
        BasisShape::Simplex => u.degree_band(),
    };
    TruncatedOperator::new(m, basis.indices().to_vec(), n, band, basis.shape())
}

/// Interior block of `A·B`. The margin must cover both bands, so that the
/// block agrees with the untruncated composition.
pub fn op_product_interior(a: &TruncatedOperator, b: &TruncatedOperator, margin: usize) -> Result<TruncatedOperator> {
    a.check_compatible(b)?;
    let required = a.band_margin + b.band_margin;
    if margin < required {
        return Err(Error::Margin { given: margin, required });
    }
    let full = TruncatedOperator {
        matrix: &a.matrix * &b.matrix,
        labels: a.labels.clone(),
        truncation: a.truncation,
        band_margin: required,
        shape: a.shape,
    };
    Ok(full.restrict_interior(margin))
}

/// Finite section of `T_u` for a sampled symbol, entries by quadrature:
/// `⟨u e_m, e_n⟩ = ∫ u z^m conj(z^n) ω dV / (‖z^m‖‖z^n‖)`. The band margin
/// is unknown and recorded as the truncation.
pub fn toeplitz_quadrature<F: Fn(&[Complex64]) -> Complex64>(
    u: F,
    w: &Weight,
    basis: &MonomialBasis,
    orders: QuadratureOrders,
) -> Result<TruncatedOperator> {
    let rule = QuadratureRule::new(w, orders)?;
    let len = basis.len();
    let inv_norms: Vec<f64> = basis.indices().iter().map(|e| 1.0 / libm::sqrt(w.monomial_norm_sq(e))).collect();
    let mut acc = CMatrix::zeros(len, len);
    const CHUNK: usize = 2048;
    let mut z = alloc::vec![Complex64::default(); w.dim()];
    let mut start = 0;
    while start < rule.len() {
        let end = (start + CHUNK).min(rule.len());
        let mut e = CMatrix::zeros(end - start, len);
        let mut s = CMatrix::zeros(end - start, len);
        for k in start..end {
            let wt = rule.node(k, &mut z);
            let uw = u(&z) * wt;
            for (col, ex) in basis.indices().iter().enumerate() {
                let v = monomial_value(ex, &z) * inv_norms[col];
                e[(k - start, col)] = v;
                s[(k - start, col)] = v * uw;
            }
        }
        acc += e.adjoint() * s;
        start = end;
    }
    TruncatedOperator::new(acc, basis.indices().to_vec(), basis.truncation(), basis.truncation(), basis.shape())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::poly::MultiPoly;

    fn zbar() -> MixedSymbol {
        MixedSymbol::from_antiholomorphic(&MultiPoly::var(1, 0))
    }

    #[test]
    fn identity_and_shift() {
        let w = Weight::unweighted(1).unwrap();
        let t = toeplitz_matrix(&MixedSymbol::one(1), &w, 5).unwrap();
        assert_eq!(t.matrix(), &CMatrix::identity(6, 6));
        let t = toeplitz_matrix(&zbar(), &w, 6).unwrap();
        for n in 0..6 {
            let want = libm::sqrt((n as f64 + 1.0) / (n as f64 + 2.0));
            assert!((t.entry(n, n + 1).re - want).abs() < 1e-15);
        }
        assert!((t.entry(0, 1).re - libm::sqrt(0.5)).abs() < 1e-15);
        let zz = MixedSymbol::from_product(&MultiPoly::var(1, 0), &MultiPoly::var(1, 0));
        let t = toeplitz_matrix(&zz, &w, 6).unwrap();
        for n in 0..=6 {
            assert!((t.entry(n, n).re - (n as f64 + 1.0) / (n as f64 + 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn brown_halmos_on_interior() {
        let w = Weight::unweighted(1).unwrap();
        let z = MixedSymbol::from_holomorphic(&MultiPoly::var(1, 0));
        let zz = &zbar() * &z;
        let n = 10;
        let tz = toeplitz_matrix(&z, &w, n).unwrap();
        let tzb = toeplitz_matrix(&zbar(), &w, n).unwrap();
        let tzz = toeplitz_matrix(&zz, &w, n).unwrap();
        let p = op_product_interior(&tzb, &tz, 2).unwrap();
        assert!(p.max_abs_diff(&tzz.restrict_interior(2)).unwrap() < 1e-15);
        let q = op_product_interior(&tz, &tzb, 2).unwrap();
        let r = q.max_abs_diff(&tzz.restrict_interior(2)).unwrap();
        assert!(r > 0.1);
        assert!((q.entry(0, 0) - c(0.0, 0.0)).norm() < 1e-15);
        assert!(matches!(op_product_interior(&tz, &tzb, 1), Err(Error::Margin { given: 1, required: 2 })));
    }

    #[test]
    fn truncation_error() {
        let w = Weight::unweighted(1).unwrap();
        let big = MixedSymbol::from_holomorphic(&MultiPoly::var(1, 0).pow(5));
        assert!(matches!(toeplitz_matrix(&big, &w, 4), Err(Error::Truncation { exponent: 5, truncation: 4 })));
    }

    #[test]
    fn quadrature_section_matches_exact() {
        let w = Weight::polydisc(alloc::vec![1.0, 0.0]).unwrap();
        let u = MixedSymbol::from_product(&MultiPoly::var(2, 0), &MultiPoly::var(2, 1))
            + MixedSymbol::constant(2, c(0.5, -1.0));
        let basis = MonomialBasis::new(2, 3, BasisShape::Box);
        let exact = toeplitz_matrix_on(&u, &w, &basis).unwrap();
        let quad = toeplitz_quadrature(|z| u.eval(z), &w, &basis, QuadratureOrders::new(6, 10)).unwrap();
        assert!(max_abs(&(exact.matrix() - quad.matrix())) < 1e-12);
    }

    #[test]
    fn ball_sections_use_simplex() {
        let w = Weight::ball(2).unwrap();
        let t = toeplitz_matrix(&MixedSymbol::from_holomorphic(&MultiPoly::var(2, 0)), &w, 3).unwrap();
        assert_eq!(t.dim(), 10);
        assert_eq!(t.band_margin(), 1);
        let basis = MonomialBasis::new(2, 3, BasisShape::Simplex);
        let u = MixedSymbol::from_product(&MultiPoly::var(2, 1), &MultiPoly::var(2, 0));
        let exact = toeplitz_matrix_on(&u, &w, &basis).unwrap();
        let quad = toeplitz_quadrature(|z| u.eval(z), &w, &basis, QuadratureOrders::new(6, 10)).unwrap();
        assert!(max_abs(&(exact.matrix() - quad.matrix())) < 1e-12);
    }
}
