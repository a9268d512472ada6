use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{isotypic_basis, QuotientBasis, QuotientDescriptor};
use crate::bergman::{BasisShape, QuadratureOrders, QuadratureRule, TruncatedOperator, Weight};
use crate::groups::{one_dim_characters, ReflectionGroup};
use crate::isotypic::invariance_residual;
use crate::linalg::{max_abs, CMatrix};
use crate::poly::{Exponent, MixedSymbol, MultiPoly};
use crate::{Error, Result, INVARIANCE_TOL};

/// `P(u·f)` as a polynomial: `P(z^p z̄^q) = ‖z^p‖²/‖z^{p−q}‖² z^{p−q}` for
/// `p ≥ q` and `0` otherwise (valid on Reinhardt domains).
fn toeplitz_apply(w: &Weight, u: &MixedSymbol, f: &MultiPoly, norms: &mut BTreeMap<Exponent, f64>) -> MultiPoly {
    let mut norm = |e: &Exponent| *norms.entry(*e).or_insert_with(|| w.monomial_norm_sq(e));
    let mut out = MultiPoly::zero(f.dim());
    for (m, &fm) in f.terms() {
        for (a, b, &c) in u.terms() {
            let Some(target) = m.shift(a, b) else { continue };
            let top = norm(&m.add(a));
            out.add_term(target, c * fm * (top / norm(&target)));
        }
    }
    out
}

/// `⟨u·v_j, v_i⟩` for polynomial vectors, exactly.
pub fn toeplitz_on_vectors(w: &Weight, u: &MixedSymbol, vectors: &[MultiPoly]) -> CMatrix {
    let mut norms = BTreeMap::new();
    let images: Vec<MultiPoly> = vectors.iter().map(|v| toeplitz_apply(w, u, v, &mut norms)).collect();
    CMatrix::from_fn(vectors.len(), vectors.len(), |i, j| w.inner(&images[j], &vectors[i]))
}

/// The compression of `T_ũ` to the χ-isotypic component, in the basis
/// `basis`. By the intertwining property this is also the matrix of `T_u`
/// on `A²_{ω_χ}(θ(Ω))` in the `Γ_χ`-pushed basis.
pub fn compressed_toeplitz(q: &QuotientDescriptor, u_tilde: &MixedSymbol, basis: &QuotientBasis) -> Result<TruncatedOperator> {
    if u_tilde.dim() != q.group().dim() {
        return Err(Error::Dimension { expected: q.group().dim(), got: u_tilde.dim() });
    }
    let r = invariance_residual(q.group(), u_tilde);
    if r > INVARIANCE_TOL * u_tilde.max_abs_coeff().max(1.0) {
        return Err(Error::NotInvariant { residual: r });
    }
    if u_tilde.max_exponent() > basis.truncation() {
        return Err(Error::Truncation { exponent: u_tilde.max_exponent(), truncation: basis.truncation() });
    }
    let m = toeplitz_on_vectors(q.weight(), u_tilde, basis.vectors());
    TruncatedOperator::new(m, basis.labels().to_vec(), basis.truncation(), u_tilde.band(), BasisShape::Box)
}

/// Independent oracle for [`compressed_toeplitz`]: integrates
/// `u φ_j conj(φ_i) ω_χ` over `θ(Ω)` through the change of variables
/// `∫_{θ(Ω)} F dV = (1/|G|) ∫_Ω (F∘θ)|J_θ|² dV`, with `φ_j = Γ_χ^{-1} b_j`
/// and `ω_χ` from [`QuotientDescriptor::omega_rho_eval`].
pub fn quotient_toeplitz_quadrature<F>(
    q: &QuotientDescriptor,
    u: F,
    basis: &QuotientBasis,
    orders: QuadratureOrders,
) -> Result<TruncatedOperator>
where
    F: Fn(&[Complex64]) -> Complex64,
{
    let phis = basis.vectors().iter().map(|b| q.gamma_inverse(b)).collect::<Result<Vec<_>>>()?;
    let rule = QuadratureRule::new(q.weight(), orders)?;
    let inv_order = 1.0 / q.group().order() as f64;
    let len = phis.len();
    let mut acc = CMatrix::zeros(len, len);
    const CHUNK: usize = 2048;
    let mut z = alloc::vec![Complex64::default(); q.group().dim()];
    let mut start = 0;
    while start < rule.len() {
        let end = (start + CHUNK).min(rule.len());
        let mut e = CMatrix::zeros(end - start, len);
        let mut s = CMatrix::zeros(end - start, len);
        for k in start..end {
            let wt = rule.node(k, &mut z);
            let w = q.theta().eval(&z);
            // the rule already carries ω(z); divide it back out
            let dens = q.omega_rho_eval(&z)? * q.jacobian().eval(&z).norm_sqr() / q.weight().eval(&z);
            let scale = u(&w) * (wt * dens * inv_order);
            for (j, phi) in phis.iter().enumerate() {
                let v = phi.eval(&w);
                e[(k - start, j)] = v;
                s[(k - start, j)] = v * scale;
            }
        }
        acc += e.adjoint() * s;
        start = end;
    }
    TruncatedOperator::new(acc, basis.labels().to_vec(), basis.truncation(), basis.truncation(), BasisShape::Box)
}

/// Off-block size of an invariant symbol's Toeplitz matrix in the basis
/// adapted to the one-dimensional isotypic components.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    /// Largest modulus of an entry coupling two different components.
    pub off_block: f64,
    /// Size of each component, in character order.
    pub block_sizes: Vec<usize>,
    /// Whether the components together span every box monomial.
    pub exhaustive: bool,
}

pub fn block_structure(group: &ReflectionGroup, weight: &Weight, u_tilde: &MixedSymbol, n: usize) -> Result<BlockReport> {
    let mut vectors = Vec::new();
    let mut owner = Vec::new();
    let mut block_sizes = Vec::new();
    for (k, chi) in one_dim_characters(group)?.iter().enumerate() {
        let q = QuotientDescriptor::new(group, chi, weight)?;
        let b = isotypic_basis(&q, n)?;
        block_sizes.push(b.len());
        owner.extend(core::iter::repeat_n(k, b.len()));
        vectors.extend_from_slice(b.vectors());
    }
    let r = invariance_residual(group, u_tilde);
    if r > INVARIANCE_TOL * u_tilde.max_abs_coeff().max(1.0) {
        return Err(Error::NotInvariant { residual: r });
    }
    let m = toeplitz_on_vectors(weight, u_tilde, &vectors);
    let mut off = CMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if owner[i] != owner[j] {
                off[(i, j)] = m[(i, j)];
            }
        }
    }
    let total = (n + 1).pow(group.dim() as u32);
    Ok(BlockReport { off_block: max_abs(&off), exhaustive: vectors.len() == total, block_sizes })
}
