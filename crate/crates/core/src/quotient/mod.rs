//! The passage from `A²_ω(Ω)` to `A²_{ω_χ}(θ(Ω))`: transferred weights, the
//! unitary `Γ_χ`, isotypic bases, compressed Toeplitz matrices and the
//! checks relating operators on both sides.
//!
//! Quotient-side objects are always represented through their pullbacks to
//! `Ω`; `θ(Ω)` is never meshed directly.

mod kernel;
mod toeplitz;
mod transfer;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

pub use kernel::{isotypic_kernel, kernel_identity_residual, quotient_kernel, symmetrized_volume, VolumeReport};
pub use toeplitz::{
    block_structure, compressed_toeplitz, quotient_toeplitz_quadrature, toeplitz_on_vectors, BlockReport,
};
pub use transfer::{
    lemma_pr_residual, pluriharmonic_lift, transfer_check, CharacterResidual, LemmaPrReport, TransferMode,
    TransferReport, TRANSFER_TOL,
};

use crate::bergman::{interior_points, Domain, Weight};
use crate::groups::{relative_generator, Character, CharacterLabel, GroupKind, ReflectionGroup};
use crate::isotypic::{divide_by_generator, gram_schmidt, invariant_to_theta, project, relative_invariance_residual};
use crate::poly::{basic_map, box_exponents, compose_map, jacobian_det, Exponent, MultiPoly, PolyMap};
use crate::{Error, Result, BRANCH_TOL, INVARIANCE_TOL};

/// `(G, θ, χ, ω)` together with `ℓ_χ` and `J_θ`.
#[derive(Debug, Clone)]
pub struct QuotientDescriptor {
    group: ReflectionGroup,
    theta: PolyMap,
    character: Character,
    weight: Weight,
    ell: MultiPoly,
    jacobian: MultiPoly,
}

impl QuotientDescriptor {
    /// Checks that χ is one-dimensional, that ω is `G`-invariant at 20 sample
    /// points and that `ℓ_χ` is a χ-relative invariant.
    pub fn new(group: &ReflectionGroup, character: &Character, weight: &Weight) -> Result<Self> {
        if character.degree() != 1 {
            return Err(Error::Domain(format!("character {} is not one-dimensional", character.label())));
        }
        if weight.dim() != group.dim() {
            return Err(Error::Dimension { expected: group.dim(), got: weight.dim() });
        }
        let mut worst = 0.0f64;
        for z in interior_points(weight, 20, 0.9) {
            let w0 = weight.eval(&z);
            for &g in group.generators() {
                worst = worst.max((weight.eval(&group.element(g).apply(&z)) - w0).abs());
            }
        }
        if worst > INVARIANCE_TOL {
            return Err(Error::NotInvariant { residual: worst });
        }
        let theta = basic_map(group)?;
        let ell = relative_generator(group, character);
        let r = relative_invariance_residual(group, character, &ell);
        if r > INVARIANCE_TOL {
            return Err(Error::Internal(format!("generating polynomial fails relative invariance by {r:e}")));
        }
        let jacobian = jacobian_det(&theta);
        Ok(QuotientDescriptor { group: group.clone(), theta, character: character.clone(), weight: weight.clone(), ell, jacobian })
    }

    pub fn group(&self) -> &ReflectionGroup {
        &self.group
    }

    pub fn theta(&self) -> &PolyMap {
        &self.theta
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// `ℓ_χ`.
    pub fn ell(&self) -> &MultiPoly {
        &self.ell
    }

    /// `J_θ`.
    pub fn jacobian(&self) -> &MultiPoly {
        &self.jacobian
    }

    pub fn label(&self) -> CharacterLabel {
        self.character.label()
    }

    fn check_branch(&self, z: &[Complex64]) -> Result<Complex64> {
        let j = self.jacobian.eval(z);
        if j.norm() < BRANCH_TOL {
            return Err(Error::SingularPoint { jacobian: j.norm() });
        }
        Ok(j)
    }

    /// `ω_χ(θ(z)) = |ℓ_χ(z)|²/|J_θ(z)|² · ω(z)`.
    pub fn omega_rho_eval(&self, z: &[Complex64]) -> Result<f64> {
        self.weight.check_interior(z)?;
        let j = self.check_branch(z)?;
        Ok(self.ell.eval(z).norm_sqr() / j.norm_sqr() * self.weight.eval(z))
    }

    /// `Γ_χ φ = (1/√|G|)(φ∘θ)ℓ_χ`.
    pub fn gamma_apply(&self, phi: &MultiPoly) -> Result<MultiPoly> {
        if phi.dim() != self.theta.target_dim() {
            return Err(Error::Dimension { expected: self.theta.target_dim(), got: phi.dim() });
        }
        let s = 1.0 / libm::sqrt(self.group.order() as f64);
        Ok((&compose_map(phi, &self.theta) * &self.ell).scale(Complex64::new(s, 0.0)))
    }

    /// `Γ_χ^{-1} f = √|G| · (f/ℓ_χ) expressed in θ`.
    pub fn gamma_inverse(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let quotient = divide_by_generator(&self.group, &self.character, f)?;
        let phi = invariant_to_theta(&self.group, &quotient)?;
        Ok(phi.scale(Complex64::new(libm::sqrt(self.group.order() as f64), 0.0)))
    }
}

/// Orthonormal basis of the χ-isotypic polynomials spanned by the box
/// monomials `z^λ`, `λ ∈ [0, N]^d`.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    labels: Vec<Exponent>,
    vectors: Vec<MultiPoly>,
    character: Character,
    truncation: usize,
}

impl QuotientBasis {
    /// Orbit representatives (lexicographically largest member).
    pub fn labels(&self) -> &[Exponent] {
        &self.labels
    }

    /// Orthonormal vectors in `A²_ω(Ω)`, all χ-relative invariants.
    pub fn vectors(&self) -> &[MultiPoly] {
        &self.vectors
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Projects every box monomial `z^λ` (`λ_i ≤ N`) with `P_χ`, keeps one per
/// orbit, orders the labels graded-lexicographically and orthonormalizes
/// with exact monomial inner products. For `S_d` the labels are the strictly
/// decreasing tuples (sign) or the non-increasing tuples (trivial).
pub fn isotypic_basis(q: &QuotientDescriptor, n: usize) -> Result<QuotientBasis> {
    match q.group.kind() {
        GroupKind::Symmetric { .. } | GroupKind::AbelianDiagonal { .. } => {}
        GroupKind::Custom => return Err(Error::Unsupported("isotypic bases need a symmetric or diagonal group".into())),
    }
    if q.weight.domain() != Domain::Polydisc {
        return Err(Error::Unsupported("isotypic bases are built on the polydisc".into()));
    }
    let mut picked: Vec<(Exponent, MultiPoly)> = Vec::new();
    for lambda in box_exponents(q.group.dim(), n) {
        let p = project(&q.group, &q.character, &MultiPoly::monomial(lambda, Complex64::new(1.0, 0.0)));
        if p.max_abs_coeff() < INVARIANCE_TOL {
            continue;
        }
        let rep = p.terms().map(|(e, _)| *e).max_by(|a, b| a.lex_cmp(b));
        if rep == Some(lambda) {
            picked.push((lambda, p));
        }
    }
    picked.sort_by(|a, b| a.0.cmp(&b.0));
    let polys: Vec<MultiPoly> = picked.iter().map(|p| p.1.clone()).collect();
    let vectors = gram_schmidt(&polys, |f, g| q.weight.inner(f, g));
    if vectors.len() != polys.len() {
        return Err(Error::Internal("projected monomials are linearly dependent".into()));
    }
    Ok(QuotientBasis { labels: picked.into_iter().map(|p| p.0).collect(), vectors, character: q.character.clone(), truncation: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::groups::{cyclic_diagonal_group, one_dim_characters, symmetric_group};

    fn s2(label: usize, weight: Weight) -> QuotientDescriptor {
        let g = symmetric_group(2).unwrap();
        let chi = one_dim_characters(&g).unwrap().remove(label);
        QuotientDescriptor::new(&g, &chi, &weight).unwrap()
    }

    #[test]
    fn transferred_weights() {
        let sign = s2(1, Weight::unweighted(2).unwrap());
        for z in interior_points(sign.weight(), 10, 0.9) {
            assert!((sign.omega_rho_eval(&z).unwrap() - 1.0).abs() < 1e-10);
        }
        let triv = s2(0, Weight::unweighted(2).unwrap());
        assert!((triv.omega_rho_eval(&[c(0.5, 0.0), c(0.1, 0.0)]).unwrap() - 6.25).abs() < 1e-12);
        assert!(matches!(triv.omega_rho_eval(&[c(0.3, 0.1), c(0.3, 0.1)]), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn gamma_examples() {
        let triv = s2(0, Weight::unweighted(2).unwrap());
        let r = libm::sqrt(0.5);
        assert!((&triv.gamma_apply(&MultiPoly::one(2)).unwrap() - &MultiPoly::constant(2, c(r, 0.0))).max_abs_coeff() < 1e-15);
        let z = |i| MultiPoly::var(2, i);
        let g = triv.gamma_apply(&z(0)).unwrap();
        assert!((&g - &(&z(0) + &z(1)).scale(c(r, 0.0))).max_abs_coeff() < 1e-15);
        let sign = s2(1, Weight::unweighted(2).unwrap());
        let g = sign.gamma_apply(&MultiPoly::one(2)).unwrap();
        assert!((&g - &(&z(0) - &z(1)).scale(c(r, 0.0))).max_abs_coeff() < 1e-15);
        let back = sign.gamma_inverse(&g).unwrap();
        assert!((&back - &MultiPoly::one(2)).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn s2_bases() {
        let sign = s2(1, Weight::unweighted(2).unwrap());
        let b = isotypic_basis(&sign, 8).unwrap();
        assert_eq!(b.len(), 36);
        assert_eq!(b.labels()[0].to_vec(), [1, 0]);
        let first = &b.vectors()[0];
        let want = (&MultiPoly::var(2, 0) - &MultiPoly::var(2, 1)).scale(c(1.0, 0.0));
        assert!((first - &want).max_abs_coeff() < 1e-14);
        let triv = s2(0, Weight::unweighted(2).unwrap());
        let t = isotypic_basis(&triv, 8).unwrap();
        assert_eq!(t.len(), 45);
        assert_eq!(t.vectors()[0], MultiPoly::one(2));
        for v in b.vectors() {
            assert!(divide_by_generator(sign.group(), sign.character(), v).is_ok());
        }
        assert!(b.labels().iter().all(|l| l.get(0) > l.get(1)));
        assert!(t.labels().iter().all(|l| l.get(0) >= l.get(1)));
    }

    #[test]
    fn diagonal_basis() {
        let g = cyclic_diagonal_group(&[3]).unwrap();
        let chars = one_dim_characters(&g).unwrap();
        for chi in &chars {
            let q = QuotientDescriptor::new(&g, chi, &Weight::unweighted(1).unwrap()).unwrap();
            let b = isotypic_basis(&q, 8).unwrap();
            assert_eq!(b.len(), 3);
        }
    }

    #[test]
    fn weight_must_be_invariant() {
        let g = symmetric_group(2).unwrap();
        let chi = one_dim_characters(&g).unwrap().remove(0);
        let w = Weight::polydisc(alloc::vec![0.0, 1.0]).unwrap();
        assert!(matches!(QuotientDescriptor::new(&g, &chi, &w), Err(Error::NotInvariant { .. })));
    }
}
