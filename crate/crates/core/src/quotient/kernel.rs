use alloc::vec::Vec;

use num_complex::Complex64;

use super::{QuotientBasis, QuotientDescriptor};
use crate::bergman::{QuadratureOrders, QuadratureRule, Weight};
use crate::groups::ReflectionGroup;
use crate::poly::{basic_map, jacobian_det};
use crate::Result;

/// Reproducing kernel of the χ-isotypic component in closed form:
/// `K^χ(z, y) = (1/|G|) Σ_σ χ(σ^{-1}) K(σ^{-1}z, y)`.
pub fn isotypic_kernel(q: &QuotientDescriptor, z: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    let g = q.group();
    let mut sum = Complex64::default();
    for idx in 0..g.order() {
        let inv = g.inverse_index(idx);
        let chi = q.character().value(inv);
        sum += chi * q.weight().kernel_eval(&g.element(inv).apply(z), y)?;
    }
    Ok(sum / g.order() as f64)
}

/// Bergman kernel of `A²_{ω_χ}(θ(Ω))` at `(θ(z), θ(y))`, from
/// `ℓ_χ(z) K_{ω_χ}(θz, θy) conj(ℓ_χ(y)) = |G| K^χ(z, y)`. Rejects points on
/// the branch locus.
pub fn quotient_kernel(q: &QuotientDescriptor, z: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    q.check_branch(z)?;
    q.check_branch(y)?;
    let k = isotypic_kernel(q, z, y)?;
    Ok(k * q.group().order() as f64 / (q.ell().eval(z) * q.ell().eval(y).conj()))
}

/// `|Σ_j b_j(z)conj(b_j(y)) − (1/|G|) ℓ_χ(z) K(θz, θy) conj(ℓ_χ(y))|`, where
/// `K = Σ_j φ_j ⊗ conj(φ_j)` runs over the `Γ_χ`-preimages `φ_j` of the
/// basis. Both sides are finite sums, so they are defined everywhere
/// (including the branch locus, where `ℓ_χ` may vanish).
pub fn kernel_identity_residual(q: &QuotientDescriptor, basis: &QuotientBasis, z: &[Complex64], y: &[Complex64]) -> Result<f64> {
    let lhs: Complex64 = basis.vectors().iter().map(|b| b.eval(z) * b.eval(y).conj()).sum();
    let (tz, ty) = (q.theta().eval(z), q.theta().eval(y));
    let phis: Vec<_> = basis.vectors().iter().map(|b| q.gamma_inverse(b)).collect::<Result<_>>()?;
    let k: Complex64 = phis.iter().map(|p| p.eval(&tz) * p.eval(&ty).conj()).sum();
    let rhs = q.ell().eval(z) * k * q.ell().eval(y).conj() / q.group().order() as f64;
    Ok((lhs - rhs).norm())
}

/// Volume of `θ(Ω)` for the pulled-back measure `(1/|G|)|J_θ|² ω dV`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeReport {
    pub quadrature: f64,
    /// `‖J_θ‖²_{A²_ω}/|G|` from monomial norms.
    pub exact: f64,
}

pub fn symmetrized_volume(group: &ReflectionGroup, weight: &Weight, orders: QuadratureOrders) -> Result<VolumeReport> {
    let j = jacobian_det(&basic_map(group)?);
    let n = group.order() as f64;
    let quad = QuadratureRule::new(weight, orders)?.integrate(|z| Complex64::new(j.eval(z).norm_sqr(), 0.0));
    Ok(VolumeReport { quadrature: quad.re / n, exact: weight.inner(&j, &j).re / n })
}

#[cfg(test)]
mod tests {
    use super::super::isotypic_basis;
    use super::*;
    use crate::c;
    use crate::groups::{one_dim_characters, symmetric_group};

    #[test]
    fn kernel_identity_and_convergence() {
        let g = symmetric_group(2).unwrap();
        let chi = one_dim_characters(&g).unwrap().remove(1);
        let q = QuotientDescriptor::new(&g, &chi, &Weight::unweighted(2).unwrap()).unwrap();
        let z = [c(0.4, 0.0), c(-0.2, 0.0)];
        let diag = [c(0.3, 0.1), c(0.3, 0.1)];
        let exact = isotypic_kernel(&q, &z, &z).unwrap();
        let mut last = f64::INFINITY;
        for n in [6, 10, 14] {
            let b = isotypic_basis(&q, n).unwrap();
            assert!(kernel_identity_residual(&q, &b, &z, &z).unwrap() < 1e-12);
            assert!(kernel_identity_residual(&q, &b, &diag, &z).unwrap() < 1e-12);
            let fin: Complex64 = b.vectors().iter().map(|v| v.eval(&z) * v.eval(&z).conj()).sum();
            let err = (fin - exact).norm();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-4);
        assert!(quotient_kernel(&q, &diag, &z).is_err());
    }

    #[test]
    fn volume_of_symmetrized_bidisc() {
        let g = symmetric_group(2).unwrap();
        let v = symmetrized_volume(&g, &Weight::unweighted(2).unwrap(), QuadratureOrders::new(4, 8)).unwrap();
        assert!((v.exact - 0.5).abs() < 1e-15);
        assert!((v.quadrature - 0.5).abs() < 1e-12);
    }
}
