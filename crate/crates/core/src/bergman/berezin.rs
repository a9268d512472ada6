use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::quadrature::{QuadratureOrders, QuadratureRule};
use super::{interior_points, Domain, Weight};
use crate::linalg::{lstsq, CMatrix, CVector};
use crate::poly::MixedSymbol;
use crate::{Error, Result};

/// Orders disagreeing by more than this raise the accuracy warning.
pub const BEREZIN_WARN_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerezinResult {
    pub value: Complex64,
    /// `|value(orders) − value(2·orders)|` when computed.
    pub error_estimate: Option<f64>,
    pub accuracy_warning: bool,
}

/// `φ_a(w)_j = (a_j − w_j)/(1 − conj(a_j) w_j)`.
pub fn moebius_point(a: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(w).map(|(aj, wj)| (aj - wj) / (Complex64::new(1.0, 0.0) - aj.conj() * wj)).collect()
}

/// `u ∘ φ_a` as a sampled function.
pub fn moebius_conjugate<'a, F>(u: F, a: Vec<Complex64>) -> impl Fn(&[Complex64]) -> Complex64 + 'a
where
    F: Fn(&[Complex64]) -> Complex64 + 'a,
{
    move |w: &[Complex64]| u(&moebius_point(&a, w))
}

/// The weighted composition operator
/// `U_a f(w) = f(φ_a(w)) ∏ (1−|a_j|²)^{(α_j+2)/2} / (1 − conj(a_j) w_j)^{α_j+2}`,
/// a unitary involution of `A²_{ω_α}(D^d)`.
pub fn moebius_unitary<'a, F>(weight: &Weight, a: Vec<Complex64>, f: F) -> Result<impl Fn(&[Complex64]) -> Complex64 + 'a>
where
    F: Fn(&[Complex64]) -> Complex64 + 'a,
{
    if weight.domain() != Domain::Polydisc {
        return Err(Error::Unsupported("Möbius unitary is only implemented on the polydisc".into()));
    }
    weight.check_interior(&a)?;
    let alpha = weight.alpha().to_vec();
    Ok(move |w: &[Complex64]| {
        let mut factor = Complex64::new(1.0, 0.0);
        for ((aj, wj), &al) in a.iter().zip(w).zip(&alpha) {
            let num = libm::pow(1.0 - aj.norm_sqr(), (al + 2.0) / 2.0);
            let den = Complex64::new(1.0, 0.0) - aj.conj() * wj;
            factor *= num / den.powf(al + 2.0);
        }
        f(&moebius_point(&a, w)) * factor
    })
}

fn require_polydisc(w: &Weight, z: &[Complex64]) -> Result<()> {
    if w.domain() != Domain::Polydisc {
        return Err(Error::Unsupported("the Berezin-type transform is defined on the polydisc".into()));
    }
    w.check_interior(z)
}

/// One-dimensional `∫ φ_z(λ)^p conj(φ_z(λ))^q ω_α(λ) dA(λ)`.
fn berezin_1d(p: usize, q: usize, z: Complex64, rule: &QuadratureRule) -> Complex64 {
    let zz = [z];
    rule.integrate(|l| {
        let v = moebius_point(&zz, l)[0];
        v.powu(p as u32) * v.conj().powu(q as u32)
    })
}

fn berezin_symbol_at(w: &Weight, f: &MixedSymbol, z: &[Complex64], orders: QuadratureOrders) -> Result<Complex64> {
    let rules = w
        .alpha()
        .iter()
        .map(|&a| QuadratureRule::new(&Weight::polydisc(alloc::vec![a])?, orders))
        .collect::<Result<Vec<_>>>()?;
    let mut cache: BTreeMap<(usize, usize, usize), Complex64> = BTreeMap::new();
    let mut sum = Complex64::default();
    for (a, b, &c) in f.terms() {
        let mut t = c;
        for i in 0..w.dim() {
            let key = (i, a.get(i), b.get(i));
            let v = *cache
                .entry(key)
                .or_insert_with(|| berezin_1d(a.get(i), b.get(i), z[i], &rules[i]));
            t *= v;
        }
        sum += t;
    }
    Ok(sum)
}

/// `B_α f(z) = ∫ f(φ_z(λ)) ω_α(λ) dV(λ)`, the change-of-variables form of the
/// Berezin-type operator. Polynomial symbols factor over coordinates, so each
/// term is a product of one-dimensional integrals; the rule is rerun at doubled
/// orders for the error estimate.
pub fn berezin(w: &Weight, f: &MixedSymbol, z: &[Complex64], orders: QuadratureOrders) -> Result<BerezinResult> {
    require_polydisc(w, z)?;
    if f.dim() != w.dim() {
        return Err(Error::Dimension { expected: w.dim(), got: f.dim() });
    }
    let value = berezin_symbol_at(w, f, z, orders)?;
    let fine = berezin_symbol_at(w, f, z, orders.doubled())?;
    let err = (fine - value).norm();
    Ok(BerezinResult { value, error_estimate: Some(err), accuracy_warning: err > BEREZIN_WARN_TOL })
}

/// `B_α f(z)` for a sampled function, by the full tensor rule.
pub fn berezin_sampled<F: Fn(&[Complex64]) -> Complex64>(
    w: &Weight,
    f: F,
    z: &[Complex64],
    orders: QuadratureOrders,
    estimate_error: bool,
) -> Result<BerezinResult> {
    require_polydisc(w, z)?;
    let g = |l: &[Complex64]| f(&moebius_point(z, l));
    let value = QuadratureRule::new(w, orders)?.integrate(g);
    let error_estimate = if estimate_error {
        Some((QuadratureRule::new(w, orders.doubled())?.integrate(g) - value).norm())
    } else {
        None
    };
    Ok(BerezinResult {
        value,
        error_estimate,
        accuracy_warning: error_estimate.is_some_and(|e| e > BEREZIN_WARN_TOL),
    })
}

/// One row of [`berezin_range_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct RangeScanRow {
    /// `f = z^p`
    pub p: usize,
    /// `g = z^q`
    pub q: usize,
    /// Relative max-abs residual of the best fit `B_α v ≈ f·conj(g)` over
    /// the sample points.
    pub residual: f64,
}

/// Searches for polynomial preimages `v` (bidegree `≤ k` in `w, w̄`) with
/// `B_α v = z^p conj(z^q)` on the disc, least squares over sample points.
/// A small residual for `p, q ≥ 1` would be a counterexample to the
/// expectation that `f·conj(g)` is in the range only when `f` or `g` is
/// constant. This is a search, not a proof.
pub fn berezin_range_scan(alpha: f64, max_power: usize, k: usize, orders: QuadratureOrders) -> Result<Vec<RangeScanRow>> {
    let w = Weight::polydisc(alloc::vec![alpha])?;
    let pts = interior_points(&w, 3 * (k + 1) * (k + 1), 0.6);
    let rule = QuadratureRule::new(&w, orders)?;
    let cols: Vec<(usize, usize)> = (0..=k).flat_map(|a| (0..=k).map(move |b| (a, b))).collect();
    let mut m = CMatrix::zeros(pts.len(), cols.len());
    for (i, p) in pts.iter().enumerate() {
        for (j, &(a, b)) in cols.iter().enumerate() {
            m[(i, j)] = berezin_1d(a, b, p[0], &rule);
        }
    }
    let mut rows = Vec::new();
    for p in 0..=max_power {
        for q in 0..=max_power {
            let rhs = CVector::from_iterator(pts.len(), pts.iter().map(|z| z[0].powu(p as u32) * z[0].conj().powu(q as u32)));
            let scale = rhs.iter().fold(0.0f64, |acc, v| acc.max(v.norm())).max(1e-300);
            let (_, res) = lstsq(&m, &rhs).ok_or_else(|| Error::Internal(format!("range scan solve failed at ({p},{q})")))?;
            rows.push(RangeScanRow { p, q, residual: res / scale });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::poly::MultiPoly;

    const O: QuadratureOrders = QuadratureOrders { radial: 32, angular: 64 };

    #[test]
    fn constants_and_antiholomorphic_fixed() {
        let w = Weight::unweighted(1).unwrap();
        let z = [c(0.3, 0.0)];
        let one = berezin(&w, &MixedSymbol::one(1), &z, O).unwrap();
        assert!((one.value - c(1.0, 0.0)).norm() < 1e-10);
        let zb = MixedSymbol::from_antiholomorphic(&MultiPoly::var(1, 0));
        let r = berezin(&w, &zb, &z, O).unwrap();
        assert!((r.value - c(0.3, 0.0)).norm() < 1e-10);
        assert!(!r.accuracy_warning);
    }

    #[test]
    fn modulus_squared_at_origin() {
        let w = Weight::unweighted(1).unwrap();
        let s = MixedSymbol::from_product(&MultiPoly::var(1, 0), &MultiPoly::var(1, 0));
        let r = berezin(&w, &s, &[c(0.0, 0.0)], O).unwrap();
        assert!((r.value - c(0.5, 0.0)).norm() < 1e-12);
        let r2 = berezin_sampled(&w, |x| c(x[0].norm_sqr(), 0.0), &[c(0.0, 0.0)], O, false).unwrap();
        assert!((r2.value - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kernel_form_agrees_with_change_of_variables() {
        // direct integral of the Berezin kernel against f at a point near 0
        let alpha = 1.0;
        let w = Weight::polydisc(alloc::vec![alpha]).unwrap();
        let z = c(0.2, 0.1);
        let f = |x: &[Complex64]| x[0] * x[0].conj() * x[0].conj() + x[0];
        let direct = QuadratureRule::new(&w, QuadratureOrders::new(48, 96))
            .unwrap()
            .integrate(|x| {
                let k = libm::pow(1.0 - z.norm_sqr(), alpha + 2.0)
                    / libm::pow((c(1.0, 0.0) - z * x[0].conj()).norm(), 4.0 + 2.0 * alpha);
                f(x) * k
            });
        let via = berezin_sampled(&w, f, &[z], O, false).unwrap().value;
        assert!((direct - via).norm() < 1e-8, "{direct} vs {via}");
    }

    #[test]
    fn moebius_maps() {
        let a = [c(0.5, 0.0)];
        assert!((moebius_point(&a, &[c(0.0, 0.0)])[0] - c(0.5, 0.0)).norm() < 1e-15);
        let u = moebius_conjugate(|x: &[Complex64]| x[0], alloc::vec![c(0.0, 0.0)]);
        assert!((u(&[c(0.2, 0.3)]) - c(-0.2, -0.3)).norm() < 1e-15);
        let w = Weight::unweighted(1).unwrap();
        for p in interior_points(&w, 100, 0.95) {
            let back = moebius_point(&[c(0.3, -0.4)], &moebius_point(&[c(0.3, -0.4)], &p));
            assert!((back[0] - p[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn moebius_unitary_is_isometric_involution() {
        let w = Weight::polydisc(alloc::vec![1.0]).unwrap();
        let a = alloc::vec![c(0.3, 0.2)];
        let f = |x: &[Complex64]| x[0] * x[0] + c(0.5, 0.0);
        let uf = moebius_unitary(&w, a.clone(), f).unwrap();
        let norm_sq = |g: &dyn Fn(&[Complex64]) -> Complex64| {
            QuadratureRule::new(&w, QuadratureOrders::new(40, 80)).unwrap().integrate(|x| c(g(x).norm_sqr(), 0.0)).re
        };
        let exact = w.monomial_norm_sq(&crate::poly::Exponent::new(&[2])) + 0.25;
        assert!((norm_sq(&uf) - exact).abs() < 1e-8);
        let uuf = moebius_unitary(&w, a, uf).unwrap();
        for p in interior_points(&w, 20, 0.9) {
            assert!((uuf(&p) - f(&p)).norm() < 1e-12);
        }
    }

    #[test]
    fn range_scan_constant_factors_fit() {
        let rows = berezin_range_scan(0.0, 2, 2, QuadratureOrders::new(32, 64)).unwrap();
        for r in &rows {
            if r.p == 0 || r.q == 0 {
                assert!(r.residual < 1e-8, "{r:?}");
            } else {
                assert!(r.residual > 1e-4, "{r:?}");
            }
        }
    }
}
