//! Weighted Bergman spaces on the polydisc and the unit ball: monomial
//! norms, reproducing kernels, exact finite sections of Toeplitz operators,
//! tensor quadrature and Berezin-type transforms.
//!
//! Lebesgue measure is normalized so that the disc (and the ball) has volume 1.

mod basis;
mod berezin;
mod quadrature;
mod toeplitz;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

pub use basis::{BasisShape, MonomialBasis};
pub use berezin::{
    berezin, berezin_range_scan, berezin_sampled, moebius_conjugate, moebius_point, moebius_unitary, BerezinResult,
    RangeScanRow, BEREZIN_WARN_TOL,
};
pub use quadrature::{
    gauss_jacobi, quadrature_integral, GaussRule, QuadratureOrders, QuadratureResult, QuadratureRule,
};
pub use toeplitz::{op_product_interior, toeplitz_matrix, toeplitz_matrix_on, toeplitz_quadrature, TruncatedOperator};

use crate::poly::{Exponent, MultiPoly};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Polydisc,
    Ball,
}

/// A radial weight: `ω_α(z) = ∏(α_i+1)(1−|z_i|²)^{α_i}` on `D^d`, or the
/// constant weight on `B_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    domain: Domain,
    alpha: Vec<f64>,
}

impl Weight {
    pub fn polydisc(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() > crate::poly::MAX_VARS {
            return Err(Error::Size(format!("polydisc dimension {} outside 1..={}", alpha.len(), crate::poly::MAX_VARS)));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > -1.0)) {
            return Err(Error::Domain(format!("weight exponent {a} must be > -1")));
        }
        Ok(Weight { domain: Domain::Polydisc, alpha })
    }

    /// Unweighted polydisc `D^d`.
    pub fn unweighted(dim: usize) -> Result<Self> {
        Self::polydisc(alloc::vec![0.0; dim])
    }

    /// The unit ball `B_d` with `ω ≡ 1`.
    pub fn ball(dim: usize) -> Result<Self> {
        if dim == 0 || dim > crate::poly::MAX_VARS {
            return Err(Error::Size(format!("ball dimension {dim} outside 1..={}", crate::poly::MAX_VARS)));
        }
        Ok(Weight { domain: Domain::Ball, alpha: alloc::vec![0.0; dim] })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// Exponents `α_i` (all zero on the ball).
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn has_integer_alpha(&self) -> bool {
        self.alpha.iter().all(|a| *a == libm::floor(*a) && *a < 1e6)
    }

    /// Whether `z` lies in the open domain.
    pub fn contains(&self, z: &[Complex64]) -> bool {
        z.len() == self.dim()
            && match self.domain {
                Domain::Polydisc => z.iter().all(|x| x.norm_sqr() < 1.0),
                Domain::Ball => z.iter().map(|x| x.norm_sqr()).sum::<f64>() < 1.0,
            }
    }

    pub fn check_interior(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: z.len() });
        }
        if !self.contains(z) {
            return Err(Error::Domain(format!("point {z:?} is not interior")));
        }
        Ok(())
    }

    /// `ω(z)`; zero outside the domain.
    pub fn eval(&self, z: &[Complex64]) -> f64 {
        if !self.contains(z) {
            return 0.0;
        }
        match self.domain {
            Domain::Polydisc => self
                .alpha
                .iter()
                .zip(z)
                .map(|(&a, x)| if a == 0.0 { 1.0 } else { (a + 1.0) * libm::pow(1.0 - x.norm_sqr(), a) })
                .product(),
            Domain::Ball => 1.0,
        }
    }

    /// `‖z^n‖²` in `A²_ω`.
    pub fn monomial_norm_sq(&self, n: &Exponent) -> f64 {
        debug_assert_eq!(n.len(), self.dim());
        match self.domain {
            Domain::Polydisc => {
                if self.has_integer_alpha() {
                    if let Some(b) = polydisc_binomial(n, &self.alpha) {
                        return 1.0 / b as f64;
                    }
                }
                (0..self.dim())
                    .map(|i| {
                        let (k, a) = (n.get(i) as f64, self.alpha[i]);
                        libm::exp(libm::lgamma(k + 1.0) + libm::lgamma(a + 2.0) - libm::lgamma(k + a + 2.0))
                    })
                    .product()
            }
            Domain::Ball => {
                let d = self.dim();
                match multinomial(d, n) {
                    Some(m) => 1.0 / m as f64,
                    None => {
                        let mut l = libm::lgamma(d as f64 + 1.0) - libm::lgamma((d + n.degree()) as f64 + 1.0);
                        for i in 0..d {
                            l += libm::lgamma(n.get(i) as f64 + 1.0);
                        }
                        libm::exp(l)
                    }
                }
            }
        }
    }

    /// `⟨f, g⟩_{A²_ω}` from the monomial expansions.
    pub fn inner(&self, f: &MultiPoly, g: &MultiPoly) -> Complex64 {
        let (small, large, flip) = if f.len() <= g.len() { (f, g, false) } else { (g, f, true) };
        let mut sum = Complex64::default();
        for (e, &a) in small.terms() {
            let b = large.coeff(e);
            if b != Complex64::default() {
                let t = if flip { b * a.conj() } else { a * b.conj() };
                sum += t * self.monomial_norm_sq(e);
            }
        }
        sum
    }

    pub fn norm(&self, f: &MultiPoly) -> f64 {
        libm::sqrt(self.inner(f, f).re.max(0.0))
    }

    /// Taylor coefficient of the kernel, `K(z, y) = Σ c_n z^n ȳ^n`, computed
    /// from Pochhammer symbols (independently of the norm formulas):
    /// `∏ (α_i+2)_{n_i}/n_i!` on the polydisc, `(d+1)_{|n|}/n!` on the ball.
    pub fn kernel_coefficient(&self, n: &Exponent) -> f64 {
        let poch_over_fact = |a: f64, k: usize| (0..k).fold(1.0, |acc, j| acc * (a + j as f64) / (j + 1) as f64);
        match self.domain {
            Domain::Polydisc => (0..self.dim()).map(|i| poch_over_fact(self.alpha[i] + 2.0, n.get(i))).product(),
            Domain::Ball => {
                let d = self.dim() as f64;
                let total = n.degree();
                // (d+1)_{|n|} / ∏ n_i!, accumulated as a product of ratios
                let mut v = 1.0;
                let mut j = 0usize;
                for i in 0..self.dim() {
                    for k in 0..n.get(i) {
                        v *= (d + 1.0 + j as f64) / (k + 1) as f64;
                        j += 1;
                    }
                }
                debug_assert_eq!(j, total);
                v
            }
        }
    }

    /// The reproducing kernel in closed form.
    pub fn kernel_eval(&self, z: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
        self.check_interior(z)?;
        self.check_interior(y)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(match self.domain {
            Domain::Polydisc => self
                .alpha
                .iter()
                .zip(z.iter().zip(y))
                .map(|(&a, (zi, yi))| {
                    let base = one - zi * yi.conj();
                    if a == libm::floor(a) {
                        one / base.powi(a as i32 + 2)
                    } else {
                        base.powf(-(a + 2.0))
                    }
                })
                .product(),
            Domain::Ball => {
                let ip: Complex64 = z.iter().zip(y).map(|(zi, yi)| zi * yi.conj()).sum();
                one / (one - ip).powi(self.dim() as i32 + 1)
            }
        })
    }

    /// Truncated kernel series `Σ_{n ∈ basis} z^n ȳ^n / ‖z^n‖²`.
    pub fn kernel_series(&self, z: &[Complex64], y: &[Complex64], basis: &MonomialBasis) -> Complex64 {
        basis
            .indices()
            .iter()
            .map(|n| monomial_value(n, z) * monomial_value(n, y).conj() / self.monomial_norm_sq(n))
            .sum()
    }

    /// Coefficients of the truncated `K_y` in the orthonormal basis
    /// `e_n = z^n/‖z^n‖`: `conj(y^n)/‖z^n‖`.
    pub fn kernel_vector(&self, y: &[Complex64], basis: &MonomialBasis) -> Vec<Complex64> {
        basis.indices().iter().map(|n| monomial_value(n, y).conj() / libm::sqrt(self.monomial_norm_sq(n))).collect()
    }
}

/// `z^n`.
pub fn monomial_value(n: &Exponent, z: &[Complex64]) -> Complex64 {
    z.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (i, zi)| match n.get(i) {
        0 => acc,
        k => acc * zi.powu(k as u32),
    })
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// `∏ C(n_i+α_i+1, n_i)`, the reciprocal of the polydisc norm for integer `α`.
fn polydisc_binomial(n: &Exponent, alpha: &[f64]) -> Option<u128> {
    let mut prod: u128 = 1;
    for (i, &a) in alpha.iter().enumerate() {
        let k = n.get(i) as u128;
        prod = prod.checked_mul(binomial(k + a as u128 + 1, k)?)?;
    }
    Some(prod)
}

/// `(d+|n|)!/(d!·n!)`, the reciprocal of the ball norm.
fn multinomial(d: usize, n: &Exponent) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut top = d as u128;
    for i in 0..n.len() {
        let k = n.get(i) as u128;
        top += k;
        acc = acc.checked_mul(binomial(top, k)?)?;
    }
    Some(acc)
}

/// Deterministic well-spread interior points (a Kronecker sequence), each
/// coordinate of modulus at most `radius` (polydisc) or the whole point of
/// norm at most `radius` (ball).
pub fn interior_points(weight: &Weight, count: usize, radius: f64) -> Vec<Vec<Complex64>> {
    let d = weight.dim();
    // fractional parts of multiples of square roots of primes
    const GEN: [f64; 16] = [
        1.414_213_562_373_095, 1.732_050_807_568_877, 2.236_067_977_499_79, 2.645_751_311_064_59,
        3.316_624_790_355_4, 3.605_551_275_463_989, 4.123_105_625_617_661, 4.358_898_943_540_674,
        4.795_831_523_312_719, 5.385_164_807_134_504, 5.567_764_362_830_022, 6.082_762_530_298_219,
        6.403_124_237_432_849, 6.557_438_524_302, 6.855_654_600_401_044, 7.280_109_889_280_518,
    ];
    let frac = |x: f64| x - libm::floor(x);
    (1..=count)
        .map(|k| {
            let mut p: Vec<Complex64> = (0..d)
                .map(|i| {
                    let r = radius * libm::sqrt(frac(k as f64 * GEN[2 * i]));
                    let t = 2.0 * core::f64::consts::PI * frac(k as f64 * GEN[2 * i + 1]);
                    Complex64::from_polar(r, t)
                })
                .collect();
            if weight.domain() == Domain::Ball {
                let s = libm::sqrt(d as f64);
                for x in &mut p {
                    *x /= s;
                }
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn norms() {
        let w0 = Weight::unweighted(1).unwrap();
        assert_eq!(w0.monomial_norm_sq(&Exponent::new(&[0])), 1.0);
        assert_eq!(w0.monomial_norm_sq(&Exponent::new(&[1])), 0.5);
        let w1 = Weight::polydisc(alloc::vec![1.0]).unwrap();
        assert!((w1.monomial_norm_sq(&Exponent::new(&[1])) - 1.0 / 3.0).abs() < 1e-16);
        let b = Weight::ball(2).unwrap();
        assert!((b.monomial_norm_sq(&Exponent::new(&[1, 0])) - 1.0 / 3.0).abs() < 1e-16);
        // float path agrees with the exact one
        let wf = Weight::polydisc(alloc::vec![1.0 + 1e-12]).unwrap();
        let e = Exponent::new(&[7]);
        assert!((wf.monomial_norm_sq(&e) / w1.monomial_norm_sq(&e) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_values() {
        let w = Weight::unweighted(1).unwrap();
        let h = [c(0.5, 0.0)];
        assert!((w.kernel_eval(&h, &h).unwrap() - c(16.0 / 9.0, 0.0)).norm() < 1e-14);
        assert!((w.kernel_eval(&[c(0.0, 0.0)], &[c(0.7, 0.1)]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(w.kernel_eval(&[c(1.0, 0.0)], &h).is_err());
        let w2 = Weight::unweighted(2).unwrap();
        let p = [c(0.3, 0.0), c(0.0, 0.0)];
        assert!((w2.kernel_eval(&p, &p).unwrap().re - 1.0 / (0.91f64 * 0.91)).abs() < 1e-13);
    }

    #[test]
    fn kernel_coefficients_are_reciprocal_norms() {
        for w in [Weight::polydisc(alloc::vec![0.0, 2.0]).unwrap(), Weight::ball(2).unwrap()] {
            for e in crate::poly::box_exponents(2, 6) {
                assert!((w.kernel_coefficient(&e) * w.monomial_norm_sq(&e) - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn points_are_interior() {
        for w in [Weight::unweighted(3).unwrap(), Weight::ball(3).unwrap()] {
            for p in interior_points(&w, 50, 0.9) {
                assert!(w.contains(&p));
            }
        }
    }
}
