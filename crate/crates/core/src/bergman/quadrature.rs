use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{Domain, Weight};
use crate::{Error, Result};

/// Radial × angular node counts per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureOrders {
    pub radial: usize,
    pub angular: usize,
}

impl Default for QuadratureOrders {
    fn default() -> Self {
        QuadratureOrders { radial: 64, angular: 128 }
    }
}

impl QuadratureOrders {
    pub fn new(radial: usize, angular: usize) -> Self {
        QuadratureOrders { radial, angular }
    }

    pub fn doubled(&self) -> Self {
        QuadratureOrders { radial: 2 * self.radial, angular: 2 * self.angular }
    }
}

/// A one-dimensional rule on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Gauss–Jacobi rule for `∫_0^1 g(t)(1−t)^a dt` (Golub–Welsch). With `a = 0`
/// this is Gauss–Legendre.
pub fn gauss_jacobi(n: usize, a: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::Domain("quadrature order must be positive".into()));
    }
    if !(a > -1.0) {
        return Err(Error::Domain(format!("Jacobi exponent {a} must be > -1")));
    }
    // Jacobi matrix on [-1, 1] for (1-x)^a (1+x)^0
    let b = 0.0;
    let mut diag = alloc::vec![0.0; n];
    let mut off = alloc::vec![0.0; n]; // off[k] couples k-1 and k
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        diag[k] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k > 0 {
            let beta = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b) / (s * s * (s + 1.0) * (s - 1.0));
            off[k] = libm::sqrt(beta);
        }
    }
    let jm = DMatrix::<f64>::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[j]
        } else if j + 1 == i {
            off[i]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jm);
    // ∫_{-1}^{1} (1-x)^a dx
    let mu0 = libm::pow(2.0, a + 1.0) / (a + 1.0);
    // Christoffel weights 1/Σ p_k(x)² from the orthonormal recurrence; more
    // accurate than squaring eigenvector components.
    let christoffel = |x: f64| {
        let (mut prev, mut cur) = (0.0, 1.0 / libm::sqrt(mu0));
        let mut sum = cur * cur;
        for k in 0..n - 1 {
            let next = ((x - diag[k]) * cur - off[k] * prev) / off[k + 1];
            prev = cur;
            cur = next;
            sum += cur * cur;
        }
        1.0 / sum
    };
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let x = eig.eigenvalues[k];
            // x = 2t - 1: dt = dx/2 and (1-t)^a = 2^{-a}(1-x)^a
            ((x + 1.0) / 2.0, christoffel(x) * libm::pow(2.0, -a - 1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(GaussRule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() })
}

/// Tensor rule for `∫ f ω dV` over the polydisc or the ball.
///
/// Radial variables are `t = |z_i|²` with a Gauss–Jacobi rule absorbing the
/// weight (Duffy coordinates on the ball); angles use the trapezoid rule,
/// offset by a different fraction of a step in each coordinate so that no
/// node lies on a diagonal `z_i = z_j`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    weight: Weight,
    orders: QuadratureOrders,
    radial: Vec<GaussRule>,
    prefactor: Vec<f64>,
    angles: Vec<Vec<Complex64>>,
    len: usize,
}

impl QuadratureRule {
    pub fn new(weight: &Weight, orders: QuadratureOrders) -> Result<Self> {
        if orders.radial == 0 || orders.angular == 0 {
            return Err(Error::Domain("quadrature orders must be positive".into()));
        }
        let d = weight.dim();
        let (radial, prefactor) = match weight.domain() {
            Domain::Polydisc => {
                let rules = weight.alpha().iter().map(|&a| gauss_jacobi(orders.radial, a)).collect::<Result<Vec<_>>>()?;
                (rules, weight.alpha().iter().map(|a| a + 1.0).collect())
            }
            Domain::Ball => {
                let rules = (0..d).map(|i| gauss_jacobi(orders.radial, (d - 1 - i) as f64)).collect::<Result<Vec<_>>>()?;
                let fact: f64 = (1..=d).map(|k| k as f64).product();
                let mut pre = alloc::vec![1.0; d];
                pre[0] = fact;
                (rules, pre)
            }
        };
        let angles = (0..d)
            .map(|i| {
                let shift = (i as f64 + 0.5) / (d as f64 + 1.0);
                (0..orders.angular)
                    .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + shift) / orders.angular as f64))
                    .collect()
            })
            .collect();
        let per = orders.radial.checked_mul(orders.angular).ok_or(Error::Overflow("quadrature size"))?;
        let len = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(per)).ok_or(Error::Overflow("quadrature size"))?;
        Ok(QuadratureRule { weight: weight.clone(), orders, radial, prefactor, angles, len })
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn orders(&self) -> QuadratureOrders {
        self.orders
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Writes node `idx` into `z` and returns its weight (including `ω`).
    pub fn node(&self, idx: usize, z: &mut [Complex64]) -> f64 {
        let d = self.weight.dim();
        let (nr, na) = (self.orders.radial, self.orders.angular);
        let mut rest = idx;
        let mut w = 1.0;
        let mut tail = 1.0; // ∏_{j<i} (1 - s_j) for Duffy coordinates
        for i in (0..d).rev() {
            let local = rest % (nr * na);
            rest /= nr * na;
            let (k, j) = (local / na, local % na);
            let rule = &self.radial[i];
            w *= self.prefactor[i] * rule.weights[k] / na as f64;
            z[i] = self.angles[i][j] * rule.nodes[k];
        }
        match self.weight.domain() {
            Domain::Polydisc => {
                for x in z.iter_mut() {
                    *x = x.scale(1.0 / libm::sqrt(x.norm()));
                }
            }
            Domain::Ball => {
                for x in z.iter_mut() {
                    let s = x.norm();
                    let t = s * tail;
                    tail *= 1.0 - s;
                    *x = x.scale(libm::sqrt(t) / s);
                }
            }
        }
        w
    }

    /// `Σ w_k f(z_k)`, summed in node order.
    pub fn integrate<F: Fn(&[Complex64]) -> Complex64>(&self, f: F) -> Complex64 {
        let mut z = alloc::vec![Complex64::default(); self.weight.dim()];
        let mut sum = Neumaier::default();
        for idx in 0..self.len {
            let w = self.node(idx, &mut z);
            sum.add(f(&z) * w);
        }
        sum.value()
    }
}

/// Compensated summation of complex values.
#[derive(Default, Clone, Copy)]
pub(crate) struct Neumaier {
    re: (f64, f64),
    im: (f64, f64),
}

impl Neumaier {
    fn step(acc: &mut (f64, f64), x: f64) {
        let t = acc.0 + x;
        acc.1 += if acc.0.abs() >= x.abs() { (acc.0 - t) + x } else { (x - t) + acc.0 };
        acc.0 = t;
    }

    pub(crate) fn add(&mut self, z: Complex64) {
        Self::step(&mut self.re, z.re);
        Self::step(&mut self.im, z.im);
    }

    pub(crate) fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// A quadrature value with an optional order-doubling error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: Option<f64>,
}

/// `∫ f ω dV`; with `estimate_error` the rule is rerun at doubled orders and
/// the difference reported.
pub fn quadrature_integral<F: Fn(&[Complex64]) -> Complex64>(
    f: F,
    weight: &Weight,
    orders: QuadratureOrders,
    estimate_error: bool,
) -> Result<QuadratureResult> {
    let value = QuadratureRule::new(weight, orders)?.integrate(&f);
    let error_estimate = if estimate_error {
        let fine = QuadratureRule::new(weight, orders.doubled())?.integrate(&f);
        Some((fine - value).norm())
    } else {
        None
    };
    Ok(QuadratureResult { value, error_estimate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn jacobi_moments() {
        for a in [0.0, 1.0, 2.5, -0.5] {
            let r = gauss_jacobi(12, a).unwrap();
            // ∫ t^k (1-t)^a dt = B(k+1, a+1)
            for k in 0..10 {
                let got: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * libm::pow(*t, k as f64)).sum();
                let want = libm::exp(libm::lgamma(k as f64 + 1.0) + libm::lgamma(a + 1.0) - libm::lgamma(k as f64 + a + 2.0));
                assert!((got - want).abs() < 1e-13 * want.max(1.0), "a={a} k={k}");
            }
        }
    }

    #[test]
    fn mass_and_moments() {
        let o = QuadratureOrders::new(8, 16);
        let d2 = Weight::unweighted(2).unwrap();
        let r = quadrature_integral(|_| c(1.0, 0.0), &d2, o, true).unwrap();
        assert!((r.value - c(1.0, 0.0)).norm() < 1e-13, "{r:?}");
        assert!(r.error_estimate.unwrap() < 1e-13);
        let v = quadrature_integral(|z| c(z[0].norm_sqr(), 0.0), &d2, o, false).unwrap().value;
        assert!((v.re - 0.5).abs() < 1e-13);
        let b2 = Weight::ball(2).unwrap();
        let v = quadrature_integral(|z| c(z[0].norm_sqr(), 0.0), &b2, o, false).unwrap().value;
        assert!((v.re - 1.0 / 3.0).abs() < 1e-13);
        let b3 = Weight::ball(3).unwrap();
        let v = quadrature_integral(|_| c(1.0, 0.0), &b3, QuadratureOrders::new(4, 4), false).unwrap().value;
        assert!((v.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn nodes_avoid_diagonal() {
        let rule = QuadratureRule::new(&Weight::unweighted(2).unwrap(), QuadratureOrders::new(6, 8)).unwrap();
        let mut z = [c(0.0, 0.0); 2];
        for i in 0..rule.len() {
            rule.node(i, &mut z);
            assert!((z[0] - z[1]).norm() > 1e-3);
        }
    }
}
