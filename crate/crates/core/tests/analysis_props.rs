mod common;

use std::collections::BTreeMap;

use common::{c, point, poly, symbol};
use proptest::prelude::*;
use qtoeplitz::bergman::{
    berezin, moebius_unitary, op_product_interior, toeplitz_matrix, toeplitz_matrix_on, toeplitz_quadrature,
    BasisShape, MonomialBasis, QuadratureOrders, QuadratureRule, Weight,
};
use qtoeplitz::groups::{one_dim_characters, symmetric_group};
use qtoeplitz::isotypic::divide_by_generator;
use qtoeplitz::poly::{compose_symbol, Exponent, MixedSymbol, MultiPoly};
use qtoeplitz::quotient::{compressed_toeplitz, isotypic_basis, kernel_identity_residual, QuotientDescriptor};
use qtoeplitz::Complex64;

fn integer_alpha(d: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(0..=2u8, d).prop_map(|a| Weight::polydisc(a.into_iter().map(f64::from).collect()).unwrap())
}

fn harmonic(d: usize) -> impl Strategy<Value = MixedSymbol> {
    (poly(d, 3, 3), poly(d, 3, 3))
        .prop_map(|(p, q)| &MixedSymbol::from_holomorphic(&p) + &MixedSymbol::from_antiholomorphic(&q))
}

fn s2_quotient(sign: bool, alpha: f64) -> QuotientDescriptor {
    let g = symmetric_group(2).unwrap();
    let chi = one_dim_characters(&g).unwrap().remove(usize::from(sign));
    QuotientDescriptor::new(&g, &chi, &Weight::polydisc(vec![alpha, alpha]).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_series_converges_on_the_disc(alpha in 0.0..2.0f64, z in point(1, 0.5), y in point(1, 0.5)) {
        let w = Weight::polydisc(vec![alpha]).unwrap();
        let basis = MonomialBasis::new(1, 40, BasisShape::Simplex);
        let err = (w.kernel_series(&z, &y, &basis) - w.kernel_eval(&z, &y).unwrap()).norm();
        prop_assert!(err < 1e-6);
    }

    #[test]
    fn kernel_series_converges_on_the_bidisc(w in integer_alpha(2), z in point(2, 0.5), y in point(2, 0.5)) {
        let basis = MonomialBasis::new(2, 25, BasisShape::Box);
        let err = (w.kernel_series(&z, &y, &basis) - w.kernel_eval(&z, &y).unwrap()).norm();
        prop_assert!(err < 1e-6);
    }

    #[test]
    fn projection_of_conjugate_times_kernel(w in integer_alpha(1), g in poly(1, 3, 3), r in 0.2..0.6f64, t in 0.0..6.28f64) {
        let y = [Complex64::from_polar(r, t)];
        let gy = g.eval(&y).conj();
        let residual = |n: usize| {
            let basis = MonomialBasis::new(1, n, BasisShape::Box);
            let op = toeplitz_matrix_on(&MixedSymbol::from_antiholomorphic(&g), &w, &basis).unwrap();
            let k = w.kernel_vector(&y, &basis);
            (0..k.len())
                .map(|i| {
                    let row: Complex64 = (0..k.len()).map(|j| op.entry(i, j) * k[j]).sum();
                    (row - gy * k[i]).norm_sqr()
                })
                .sum::<f64>()
                .sqrt()
        };
        let (r10, r20) = (residual(10), residual(20));
        prop_assert!(r20 < r10 || r10 < 1e-14, "r10 = {r10}, r20 = {r20}");
    }

    #[test]
    fn real_symbols_give_self_adjoint_sections(u in symbol(2, 2, 4), w in integer_alpha(2)) {
        let real = &u + &u.conjugate();
        let t = toeplitz_matrix(&real, &w, 5).unwrap();
        prop_assert!(t.max_abs_diff(&t.adjoint()).unwrap() < 1e-12);
    }

    #[test]
    fn interior_product_matches_a_larger_section(u in symbol(2, 2, 3), v in symbol(2, 2, 3), w in integer_alpha(2)) {
        let n = 6;
        let small = (toeplitz_matrix(&u, &w, n).unwrap(), toeplitz_matrix(&v, &w, n).unwrap());
        let margin = small.0.band_margin() + small.1.band_margin();
        prop_assume!(margin <= 3);
        let interior = op_product_interior(&small.0, &small.1, margin).unwrap();
        let (bu, bv) = (toeplitz_matrix(&u, &w, n + margin).unwrap(), toeplitz_matrix(&v, &w, n + margin).unwrap());
        let full = bu.matrix() * bv.matrix();
        let at: BTreeMap<Exponent, usize> = bu.labels().iter().enumerate().map(|(i, e)| (*e, i)).collect();
        for (i, ei) in interior.labels().iter().enumerate() {
            for (j, ej) in interior.labels().iter().enumerate() {
                let want = full[(at[ei], at[ej])];
                prop_assert!((interior.entry(i, j) - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn berezin_fixes_harmonic_symbols(h in harmonic(2), w in integer_alpha(2), z in point(2, 0.7)) {
        let b = berezin(&w, &h, &z, QuadratureOrders::new(32, 64)).unwrap();
        prop_assert!((b.value - h.eval(&z)).norm() < 1e-6);
        prop_assert!(!b.accuracy_warning);
    }

    #[test]
    fn moebius_unitary_is_an_isometric_involution(f in poly(1, 4, 3), alpha in 0..=2u8, a in point(1, 0.5), z in point(1, 0.8)) {
        let w = Weight::polydisc(vec![f64::from(alpha)]).unwrap();
        let ff = f.clone();
        let once = moebius_unitary(&w, a.clone(), move |x: &[Complex64]| ff.eval(x)).unwrap();
        let twice = moebius_unitary(&w, a.clone(), &once).unwrap();
        prop_assert!((twice(&z) - f.eval(&z)).norm() < 1e-10 * (1.0 + f.eval(&z).norm()));
        let rule = QuadratureRule::new(&w, QuadratureOrders::new(64, 128)).unwrap();
        let norm_sq = rule.integrate(|x| c(once(x).norm_sqr(), 0.0)).re;
        let exact = w.norm(&f).powi(2);
        prop_assert!((norm_sq - exact).abs() < 1e-8 * exact.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gamma_is_isometric(phi in poly(2, 2, 3), psi in poly(2, 2, 3), sign in any::<bool>(), alpha in 0..=1u8) {
        let q = s2_quotient(sign, f64::from(alpha));
        let w = q.weight().clone();
        let exact = w.inner(&q.gamma_apply(&phi).unwrap(), &q.gamma_apply(&psi).unwrap());
        let rule = QuadratureRule::new(&w, QuadratureOrders::new(16, 32)).unwrap();
        let quad = rule.integrate(|z| {
            let t = q.theta().eval(z);
            let dens = q.omega_rho_eval(z).unwrap() * q.jacobian().eval(z).norm_sqr() / w.eval(z) / 2.0;
            phi.eval(&t) * psi.eval(&t).conj() * dens
        });
        prop_assert!((exact - quad).norm() < 1e-7);
        let back = q.gamma_inverse(&q.gamma_apply(&phi).unwrap()).unwrap();
        prop_assert!((&back - &phi).max_abs_coeff() < 1e-10);
    }

    #[test]
    fn quotient_kernel_identity(sign in any::<bool>(), z in point(2, 0.8), y in point(2, 0.8)) {
        let q = s2_quotient(sign, 0.0);
        let basis = isotypic_basis(&q, 6).unwrap();
        prop_assert!(kernel_identity_residual(&q, &basis, &z, &y).unwrap() < 1e-12);
    }

    #[test]
    fn toeplitz_quadrature_matches_exact_entries(u in symbol(1, 2, 3), alpha in 0..=2u8) {
        let w = Weight::polydisc(vec![f64::from(alpha)]).unwrap();
        let basis = MonomialBasis::new(1, 6, BasisShape::Box);
        let exact = toeplitz_matrix_on(&u, &w, &basis).unwrap();
        let uu = u.clone();
        let quad = toeplitz_quadrature(move |z| uu.eval(z), &w, &basis, QuadratureOrders::new(16, 32)).unwrap();
        prop_assert!(exact.max_abs_diff(&quad).unwrap() < 1e-10);
    }
}

#[test]
fn quotient_bases_are_orthonormal_and_divisible() {
    for sign in [false, true] {
        for alpha in [0.0, 1.0] {
            let q = s2_quotient(sign, alpha);
            let basis = isotypic_basis(&q, 6).unwrap();
            let vs = basis.vectors();
            for (i, a) in vs.iter().enumerate() {
                assert!(divide_by_generator(q.group(), q.character(), a).is_ok());
                for (j, b) in vs.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((q.weight().inner(a, b) - c(want, 0.0)).norm() < 1e-10);
                }
            }
            let one = compressed_toeplitz(&q, &MixedSymbol::one(2), &basis).unwrap();
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((one.entry(i, j) - c(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn sign_weight_is_flat() {
    let q = s2_quotient(true, 0.0);
    for z in qtoeplitz::bergman::interior_points(q.weight(), 20, 0.9) {
        assert!((q.omega_rho_eval(&z).unwrap() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn lifted_symbols_are_invariant() {
    let q = s2_quotient(false, 0.0);
    let w = MultiPoly::var(2, 1);
    let u = &MixedSymbol::from_product(&w, &w) + &MixedSymbol::from_holomorphic(&MultiPoly::var(2, 0));
    let lifted = compose_symbol(&u, q.theta());
    assert!(qtoeplitz::isotypic::invariance_residual(q.group(), &lifted) < 1e-12);
}
