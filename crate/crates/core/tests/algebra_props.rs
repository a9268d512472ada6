mod common;

use common::{c, coeff, point, poly, symbol};
use proptest::prelude::*;
use qtoeplitz::groups::{
    cyclic_diagonal_group, generating_polynomial, one_dim_characters, relative_generator, smith_normal_form,
    symmetric_group, IntMatrix, ReflectionGroup,
};
use qtoeplitz::isotypic::{
    divide_by_generator, invariance_residual, invariant_to_theta, project, relative_invariance_residual,
};
use qtoeplitz::poly::{basic_map, compose_map, group_act, jacobian_det, MultiPoly};
use qtoeplitz::Complex64;

fn groups() -> Vec<ReflectionGroup> {
    vec![
        symmetric_group(2).unwrap(),
        symmetric_group(3).unwrap(),
        cyclic_diagonal_group(&[3]).unwrap(),
        cyclic_diagonal_group(&[2, 3]).unwrap(),
    ]
}

fn group_at(k: usize) -> ReflectionGroup {
    groups().swap_remove(k)
}

fn any_group() -> impl Strategy<Value = ReflectionGroup> {
    (0..4usize).prop_map(group_at)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn action_composes(k in 0..4usize, seed in any::<u64>(), coeffs in prop::collection::vec(coeff(), 6)) {
        let g = group_at(k);
        let d = g.dim();
        let f = MultiPoly::from_terms(
            d,
            coeffs.iter().enumerate().map(|(i, &c)| {
                let e: Vec<usize> = (0..d).map(|j| ((seed >> (8 * j + i)) % 5) as usize).collect();
                (qtoeplitz::poly::Exponent::new(&e), c)
            }),
        );
        let n = g.order();
        let (a, b) = ((seed % n as u64) as usize, ((seed >> 32) % n as u64) as usize);
        let (s, t) = (g.element(a), g.element(b));
        let lhs = group_act(&s.compose(t), &f);
        let rhs = group_act(s, &group_act(t, &f));
        prop_assert!((&lhs - &rhs).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn symbol_action_composes(f in symbol(3, 3, 5), a in 0..6usize, b in 0..6usize) {
        let g = symmetric_group(3).unwrap();
        let (s, t) = (g.element(a), g.element(b));
        let lhs = group_act(&s.compose(t), &f);
        let rhs = group_act(s, &group_act(t, &f));
        prop_assert!((&lhs - &rhs).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn composition_with_theta_is_invariant(k in 0..4usize, f in poly(3, 3, 5)) {
        let g = group_at(k);
        let d = g.dim();
        let f = MultiPoly::from_terms(d, f.terms().map(|(e, c)| {
            let v: Vec<usize> = (0..d).map(|i| e.get(i) % 4).collect();
            (qtoeplitz::poly::Exponent::new(&v), *c)
        }));
        let theta = basic_map(&g).unwrap();
        let inv = compose_map(&f, &theta);
        prop_assert!(invariance_residual(&g, &inv) < 1e-10 * inv.max_abs_coeff().max(1.0));
    }

    #[test]
    fn projection_is_idempotent_and_lands_in_relative_invariants(g in any_group(), raw in poly(3, 4, 6)) {
        let d = g.dim();
        let f = MultiPoly::from_terms(d, raw.terms().map(|(e, c)| {
            let v: Vec<usize> = (0..d).map(|i| e.get(i)).collect();
            (qtoeplitz::poly::Exponent::new(&v), *c)
        }));
        for chi in one_dim_characters(&g).unwrap() {
            let p = project(&g, &chi, &f);
            prop_assert!((&project(&g, &chi, &p) - &p).max_abs_coeff() < 1e-12);
            prop_assert!(relative_invariance_residual(&g, &chi, &p) < 1e-10);
        }
    }

    #[test]
    fn distinct_components_are_orthogonal(f in poly(2, 4, 6), h in poly(2, 4, 6), alpha in 0.0..3.0f64) {
        let g = symmetric_group(2).unwrap();
        let w = qtoeplitz::bergman::Weight::polydisc(vec![alpha, alpha]).unwrap();
        let chars = one_dim_characters(&g).unwrap();
        let pf = project(&g, &chars[0], &f);
        let ph = project(&g, &chars[1], &h);
        prop_assert!(w.inner(&pf, &ph).norm() < 1e-10);
    }

    #[test]
    fn relative_invariants_are_fixed(g in any_group(), f in poly(3, 3, 4)) {
        let d = g.dim();
        let f = MultiPoly::from_terms(d, f.terms().map(|(e, c)| {
            let v: Vec<usize> = (0..d).map(|i| e.get(i)).collect();
            (qtoeplitz::poly::Exponent::new(&v), *c)
        }));
        let theta = basic_map(&g).unwrap();
        for chi in one_dim_characters(&g).unwrap() {
            let rel = &relative_generator(&g, &chi) * &compose_map(&f, &theta);
            prop_assert!(relative_invariance_residual(&g, &chi, &rel) < 1e-10 * rel.max_abs_coeff().max(1.0));
            prop_assert!((&project(&g, &chi, &rel) - &rel).max_abs_coeff() < 1e-10 * rel.max_abs_coeff().max(1.0));
        }
    }

    #[test]
    fn theta_round_trip(k in 0..4usize, f in poly(3, 3, 5)) {
        let g = group_at(k);
        let d = g.dim();
        let phi = MultiPoly::from_terms(d, f.terms().map(|(e, c)| {
            let v: Vec<usize> = (0..d).map(|i| e.get(i) % 3).collect();
            (qtoeplitz::poly::Exponent::new(&v), *c)
        }));
        let theta = basic_map(&g).unwrap();
        let inv = compose_map(&phi, &theta);
        let back = invariant_to_theta(&g, &inv).unwrap();
        prop_assert!((&compose_map(&back, &theta) - &inv).max_abs_coeff() < 1e-9);
        prop_assert!((&back - &phi).max_abs_coeff() < 1e-9);
    }

    #[test]
    fn division_undoes_multiplication(k in 0..4usize, f in poly(3, 4, 5)) {
        let g = group_at(k);
        let d = g.dim();
        let phi = MultiPoly::from_terms(d, f.terms().map(|(e, c)| {
            let v: Vec<usize> = (0..d).map(|i| e.get(i)).collect();
            (qtoeplitz::poly::Exponent::new(&v), *c)
        }));
        let theta = basic_map(&g).unwrap();
        let inv = compose_map(&phi, &theta);
        prop_assume!(inv.degree().unwrap_or(0) <= 8);
        for chi in one_dim_characters(&g).unwrap() {
            let prod = &relative_generator(&g, &chi) * &inv;
            let q = divide_by_generator(&g, &chi, &prod).unwrap();
            prop_assert!((&q - &inv).max_abs_coeff() < 1e-9 * inv.max_abs_coeff().max(1.0));
        }
    }

    #[test]
    fn sign_generator_matches_jacobian(d in 2..=3usize, pts in prop::collection::vec(point(3, 0.9), 20)) {
        let g = symmetric_group(d).unwrap();
        let sign = one_dim_characters(&g).unwrap().remove(1);
        let ell = generating_polynomial(&g, &sign);
        let j = jacobian_det(&basic_map(&g).unwrap());
        let z0: Vec<Complex64> = (0..d).map(|i| c(0.3 + 0.2 * i as f64, -0.1 * i as f64)).collect();
        let scale = j.eval(&z0) / ell.eval(&z0);
        for p in &pts {
            let z = &p[..d];
            prop_assert!((j.eval(z) - scale * ell.eval(z)).norm() < 1e-10);
        }
    }

    #[test]
    fn smith_form_is_a_valid_factorization(n in 2..=3usize, entries in prop::collection::vec(-10i64..=10, 9)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
        let a = IntMatrix::from_rows(&rows).unwrap();
        prop_assume!(a.det().unwrap() != 0);
        let s = smith_normal_form(&a).unwrap();
        prop_assert_eq!(s.p.mul(&s.d).unwrap().mul(&s.q).unwrap(), a);
        prop_assert_eq!(s.p.det().unwrap().abs(), 1);
        prop_assert_eq!(s.q.det().unwrap().abs(), 1);
        let f = s.invariant_factors();
        prop_assert!(f.iter().all(|&x| x > 0));
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
    }
}

#[test]
fn characters_match_hyperplane_determinants() {
    for g in groups() {
        let chars = one_dim_characters(&g).unwrap();
        assert!(chars.len() >= 2);
        for chi in &chars {
            assert!(chi.multiplicativity_defect(&g) < 1e-12);
            for (h, &ci) in g.hyperplanes().iter().zip(chi.exponents()) {
                let det = g.element(h.generator()).det();
                assert!((chi.value(h.generator()) - det.powu(ci as u32)).norm() < 1e-12);
                assert!(ci < h.cyclic_order());
            }
        }
        if let qtoeplitz::groups::GroupKind::AbelianDiagonal { .. } = g.kind() {
            assert_eq!(chars.len(), g.order());
        }
    }
}

#[test]
fn sign_times_det_is_one() {
    for d in 2..=3 {
        let g = symmetric_group(d).unwrap();
        let sign = one_dim_characters(&g).unwrap().remove(1);
        for (i, e) in g.elements().iter().enumerate() {
            assert!((sign.value(i) * e.det() - c(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
