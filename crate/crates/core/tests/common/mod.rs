#![allow(dead_code)]

use proptest::prelude::*;
use qtoeplitz::poly::{Exponent, MixedSymbol, MultiPoly};
use qtoeplitz::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

pub fn poly(dim: usize, max_exp: usize, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, dim), coeff()), 1..=max_terms)
        .prop_map(move |ts| MultiPoly::from_terms(dim, ts.into_iter().map(|(e, c)| (Exponent::new(&e), c))))
}

pub fn symbol(dim: usize, max_exp: usize, max_terms: usize) -> impl Strategy<Value = MixedSymbol> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, dim), prop::collection::vec(0..=max_exp, dim), coeff()),
        1..=max_terms,
    )
    .prop_map(move |ts| {
        MixedSymbol::from_terms(dim, ts.into_iter().map(|(a, b, c)| (Exponent::new(&a), Exponent::new(&b), c)))
    })
}

/// A point with every coordinate of modulus at most `radius`.
pub fn point(dim: usize, radius: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.0..=radius, 0.0..std::f64::consts::TAU), dim)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}
