use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Exponent, MixedSymbol, MultiPoly};
use crate::groups::{permutation_parity, permutations, GroupKind, ReflectionGroup};
use crate::{Error, Result};

/// A polynomial map `θ = (θ_1, …, θ_k)` out of `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    components: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        if let Some(first) = components.first() {
            if let Some(bad) = components.iter().find(|c| c.dim() != first.dim()) {
                return Err(Error::Dimension { expected: first.dim(), got: bad.dim() });
            }
        }
        Ok(PolyMap { components })
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    /// Number of source variables.
    pub fn source_dim(&self) -> usize {
        self.components.first().map(|c| c.dim()).unwrap_or(0)
    }

    /// Number of components.
    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// Total degree of each component (weights for the weighted grading).
    pub fn degrees(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.degree().unwrap_or(0)).collect()
    }
}

/// The basic polynomial map of a group: elementary symmetric polynomials for
/// `S_d`, `z_i^{n_i}` for diagonal cyclic groups.
pub fn basic_map(group: &ReflectionGroup) -> Result<PolyMap> {
    let d = group.dim();
    match group.kind() {
        GroupKind::Symmetric { .. } => {
            // coefficients of ∏(1 + z_i t)
            let mut e = alloc::vec![MultiPoly::zero(d); d + 1];
            e[0] = MultiPoly::one(d);
            for i in 0..d {
                let zi = MultiPoly::var(d, i);
                for k in (1..=i + 1).rev() {
                    let add = &e[k - 1] * &zi;
                    e[k] += &add;
                }
            }
            PolyMap::new(e.into_iter().skip(1).collect())
        }
        GroupKind::AbelianDiagonal { orders } => PolyMap::new(
            orders
                .iter()
                .enumerate()
                .map(|(i, &n)| MultiPoly::monomial(Exponent::unit(d, i).with(i, n), Complex64::new(1.0, 0.0)))
                .collect(),
        ),
        GroupKind::Custom => Err(Error::Unsupported(format!("no basic map for a custom group of order {}", group.order()))),
    }
}

/// Symbolic determinant of `[∂θ_i/∂z_j]` by Leibniz expansion.
pub fn jacobian_det(theta: &PolyMap) -> MultiPoly {
    let d = theta.source_dim();
    assert_eq!(theta.target_dim(), d, "Jacobian determinant needs a square map");
    let partials: Vec<Vec<MultiPoly>> =
        theta.components().iter().map(|c| (0..d).map(|j| c.derivative(j)).collect()).collect();
    let mut det = MultiPoly::zero(d);
    for p in permutations(d) {
        let mut term = MultiPoly::one(d);
        for (i, &j) in p.iter().enumerate() {
            term = &term * &partials[i][j];
            if term.is_zero() {
                break;
            }
        }
        if permutation_parity(&p) {
            det -= &term;
        } else {
            det += &term;
        }
    }
    det
}

/// `f(θ_1, …, θ_k)`.
pub fn compose_map(f: &MultiPoly, theta: &PolyMap) -> MultiPoly {
    assert_eq!(f.dim(), theta.target_dim(), "polynomial arity must match the number of map components");
    f.substitute(theta.components())
}

/// `u ∘ θ` for a symbol `u` in the target variables: holomorphic exponents
/// are composed with `θ`, antiholomorphic ones with `conj(θ)`.
pub fn compose_symbol(u: &MixedSymbol, theta: &PolyMap) -> MixedSymbol {
    assert_eq!(u.dim(), theta.target_dim(), "symbol arity must match the number of map components");
    let d = theta.source_dim();
    let k = theta.target_dim();
    let mut out = MixedSymbol::zero(d);
    // group terms by antiholomorphic exponent so each conj(θ)^b is built once
    let mut by_b: alloc::collections::BTreeMap<Exponent, MultiPoly> = alloc::collections::BTreeMap::new();
    for (a, b, &c) in u.terms() {
        by_b.entry(*b).or_insert_with(|| MultiPoly::zero(k)).add_term(*a, c);
    }
    for (b, holo) in by_b {
        let h = compose_map(&holo, theta);
        let g = compose_map(&MultiPoly::monomial(b, Complex64::new(1.0, 0.0)), theta);
        out += &MixedSymbol::from_product(&h, &g);
    }
    out
}

/// Dimension of the `G`-invariant homogeneous polynomials of degree `n`:
/// rank of the trivial projections of all degree-`n` monomials.
pub fn invariant_dimension(group: &ReflectionGroup, n: usize) -> usize {
    crate::isotypic::invariant_dimension(group, n)
}
