use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::poly::{box_exponents, exponents_up_to_degree, Exponent};

/// Which monomials a finite section keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisShape {
    /// every exponent `≤ N` (natural on the polydisc)
    Box,
    /// total degree `≤ N` (natural on the ball)
    Simplex,
}

/// An ordered set of monomial exponents with a reverse index.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    dim: usize,
    truncation: usize,
    shape: BasisShape,
    indices: Vec<Exponent>,
    index: BTreeMap<Exponent, usize>,
}

impl MonomialBasis {
    /// Box bases are in lexicographic order, simplex bases in graded-lex order.
    pub fn new(dim: usize, truncation: usize, shape: BasisShape) -> Self {
        let indices = match shape {
            BasisShape::Box => box_exponents(dim, truncation),
            BasisShape::Simplex => exponents_up_to_degree(dim, truncation),
        };
        let index = indices.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        MonomialBasis { dim, truncation, shape, indices, index }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn shape(&self) -> BasisShape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[Exponent] {
        &self.indices
    }

    pub fn position(&self, e: &Exponent) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn index_map(&self) -> &BTreeMap<Exponent, usize> {
        &self.index
    }

    /// Whether `e` stays at least `margin` away from the truncation boundary.
    pub fn is_interior(&self, e: &Exponent, margin: usize) -> bool {
        is_interior(self.shape, self.truncation, e, margin)
    }
}

pub(crate) fn is_interior(shape: BasisShape, truncation: usize, e: &Exponent, margin: usize) -> bool {
    if margin > truncation {
        return false;
    }
    let cap = truncation - margin;
    match shape {
        BasisShape::Box => e.max_entry() <= cap,
        BasisShape::Simplex => e.degree() <= cap,
    }
}
