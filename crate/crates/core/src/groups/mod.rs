//! Finite pseudoreflection groups: enumeration, reflecting hyperplanes,
//! one-dimensional characters and generating polynomials.

mod character;
mod element;
mod hyperplane;
pub mod snf;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

pub use character::{
    complete_character_table, generating_polynomial, one_dim_characters, relative_generator, Character, CharacterLabel,
};
pub use element::{root_of_unity, ExactForm, GroupElement};
pub(crate) use element::permutation_parity;
pub use hyperplane::{reflecting_hyperplanes, Hyperplane};
pub use snf::{monomial_polyhedron_group, smith_normal_form, IntMatrix, SmithForm};

use crate::poly::MAX_VARS;
use crate::{Error, Result};

/// Default cap on the number of enumerated elements.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    /// Coordinate permutations of `C^degree`.
    Symmetric { degree: usize },
    /// `∏ Z/n_i` acting by `diag(ζ_{n_1}^{k_1}, …)`.
    AbelianDiagonal { orders: Vec<usize> },
    Custom,
}

/// A finite matrix group generated by pseudoreflections, fully enumerated.
#[derive(Debug, Clone)]
pub struct ReflectionGroup {
    dim: usize,
    kind: GroupKind,
    elements: Vec<GroupElement>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    hyperplanes: Vec<Hyperplane>,
    supplied_characters: Option<Vec<Character>>,
}

/// The symmetric group `S_d` permuting coordinates of `C^d`, `2 ≤ d ≤ 6`.
pub fn symmetric_group(d: usize) -> Result<ReflectionGroup> {
    if !(2..=6).contains(&d) {
        return Err(Error::Size(format!("symmetric group degree {d} outside 2..=6")));
    }
    let perms = permutations(d);
    let elements: Vec<GroupElement> = perms.into_iter().map(GroupElement::permutation).collect();
    let generators = (0..d - 1)
        .map(|i| {
            let mut p: Vec<usize> = (0..d).collect();
            p.swap(i, i + 1);
            elements
                .iter()
                .position(|e| matches!(e.exact(), ExactForm::Permutation(q) if *q == p))
                .expect("adjacent transposition present")
        })
        .collect();
    Ok(ReflectionGroup::assemble(d, GroupKind::Symmetric { degree: d }, elements, generators))
}

/// Diagonal cyclic group `∏ Z/orders[i]` with the default enumeration limit.
pub fn cyclic_diagonal_group(orders: &[usize]) -> Result<ReflectionGroup> {
    cyclic_diagonal_group_with_limit(orders, DEFAULT_ENUMERATION_LIMIT)
}

pub fn cyclic_diagonal_group_with_limit(orders: &[usize], limit: usize) -> Result<ReflectionGroup> {
    let d = orders.len();
    if d == 0 || d > MAX_VARS {
        return Err(Error::Size(format!("dimension {d} outside 1..={MAX_VARS}")));
    }
    if orders.iter().any(|&n| n == 0) {
        return Err(Error::Size("cyclic orders must be positive".into()));
    }
    let mut total: usize = 1;
    for &n in orders {
        total = total
            .checked_mul(n)
            .filter(|&t| t <= limit)
            .ok_or_else(|| Error::Size(format!("group order exceeds enumeration limit {limit}")))?;
    }
    let elements: Vec<GroupElement> = (0..total)
        .map(|idx| {
            GroupElement::diagonal(
                mixed_radix(idx, orders).into_iter().zip(orders).map(|(k, &n)| (k, n)).collect(),
            )
        })
        .collect();
    let mut generators = Vec::new();
    for (i, &n) in orders.iter().enumerate() {
        if n > 1 {
            let mut digits = vec![0; d];
            digits[i] = 1;
            generators.push(from_mixed_radix(&digits, orders));
        }
    }
    Ok(ReflectionGroup::assemble(
        d,
        GroupKind::AbelianDiagonal { orders: orders.to_vec() },
        elements,
        generators,
    ))
}

/// Closure of user-supplied generator matrices (row-major, `d × d`).
pub fn custom_group(dim: usize, generators: &[Vec<Complex64>], limit: usize) -> Result<ReflectionGroup> {
    if dim == 0 || dim > MAX_VARS {
        return Err(Error::Size(format!("dimension {dim} outside 1..={MAX_VARS}")));
    }
    let gens: Vec<GroupElement> = generators
        .iter()
        .map(|m| {
            if m.len() != dim * dim {
                Err(Error::Dimension { expected: dim * dim, got: m.len() })
            } else {
                Ok(GroupElement::from_matrix(dim, m.clone()))
            }
        })
        .collect::<Result<_>>()?;
    let mut elements = vec![GroupElement::identity(dim)];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        for g in &gens {
            let next = g.compose(&current);
            if !elements.iter().any(|e| e.approx_eq(&next)) {
                if elements.len() >= limit {
                    return Err(Error::Size(format!("group order exceeds enumeration limit {limit}")));
                }
                elements.push(next);
            }
        }
        frontier += 1;
    }
    let generator_idx = gens
        .iter()
        .map(|g| elements.iter().position(|e| e.approx_eq(g)).expect("generator enumerated"))
        .collect();
    Ok(ReflectionGroup::assemble(dim, GroupKind::Custom, elements, generator_idx))
}

impl ReflectionGroup {
    fn assemble(dim: usize, kind: GroupKind, elements: Vec<GroupElement>, generators: Vec<usize>) -> Self {
        let mut group = ReflectionGroup {
            dim,
            kind,
            elements,
            generators,
            inverses: Vec::new(),
            hyperplanes: Vec::new(),
            supplied_characters: None,
        };
        group.inverses = (0..group.elements.len())
            .map(|i| {
                let inv = group.elements[i].inverse();
                group.index_of(&inv).expect("enumerated group is closed under inverses")
            })
            .collect();
        group.hyperplanes = reflecting_hyperplanes(&group);
        group
    }

    /// Attach a character table for a custom group.
    pub fn with_characters(mut self, characters: Vec<Character>) -> Result<Self> {
        for ch in &characters {
            if ch.values().len() != self.order() {
                return Err(Error::Dimension { expected: self.order(), got: ch.values().len() });
            }
        }
        self.supplied_characters = Some(characters);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &GroupElement {
        &self.elements[idx]
    }

    /// Indices of the generating elements.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn inverse_index(&self, idx: usize) -> usize {
        self.inverses[idx]
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub(crate) fn supplied_characters(&self) -> Option<&[Character]> {
        self.supplied_characters.as_deref()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        match (&self.kind, g.exact()) {
            (GroupKind::AbelianDiagonal { orders }, ExactForm::Diagonal(e)) if e.len() == orders.len() => {
                let digits: Vec<usize> = e.iter().map(|&(k, _)| k).collect();
                Some(from_mixed_radix(&digits, orders))
            }
            _ => self.elements.iter().position(|e| e.approx_eq(g)),
        }
    }

    /// Index of `elements[a] · elements[b]`.
    pub fn product_index(&self, a: usize, b: usize) -> Option<usize> {
        self.index_of(&self.elements[a].compose(&self.elements[b]))
    }

    /// Closure, identity and inverse checks, `O(|G|²)`.
    pub fn validate(&self) -> Result<()> {
        if !self.elements.iter().any(|e| e.is_identity()) {
            return Err(Error::Domain("identity missing".into()));
        }
        for a in 0..self.order() {
            let inv = self.inverses[a];
            if !self.elements[a].compose(&self.elements[inv]).is_identity() {
                return Err(Error::Domain(format!("element {a} has no inverse")));
            }
            for b in 0..self.order() {
                if self.product_index(a, b).is_none() {
                    return Err(Error::Domain(format!("product of {a} and {b} leaves the group")));
                }
            }
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic order (identity first).
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

fn mixed_radix(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        digits[i] = idx % radices[i];
        idx /= radices[i];
    }
    digits
}

fn from_mixed_radix(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&k, &n)| acc * n + k % n)
}

pub(crate) fn all_mixed_radix(radices: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = radices.iter().product();
    (0..total).map(|i| mixed_radix(i, radices)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_orders() {
        assert_eq!(symmetric_group(2).unwrap().order(), 2);
        assert_eq!(symmetric_group(3).unwrap().order(), 6);
        assert_eq!(symmetric_group(4).unwrap().order(), 24);
        assert!(matches!(symmetric_group(1), Err(Error::Size(_))));
        assert!(matches!(symmetric_group(7), Err(Error::Size(_))));
    }

    #[test]
    fn groups_validate() {
        symmetric_group(3).unwrap().validate().unwrap();
        cyclic_diagonal_group(&[3, 2]).unwrap().validate().unwrap();
        cyclic_diagonal_group(&[5]).unwrap().validate().unwrap();
    }

    #[test]
    fn diagonal_orders_and_limit() {
        assert_eq!(cyclic_diagonal_group(&[2]).unwrap().order(), 2);
        assert_eq!(cyclic_diagonal_group(&[3, 1]).unwrap().order(), 3);
        assert_eq!(cyclic_diagonal_group(&[2, 2]).unwrap().order(), 4);
        assert!(matches!(cyclic_diagonal_group(&[1000, 1000]), Err(Error::Size(_))));
        assert!(cyclic_diagonal_group_with_limit(&[4, 4], 15).is_err());
    }

    #[test]
    fn custom_closure_matches_diagonal() {
        let zeta = root_of_unity(1, 3);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let g = custom_group(2, &[vec![zeta, zero, zero, one]], 100).unwrap();
        assert_eq!(g.order(), 3);
        g.validate().unwrap();
        assert_eq!(g.hyperplanes().len(), 1);
        assert_eq!(g.hyperplanes()[0].cyclic_order(), 3);
    }

    #[test]
    fn custom_swap_group() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let g = custom_group(2, &[vec![zero, one, one, zero]], 100).unwrap();
        assert_eq!(g.order(), 2);
        assert!(one_dim_characters(&g).is_err());
    }

    #[test]
    fn inverse_indices() {
        let g = symmetric_group(3).unwrap();
        for i in 0..g.order() {
            let j = g.inverse_index(i);
            assert!(g.element(i).compose(g.element(j)).is_identity());
        }
    }
}
