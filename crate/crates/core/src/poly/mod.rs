//! Sparse multivariate polynomials in `z`, mixed symbols in `z, z̄`, polynomial
//! maps, and the linear group action on both.

mod action;
mod map;
mod mixed;
mod multi;

use alloc::vec::Vec;
use core::cmp::Ordering;

pub use action::{group_act, GroupAction};
pub use map::{basic_map, compose_map, compose_symbol, invariant_dimension, jacobian_det, PolyMap};
pub use mixed::MixedSymbol;
pub use multi::MultiPoly;

/// Maximum number of variables.
pub const MAX_VARS: usize = 8;
/// Maximum exponent of any single variable.
pub const MAX_EXPONENT: usize = 64;

/// Exponent multi-index. Ordered graded-lexicographically: total degree
/// first, then lexicographically with `z_1` most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    len: u8,
    e: [u8; MAX_VARS],
}

impl Exponent {
    /// Panics if `exps` has more than [`MAX_VARS`] entries or an entry above
    /// [`MAX_EXPONENT`].
    pub fn new(exps: &[usize]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut e = [0u8; MAX_VARS];
        for (slot, &x) in e.iter_mut().zip(exps) {
            assert!(x <= MAX_EXPONENT, "exponent {x} exceeds cap {MAX_EXPONENT}");
            *slot = x as u8;
        }
        Exponent { len: exps.len() as u8, e }
    }

    pub fn zero(dim: usize) -> Self {
        Exponent::new(&alloc::vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = Exponent::zero(dim);
        e.e[i] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> usize {
        self.e[i] as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.e[..self.len()]
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.as_slice().iter().map(|&x| x as usize).collect()
    }

    pub fn degree(&self) -> usize {
        self.as_slice().iter().map(|&x| x as usize).sum()
    }

    pub fn max_entry(&self) -> usize {
        self.as_slice().iter().copied().max().unwrap_or(0) as usize
    }

    /// Componentwise sum; panics past [`MAX_EXPONENT`].
    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len, other.len);
        let mut out = *self;
        for i in 0..self.len() {
            let s = self.e[i] as usize + other.e[i] as usize;
            assert!(s <= MAX_EXPONENT, "exponent {s} exceeds cap {MAX_EXPONENT}");
            out.e[i] = s as u8;
        }
        out
    }

    /// `self + plus - minus` if every entry stays non-negative.
    pub fn shift(&self, plus: &Exponent, minus: &Exponent) -> Option<Exponent> {
        let mut out = *self;
        for i in 0..self.len() {
            let v = self.e[i] as isize + plus.e[i] as isize - minus.e[i] as isize;
            if v < 0 || v as usize > MAX_EXPONENT {
                return None;
            }
            out.e[i] = v as u8;
        }
        Some(out)
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        let mut out = *self;
        for i in 0..self.len() {
            out.e[i] = self.e[i].checked_sub(other.e[i])?;
        }
        Some(out)
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        (0..self.len()).all(|i| self.e[i] <= other.e[i])
    }

    pub fn with(&self, i: usize, value: usize) -> Exponent {
        assert!(value <= MAX_EXPONENT);
        let mut out = *self;
        out.e[i] = value as u8;
        out
    }

    /// Plain lexicographic comparison (no degree grading).
    pub fn lex_cmp(&self, other: &Exponent) -> Ordering {
        self.as_slice().cmp(other.as_slice())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then(self.degree().cmp(&other.degree()))
            .then_with(|| self.as_slice().cmp(other.as_slice()))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl core::fmt::Debug for Exponent {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// All exponents of total degree exactly `n`, ascending graded-lex.
pub fn exponents_of_degree(dim: usize, n: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    let mut cur = alloc::vec![0usize; dim];
    fill_degree(&mut cur, 0, n, &mut out);
    out.sort();
    out
}

fn fill_degree(cur: &mut Vec<usize>, pos: usize, remaining: usize, out: &mut Vec<Exponent>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(Exponent::new(cur));
        return;
    }
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Exponent::new(&[]));
        }
        return;
    }
    for k in 0..=remaining {
        cur[pos] = k;
        fill_degree(cur, pos + 1, remaining - k, out);
    }
    cur[pos] = 0;
}

/// All exponents of total degree `≤ n`, ascending graded-lex.
pub fn exponents_up_to_degree(dim: usize, n: usize) -> Vec<Exponent> {
    (0..=n).flat_map(|k| exponents_of_degree(dim, k)).collect()
}

/// All exponents with every entry `≤ n`, in lexicographic order.
pub fn box_exponents(dim: usize, n: usize) -> Vec<Exponent> {
    let mut out = Vec::with_capacity((n + 1).pow(dim as u32));
    let mut cur = alloc::vec![0usize; dim];
    loop {
        out.push(Exponent::new(&cur));
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n {
                cur[i] += 1;
                for slot in cur.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Exponent::new(&[2, 0]);
        let b = Exponent::new(&[1, 1]);
        let c = Exponent::new(&[0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert!(Exponent::zero(2) < Exponent::unit(2, 1));
        assert!(Exponent::unit(2, 0) > Exponent::unit(2, 1));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(exponents_of_degree(2, 4).len(), 5);
        assert_eq!(exponents_of_degree(3, 8).len(), 45);
        assert_eq!(exponents_up_to_degree(2, 5).len(), 21);
        let b = box_exponents(2, 2);
        assert_eq!(b.len(), 9);
        assert_eq!(b[1].to_vec(), [0, 1]);
        assert_eq!(b[3].to_vec(), [1, 0]);
        assert_eq!(box_exponents(1, 3).len(), 4);
    }

    #[test]
    fn shifts() {
        let m = Exponent::new(&[1, 0]);
        assert_eq!(m.shift(&Exponent::new(&[0, 1]), &Exponent::new(&[1, 0])).unwrap().to_vec(), [0, 1]);
        assert!(m.shift(&Exponent::zero(2), &Exponent::new(&[0, 1])).is_none());
    }

    #[test]
    #[should_panic]
    fn exponent_cap() {
        Exponent::new(&[65]);
    }
}
