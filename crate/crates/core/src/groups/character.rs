use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use super::element::{permutation_parity, root_of_unity};
use super::{all_mixed_radix, ExactForm, GroupKind, ReflectionGroup};
use crate::poly::MultiPoly;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CharacterLabel {
    Trivial,
    Sign,
    Custom(usize),
}

impl core::fmt::Display for CharacterLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CharacterLabel::Trivial => f.write_str("trivial"),
            CharacterLabel::Sign => f.write_str("sign"),
            CharacterLabel::Custom(i) => write!(f, "chi{i}"),
        }
    }
}

/// A group character, stored as its values on the enumerated elements.
#[derive(Debug, Clone)]
pub struct Character {
    values: Vec<Complex64>,
    label: CharacterLabel,
    exponents: Vec<usize>,
    degree: usize,
}

impl Character {
    /// A one-dimensional character from its values; the hyperplane exponents
    /// `c_i` are solved from `χ(a_i) = det(a_i)^{c_i}`.
    pub fn one_dimensional(group: &ReflectionGroup, values: Vec<Complex64>, label: CharacterLabel) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::Dimension { expected: group.order(), got: values.len() });
        }
        let mut exponents = Vec::with_capacity(group.hyperplanes().len());
        for h in group.hyperplanes() {
            let a = h.generator();
            let det = group.element(a).det();
            let target = values[a];
            let mut power = Complex64::new(1.0, 0.0);
            let mut found = None;
            for c in 0..h.cyclic_order() {
                if (power - target).norm() <= 1e-9 {
                    found = Some(c);
                    break;
                }
                power *= det;
            }
            let c = found.ok_or_else(|| {
                Error::Domain(format!("character value {target} is not a power of det(a_i) = {det}"))
            })?;
            exponents.push(c);
        }
        Ok(Character { values, label, exponents, degree: 1 })
    }

    /// A character of degree > 1 (only used for complete tables).
    pub fn higher(values: Vec<Complex64>, label: CharacterLabel, degree: usize) -> Self {
        Character { values, label, exponents: Vec::new(), degree }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn label(&self) -> CharacterLabel {
        self.label
    }

    /// Hyperplane exponents `c_i`, one per reflecting hyperplane.
    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Largest deviation from `χ(στ) = χ(σ)χ(τ)` over all pairs.
    pub fn multiplicativity_defect(&self, group: &ReflectionGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..group.order() {
            for b in 0..group.order() {
                if let Some(ab) = group.product_index(a, b) {
                    worst = worst.max((self.values[ab] - self.values[a] * self.values[b]).norm());
                }
            }
        }
        worst
    }
}

/// One-dimensional characters: `{trivial, sign}` for `S_d`, all `|G|` for
/// diagonal abelian groups, or the supplied table for custom groups.
pub fn one_dim_characters(group: &ReflectionGroup) -> Result<Vec<Character>> {
    match group.kind() {
        GroupKind::Symmetric { .. } => {
            let trivial = vec_of(group.order(), Complex64::new(1.0, 0.0));
            let sign = group
                .elements()
                .iter()
                .map(|e| match e.exact() {
                    ExactForm::Permutation(p) if permutation_parity(p) => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(1.0, 0.0),
                })
                .collect();
            Ok(alloc::vec![
                Character::one_dimensional(group, trivial, CharacterLabel::Trivial)?,
                Character::one_dimensional(group, sign, CharacterLabel::Sign)?,
            ])
        }
        GroupKind::AbelianDiagonal { orders } => {
            let sign_digits: Vec<usize> = orders.iter().map(|&n| (n - 1) % n).collect();
            all_mixed_radix(orders)
                .into_iter()
                .enumerate()
                .map(|(index, j)| {
                    let values = group
                        .elements()
                        .iter()
                        .map(|e| match e.exact() {
                            ExactForm::Diagonal(ks) => ks
                                .iter()
                                .zip(&j)
                                .map(|(&(k, n), &ji)| root_of_unity(k * ji, n))
                                .product(),
                            _ => unreachable!("diagonal group elements carry exact exponents"),
                        })
                        .collect();
                    let label = if j.iter().all(|&x| x == 0) {
                        CharacterLabel::Trivial
                    } else if j == sign_digits {
                        CharacterLabel::Sign
                    } else {
                        CharacterLabel::Custom(index)
                    };
                    Character::one_dimensional(group, values, label)
                })
                .collect()
        }
        GroupKind::Custom => match group.supplied_characters() {
            Some(chars) => Ok(chars.iter().filter(|c| c.degree() == 1).cloned().collect()),
            None => Err(Error::Unsupported("custom group without a supplied character table".into())),
        },
    }
}

/// Every irreducible character, available for `S_2`, `S_3` and diagonal groups.
pub fn complete_character_table(group: &ReflectionGroup) -> Result<Vec<Character>> {
    match group.kind() {
        GroupKind::Symmetric { degree: 2 } | GroupKind::AbelianDiagonal { .. } => one_dim_characters(group),
        GroupKind::Symmetric { degree: 3 } => {
            let mut table = one_dim_characters(group)?;
            // standard representation: fixed points minus one
            let standard = group
                .elements()
                .iter()
                .map(|e| match e.exact() {
                    ExactForm::Permutation(p) => {
                        let fixed = p.iter().enumerate().filter(|(i, &pi)| *i == pi).count();
                        Complex64::new(fixed as f64 - 1.0, 0.0)
                    }
                    _ => unreachable!(),
                })
                .collect();
            table.push(Character::higher(standard, CharacterLabel::Custom(2), 2));
            Ok(table)
        }
        GroupKind::Symmetric { degree } => {
            Err(Error::Unsupported(format!("no hardcoded character table for S_{degree}")))
        }
        GroupKind::Custom => match group.supplied_characters() {
            Some(chars) => Ok(chars.to_vec()),
            None => Err(Error::Unsupported("custom group without a supplied character table".into())),
        },
    }
}

/// `ℓ_χ = ∏ ℓ_i^{c_i}` over the reflecting hyperplanes.
pub fn generating_polynomial(group: &ReflectionGroup, character: &Character) -> MultiPoly {
    let d = group.dim();
    group
        .hyperplanes()
        .iter()
        .zip(character.exponents())
        .fold(MultiPoly::one(d), |acc, (h, &c)| &acc * &MultiPoly::linear(h.linear_form()).pow(c))
}

/// Generator of the χ-relative invariants under `σ(f) = f∘σ^{-1}`.
/// Since `σ(ℓ_i) = det(σ)^{-1}ℓ_i` there, the exponents are `(m_i - c_i) mod m_i`;
/// this agrees with [`generating_polynomial`] for real characters.
pub fn relative_generator(group: &ReflectionGroup, character: &Character) -> MultiPoly {
    let d = group.dim();
    group
        .hyperplanes()
        .iter()
        .zip(character.exponents())
        .fold(MultiPoly::one(d), |acc, (h, &c)| {
            let m = h.cyclic_order();
            &acc * &MultiPoly::linear(h.linear_form()).pow((m - c) % m)
        })
}

fn vec_of(n: usize, z: Complex64) -> Vec<Complex64> {
    alloc::vec![z; n]
}

#[cfg(test)]
pub(crate) fn values_close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= crate::GROUP_TOL
}
