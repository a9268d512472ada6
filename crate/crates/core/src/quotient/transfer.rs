use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{compressed_toeplitz, isotypic_basis, QuotientDescriptor};
use crate::bergman::{berezin, op_product_interior, toeplitz_matrix, QuadratureOrders, TruncatedOperator, Weight};
use crate::groups::{one_dim_characters, CharacterLabel, ReflectionGroup};
use crate::isotypic::invariance_residual;
use crate::poly::{compose_symbol, MixedSymbol, MultiPoly};
use crate::{Error, Result, INVARIANCE_TOL};

/// A residual below this counts as an exact operator identity.
pub const TRANSFER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferMode {
    /// `T_u T_v = T_q`
    Product,
    /// `T_u T_v = T_v T_u`
    Commutator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterResidual {
    pub label: CharacterLabel,
    pub residual: f64,
    pub pass: bool,
}

/// Interior-block residuals of one operator identity on every
/// one-dimensional isotypic component and on the full space.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub mode: TransferMode,
    pub truncation: usize,
    pub margin: usize,
    pub characters: Vec<CharacterResidual>,
    pub full_space_residual: f64,
    pub full_space_pass: bool,
    /// The identity holds everywhere or fails everywhere.
    pub joint_consistent: bool,
}

fn identity_residual(
    tu: &TruncatedOperator,
    tv: &TruncatedOperator,
    tq: Option<&TruncatedOperator>,
    margin: usize,
) -> Result<f64> {
    let uv = op_product_interior(tu, tv, margin)?;
    let other = match tq {
        Some(t) => t.restrict_interior(margin),
        None => op_product_interior(tv, tu, margin)?,
    };
    uv.max_abs_diff(&other)
}

/// Checks `T_u T_v = T_q` (or `[T_u, T_v] = 0`) for symbols `u, v, q` in the
/// θ-variables, lifted to `Ω` as `u∘θ`, on each one-dimensional isotypic
/// component and on the full truncated monomial space.
pub fn transfer_check(
    group: &ReflectionGroup,
    weight: &Weight,
    u: &MixedSymbol,
    v: &MixedSymbol,
    qsym: Option<&MixedSymbol>,
    mode: TransferMode,
    n: usize,
) -> Result<TransferReport> {
    let qsym = match (mode, qsym) {
        (TransferMode::Product, None) => return Err(Error::Domain("product mode needs the symbol q".into())),
        (TransferMode::Product, Some(q)) => Some(q),
        (TransferMode::Commutator, _) => None,
    };
    let chars = one_dim_characters(group)?;
    let first = QuotientDescriptor::new(group, &chars[0], weight)?;
    let lift = |s: &MixedSymbol| compose_symbol(s, first.theta());
    let (ut, vt) = (lift(u), lift(v));
    let qt = qsym.map(lift);
    let margin = ut.band() + vt.band();
    if margin > n {
        return Err(Error::Margin { given: n, required: margin });
    }
    let mut characters = Vec::with_capacity(chars.len());
    for chi in &chars {
        let q = QuotientDescriptor::new(group, chi, weight)?;
        let basis = isotypic_basis(&q, n)?;
        let tu = compressed_toeplitz(&q, &ut, &basis)?;
        let tv = compressed_toeplitz(&q, &vt, &basis)?;
        let tq = qt.as_ref().map(|s| compressed_toeplitz(&q, s, &basis)).transpose()?;
        let residual = identity_residual(&tu, &tv, tq.as_ref(), margin)?;
        characters.push(CharacterResidual { label: chi.label(), residual, pass: residual < TRANSFER_TOL });
    }
    let tu = toeplitz_matrix(&ut, weight, n)?;
    let tv = toeplitz_matrix(&vt, weight, n)?;
    let tq = qt.as_ref().map(|s| toeplitz_matrix(s, weight, n)).transpose()?;
    let full = identity_residual(&tu, &tv, tq.as_ref(), margin)?;
    let full_pass = full < TRANSFER_TOL;
    let joint_consistent = characters.iter().all(|c| c.pass == full_pass);
    Ok(TransferReport {
        mode,
        truncation: n,
        margin,
        characters,
        full_space_residual: full,
        full_space_pass: full_pass,
        joint_consistent,
    })
}

/// Both sides of the equivalence for `f = f1 + conj(f2)`, `g = g1 + conj(g2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaPrReport {
    /// `|f1 g1 + conj(f2 g2) + f1 conj(g2) − B_α(h − conj(f2) g1)|` per point.
    pub point_residuals: Vec<f64>,
    /// `max |interior(T_f T_g − T_h)|`.
    pub operator_residual: f64,
    pub margin: usize,
    pub accuracy_warning: bool,
}

impl LemmaPrReport {
    pub fn berezin_residual(&self) -> f64 {
        self.point_residuals.iter().copied().fold(0.0, f64::max)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn lemma_pr_residual(
    f1: &MultiPoly,
    f2: &MultiPoly,
    g1: &MultiPoly,
    g2: &MultiPoly,
    h: &MixedSymbol,
    weight: &Weight,
    points: &[Vec<Complex64>],
    orders: QuadratureOrders,
    n: usize,
) -> Result<LemmaPrReport> {
    let arg = h - &MixedSymbol::from_product(g1, f2);
    let mut point_residuals = Vec::with_capacity(points.len());
    let mut warning = false;
    for z in points {
        let (a1, a2, b1, b2) = (f1.eval(z), f2.eval(z), g1.eval(z), g2.eval(z));
        let lhs = a1 * b1 + a2.conj() * b2.conj() + a1 * b2.conj();
        let r = berezin(weight, &arg, z, orders)?;
        warning |= r.accuracy_warning;
        point_residuals.push((lhs - r.value).norm());
    }
    let f = &MixedSymbol::from_holomorphic(f1) + &MixedSymbol::from_antiholomorphic(f2);
    let g = &MixedSymbol::from_holomorphic(g1) + &MixedSymbol::from_antiholomorphic(g2);
    let margin = f.band() + g.band();
    if margin > n {
        return Err(Error::Margin { given: n, required: margin });
    }
    let tf = toeplitz_matrix(&f, weight, n)?;
    let tg = toeplitz_matrix(&g, weight, n)?;
    let th = toeplitz_matrix(h, weight, n)?;
    let operator_residual = identity_residual(&tf, &tg, Some(&th), margin)?;
    Ok(LemmaPrReport { point_residuals, operator_residual, margin, accuracy_warning: warning })
}

/// `p∘θ + conj(r∘θ)` for `u = p + conj(r)` in the θ-variables; checked to be
/// pluriharmonic and `G`-invariant.
pub fn pluriharmonic_lift(u: &MixedSymbol, q: &QuotientDescriptor) -> Result<MixedSymbol> {
    if !u.is_pluriharmonic() {
        return Err(Error::NotPluriharmonic);
    }
    let p = u.holomorphic_part();
    let r = u.antiholomorphic_part();
    let lifted = &MixedSymbol::from_holomorphic(&crate::poly::compose_map(&p, q.theta()))
        + &MixedSymbol::from_antiholomorphic(&crate::poly::compose_map(&r, q.theta()));
    let d = lifted.dim();
    for k in 0..d {
        for l in 0..d {
            if !lifted.d_dz(k).d_dzbar(l).is_zero() {
                return Err(Error::Internal(format!("lift has a mixed derivative in ({k}, {l})")));
            }
        }
    }
    let res = invariance_residual(q.group(), &lifted);
    if res > INVARIANCE_TOL * lifted.max_abs_coeff().max(1.0) {
        return Err(Error::NotInvariant { residual: res });
    }
    Ok(lifted)
}
