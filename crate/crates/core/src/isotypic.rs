//! Isotypic projections, relative invariants, division by generating
//! polynomials and rewriting invariants in terms of the basic map.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::groups::{complete_character_table, relative_generator, Character, ReflectionGroup};
use crate::linalg::{lstsq, rank, CMatrix, CVector};
use crate::poly::{basic_map, compose_map, exponents_of_degree, Exponent, GroupAction, MixedSymbol, MultiPoly};
use crate::{Error, Result, INVARIANCE_TOL};

/// Objects the projections can average: the group acts on them and they form
/// a complex vector space.
pub trait Projectable: GroupAction + Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, other: &Self, c: Complex64);
    fn max_abs_coeff(&self) -> f64;
}

impl Projectable for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.dim())
    }
    fn add_scaled(&mut self, other: &Self, c: Complex64) {
        for (e, &v) in other.terms() {
            self.add_term(*e, v * c);
        }
    }
    fn max_abs_coeff(&self) -> f64 {
        MultiPoly::max_abs_coeff(self)
    }
}

impl Projectable for MixedSymbol {
    fn zero_like(&self) -> Self {
        MixedSymbol::zero(self.dim())
    }
    fn add_scaled(&mut self, other: &Self, c: Complex64) {
        for (a, b, &v) in other.terms() {
            self.add_term(*a, *b, v * c);
        }
    }
    fn max_abs_coeff(&self) -> f64 {
        MixedSymbol::max_abs_coeff(self)
    }
}

/// `P_χ f = (deg χ/|G|) Σ_σ χ(σ^{-1}) σ(f)` with `σ(f) = f ∘ σ^{-1}`.
pub fn project<T: Projectable>(group: &ReflectionGroup, character: &Character, f: &T) -> T {
    project_with_values(group, character.values(), character.degree(), f)
}

fn project_with_values<T: Projectable>(group: &ReflectionGroup, values: &[Complex64], degree: usize, f: &T) -> T {
    let scale = degree as f64 / group.order() as f64;
    let mut out = f.zero_like();
    for (idx, g) in group.elements().iter().enumerate() {
        let chi_inv = values[group.inverse_index(idx)];
        if chi_inv.norm() == 0.0 {
            continue;
        }
        out.add_scaled(&f.act(g), chi_inv * scale);
    }
    out
}

/// `max_σ ‖σ(f) − χ(σ) f‖_∞` over the group generators (enough for a
/// multiplicative χ).
pub fn relative_invariance_residual<T: Projectable>(group: &ReflectionGroup, character: &Character, f: &T) -> f64 {
    group
        .generators()
        .iter()
        .map(|&g| {
            let mut diff = f.act(group.element(g));
            diff.add_scaled(f, -character.value(g));
            diff.max_abs_coeff()
        })
        .fold(0.0, f64::max)
}

/// `max_σ ‖σ(f) − f‖_∞` over the generators.
pub fn invariance_residual<T: Projectable>(group: &ReflectionGroup, f: &T) -> f64 {
    group
        .generators()
        .iter()
        .map(|&g| {
            let mut diff = f.act(group.element(g));
            diff.add_scaled(f, Complex64::new(-1.0, 0.0));
            diff.max_abs_coeff()
        })
        .fold(0.0, f64::max)
}

/// `max_m ‖Σ_ρ P_ρ m − m‖_∞` over monomials of total degree `≤ n`, using the
/// complete character table.
pub fn completeness_defect(group: &ReflectionGroup, n: usize) -> Result<f64> {
    let table = complete_character_table(group)?;
    let d = group.dim();
    let mut worst = 0.0f64;
    for k in 0..=n {
        for e in exponents_of_degree(d, k) {
            let m = MultiPoly::monomial(e, Complex64::new(1.0, 0.0));
            let mut sum = MultiPoly::zero(d);
            for chi in &table {
                sum += &project(group, chi, &m);
            }
            worst = worst.max((&sum - &m).max_abs_coeff());
        }
    }
    Ok(worst)
}

/// Graded-lex long division `f = q·g + r`.
pub fn long_division(f: &MultiPoly, g: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
    let (lead_e, lead_c) = g.leading_term().ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
    let mut p = f.clone();
    let mut q = MultiPoly::zero(f.dim());
    let mut r = MultiPoly::zero(f.dim());
    while let Some((e, c)) = p.leading_term() {
        match e.checked_sub(&lead_e) {
            Some(shift) => {
                let t = MultiPoly::monomial(shift, c / lead_c);
                p -= &(&t * g);
                q += &t;
            }
            None => r.add_term(e, c),
        }
        p.remove_term(&e);
    }
    Ok((q, r))
}

/// `f̂` with `f = ℓ_χ · f̂`. Inputs that are not χ-relative invariants, or
/// leave a division remainder above tolerance, are reported as not divisible.
pub fn divide_by_generator(group: &ReflectionGroup, character: &Character, f: &MultiPoly) -> Result<MultiPoly> {
    let scale = f.max_abs_coeff().max(1.0);
    let inv = relative_invariance_residual(group, character, f);
    if inv > INVARIANCE_TOL * scale {
        return Err(Error::NotDivisible { residual: inv });
    }
    let ell = relative_generator(group, character);
    let (q, r) = long_division(f, &ell)?;
    let rem = r.max_abs_coeff();
    if rem > INVARIANCE_TOL * scale {
        return Err(Error::NotDivisible { residual: rem });
    }
    Ok(q)
}

/// Exponents `β` with `Σ β_i w_i = k`.
fn weighted_exponents(weights: &[usize], k: usize) -> Vec<Exponent> {
    fn rec(weights: &[usize], pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Exponent>) {
        if pos == weights.len() {
            if left == 0 {
                out.push(Exponent::new(cur));
            }
            return;
        }
        let w = weights[pos].max(1);
        let mut b = 0;
        while b * w <= left {
            cur[pos] = b;
            rec(weights, pos + 1, left - b * w, cur, out);
            b += 1;
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    let mut cur = alloc::vec![0; weights.len()];
    rec(weights, 0, k, &mut cur, &mut out);
    out
}

/// `f̂` with `f̂ ∘ θ = f` for a `G`-invariant `f`, solved degree by degree
/// over the θ-monomials of matching weighted degree.
pub fn invariant_to_theta(group: &ReflectionGroup, f: &MultiPoly) -> Result<MultiPoly> {
    let scale = f.max_abs_coeff().max(1.0);
    let inv = invariance_residual(group, f);
    if inv > INVARIANCE_TOL * scale {
        return Err(Error::NotInvariant { residual: inv });
    }
    let theta = basic_map(group)?;
    let weights = theta.degrees();
    let k_dim = theta.target_dim();
    let mut by_degree: BTreeMap<usize, Vec<(Exponent, Complex64)>> = BTreeMap::new();
    for (e, &c) in f.terms() {
        by_degree.entry(e.degree()).or_default().push((*e, c));
    }
    let mut out = MultiPoly::zero(k_dim);
    for (k, terms) in by_degree {
        let candidates = weighted_exponents(&weights, k);
        let rows = exponents_of_degree(f.dim(), k);
        let index: BTreeMap<Exponent, usize> = rows.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut a = CMatrix::zeros(rows.len(), candidates.len());
        for (j, beta) in candidates.iter().enumerate() {
            let col = compose_map(&MultiPoly::monomial(*beta, Complex64::new(1.0, 0.0)), &theta);
            for (e, &c) in col.terms() {
                a[(index[e], j)] = c;
            }
        }
        let mut b = CVector::zeros(rows.len());
        for (e, c) in terms {
            b[index[&e]] = c;
        }
        let (x, res) = lstsq(&a, &b).ok_or_else(|| Error::Internal("least-squares solve failed".into()))?;
        if res > 1e-9 * scale {
            return Err(Error::Internal(format!("invariant does not factor through the basic map (residual {res:e})")));
        }
        for (j, beta) in candidates.iter().enumerate() {
            out.add_term(*beta, x[j]);
        }
    }
    out.prune(1e-13 * scale);
    Ok(out)
}

/// Dimension of the invariant homogeneous polynomials of degree `n`.
pub fn invariant_dimension(group: &ReflectionGroup, n: usize) -> usize {
    let d = group.dim();
    let monos = exponents_of_degree(d, n);
    let index: BTreeMap<Exponent, usize> = monos.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let ones = alloc::vec![Complex64::new(1.0, 0.0); group.order()];
    let mut m = CMatrix::zeros(monos.len(), monos.len());
    for (j, e) in monos.iter().enumerate() {
        let p = project_with_values(group, &ones, 1, &MultiPoly::monomial(*e, Complex64::new(1.0, 0.0)));
        for (e2, &c) in p.terms() {
            m[(index[e2], j)] = c;
        }
    }
    rank(&m, 1e-10)
}

/// Modified Gram–Schmidt under a supplied inner product. A vector is
/// orthogonalized a second time when its norm drops below `0.7` of the
/// original, and dropped as dependent below `1e-8`.
pub fn gram_schmidt<F>(vectors: &[MultiPoly], inner: F) -> Vec<MultiPoly>
where
    F: Fn(&MultiPoly, &MultiPoly) -> Complex64,
{
    let mut basis: Vec<MultiPoly> = Vec::new();
    for v in vectors {
        let n0 = libm::sqrt(inner(v, v).re.max(0.0));
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for pass in 0..2 {
            let before = libm::sqrt(inner(&w, &w).re.max(0.0));
            for q in &basis {
                let c = inner(&w, q);
                w.add_scaled(q, -c);
            }
            let after = libm::sqrt(inner(&w, &w).re.max(0.0));
            if pass == 0 && after >= 0.7 * before {
                break;
            }
        }
        let n = libm::sqrt(inner(&w, &w).re.max(0.0));
        if n <= 1e-8 * n0 {
            continue;
        }
        basis.push(w.scale(Complex64::new(1.0 / n, 0.0)));
    }
    basis
}

/// An orthonormal basis of the χ-isotypic polynomials of degree `≤ N`.
#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub character: Character,
    pub basis: Vec<MultiPoly>,
    pub degree_cap: usize,
}

/// Projects all monomials of degree `≤ n` and orthonormalizes the images.
pub fn isotypic_component<F>(group: &ReflectionGroup, character: &Character, n: usize, inner: F) -> IsotypicComponent
where
    F: Fn(&MultiPoly, &MultiPoly) -> Complex64,
{
    let d = group.dim();
    let images: Vec<MultiPoly> = (0..=n)
        .flat_map(|k| exponents_of_degree(d, k))
        .map(|e| project(group, character, &MultiPoly::monomial(e, Complex64::new(1.0, 0.0))))
        .filter(|p| !p.is_zero())
        .collect();
    IsotypicComponent { character: character.clone(), basis: gram_schmidt(&images, inner), degree_cap: n }
}
