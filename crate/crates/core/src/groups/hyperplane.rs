use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::ReflectionGroup;

const PARALLEL_TOL: f64 = 1e-10;

/// A reflecting hyperplane `{ℓ = 0}` with the order of its pointwise stabilizer.
#[derive(Debug, Clone)]
pub struct Hyperplane {
    linear_form: Vec<Complex64>,
    cyclic_order: usize,
    generator: usize,
}

impl Hyperplane {
    /// Coefficients of `ℓ`, normalized so the first nonzero one is 1.
    pub fn linear_form(&self) -> &[Complex64] {
        &self.linear_form
    }

    /// Order `m` of the cyclic subgroup fixing the hyperplane pointwise.
    pub fn cyclic_order(&self) -> usize {
        self.cyclic_order
    }

    /// Index of a pseudoreflection generating that cyclic subgroup.
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.linear_form.iter().zip(z).map(|(a, b)| a * b).sum()
    }
}

/// The row form of `I - σ` if it has rank one, normalized to a leading 1.
fn pseudoreflection_form(group: &ReflectionGroup, idx: usize) -> Option<Vec<Complex64>> {
    let d = group.dim();
    let g = group.element(idx);
    let rows: Vec<Vec<Complex64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) - g.entry(i, j) } else { -g.entry(i, j) })
                .collect()
        })
        .collect();
    let norm = |r: &[Complex64]| libm::sqrt(r.iter().map(|z| z.norm_sqr()).sum::<f64>());
    let (best, best_norm) = rows
        .iter()
        .map(|r| norm(r))
        .enumerate()
        .fold((0, 0.0), |acc, (i, n)| if n > acc.1 { (i, n) } else { acc });
    if best_norm <= PARALLEL_TOL {
        return None;
    }
    let unit: Vec<Complex64> = rows[best].iter().map(|z| z / best_norm).collect();
    for r in &rows {
        let proj: Complex64 = r.iter().zip(&unit).map(|(a, b)| a * b.conj()).sum();
        let resid = libm::sqrt(r.iter().zip(&unit).map(|(a, b)| (a - proj * b).norm_sqr()).sum::<f64>());
        if resid > PARALLEL_TOL {
            return None;
        }
    }
    let lead = *unit.iter().find(|z| z.norm() > PARALLEL_TOL)?;
    Some(
        unit.iter()
            .map(|z| {
                let v = z / lead;
                // snap float noise so forms deduplicate deterministically
                Complex64::new(snap(v.re), snap(v.im))
            })
            .collect(),
    )
}

fn snap(x: f64) -> f64 {
    if x.abs() < 1e-13 {
        0.0
    } else {
        x
    }
}

fn same_form(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= PARALLEL_TOL)
}

fn support(form: &[Complex64]) -> Vec<usize> {
    form.iter().enumerate().filter(|(_, z)| z.norm() > PARALLEL_TOL).map(|(i, _)| i).collect()
}

/// Distinct reflecting hyperplanes `ker(I - σ)` over the pseudoreflections `σ`.
pub fn reflecting_hyperplanes(group: &ReflectionGroup) -> Vec<Hyperplane> {
    // (form, members)
    let mut classes: Vec<(Vec<Complex64>, Vec<usize>)> = Vec::new();
    for idx in 0..group.order() {
        let Some(form) = pseudoreflection_form(group, idx) else {
            continue;
        };
        match classes.iter_mut().find(|(f, _)| same_form(f, &form)) {
            Some((_, members)) => members.push(idx),
            None => classes.push((form, alloc::vec![idx])),
        }
    }
    let mut planes: Vec<Hyperplane> = classes
        .into_iter()
        .map(|(form, members)| {
            let m = members.len() + 1;
            let generator = members
                .iter()
                .copied()
                .find(|&i| is_primitive_root(group.element(i).det(), m))
                .unwrap_or(members[0]);
            Hyperplane { linear_form: form, cyclic_order: m, generator }
        })
        .collect();
    planes.sort_by(|a, b| support(&a.linear_form).cmp(&support(&b.linear_form)));
    planes
}

fn is_primitive_root(z: Complex64, m: usize) -> bool {
    let mut t = z.arg() / (2.0 * PI) * m as f64;
    if t < -1e-9 {
        t += m as f64;
    }
    let k = libm::round(t) as usize % m;
    let mut a = k;
    let mut b = m;
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a == 1
}
