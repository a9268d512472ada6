use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Exponent, MixedSymbol, MultiPoly};
use crate::groups::GroupElement;

/// The action `σ(f)(z) = f(σ^{-1} z)`.
pub trait GroupAction: Sized {
    fn act(&self, g: &GroupElement) -> Self;
}

pub fn group_act<T: GroupAction>(g: &GroupElement, f: &T) -> T {
    f.act(g)
}

/// Rows of `σ^{-1}`: the new `z_j` is `Σ_k rows[j][k] z_k`.
fn substitution_rows(g: &GroupElement) -> Vec<Vec<Complex64>> {
    let inv = g.inverse();
    let d = inv.dim();
    (0..d).map(|j| (0..d).map(|k| inv.entry(j, k)).collect()).collect()
}

/// `Some((k_j, m_j))` when every row has a single nonzero entry, so that
/// monomials map to monomials.
fn monomial_substitution(rows: &[Vec<Complex64>]) -> Option<Vec<(usize, Complex64)>> {
    rows.iter()
        .map(|row| {
            let mut nz = row.iter().enumerate().filter(|(_, v)| v.norm() > 1e-15);
            let first = nz.next()?;
            if nz.next().is_some() {
                return None;
            }
            Some((first.0, *first.1))
        })
        .collect()
}

fn map_monomial(e: &Exponent, sub: &[(usize, Complex64)], conj: bool) -> (Exponent, Complex64) {
    let mut out = alloc::vec![0usize; e.len()];
    let mut coeff = Complex64::new(1.0, 0.0);
    for (j, &(k, m)) in sub.iter().enumerate() {
        let p = e.get(j);
        if p > 0 {
            out[k] += p;
            coeff *= if conj { m.conj() } else { m }.powu(p as u32);
        }
    }
    (Exponent::new(&out), coeff)
}

struct PowerCache {
    forms: Vec<MultiPoly>,
    powers: Vec<Vec<MultiPoly>>,
}

impl PowerCache {
    fn new(forms: Vec<MultiPoly>) -> Self {
        let dim = forms.len();
        let powers = forms.iter().map(|f| alloc::vec![MultiPoly::one(dim), f.clone()]).collect();
        PowerCache { forms, powers }
    }

    fn monomial(&mut self, e: &Exponent) -> MultiPoly {
        let dim = self.forms.len();
        let mut t = MultiPoly::one(dim);
        for j in 0..dim {
            let k = e.get(j);
            if k == 0 {
                continue;
            }
            while self.powers[j].len() <= k {
                let next = self.powers[j].last().unwrap() * &self.forms[j];
                self.powers[j].push(next);
            }
            t = &t * &self.powers[j][k];
        }
        t
    }
}

impl GroupAction for MultiPoly {
    fn act(&self, g: &GroupElement) -> Self {
        assert_eq!(g.dim(), self.dim());
        let rows = substitution_rows(g);
        if let Some(sub) = monomial_substitution(&rows) {
            let mut out = MultiPoly::zero(self.dim());
            for (e, &c) in self.terms() {
                let (e2, m) = map_monomial(e, &sub, false);
                out.add_term(e2, c * m);
            }
            return out;
        }
        let forms = rows.iter().map(|r| MultiPoly::linear(r)).collect();
        let mut cache = PowerCache::new(forms);
        let mut out = MultiPoly::zero(self.dim());
        for (e, &c) in self.terms() {
            out += &cache.monomial(e).scale(c);
        }
        out
    }
}

impl GroupAction for MixedSymbol {
    fn act(&self, g: &GroupElement) -> Self {
        assert_eq!(g.dim(), self.dim());
        let rows = substitution_rows(g);
        if let Some(sub) = monomial_substitution(&rows) {
            let mut out = MixedSymbol::zero(self.dim());
            for (a, b, &c) in self.terms() {
                let (a2, ma) = map_monomial(a, &sub, false);
                let (b2, mb) = map_monomial(b, &sub, true);
                out.add_term(a2, b2, c * ma * mb);
            }
            return out;
        }
        let holo = rows.iter().map(|r| MultiPoly::linear(r)).collect();
        let anti = rows
            .iter()
            .map(|r| MultiPoly::linear(&r.iter().map(|v| v.conj()).collect::<Vec<_>>()))
            .collect();
        let (mut hc, mut ac) = (PowerCache::new(holo), PowerCache::new(anti));
        let mut out = MixedSymbol::zero(self.dim());
        for (a, b, &c) in self.terms() {
            let h = hc.monomial(a);
            let an = ac.monomial(b);
            for (e, &ch) in h.terms() {
                for (f, &ca) in an.terms() {
                    out.add_term(*e, *f, c * ch * ca);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use crate::groups::{custom_group, symmetric_group, DEFAULT_ENUMERATION_LIMIT};

    #[test]
    fn action_matches_pointwise_definition() {
        let g = symmetric_group(3).unwrap();
        let p = MultiPoly::from_terms(
            3,
            [(Exponent::new(&[2, 1, 0]), c(1.0, 0.5)), (Exponent::new(&[0, 0, 3]), c(-2.0, 0.0))],
        );
        let z = [c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.1)];
        for idx in 0..g.order() {
            let s = g.element(idx);
            let q = group_act(s, &p);
            let want = p.eval(&s.inverse().apply(&z));
            assert!((q.eval(&z) - want).norm() < 1e-14);
        }
    }

    #[test]
    fn generic_path_on_rotation_group() {
        // dihedral group of order 8 acting on C^2 by real reflections
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let r1 = alloc::vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
        let r2 = alloc::vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let g = custom_group(2, &[r1, r2], DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(g.order(), 8);
        let s = MixedSymbol::from_product(&MultiPoly::var(2, 0).pow(2), &MultiPoly::var(2, 1));
        let z = [c(h * 0.3, 0.1), c(-0.2, 0.4)];
        for e in g.elements() {
            let t = group_act(e, &s);
            let want = s.eval(&e.inverse().apply(&z));
            assert!((t.eval(&z) - want).norm() < 1e-14);
        }
    }
}
