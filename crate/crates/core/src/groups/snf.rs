//! Square integer matrices, Smith normal form, and the diagonal group of a
//! monomial polyhedron.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{cyclic_diagonal_group, ReflectionGroup};
use crate::{Error, Result};

/// Dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

/// `A = P · D · Q` with `P`, `Q` unimodular and `D` diagonal, `δ_i | δ_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub p: IntMatrix,
    pub d: IntMatrix,
    pub q: IntMatrix,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.n).map(|i| self.d[(i, i)]).collect()
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("integer matrix must be square".into()));
        }
        Ok(IntMatrix { n, data: rows.iter().flatten().copied().collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix { n, data: vec![0; n * n] };
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = IntMatrix { n: entries.len(), data: vec![0; entries.len() * entries.len()] };
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        let n = self.n;
        let mut out = IntMatrix { n, data: vec![0; n * n] };
        for i in 0..n {
            for j in 0..n {
                let mut acc: i64 = 0;
                for k in 0..n {
                    acc = self[(i, k)]
                        .checked_mul(other[(k, j)])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(Error::Overflow("matrix product"))?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(a[k * n + k])
                        .zip(a[i * n + k].checked_mul(a[k * n + j]))
                        .and_then(|(x, y)| x.checked_sub(y))
                        .ok_or(Error::Overflow("determinant"))?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| Error::Overflow("determinant"))
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.n;
        let data = (0..n)
            .filter(|&i| i != row)
            .flat_map(|i| (0..n).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self[(i, j)])
            .collect();
        IntMatrix { n: n - 1, data }
    }

    /// Classical adjugate, `A · adj A = det A · I`.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let n = self.n;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut out = IntMatrix { n, data: vec![0; n * n] };
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(j, i).det()?;
                out[(i, j)] = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.n {
            self.data.swap(i * self.n + a, i * self.n + b);
        }
    }

    /// row[dst] += k · row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for j in 0..self.n {
            let v = self[(src, j)]
                .checked_mul(k)
                .and_then(|t| self[(dst, j)].checked_add(t))
                .ok_or(Error::Overflow("row operation"))?;
            self[(dst, j)] = v;
        }
        Ok(())
    }

    /// col[dst] += k · col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: i64) -> Result<()> {
        for i in 0..self.n {
            let v = self[(i, src)]
                .checked_mul(k)
                .and_then(|t| self[(i, dst)].checked_add(t))
                .ok_or(Error::Overflow("column operation"))?;
            self[(i, dst)] = v;
        }
        Ok(())
    }
}

/// Smith normal form of a nonsingular square integer matrix.
///
/// Row operations `A ← E·A` are mirrored as `P ← P·E⁻¹` and column operations
/// `A ← A·F` as `Q ← F⁻¹·Q`, so `P · A_current · Q` always equals the input.
pub fn smith_normal_form(a: &IntMatrix) -> Result<SmithForm> {
    let n = a.size();
    let mut m = a.clone();
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let v = m[(i, j)];
                    if v != 0 && best.map_or(true, |(bi, bj)| v.abs() < m[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Err(Error::Rank { rank: t, dim: n });
            };
            if bi != t {
                m.swap_rows(bi, t);
                p.swap_cols(bi, t);
            }
            if bj != t {
                m.swap_cols(bj, t);
                q.swap_rows(bj, t);
            }
            let pivot = m[(t, t)];
            let mut clean = true;
            for i in t + 1..n {
                let k = m[(i, t)] / pivot;
                if k != 0 {
                    m.add_row(i, t, -k)?;
                    p.add_col(t, i, k)?;
                }
                if m[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let k = m[(t, j)] / pivot;
                if k != 0 {
                    m.add_col(j, t, -k)?;
                    q.add_row(t, j, k)?;
                }
                if m[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| m[(i, j)] % pivot != 0));
            match offender {
                Some(i) => {
                    m.add_row(t, i, 1)?;
                    p.add_col(i, t, -1)?;
                }
                None => break,
            }
        }
        if m[(t, t)] < 0 {
            for j in 0..n {
                m[(t, j)] = -m[(t, j)];
            }
            for i in 0..n {
                p[(i, t)] = -p[(i, t)];
            }
        }
    }
    Ok(SmithForm { p, d: m, q })
}

/// The diagonal group `∏ Z/δ_i` attached to a monomial polyhedron with
/// exponent matrix `B` (`det B > 0`, `B⁻¹ ≥ 0`): `δ_i` are the invariant
/// factors of `adj B`. Unit factors are kept so indices line up.
pub fn monomial_polyhedron_group(b: &IntMatrix) -> Result<(ReflectionGroup, Vec<i64>)> {
    let det = b.det()?;
    if det <= 0 {
        return Err(Error::Domain(format!("det B = {det} must be positive")));
    }
    let adj = b.adjugate()?;
    // B⁻¹ = adj / det with det > 0, so the sign test is on adj alone.
    if adj.data.iter().any(|&x| x < 0) {
        return Err(Error::Domain("B⁻¹ has a negative entry".into()));
    }
    let snf = smith_normal_form(&adj)?;
    let deltas = snf.invariant_factors();
    let orders: Vec<usize> = deltas.iter().map(|&x| x as usize).collect();
    Ok((cyclic_diagonal_group(&orders)?, deltas))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a).unwrap();
        assert_eq!(&s.p.mul(&s.d).unwrap().mul(&s.q).unwrap(), a);
        assert_eq!(s.p.det().unwrap().abs(), 1);
        assert_eq!(s.q.det().unwrap().abs(), 1);
        let f = s.invariant_factors();
        assert!(f.iter().all(|&x| x > 0));
        assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        s
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(check(&IntMatrix::identity(3)).invariant_factors(), [1, 1, 1]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 3]])).invariant_factors(), [1, 6]);
        assert_eq!(check(&m(&[&[2, 4], &[6, 8]])).invariant_factors(), [2, 4]);
    }

    #[test]
    fn singular_is_rank_error() {
        assert!(matches!(smith_normal_form(&m(&[&[1, 2], &[2, 4]])), Err(Error::Rank { rank: 1, dim: 2 })));
    }

    #[test]
    fn determinant_and_adjugate() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det().unwrap(), 18);
        let adj = a.adjugate().unwrap();
        let prod = a.mul(&adj).unwrap();
        assert_eq!(prod, IntMatrix::diagonal(&[18, 18, 18]));
    }

    #[test]
    fn polyhedron_groups() {
        let (g, d) = monomial_polyhedron_group(&IntMatrix::identity(2)).unwrap();
        assert_eq!(d, [1, 1]);
        assert_eq!(g.order(), 1);

        let (g, d) = monomial_polyhedron_group(&m(&[&[1, 0], &[0, 2]])).unwrap();
        assert_eq!(d, [1, 2]);
        assert_eq!(g.order(), 2);

        assert!(matches!(monomial_polyhedron_group(&m(&[&[2, 1], &[1, 2]])), Err(Error::Domain(_))));
        assert!(matches!(monomial_polyhedron_group(&m(&[&[0, 1], &[1, 0]])), Err(Error::Domain(_))));
    }
}
