//! Small dense matrices over `F_{q^m}`: products, Gaussian elimination,
//! kernels and inverses. Used by generator matrices, the interpolation
//! decoder, and white-box oracles; all sizes here are desk-scale.

use crate::error::{Error, Result};
use crate::field::{ExtElem, Field};

/// Dense matrix over `F_{q^m}`, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatExt {
    rows: usize,
    cols: usize,
    data: Vec<ExtElem>,
}

impl MatExt {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        MatExt {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<ExtElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(MatExt {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExtElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExtElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[ExtElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, field: &Field, x: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if x.len() != self.rows {
            return Err(Error::Shape("vector-matrix shape mismatch".into()));
        }
        let mut out = vec![field.zero(); self.cols];
        for (k, xv) in x.iter().enumerate() {
            if xv.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = field.add(o, &field.mul(xv, self.get(k, j)));
            }
        }
        Ok(out)
    }

    /// Right kernel basis: all x with M·x = 0, via Gaussian elimination.
    pub fn kernel(&self, field: &Field) -> Vec<Vec<ExtElem>> {
        let (rref, pivots) = self.rref(field);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for j in 0..self.cols {
            if pivot_set.contains(&j) {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[j] = field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(rref.get(i, j));
            }
            out.push(v);
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, field: &Field) -> (MatExt, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, sel);
            let inv = field.inv(m.get(pr, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                m.set(pr, j, field.mul(&inv, m.get(pr, j)));
            }
            for r in 0..m.rows {
                if r != pr && !m.get(r, c).is_zero() {
                    let factor = m.get(r, c).clone();
                    for j in 0..m.cols {
                        let t = field.mul(&factor, m.get(pr, j));
                        m.set(r, j, field.sub(m.get(r, j), &t));
                    }
                }
            }
            pivots.push(c);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1.len()
    }

    /// Canonical solution of `M x = b` (free variables zero).
    pub fn solve(&self, field: &Field, b: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if b.len() != self.rows {
            return Err(Error::Shape("solve: rhs length mismatch".into()));
        }
        let mut aug = MatExt::zeros(field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (rref, pivots) = aug.rref(field);
        if pivots.contains(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = vec![field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = rref.get(i, self.cols).clone();
        }
        Ok(x)
    }

    pub fn inverse(&self, field: &Field) -> Option<MatExt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = MatExt::zeros(field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, field.one());
        }
        let (rref, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = MatExt::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, rref.get(r, n + c).clone());
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn solve_and_kernel_consistent() {
        let f = make_field(2, 1, 6).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..20 {
            let m = MatExt::from_rows(
                (0..4)
                    .map(|_| (0..6).map(|_| f.rand_el(&mut rng)).collect())
                    .collect(),
            )
            .unwrap();
            let ker = m.kernel(&f);
            assert_eq!(ker.len(), 6 - m.rank(&f));
            for v in &ker {
                for r in 0..m.rows() {
                    let prod = m
                        .row(r)
                        .iter()
                        .zip(v)
                        .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
                    assert!(prod.is_zero());
                }
            }
            // Solve against a known-consistent rhs.
            let x: Vec<_> = (0..6).map(|_| f.rand_el(&mut rng)).collect();
            let b: Vec<_> = (0..4)
                .map(|r| {
                    m.row(r)
                        .iter()
                        .zip(&x)
                        .fold(f.zero(), |acc, (a, v)| f.add(&acc, &f.mul(a, v)))
                })
                .collect();
            let sol = m.solve(&f, &b).unwrap();
            for (r, want) in b.iter().enumerate() {
                let got = m
                    .row(r)
                    .iter()
                    .zip(&sol)
                    .fold(f.zero(), |acc, (a, v)| f.add(&acc, &f.mul(a, v)));
                assert_eq!(&got, want);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = make_field(2, 3, 4).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        loop {
            let m = MatExt::from_rows(
                (0..3)
                    .map(|_| (0..3).map(|_| f.rand_el(&mut rng)).collect())
                    .collect(),
            )
            .unwrap();
            let Some(inv) = m.inverse(&f) else { continue };
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = f.zero();
                    for k in 0..3 {
                        acc = f.add(&acc, &f.mul(m.get(i, k), inv.get(k, j)));
                    }
                    assert_eq!(acc, if i == j { f.one() } else { f.zero() });
                }
            }
            break;
        }
    }
}
