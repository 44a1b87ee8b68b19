//! Row reduction over an exact field.

use crate::error::{Error, Result};
use crate::exact::scalar::{ExactScalar, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: Vec<Vec<ExactScalar>>,
    cols: usize,
}

impl FieldMatrix {
    pub fn new(field: Field, cols: usize, rows: Vec<Vec<ExactScalar>>) -> Result<FieldMatrix> {
        for row in &rows {
            if row.len() != cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field.to_string(),
                        right: x.field().to_string(),
                    });
                }
            }
        }
        Ok(FieldMatrix { field, rows, cols })
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Result<FieldMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        FieldMatrix::new(field, cols, rows)
    }

    pub fn identity(field: Field, n: usize) -> FieldMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        FieldMatrix { field, rows, cols: n }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.rows[i]
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::Dimension("matrix product".into()));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| {
                        r.iter()
                            .enumerate()
                            .fold(self.field.zero(), |acc, (k, a)| &acc + &(a * &other.rows[k][j]))
                    })
                    .collect()
            })
            .collect();
        Ok(FieldMatrix {
            field: self.field,
            rows,
            cols: other.cols,
        })
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c].inv().expect("nonzero pivot");
            for x in self.rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&k * y);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<ExactScalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&m.rows[r][f];
                }
                v
            })
            .collect()
    }

    /// Solves the square system `A x = b`; `None` when `A` is singular.
    pub fn solve(&self, b: &[ExactScalar]) -> Option<Vec<ExactScalar>> {
        let n = self.cols;
        if self.rows.len() != n || b.len() != n {
            return None;
        }
        let rows = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, x)| {
                let mut r = r.clone();
                r.push(x.clone());
                r
            })
            .collect();
        let mut aug = FieldMatrix {
            field: self.field,
            rows,
            cols: n + 1,
        };
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(aug.rows.iter().map(|r| r[n].clone()).collect())
    }

    pub fn inverse(&self) -> Option<FieldMatrix> {
        let n = self.cols;
        if self.rows.len() != n {
            return None;
        }
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut r = r.clone();
                r.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
                r
            })
            .collect();
        let mut aug = FieldMatrix {
            field: self.field,
            rows,
            cols: 2 * n,
        };
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = aug.rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(FieldMatrix {
            field: self.field,
            rows,
            cols: n,
        })
    }

    pub fn det(&self) -> Result<ExactScalar> {
        let n = self.cols;
        if self.rows.len() != n {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let mut a = self.rows.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            det = &det * &a[c][c];
            let inv = a[c][c].inv()?;
            for i in c + 1..n {
                if a[i][c].is_zero() {
                    continue;
                }
                let k = &a[i][c] * &inv;
                for j in c..n {
                    let v = &a[i][j] - &(&k * &a[c][j]);
                    a[i][j] = v;
                }
            }
        }
        Ok(det)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let q = Field::Rational;
        let m = FieldMatrix::from_i64(q, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let ker = m.nullspace();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn inverse_roundtrip_mod_p() {
        let f = Field::prime(13).unwrap();
        let m = FieldMatrix::from_i64(f, &[vec![0, 0, 1], vec![-1, 0, 1], vec![0, -1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FieldMatrix::identity(f, 3));
        assert_eq!(m.det().unwrap(), f.one());
    }

    #[test]
    fn singular_solve() {
        let q = Field::Rational;
        let m = FieldMatrix::from_i64(q, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(m.solve(&[q.one(), q.zero()]).is_none());
        assert!(m.inverse().is_none());
    }
}
