use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A sparse row of a matrix: `(column, value)` pairs, sorted by column, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Exact integer matrix stored row-wise and sparsely.
///
/// Bar differentials have a handful of nonzeros per row, so dense storage
/// would dominate memory long before arithmetic became the bottleneck.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, BigInt::one())]).collect();
        IntegerMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    /// Builds a matrix from dense rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let dense: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
                r.as_ref().iter().map(|&x| BigInt::from(x)).collect()
            })
            .collect();
        Self::from_dense(rows.len(), cols, dense)
    }

    pub fn from_dense(rows: usize, cols: usize, dense: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(dense.len(), rows, "row count mismatch");
        let data = dense
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "column count mismatch");
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        IntegerMatrix { rows, cols, data }
    }

    /// Builds a matrix from unsorted `(col, value)` lists; duplicates are summed.
    pub fn from_triplet_rows(rows: usize, cols: usize, entries: Vec<Vec<(usize, BigInt)>>) -> Self {
        assert_eq!(entries.len(), rows, "row count mismatch");
        let data = entries
            .into_iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (c, v) in r {
                    assert!(c < cols, "column index {c} out of range {cols}");
                    *acc.entry(c).or_insert_with(BigInt::zero) += v;
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        IntegerMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        let row = &self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => row[pos].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                out[i][*j] = v.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        IntegerMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(BigInt::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(IntegerMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|row| row.iter().map(|(j, v)| v * &x[*j]).sum())
            .collect()
    }

    /// `self ⊗ I_g`: every entry becomes a `g × g` scalar block. Row `i*g + a`
    /// pairs basis vector `i` with generator `a`.
    pub fn kron_identity(&self, g: usize) -> IntegerMatrix {
        let mut data = Vec::with_capacity(self.rows * g);
        for row in &self.data {
            for a in 0..g {
                data.push(row.iter().map(|(j, v)| (j * g + a, v.clone())).collect());
            }
        }
        IntegerMatrix {
            rows: self.rows * g,
            cols: self.cols * g,
            data,
        }
    }

    /// True when every nonzero entry sits on the main diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.data
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().all(|(j, _)| *j == i))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .flat_map(|r| r.iter().map(|(_, v)| v.abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            for (i, row) in self.to_dense().iter().enumerate() {
                if i > 0 {
                    write!(f, "; ")?;
                }
                let parts: Vec<String> = row.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" "))?;
            }
        } else {
            write!(f, "{} nonzeros", self.nnz())?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_transpose() {
        let a = IntegerMatrix::from_rows(&[[1, 2], [3, 4]]);
        let b = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab, IntegerMatrix::from_rows(&[[2, 1], [4, 3]]));
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.mul(&IntegerMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn kron_orders_tuple_then_generator() {
        let a = IntegerMatrix::from_rows(&[[1, -1]]);
        let k = a.kron_identity(2);
        assert_eq!(k, IntegerMatrix::from_rows(&[[1, 0, -1, 0], [0, 1, 0, -1]]));
    }

    #[test]
    fn triplets_are_summed() {
        let m = IntegerMatrix::from_triplet_rows(
            1,
            3,
            vec![vec![
                (2, BigInt::from(1)),
                (0, BigInt::from(2)),
                (2, BigInt::from(-1)),
            ]],
        );
        assert_eq!(m.row(0), &[(0, BigInt::from(2))]);
    }
}
