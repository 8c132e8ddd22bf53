//! Dense Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use crate::config::Budgets;
use crate::error::Result;

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal, `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `d`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.d.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntegerMatrix) -> Result<SmithDecomposition> {
    smith_normal_form_with(a, &Budgets::default())
}

pub fn smith_normal_form_with(a: &IntegerMatrix, budgets: &Budgets) -> Result<SmithDecomposition> {
    budgets.check_matrix("smith normal form", a.rows() as u128 * a.cols() as u128)?;
    let mut w = DenseSnf::new(a.to_dense(), a.rows(), a.cols(), Track::all());
    w.run();
    let (rows, cols) = (a.rows(), a.cols());
    Ok(SmithDecomposition {
        d: IntegerMatrix::from_dense(rows, cols, w.a),
        u: IntegerMatrix::from_dense(rows, rows, w.u.expect("tracked")),
        v: IntegerMatrix::from_dense(cols, cols, w.v.expect("tracked")),
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub fn all() -> Self {
        Track {
            u: true,
            u_inv: true,
            v: true,
            v_inv: true,
        }
    }

    pub fn columns() -> Self {
        Track {
            v: true,
            v_inv: true,
            ..Track::default()
        }
    }

    pub fn none() -> Self {
        Track::default()
    }
}

type Dense = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Working state of a dense reduction. After [`DenseSnf::run`], `u·a₀·v = a`
/// and `u_inv`, `v_inv` are the inverses of the tracked transforms.
pub(crate) struct DenseSnf {
    pub a: Dense,
    pub rows: usize,
    pub cols: usize,
    pub u: Option<Dense>,
    pub u_inv: Option<Dense>,
    pub v: Option<Dense>,
    pub v_inv: Option<Dense>,
}

impl DenseSnf {
    pub fn new(a: Dense, rows: usize, cols: usize, track: Track) -> Self {
        DenseSnf {
            a,
            rows,
            cols,
            u: track.u.then(|| identity(rows)),
            u_inv: track.u_inv.then(|| identity(rows)),
            v: track.v.then(|| identity(cols)),
            v_inv: track.v_inv.then(|| identity(cols)),
        }
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.a[i][i].clone())
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(i, j);
        }
    }

    /// row_dst += q * row_src
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        let (d, s) = pair_mut(&mut self.a, dst, src);
        axpy(d, q, s);
        if let Some(u) = &mut self.u {
            let (d, s) = pair_mut(u, dst, src);
            axpy(d, q, s);
        }
        if let Some(ui) = &mut self.u_inv {
            // right-multiply by the inverse elementary matrix: col_src -= q * col_dst
            for row in ui.iter_mut() {
                let t = &row[dst] * q;
                row[src] -= t;
            }
        }
    }

    /// col_dst += q * col_src
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            let t = &row[src] * q;
            row[dst] += t;
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                let t = &row[src] * q;
                row[dst] += t;
            }
        }
        if let Some(vi) = &mut self.v_inv {
            // left-multiply by the inverse elementary matrix: row_src -= q * row_dst
            let (s, d) = pair_mut(vi, src, dst);
            let neg = -q;
            axpy(s, &neg, d);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for row in ui.iter_mut() {
                row[i] = -std::mem::take(&mut row[i]);
            }
        }
    }

    pub fn run(&mut self) {
        let limit = self.rows.min(self.cols);
        for t in 0..limit {
            let Some((pi, pj)) = self.min_abs_in(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                self.clear_column(t);
                self.clear_row(t);
                if (t + 1..self.rows).any(|i| !self.a[i][t].is_zero()) {
                    continue;
                }
                match self.non_divisible_row(t) {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }

    fn min_abs_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                    let unit = ax.is_one();
                    best = Some((i, j, ax));
                    if unit {
                        let (bi, bj, _) = best.unwrap();
                        return Some((bi, bj));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn clear_column(&mut self, t: usize) {
        for i in t + 1..self.rows {
            while !self.a[i][t].is_zero() {
                let q = trunc_div(&self.a[i][t], &self.a[t][t]);
                if !q.is_zero() {
                    self.add_row(i, t, &-q);
                }
                if !self.a[i][t].is_zero() {
                    self.swap_rows(i, t);
                }
            }
        }
    }

    fn clear_row(&mut self, t: usize) {
        for j in t + 1..self.cols {
            while !self.a[t][j].is_zero() {
                let q = trunc_div(&self.a[t][j], &self.a[t][t]);
                if !q.is_zero() {
                    self.add_col(j, t, &-q);
                }
                if !self.a[t][j].is_zero() {
                    self.swap_cols(j, t);
                }
            }
        }
    }

    fn non_divisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.a[t][t];
        (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(p)))
    }
}

fn trunc_div(a: &BigInt, b: &BigInt) -> BigInt {
    a / b
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += q * s;
        }
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a).unwrap();
        let uav = s.u.mul(a).unwrap().mul(&s.v).unwrap();
        assert_eq!(uav, s.d);
        assert!(s.d.is_diagonal());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "chain broken: {diag:?}");
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntegerMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntegerMatrix::identity(3);
        let s = check(&id);
        assert_eq!(s.d, id);
        assert_eq!(s.u, id);
        assert_eq!(s.v, id);
    }

    #[test]
    fn zero_matrix() {
        let z = IntegerMatrix::zeros(2, 2);
        assert_eq!(check(&z).d, z);
    }

    #[test]
    fn empty_matrices() {
        check(&IntegerMatrix::zeros(0, 3));
        check(&IntegerMatrix::zeros(4, 0));
    }

    #[test]
    fn non_divisible_diagonal_is_fixed_up() {
        let s = check(&IntegerMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn inverses_are_tracked() {
        let a = IntegerMatrix::from_rows(&[[3, 5, 7], [2, 4, 6], [1, 1, 9]]);
        let mut w = DenseSnf::new(a.to_dense(), 3, 3, Track::all());
        w.run();
        let u = IntegerMatrix::from_dense(3, 3, w.u.unwrap());
        let ui = IntegerMatrix::from_dense(3, 3, w.u_inv.unwrap());
        let v = IntegerMatrix::from_dense(3, 3, w.v.unwrap());
        let vi = IntegerMatrix::from_dense(3, 3, w.v_inv.unwrap());
        assert_eq!(u.mul(&ui).unwrap(), IntegerMatrix::identity(3));
        assert_eq!(v.mul(&vi).unwrap(), IntegerMatrix::identity(3));
    }

    #[test]
    fn budget_guard() {
        let b = Budgets {
            matrix_entries: 3,
            ..Budgets::default()
        };
        let err = smith_normal_form_with(&IntegerMatrix::zeros(2, 2), &b).unwrap_err();
        assert!(err.is_budget());
    }
}
