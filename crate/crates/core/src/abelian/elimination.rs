//! Sparse integer elimination for the large, very sparse bar differentials.
//!
//! Unit pivots are eliminated first with Markowitz-style ordering in `i64`
//! arithmetic; whatever is left (typically a small torsion core) goes through
//! the dense Smith reduction. If an `i64` overflows, the whole matrix is
//! redone densely in `BigInt`, so results are always exact.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use super::snf::{DenseSnf, Track};
use crate::config::Budgets;
use crate::error::Result;

/// Sparse vector of `(index, value)` pairs sorted by index.
pub(crate) type SparseVec = Vec<(usize, BigInt)>;

/// Column transform `V` with `R·A·V` generalized-diagonal for some unimodular `R`.
#[derive(Debug, Clone)]
pub(crate) struct ColumnTransform {
    /// For each column `j`: the diagonal entry of `R·A·V` it carries (up to sign), 0 if none.
    pub col_factor: Vec<BigInt>,
    /// Columns of `V`.
    pub v: Vec<SparseVec>,
    /// Rows of `V⁻¹`.
    pub v_inv: Vec<SparseVec>,
}

#[derive(Debug, Clone)]
pub(crate) struct Reduction {
    pub rank: usize,
    /// Nonzero invariant factors in divisibility order (units included).
    pub factors: Vec<BigInt>,
    pub transform: Option<ColumnTransform>,
}

impl Reduction {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect()
    }
}

pub(crate) fn reduce(
    a: &IntegerMatrix,
    track_columns: bool,
    budgets: &Budgets,
) -> Result<Reduction> {
    match SparseState::from_matrix(a, track_columns) {
        Some(mut st) => match st.eliminate_units() {
            Ok(()) => st.finish(budgets),
            Err(Overflow) => dense_reduce(a, track_columns, budgets),
        },
        None => dense_reduce(a, track_columns, budgets),
    }
}

fn dense_reduce(a: &IntegerMatrix, track_columns: bool, budgets: &Budgets) -> Result<Reduction> {
    budgets.check_matrix("dense elimination", a.rows() as u128 * a.cols() as u128)?;
    let track = if track_columns {
        Track::columns()
    } else {
        Track::none()
    };
    let mut w = DenseSnf::new(a.to_dense(), a.rows(), a.cols(), track);
    w.run();
    let diag = w.diagonal();
    let factors: Vec<BigInt> = diag.iter().filter(|d| !d.is_zero()).cloned().collect();
    let transform = track_columns.then(|| {
        let mut col_factor = vec![BigInt::zero(); a.cols()];
        for (t, d) in diag.iter().enumerate() {
            col_factor[t] = d.clone();
        }
        ColumnTransform {
            col_factor,
            v: dense_columns(w.v.as_ref().expect("tracked")),
            v_inv: dense_rows(w.v_inv.as_ref().expect("tracked")),
        }
    });
    Ok(Reduction {
        rank: factors.len(),
        factors,
        transform,
    })
}

fn dense_columns(m: &[Vec<BigInt>]) -> Vec<SparseVec> {
    let n = m.first().map(Vec::len).unwrap_or(0);
    (0..n)
        .map(|j| {
            m.iter()
                .enumerate()
                .filter(|(_, r)| !r[j].is_zero())
                .map(|(i, r)| (i, r[j].clone()))
                .collect()
        })
        .collect()
}

fn dense_rows(m: &[Vec<BigInt>]) -> Vec<SparseVec> {
    m.iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect()
        })
        .collect()
}

#[derive(Debug)]
struct Overflow;

struct SparseState {
    cols: usize,
    rows: Vec<Vec<(u32, i64)>>,
    row_active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_active: Vec<bool>,
    unit_rows: BTreeSet<(u32, u32)>,
    row_key: Vec<Option<u32>>,
    unit_pivots: usize,
    col_factor: Vec<BigInt>,
    v: Option<Vec<SparseVec>>,
    v_inv: Option<Vec<SparseVec>>,
    stamp: Vec<u32>,
    epoch: u32,
}

fn has_unit(row: &[(u32, i64)]) -> bool {
    row.iter().any(|(_, v)| *v == 1 || *v == -1)
}

impl SparseState {
    fn from_matrix(a: &IntegerMatrix, track: bool) -> Option<Self> {
        let mut rows = Vec::with_capacity(a.rows());
        let mut col_rows = vec![Vec::new(); a.cols()];
        for i in 0..a.rows() {
            let mut r = Vec::with_capacity(a.row(i).len());
            for (j, v) in a.row(i) {
                r.push((*j as u32, v.to_i64()?));
                col_rows[*j].push(i as u32);
            }
            rows.push(r);
        }
        let n = a.cols();
        let mut st = SparseState {
            cols: n,
            row_active: vec![true; rows.len()],
            row_key: vec![None; rows.len()],
            rows,
            col_rows,
            col_active: vec![true; n],
            unit_rows: BTreeSet::new(),
            unit_pivots: 0,
            col_factor: vec![BigInt::zero(); n],
            v: track.then(|| (0..n).map(|j| vec![(j, BigInt::one())]).collect()),
            v_inv: track.then(|| (0..n).map(|j| vec![(j, BigInt::one())]).collect()),
            stamp: Vec::new(),
            epoch: 0,
        };
        st.stamp = vec![0; st.rows.len()];
        for i in 0..st.rows.len() {
            st.refresh_key(i);
        }
        Some(st)
    }

    fn refresh_key(&mut self, i: usize) {
        if let Some(len) = self.row_key[i].take() {
            self.unit_rows.remove(&(len, i as u32));
        }
        if self.row_active[i] && has_unit(&self.rows[i]) {
            let len = self.rows[i].len() as u32;
            self.unit_rows.insert((len, i as u32));
            self.row_key[i] = Some(len);
        }
    }

    fn eliminate_units(&mut self) -> std::result::Result<(), Overflow> {
        while let Some(&(_, i)) = self.unit_rows.iter().next() {
            let i = i as usize;
            let (pc, pv) = self.rows[i]
                .iter()
                .filter(|(_, v)| *v == 1 || *v == -1)
                .min_by_key(|(c, _)| self.col_rows[*c as usize].len())
                .copied()
                .expect("row registered as having a unit");
            let pc = pc as usize;
            self.row_active[i] = false;
            self.refresh_key(i);
            self.col_active[pc] = false;

            let pivot_row = std::mem::take(&mut self.rows[i]);
            self.epoch += 1;
            let candidates = std::mem::take(&mut self.col_rows[pc]);
            for k in candidates {
                let k = k as usize;
                if !self.row_active[k] || self.stamp[k] == self.epoch {
                    continue;
                }
                self.stamp[k] = self.epoch;
                let Ok(pos) = self.rows[k].binary_search_by_key(&(pc as u32), |(c, _)| *c) else {
                    continue;
                };
                let factor = self.rows[k][pos].1.checked_mul(pv).ok_or(Overflow)?;
                self.sub_row(k, factor, &pivot_row, pc)?;
                self.refresh_key(k);
            }

            for (c, a) in &pivot_row {
                let c = *c as usize;
                if c == pc {
                    continue;
                }
                let q = BigInt::from(*a) * BigInt::from(pv);
                self.record_column_op(c, pc, &q);
            }
            self.col_factor[pc] = BigInt::one();
            self.unit_pivots += 1;
        }
        Ok(())
    }

    /// row_k -= factor * pivot_row
    fn sub_row(
        &mut self,
        k: usize,
        factor: i64,
        pivot_row: &[(u32, i64)],
        pc: usize,
    ) -> std::result::Result<(), Overflow> {
        let old = std::mem::take(&mut self.rows[k]);
        let mut out = Vec::with_capacity(old.len() + pivot_row.len());
        let (mut x, mut y) = (0, 0);
        while x < old.len() || y < pivot_row.len() {
            let take_old = y >= pivot_row.len() || (x < old.len() && old[x].0 < pivot_row[y].0);
            let take_piv = x >= old.len() || (y < pivot_row.len() && pivot_row[y].0 < old[x].0);
            if take_old {
                out.push(old[x]);
                x += 1;
            } else if take_piv {
                let (c, v) = pivot_row[y];
                let val = v
                    .checked_mul(factor)
                    .and_then(i64::checked_neg)
                    .ok_or(Overflow)?;
                out.push((c, val));
                self.col_rows[c as usize].push(k as u32);
                y += 1;
            } else {
                let (c, a) = old[x];
                let b = pivot_row[y].1;
                let val = b
                    .checked_mul(factor)
                    .and_then(|t| a.checked_sub(t))
                    .ok_or(Overflow)?;
                if val != 0 {
                    out.push((c, val));
                }
                x += 1;
                y += 1;
            }
        }
        debug_assert!(out.iter().all(|(c, _)| *c as usize != pc));
        self.rows[k] = out;
        Ok(())
    }

    /// col_dst -= q * col_src, recorded on V and V⁻¹.
    fn record_column_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        if let Some(v) = &mut self.v {
            let s = std::mem::take(&mut v[src]);
            sparse_axpy(&mut v[dst], &-q, &s);
            v[src] = s;
        }
        if let Some(vi) = &mut self.v_inv {
            let d = std::mem::take(&mut vi[dst]);
            sparse_axpy(&mut vi[src], q, &d);
            vi[dst] = d;
        }
    }

    fn finish(mut self, budgets: &Budgets) -> Result<Reduction> {
        let rest_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.row_active[i] && !self.rows[i].is_empty())
            .collect();
        let mut rest_cols: Vec<usize> = rest_rows
            .iter()
            .flat_map(|&i| self.rows[i].iter().map(|(c, _)| *c as usize))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        rest_cols.retain(|&c| self.col_active[c]);

        let mut factors: Vec<BigInt> = vec![BigInt::one(); self.unit_pivots];
        if !rest_rows.is_empty() {
            budgets.check_matrix(
                "dense elimination core",
                rest_rows.len() as u128 * rest_cols.len() as u128,
            )?;
            let col_pos: std::collections::HashMap<usize, usize> =
                rest_cols.iter().enumerate().map(|(t, &c)| (c, t)).collect();
            let dense: Vec<Vec<BigInt>> = rest_rows
                .iter()
                .map(|&i| {
                    let mut r = vec![BigInt::zero(); rest_cols.len()];
                    for (c, v) in &self.rows[i] {
                        r[col_pos[&(*c as usize)]] = BigInt::from(*v);
                    }
                    r
                })
                .collect();
            let track = if self.v.is_some() {
                Track::columns()
            } else {
                Track::none()
            };
            let mut w = DenseSnf::new(dense, rest_rows.len(), rest_cols.len(), track);
            w.run();
            let diag = w.diagonal();
            for (t, d) in diag.iter().enumerate() {
                if !d.is_zero() {
                    factors.push(d.clone());
                }
                self.col_factor[rest_cols[t]] = d.clone();
            }
            if let (Some(v), Some(vi)) = (&mut self.v, &mut self.v_inv) {
                let vd = w.v.as_ref().expect("tracked");
                let vd_inv = w.v_inv.as_ref().expect("tracked");
                let old_cols: Vec<SparseVec> = rest_cols
                    .iter()
                    .map(|&c| std::mem::take(&mut v[c]))
                    .collect();
                let old_rows: Vec<SparseVec> = rest_cols
                    .iter()
                    .map(|&c| std::mem::take(&mut vi[c]))
                    .collect();
                for (t, &c) in rest_cols.iter().enumerate() {
                    let mut col = Vec::new();
                    for (u, oc) in old_cols.iter().enumerate() {
                        if !vd[u][t].is_zero() {
                            sparse_axpy(&mut col, &vd[u][t], oc);
                        }
                    }
                    v[c] = col;
                    let mut row = Vec::new();
                    for (u, or) in old_rows.iter().enumerate() {
                        if !vd_inv[t][u].is_zero() {
                            sparse_axpy(&mut row, &vd_inv[t][u], or);
                        }
                    }
                    vi[c] = row;
                }
            }
        }
        let transform = match (self.v, self.v_inv) {
            (Some(v), Some(v_inv)) => Some(ColumnTransform {
                col_factor: self.col_factor,
                v,
                v_inv,
            }),
            _ => None,
        };
        debug_assert!(transform.as_ref().is_none_or(|t| t.v.len() == self.cols));
        Ok(Reduction {
            rank: factors.len(),
            factors,
            transform,
        })
    }
}

/// dst += q * src
pub(crate) fn sparse_axpy(dst: &mut SparseVec, q: &BigInt, src: &[(usize, BigInt)]) {
    if q.is_zero() || src.is_empty() {
        return;
    }
    let old = std::mem::take(dst);
    let mut out = Vec::with_capacity(old.len() + src.len());
    let mut oi = old.into_iter().peekable();
    let mut si = src.iter().peekable();
    loop {
        match (oi.peek(), si.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(oi.next().unwrap()),
            (None, Some(_)) => {
                let (c, v) = si.next().unwrap();
                out.push((*c, q * v));
            }
            (Some((a, _)), Some((b, _))) => {
                if a < b {
                    out.push(oi.next().unwrap());
                } else if b < a {
                    let (c, v) = si.next().unwrap();
                    out.push((*c, q * v));
                } else {
                    let (c, mut x) = oi.next().unwrap();
                    let (_, v) = si.next().unwrap();
                    x += q * v;
                    if !x.is_zero() {
                        out.push((c, x));
                    }
                }
            }
        }
    }
    *dst = out;
}

pub(crate) fn sparse_dot(a: &[(usize, BigInt)], dense: &[BigInt]) -> BigInt {
    a.iter().map(|(i, v)| v * &dense[*i]).sum()
}

/// Rank and nonzero invariant factors of `a`.
pub fn invariant_factors(a: &IntegerMatrix, budgets: &Budgets) -> Result<(usize, Vec<BigInt>)> {
    let r = reduce(a, false, budgets)?;
    Ok((r.rank, r.torsion()))
}

#[allow(dead_code)]
pub(crate) fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}
