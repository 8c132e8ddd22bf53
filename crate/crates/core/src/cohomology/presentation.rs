//! Explicit generators and a classifying map for `H^s(K; Z/d)`.
//!
//! Let `R·δ^s·V = D` with `D` generalized diagonal and `y = V⁻¹x`. A cochain
//! `x` is a cocycle mod `d` exactly when `y_j` is a multiple of
//! `f_j = d / gcd(e_j, d)` for each diagonal entry `e_j`, so the cocycles are
//! `⊕ Z/g_j` in the coordinates `c_j = y_j / f_j`. Coboundaries vanish in the
//! pivot coordinates (because `δ^s δ^{s-1} = 0`) and are the rows of
//! `V⁻¹ δ^{s-1}` elsewhere. A second reduction of the relation matrix
//! `[V⁻¹δ^{s-1} | diag(g)]` gives cyclic coordinates for the quotient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::elimination::{reduce, sparse_axpy, sparse_dot, SparseVec};
use crate::abelian::{FgAbelianGroup, IntegerMatrix};
use crate::config::Budgets;
use crate::error::Result;

/// `H^s(K; Z/d)` (or `H^s(K; Z)` when `d = 0`) with cocycle representatives.
#[derive(Debug, Clone)]
pub struct CohomologyPresentation {
    group_order: usize,
    degree: usize,
    modulus: BigInt,
    /// Rows of `V⁻¹` for the retained coordinates `I`.
    v_inv_rows: Vec<SparseVec>,
    /// `f_j` and `g_j` for `j ∈ I`.
    f: Vec<BigInt>,
    g: Vec<BigInt>,
    /// For each retained generator, the linear form on `c` giving its coordinate.
    forms: Vec<SparseVec>,
    /// Generator orders, 0 for `Z`.
    orders: Vec<BigInt>,
    /// Cocycle representatives as dense vectors over `K^s`.
    generators: Vec<Vec<BigInt>>,
}

fn modulo(x: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(m)
    }
}

impl CohomologyPresentation {
    pub(crate) fn build(
        group_order: usize,
        degree: usize,
        d: &BigInt,
        delta_out: &IntegerMatrix,
        delta_in: &IntegerMatrix,
        budgets: &Budgets,
    ) -> Result<Self> {
        let b = delta_out.cols();
        debug_assert_eq!(delta_in.rows(), b);
        let first = reduce(delta_out, true, budgets)?;
        let t = first.transform.expect("column transform requested");

        // Retained coordinates with their (f_j, g_j).
        let mut retained = Vec::new();
        for j in 0..b {
            let e = t.col_factor[j].abs();
            let (f, g) = match (e.is_zero(), d.is_zero()) {
                (true, _) => (BigInt::one(), d.clone()),
                (false, true) => continue,
                (false, false) => {
                    let g = e.gcd(d);
                    (d / &g, g)
                }
            };
            if !g.is_one() {
                retained.push((j, f, g));
            }
        }

        // Relation matrix transpose: rows are relations, columns the coordinates I.
        let n_i = retained.len();
        let mut rel_rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); delta_in.cols()];
        for (i, (j, _, _)) in retained.iter().enumerate() {
            if !t.col_factor[*j].is_zero() {
                continue;
            }
            // Row j of V⁻¹·δ^{s-1}: Σ_k v_inv[j][k] · row k of δ^{s-1}.
            let mut row: SparseVec = Vec::new();
            for (k, a) in &t.v_inv[*j] {
                sparse_axpy(&mut row, a, delta_in.row(*k));
            }
            for (c, v) in row {
                rel_rows[c].push((i, v));
            }
        }
        for (i, (_, _, g)) in retained.iter().enumerate() {
            if !g.is_zero() {
                rel_rows.push(vec![(i, g.clone())]);
            }
        }
        let rel_t = IntegerMatrix::from_triplet_rows(rel_rows.len(), n_i, rel_rows);
        let second = reduce(&rel_t, true, budgets)?;
        let t2 = second.transform.expect("column transform requested");

        let mut forms = Vec::new();
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        for i in 0..n_i {
            let order = t2.col_factor[i].abs();
            if order.is_one() {
                continue;
            }
            // Coordinate i is column i of V₂ applied to c; the generator is row i of V₂⁻¹.
            forms.push(t2.v[i].clone());
            let mut x: SparseVec = Vec::new();
            for (idx, c) in &t2.v_inv[i] {
                let (j, f, _) = &retained[*idx];
                let coeff = c * f;
                sparse_axpy(&mut x, &coeff, &t.v[*j]);
            }
            let mut dense = vec![BigInt::zero(); b];
            for (k, v) in x {
                dense[k] = modulo(&v, d);
            }
            orders.push(order);
            generators.push(dense);
        }
        Ok(CohomologyPresentation {
            group_order,
            degree,
            modulus: d.clone(),
            v_inv_rows: retained
                .iter()
                .map(|(j, _, _)| t.v_inv[*j].clone())
                .collect(),
            f: retained.iter().map(|(_, f, _)| f.clone()).collect(),
            g: retained.into_iter().map(|(_, _, g)| g).collect(),
            forms,
            orders,
            generators,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Orders of the presentation generators (0 for infinite cyclic).
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn group(&self) -> FgAbelianGroup {
        let free = self.orders.iter().filter(|o| o.is_zero()).count();
        FgAbelianGroup::new(free, self.orders.iter().filter(|o| !o.is_zero()).cloned())
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Coordinates of the class of a cocycle `x ∈ C^s`, reduced mod the generator orders.
    ///
    /// The input must be a cocycle; this is not rechecked.
    pub fn classify(&self, x: &[BigInt]) -> Vec<BigInt> {
        let d = &self.modulus;
        let c: Vec<BigInt> = self
            .v_inv_rows
            .iter()
            .zip(&self.f)
            .zip(&self.g)
            .map(|((row, f), g)| {
                let y = modulo(&sparse_dot(row, x), d);
                debug_assert!((&y % f).is_zero(), "not a cocycle");
                modulo(&(y / f), g)
            })
            .collect();
        self.forms
            .iter()
            .zip(&self.orders)
            .map(|(form, o)| modulo(&sparse_dot(form, &c), o))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::CohomologyEngine;
    use crate::config::Config;
    use crate::profinite::FiniteGroupTable;

    #[test]
    fn generators_classify_to_unit_vectors() {
        let eng = CohomologyEngine::new(Config::sequential());
        let cases = [
            (FiniteGroupTable::cyclic(4), 2usize, 2i64),
            (FiniteGroupTable::cyclic(6), 1, 0),
            (FiniteGroupTable::cyclic(6), 2, 0),
            (FiniteGroupTable::named("V4").unwrap(), 2, 2),
            (FiniteGroupTable::named("S3").unwrap(), 2, 0),
            (FiniteGroupTable::named("D4").unwrap(), 1, 2),
            (FiniteGroupTable::cyclic(3), 0, 9),
        ];
        for (k, s, d) in cases {
            let d = BigInt::from(d);
            let p = eng.presentation(&k, s, &d).unwrap();
            let m = if d.is_zero() {
                FgAbelianGroup::free(1)
            } else {
                FgAbelianGroup::new(0, [d.clone()])
            };
            assert_eq!(
                p.group(),
                eng.group_cohomology(&k, &m, s).unwrap(),
                "{k} s={s} d={d}"
            );
            for (i, x) in p.generators().iter().enumerate() {
                let mut e = vec![BigInt::zero(); p.orders().len()];
                e[i] = BigInt::one();
                assert_eq!(p.classify(x), e, "{k} s={s} d={d} gen {i}");
            }
        }
    }
}
