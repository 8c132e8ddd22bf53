//! Inflation `H^s(Q; M) → H^s(Q'; M)` along a surjection `Q' → Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::finite::CohomologyEngine;
use crate::abelian::{cokernel_with, FgAbelianGroup, IntegerMatrix};
use crate::config::Budgets;
use crate::error::Result;
use crate::exec;
use crate::profinite::FiniteGroupTable;

/// A homomorphism between presented groups: `matrix[i][j]` is coordinate `i`
/// of the image of source generator `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflationMap {
    pub degree: usize,
    pub source_orders: Vec<BigInt>,
    pub target_orders: Vec<BigInt>,
    pub matrix: Vec<Vec<BigInt>>,
}

fn group_of(orders: &[BigInt]) -> FgAbelianGroup {
    let free = orders.iter().filter(|o| o.is_zero()).count();
    FgAbelianGroup::new(free, orders.iter().filter(|o| !o.is_zero()).cloned())
}

fn reduce_mod(x: BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        x
    } else {
        x.mod_floor(m)
    }
}

impl InflationMap {
    pub fn source(&self) -> FgAbelianGroup {
        group_of(&self.source_orders)
    }

    pub fn target(&self) -> FgAbelianGroup {
        group_of(&self.target_orders)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// Bijective: the groups agree and the map is onto (f.g. abelian groups are Hopfian).
    pub fn is_isomorphism(&self, budgets: &Budgets) -> Result<bool> {
        if self.source() != self.target() {
            return Ok(false);
        }
        let rows = self.target_orders.len();
        let cols = self.source_orders.len();
        let mut dense: Vec<Vec<BigInt>> = self.matrix.clone();
        for (i, row) in dense.iter_mut().enumerate() {
            row.extend((0..rows).map(|k| {
                if k == i {
                    self.target_orders[i].clone()
                } else {
                    BigInt::zero()
                }
            }));
        }
        let coker = cokernel_with(
            &IntegerMatrix::from_dense(rows, cols + rows, dense),
            budgets,
        )?;
        Ok(coker.is_trivial())
    }

    /// `later ∘ self`.
    pub fn then(&self, later: &InflationMap) -> InflationMap {
        assert_eq!(
            self.target_orders, later.source_orders,
            "maps do not compose"
        );
        let matrix = later
            .matrix
            .iter()
            .zip(&later.target_orders)
            .map(|(row, o)| {
                (0..self.source_orders.len())
                    .map(|j| {
                        let x = row
                            .iter()
                            .zip(&self.matrix)
                            .fold(BigInt::zero(), |acc, (a, mrow)| acc + a * &mrow[j]);
                        reduce_mod(x, o)
                    })
                    .collect()
            })
            .collect();
        InflationMap {
            degree: self.degree,
            source_orders: self.source_orders.clone(),
            target_orders: later.target_orders.clone(),
            matrix,
        }
    }
}

/// Index map `K'^s → K^s` induced by `q` on tuples.
fn tuple_map(upper: usize, lower: usize, q: &[usize], s: usize) -> Vec<usize> {
    let n = upper.pow(s as u32);
    (0..n)
        .map(|t| {
            let mut x = t;
            let mut digits = vec![0; s];
            for d in digits.iter_mut().rev() {
                *d = x % upper;
                x /= upper;
            }
            digits.iter().fold(0, |acc, &d| acc * lower + q[d])
        })
        .collect()
}

impl CohomologyEngine {
    /// Inflation along a verified surjection `q : upper → lower`, one block per
    /// cyclic summand of `M` in [`FgAbelianGroup::summand_orders`] order.
    pub fn inflation(
        &self,
        upper: &FiniteGroupTable,
        lower: &FiniteGroupTable,
        q: &[usize],
        m: &FgAbelianGroup,
        s: usize,
    ) -> Result<InflationMap> {
        upper.check_surjection(lower, q)?;
        let idx = tuple_map(upper.size(), lower.size(), q, s);
        let blocks = exec::try_map(self.config.execution, m.summand_orders(), |d| {
            let src = self.presentation(lower, s, &d)?;
            let dst = self.presentation(upper, s, &d)?;
            let cols: Vec<Vec<BigInt>> = src
                .generators()
                .iter()
                .map(|x| {
                    let pulled: Vec<BigInt> = idx.iter().map(|&i| x[i].clone()).collect();
                    dst.classify(&pulled)
                })
                .collect();
            Ok((src.orders().to_vec(), dst.orders().to_vec(), cols))
        })?;
        let source_orders: Vec<BigInt> = blocks.iter().flat_map(|b| b.0.clone()).collect();
        let target_orders: Vec<BigInt> = blocks.iter().flat_map(|b| b.1.clone()).collect();
        let mut matrix = vec![vec![BigInt::zero(); source_orders.len()]; target_orders.len()];
        let (mut r0, mut c0) = (0, 0);
        for (so, to, cols) in blocks {
            for (j, col) in cols.into_iter().enumerate() {
                for (i, v) in col.into_iter().enumerate() {
                    matrix[r0 + i][c0 + j] = v;
                }
            }
            r0 += to.len();
            c0 += so.len();
        }
        Ok(InflationMap {
            degree: s,
            source_orders,
            target_orders,
            matrix,
        })
    }
}

/// Inflation with a throwaway engine.
pub fn inflation_map(
    upper: &FiniteGroupTable,
    lower: &FiniteGroupTable,
    q: &[usize],
    m: &FgAbelianGroup,
    s: usize,
    config: &crate::config::Config,
) -> Result<InflationMap> {
    CohomologyEngine::new(*config).inflation(upper, lower, q, m, s)
}
