//! Inhomogeneous bar cochains `C^n = Map(K^n, M)` for trivial coefficients.
//!
//! Basis convention, used for every matrix: tuples `(g_1, ..., g_n) ∈ K^n`
//! in lexicographic order with `g_1` most significant, and within a tuple the
//! generators of `M` in canonical order. Basis vector `tuple * gens + a`.

use num_bigint::BigInt;

use crate::abelian::{FgAbelianGroup, IntegerMatrix};
use crate::config::{Budgets, Execution};
use crate::error::{Error, Result};
use crate::exec;
use crate::profinite::FiniteGroupTable;

/// `|K|^n`, or an error when it does not fit.
pub(crate) fn tuple_count(k: usize, n: usize) -> Result<usize> {
    k.checked_pow(n as u32)
        .ok_or_else(|| Error::budget("bar complex level", u128::MAX, usize::MAX as u128))
}

pub(crate) fn check_bar_budget(
    k: usize,
    s_max: usize,
    gens: usize,
    budgets: &Budgets,
) -> Result<()> {
    let cells = (k as u128)
        .checked_pow(s_max as u32 + 1)
        .and_then(|c| c.checked_mul(gens.max(1) as u128))
        .unwrap_or(u128::MAX);
    budgets.check_bar("bar complex", cells)
}

/// Integral bar differential `d^n : Z[K^n] → Z[K^{n+1}]` (scalar coefficients).
pub fn bar_differential(k: &FiniteGroupTable, n: usize, mode: Execution) -> Result<IntegerMatrix> {
    let size = k.size();
    let rows = tuple_count(size, n + 1)?;
    let cols = tuple_count(size, n)?;
    if n == 0 {
        // Trivial action: f() - f() on every g.
        return Ok(IntegerMatrix::zeros(rows, cols));
    }
    let table = k.flat_table();
    let chunk = 256;
    let starts: Vec<usize> = (0..rows).step_by(chunk).collect();
    let blocks = exec::map(mode, starts, |start| {
        let end = (start + chunk).min(rows);
        let mut digits = vec![0usize; n + 1];
        (start..end)
            .map(|r| {
                let mut x = r;
                for d in digits.iter_mut().rev() {
                    *d = x % size;
                    x /= size;
                }
                coface_row(&digits, size, &table)
            })
            .collect::<Vec<_>>()
    });
    let entries: Vec<Vec<(usize, BigInt)>> = blocks.into_iter().flatten().collect();
    Ok(IntegerMatrix::from_triplet_rows(rows, cols, entries))
}

/// `(δf)(g_1..g_{n+1}) = f(g_2..) + Σ_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{n+1} f(g_1..g_n)`.
fn coface_row(g: &[usize], size: usize, table: &[u32]) -> Vec<(usize, BigInt)> {
    let n = g.len() - 1;
    let encode = |it: &mut dyn Iterator<Item = usize>| it.fold(0usize, |acc, x| acc * size + x);
    let mut out = Vec::with_capacity(n + 2);
    out.push((encode(&mut g[1..].iter().copied()), BigInt::from(1)));
    for i in 0..n {
        let merged = table[g[i] * size + g[i + 1]] as usize;
        let mut it = g[..i]
            .iter()
            .copied()
            .chain(std::iter::once(merged))
            .chain(g[i + 2..].iter().copied());
        let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        out.push((encode(&mut it), BigInt::from(sign)));
    }
    let sign = if (n + 1).is_multiple_of(2) { 1 } else { -1 };
    out.push((encode(&mut g[..n].iter().copied()), BigInt::from(sign)));
    out
}

/// The cochain complex `C^0 → C^1 → ... → C^{s_max+1}` of `K` with coefficients in `M`.
#[derive(Debug, Clone)]
pub struct BarCochainComplex {
    pub group: FiniteGroupTable,
    pub coefficients: FgAbelianGroup,
    pub s_max: usize,
    /// `scalar[n]` is the integral `d^n : C^n → C^{n+1}` for `M = Z`, `n = 0..=s_max`.
    pub scalar: Vec<IntegerMatrix>,
}

impl BarCochainComplex {
    /// Number of generators of `C^n` as a direct sum of copies of the cyclic summands of `M`.
    pub fn level_rank(&self, n: usize) -> usize {
        self.group.size().pow(n as u32) * self.coefficients.generator_count()
    }

    /// `C^n ≅ M^{|K|^n}` as an abstract group.
    pub fn cochain_group(&self, n: usize) -> FgAbelianGroup {
        self.coefficients.power(self.group.size().pow(n as u32))
    }

    /// `d^n` on `C^n = M^{|K|^n}`: the scalar differential tensored with `I_gens`.
    pub fn differential(&self, n: usize) -> IntegerMatrix {
        self.scalar[n].kron_identity(self.coefficients.generator_count())
    }
}

pub fn bar_complex(
    k: &FiniteGroupTable,
    m: &FgAbelianGroup,
    s_max: usize,
    budgets: &Budgets,
) -> Result<BarCochainComplex> {
    bar_complex_with(k, m, s_max, budgets, Execution::Sequential)
}

pub fn bar_complex_with(
    k: &FiniteGroupTable,
    m: &FgAbelianGroup,
    s_max: usize,
    budgets: &Budgets,
    mode: Execution,
) -> Result<BarCochainComplex> {
    check_bar_budget(k.size(), s_max, m.generator_count(), budgets)?;
    let scalar = (0..=s_max)
        .map(|n| bar_differential(k, n, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(BarCochainComplex {
        group: k.clone(),
        coefficients: m.clone(),
        s_max,
        scalar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_alternates() {
        let c = bar_complex(
            &FiniteGroupTable::trivial(),
            &FgAbelianGroup::free(1),
            3,
            &Budgets::default(),
        )
        .unwrap();
        for n in 0..=3 {
            let d = &c.scalar[n];
            assert_eq!((d.rows(), d.cols()), (1, 1));
            let expect = if n % 2 == 0 {
                IntegerMatrix::zeros(1, 1)
            } else {
                IntegerMatrix::identity(1)
            };
            assert_eq!(d, &expect, "d^{n}");
        }
    }

    #[test]
    fn shapes_and_d_squared() {
        let k = FiniteGroupTable::cyclic(3);
        let c = bar_complex(&k, &FgAbelianGroup::free(1), 2, &Budgets::default()).unwrap();
        assert_eq!((c.scalar[1].rows(), c.scalar[1].cols()), (9, 3));
        assert!(c.scalar[0].is_zero());
        for n in 0..2 {
            assert!(c.scalar[n + 1].mul(&c.scalar[n]).unwrap().is_zero());
        }
        let z2 = bar_complex(
            &FiniteGroupTable::cyclic(2),
            &FgAbelianGroup::cyclic(2),
            3,
            &Budgets::default(),
        )
        .unwrap();
        let ranks: Vec<usize> = (0..4).map(|n| z2.level_rank(n)).collect();
        assert_eq!(ranks, [1, 2, 4, 8]);
    }

    #[test]
    fn budget() {
        let k = FiniteGroupTable::cyclic(8);
        let tight = Budgets {
            bar_cells: 100,
            ..Budgets::default()
        };
        assert!(bar_complex(&k, &FgAbelianGroup::free(1), 2, &tight)
            .unwrap_err()
            .is_budget());
    }
}
