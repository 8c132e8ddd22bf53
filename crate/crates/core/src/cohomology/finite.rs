//! Cohomology of finite groups with trivial finitely generated coefficients.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::bar::{bar_differential, check_bar_budget, tuple_count};
use super::presentation::CohomologyPresentation;
use crate::abelian::elimination::{reduce, Reduction};
use crate::abelian::{FgAbelianGroup, IntegerMatrix};
use crate::config::Config;
use crate::error::Result;
use crate::profinite::FiniteGroupTable;

/// Rank and invariant factors of the integral bar differential `d^n`.
#[derive(Debug, Clone)]
pub(crate) struct IntegralStep {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

type PresentationKey = (FiniteGroupTable, usize, BigInt);

/// Shared caches for repeated cohomology computations.
///
/// Everything is keyed by the group table, so towers and E₂ pages that reuse
/// a quotient or a coefficient order never redo an elimination.
#[derive(Debug, Default)]
pub struct CohomologyEngine {
    pub config: Config,
    integral: Mutex<HashMap<(FiniteGroupTable, usize), Arc<IntegralStep>>>,
    presentations: Mutex<HashMap<PresentationKey, Arc<CohomologyPresentation>>>,
}

impl CohomologyEngine {
    pub fn new(config: Config) -> Self {
        CohomologyEngine {
            config,
            ..Default::default()
        }
    }

    pub(crate) fn integral_step(
        &self,
        k: &FiniteGroupTable,
        n: usize,
    ) -> Result<Arc<IntegralStep>> {
        let key = (k.clone(), n);
        if let Some(s) = self.integral.lock().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let d = bar_differential(k, n, self.config.execution)?;
        let r: Reduction = reduce(&d, false, &self.config.budgets)?;
        let step = Arc::new(IntegralStep {
            rank: r.rank,
            torsion: r.torsion(),
        });
        self.integral
            .lock()
            .expect("cache lock")
            .insert(key, step.clone());
        Ok(step)
    }

    /// `H^s(K; M)` with `K` acting trivially.
    pub fn group_cohomology(
        &self,
        k: &FiniteGroupTable,
        m: &FgAbelianGroup,
        s: usize,
    ) -> Result<FgAbelianGroup> {
        check_bar_budget(k.size(), s, m.generator_count(), &self.config.budgets)?;
        if m.is_trivial() {
            return Ok(FgAbelianGroup::trivial());
        }
        let b = tuple_count(k.size(), s)?;
        let out = self.integral_step(k, s)?;
        let (r_in, tor_in) = if s == 0 {
            (0, Vec::new())
        } else {
            let st = self.integral_step(k, s - 1)?;
            (st.rank, st.torsion.clone())
        };
        let free = b - out.rank - r_in;
        let mut free_rank = 0;
        let mut orders = Vec::new();
        for d in m.summand_orders() {
            if d.is_zero() {
                // Free summand: free part plus the torsion of coker d^{s-1}.
                free_rank += free;
                orders.extend(tor_in.iter().cloned());
            } else {
                // Universal coefficients for Z/d.
                orders.extend(std::iter::repeat_n(d.clone(), free));
                orders.extend(tor_in.iter().chain(&out.torsion).map(|e| e.gcd(&d)));
            }
        }
        Ok(FgAbelianGroup::new(free_rank, orders))
    }

    /// Explicit presentation of `H^s(K; Z/d)` (`d = 0` means `Z`) with cocycle representatives.
    pub fn presentation(
        &self,
        k: &FiniteGroupTable,
        s: usize,
        d: &BigInt,
    ) -> Result<Arc<CohomologyPresentation>> {
        let key = (k.clone(), s, d.clone());
        if let Some(p) = self.presentations.lock().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        check_bar_budget(k.size(), s, 1, &self.config.budgets)?;
        let delta_out = bar_differential(k, s, self.config.execution)?;
        let delta_in = if s == 0 {
            IntegerMatrix::zeros(1, 0)
        } else {
            bar_differential(k, s - 1, self.config.execution)?
        };
        let p = Arc::new(CohomologyPresentation::build(
            k.size(),
            s,
            d,
            &delta_out,
            &delta_in,
            &self.config.budgets,
        )?);
        self.presentations
            .lock()
            .expect("cache lock")
            .insert(key, p.clone());
        Ok(p)
    }
}

/// `H^s(K; M)` with a throwaway engine.
pub fn group_cohomology(
    k: &FiniteGroupTable,
    m: &FgAbelianGroup,
    s: usize,
    config: &Config,
) -> Result<FgAbelianGroup> {
    CohomologyEngine::new(*config).group_cohomology(k, m, s)
}

/// Closed form for cyclic `K = Z/n` and `M = Z^r ⊕ ⊕ Z/d_i`.
///
/// `H^0 = M`; in odd degrees `M[n]`; in positive even degrees `M/n`.
pub fn cyclic_closed_form(n: u64, m: &FgAbelianGroup, s: usize) -> FgAbelianGroup {
    let n = BigInt::from(n);
    if s == 0 {
        m.clone()
    } else if s % 2 == 1 {
        m.n_torsion(&n)
    } else {
        m.mod_n(&n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fg(r: usize, t: &[i64]) -> FgAbelianGroup {
        FgAbelianGroup::new(r, t.iter().map(|&x| BigInt::from(x)))
    }

    #[test]
    fn small_cases() {
        let c = Config::sequential();
        let z2 = FiniteGroupTable::cyclic(2);
        assert_eq!(
            group_cohomology(&z2, &fg(1, &[]), 2, &c).unwrap(),
            fg(0, &[2])
        );
        assert_eq!(
            group_cohomology(&z2, &fg(1, &[]), 1, &c).unwrap(),
            fg(0, &[])
        );
        for s in 0..5 {
            assert_eq!(
                group_cohomology(&z2, &fg(0, &[2]), s, &c).unwrap(),
                fg(0, &[2])
            );
        }
        let v4 = FiniteGroupTable::named("V4").unwrap();
        assert_eq!(
            group_cohomology(&v4, &fg(0, &[2]), 2, &c).unwrap(),
            fg(0, &[2, 2, 2])
        );
        let s3 = FiniteGroupTable::named("S3").unwrap();
        assert_eq!(
            group_cohomology(&s3, &fg(1, &[]), 2, &c).unwrap(),
            fg(0, &[2])
        );
        assert_eq!(
            group_cohomology(&s3, &fg(1, &[]), 4, &c).unwrap(),
            fg(0, &[6])
        );
    }

    #[test]
    fn matches_cyclic_closed_form() {
        let c = Config::sequential();
        let eng = CohomologyEngine::new(c);
        for n in 1..=6u64 {
            let k = FiniteGroupTable::cyclic(n as usize);
            for m in [fg(1, &[]), fg(0, &[2]), fg(0, &[3]), fg(2, &[4])] {
                for s in 0..=3 {
                    assert_eq!(
                        eng.group_cohomology(&k, &m, s).unwrap(),
                        cyclic_closed_form(n, &m, s),
                        "n={n} M={m} s={s}"
                    );
                }
            }
        }
    }
}
