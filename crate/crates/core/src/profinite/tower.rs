//! Canonical towers of finite quotients.

use num_traits::ToPrimitive;

use super::descriptor::{index, FiniteSub, OpenNormalDescriptor, ProfiniteDescriptor, Shape, Slot};
use super::finite_group::FiniteGroupTable;
use crate::config::{Budgets, Execution};
use crate::error::Result;
use crate::exec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    pub level: u32,
    pub quotient: FiniteGroupTable,
    pub kernel: OpenNormalDescriptor,
}

/// Quotients `Q_0, ..., Q_k` with verified surjections `π_j : Q_{j+1} → Q_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientTower {
    pub levels: Vec<TowerLevel>,
    /// `surjections[j]` maps element indices of `Q_{j+1}` to `Q_j`.
    pub surjections: Vec<Vec<usize>>,
}

impl QuotientTower {
    pub fn depth(&self) -> u32 {
        self.levels.len().saturating_sub(1) as u32
    }

    pub fn quotient(&self, j: usize) -> &FiniteGroupTable {
        &self.levels[j].quotient
    }
}

/// Kernel of level `j`: exponent `j` at every listed procyclic factor, the
/// first `j` primes of an infinite family at exponent `j`, and the identity
/// in every finite factor.
pub fn canonical_kernel(shape: &Shape, j: u32) -> OpenNormalDescriptor {
    let mut procyclic = std::collections::BTreeMap::new();
    if j > 0 {
        for p in shape.procyclic_primes() {
            procyclic.insert(p, j);
        }
        for p in shape.family_primes(j as usize) {
            procyclic.insert(p, j);
        }
    }
    let finite = shape
        .finite_groups()
        .iter()
        .map(|g| {
            if g.is_trivial() {
                FiniteSub::Full
            } else {
                FiniteSub::Identity
            }
        })
        .collect();
    OpenNormalDescriptor::new(procyclic, finite)
}

/// Kernels of levels `0..=depth`, symbolic (no tables are built).
pub fn canonical_kernels(g: &ProfiniteDescriptor, depth: u32) -> Result<Vec<OpenNormalDescriptor>> {
    let shape = g.shape()?;
    (0..=depth)
        .map(|j| canonical_kernel(&shape, j).normalized(&shape))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Component {
    Finite(usize),
    Cyclic(u64),
}

fn components(shape: &Shape, kernel: &OpenNormalDescriptor) -> Vec<(Component, usize)> {
    let mut out = Vec::new();
    let mut fi = 0;
    for s in &shape.slots {
        match s {
            Slot::Finite(g) => {
                out.push((Component::Finite(fi), g.size()));
                fi += 1;
            }
            Slot::Procyclic { p, .. } => {
                out.push((
                    Component::Cyclic(*p),
                    (*p as usize).pow(kernel.exponent(*p)),
                ));
            }
            Slot::Family { .. } => {
                for (p, m) in &kernel.procyclic {
                    if !shape.procyclic_primes().contains(p) {
                        out.push((Component::Cyclic(*p), (*p as usize).pow(*m)));
                    }
                }
            }
        }
    }
    out
}

fn projection(
    upper: &[(Component, usize)],
    lower: &[(Component, usize)],
    size: usize,
) -> Vec<usize> {
    let pos: Vec<usize> = lower
        .iter()
        .map(|(c, _)| {
            upper
                .iter()
                .position(|(u, _)| u == c)
                .expect("lower component present above")
        })
        .collect();
    let mut digits = vec![0; upper.len()];
    (0..size)
        .map(|x| {
            let mut r = x;
            for (i, (_, n)) in upper.iter().enumerate().rev() {
                digits[i] = r % n;
                r /= n;
            }
            lower
                .iter()
                .zip(&pos)
                .fold(0, |acc, ((_, n), &i)| acc * n + digits[i] % n)
        })
        .collect()
}

/// Materializes the canonical tower to `depth`, verifying every surjection.
pub fn canonical_tower(
    g: &ProfiniteDescriptor,
    depth: u32,
    budgets: &Budgets,
) -> Result<QuotientTower> {
    canonical_tower_with(g, depth, budgets, Execution::Sequential)
}

pub fn canonical_tower_with(
    g: &ProfiniteDescriptor,
    depth: u32,
    budgets: &Budgets,
    mode: Execution,
) -> Result<QuotientTower> {
    let shape = g.shape()?;
    let kernels = canonical_kernels(g, depth)?;
    let mut levels = Vec::with_capacity(kernels.len());
    let mut comps = Vec::with_capacity(kernels.len());
    for (j, k) in kernels.iter().enumerate() {
        let size = index(g, k)?;
        budgets.check_table("tower quotient", size.to_u128().unwrap_or(u128::MAX))?;
        let c = components(&shape, k);
        let quotient = FiniteGroupTable::product(c.iter().map(|(comp, n)| match comp {
            Component::Finite(i) => shape.finite_groups()[*i].clone(),
            Component::Cyclic(_) => FiniteGroupTable::cyclic(*n),
        }))?;
        levels.push(TowerLevel {
            level: j as u32,
            quotient,
            kernel: k.clone(),
        });
        comps.push(c);
    }
    let pairs: Vec<usize> = (0..levels.len().saturating_sub(1)).collect();
    let surjections = exec::try_map(mode, pairs, |j| {
        let up = &levels[j + 1].quotient;
        let q = projection(&comps[j + 1], &comps[j], up.size());
        up.check_surjection(&levels[j].quotient, &q)?;
        Ok(q)
    })?;
    Ok(QuotientTower {
        levels,
        surjections,
    })
}
