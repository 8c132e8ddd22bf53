//! Continuous cohomology `H^s_c(G; M)` as a colimit over a quotient tower.
//!
//! Each normal-form summand of `M` is handled separately. Symbolic rules are
//! tried first; finite `G` is computed exactly; otherwise the groups
//! `H^s(Q_j; N)` and the inflations between them are computed to the tower
//! depth `k`. The value is declared only when the last two inflations are
//! both isomorphisms (value `H^s(Q_k; N)`) or both zero (value 0). Anything
//! else is reported as undetermined at depth `k`. This is evidence at a
//! finite depth, and the result says so.

use std::sync::OnceLock;

use serde::Serialize;

use super::finite::CohomologyEngine;
use super::symbolic::{symbolic_cohomology, SymbolicVerdict};
use crate::abelian::{Cardinal, FgAbelianGroup, StructuredAbelian};
use crate::error::Result;
use crate::exec;
use crate::profinite::{
    canonical_tower_with, ProfiniteDescriptor, QuotientTower, SupernaturalNumber,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transition {
    Isomorphism,
    Zero,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilizationRule {
    LastTwoIsomorphisms,
    LastTwoZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Symbolic {
        reason: String,
    },
    /// `G` is finite and the bar complex was used directly.
    Finite {
        group: String,
    },
    Stabilized {
        rule: StabilizationRule,
        depth: u32,
        levels: Vec<FgAbelianGroup>,
        transitions: Vec<Transition>,
    },
    Unstable {
        depth: u32,
        levels: Vec<FgAbelianGroup>,
        transitions: Vec<Transition>,
    },
}

/// One summand `N^{multiplicity}` of the coefficients and what was found for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub coefficients: StructuredAbelian,
    pub multiplicity: Cardinal,
    pub value: Option<StructuredAbelian>,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ContinuousValue {
    Determined { group: StructuredAbelian },
    UndeterminedAt { depth: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuousCohomology {
    pub degree: usize,
    pub value: ContinuousValue,
    pub pieces: Vec<Piece>,
}

impl ContinuousCohomology {
    pub fn determined(&self) -> Option<&StructuredAbelian> {
        match &self.value {
            ContinuousValue::Determined { group } => Some(group),
            ContinuousValue::UndeterminedAt { .. } => None,
        }
    }

    /// True when every piece was settled by a symbolic rule or exact finite computation.
    pub fn is_exact(&self) -> bool {
        self.pieces.iter().all(|p| {
            matches!(
                p.evidence,
                Evidence::Symbolic { .. } | Evidence::Finite { .. }
            )
        })
    }
}

fn symbolic_piece(m: StructuredAbelian, verdict: &SymbolicVerdict) -> Option<Piece> {
    let (value, reason) = match verdict {
        SymbolicVerdict::EqualsCoefficients => {
            (m.clone(), "degree 0 with trivial action".to_string())
        }
        SymbolicVerdict::Vanishes(r) => (StructuredAbelian::Zero, r.describe()),
        SymbolicVerdict::Unknown => return None,
    };
    Some(Piece {
        coefficients: m,
        multiplicity: Cardinal::Finite(1),
        value: Some(value),
        evidence: Evidence::Symbolic { reason },
    })
}

/// Normal-form summands as `(N, multiplicity)` with `N` finitely generated, or symbolic pieces.
fn split(
    m: &StructuredAbelian,
    order: &SupernaturalNumber,
    s: usize,
) -> (Vec<Piece>, Vec<(FgAbelianGroup, Cardinal)>) {
    let terms = match m.normalize() {
        StructuredAbelian::Zero => Vec::new(),
        StructuredAbelian::DirectSum(ts) => ts,
        t => vec![t],
    };
    let mut done = Vec::new();
    let mut todo = Vec::new();
    for t in terms {
        if let Some(p) = symbolic_piece(t.clone(), &symbolic_cohomology(order, &t, s)) {
            done.push(p);
            continue;
        }
        match t {
            StructuredAbelian::Fg(g) => todo.push((g, Cardinal::Finite(1))),
            StructuredAbelian::PPrimary { p, summands } => {
                for (e, c) in summands {
                    todo.push((FgAbelianGroup::cyclic(p.pow(e)), c));
                }
            }
            other => unreachable!("normal form term {other:?} has a symbolic verdict"),
        }
    }
    (done, todo)
}

impl CohomologyEngine {
    /// `H^s_c(G; M)` along the canonical tower of `G` to `depth`.
    pub fn continuous_cohomology(
        &self,
        g: &ProfiniteDescriptor,
        m: &StructuredAbelian,
        s: usize,
        depth: u32,
    ) -> Result<ContinuousCohomology> {
        let order = g.order()?;
        let finite = g.as_finite()?;
        let (mut pieces, todo) = split(m, &order, s);
        let tower: OnceLock<QuotientTower> = OnceLock::new();
        let mut undetermined = None;
        for (n, mult) in todo {
            let (value, evidence) = match &finite {
                Some(k) => (
                    Some(self.group_cohomology(k, &n, s)?),
                    Evidence::Finite { group: k.label() },
                ),
                None => {
                    if tower.get().is_none() {
                        let t = canonical_tower_with(
                            g,
                            depth,
                            &self.config.budgets,
                            self.config.execution,
                        )?;
                        let _ = tower.set(t);
                    }
                    self.along_tower(tower.get().expect("set above"), &n, s)?
                }
            };
            if value.is_none() {
                undetermined = Some(depth);
            }
            let value = value.map(|a| {
                StructuredAbelian::fg(a)
                    .power(mult)
                    .expect("torsion or finite multiplicity")
            });
            pieces.push(Piece {
                coefficients: StructuredAbelian::fg(n),
                multiplicity: mult,
                value,
                evidence,
            });
        }
        let value = match undetermined {
            Some(depth) => ContinuousValue::UndeterminedAt { depth },
            None => ContinuousValue::Determined {
                group: StructuredAbelian::direct_sum(pieces.iter().filter_map(|p| p.value.clone()))
                    .normalize(),
            },
        };
        Ok(ContinuousCohomology {
            degree: s,
            value,
            pieces,
        })
    }

    /// Levels and transitions for one finitely generated `N` along an explicit tower.
    pub fn along_tower(
        &self,
        tower: &QuotientTower,
        n: &FgAbelianGroup,
        s: usize,
    ) -> Result<(Option<FgAbelianGroup>, Evidence)> {
        let mode = self.config.execution;
        let js: Vec<usize> = (0..tower.levels.len()).collect();
        let levels = exec::try_map(mode, js.clone(), |j| {
            self.group_cohomology(tower.quotient(j), n, s)
        })?;
        let transitions = exec::try_map(mode, js[..js.len() - 1].to_vec(), |j| {
            let map = self.inflation(
                tower.quotient(j + 1),
                tower.quotient(j),
                &tower.surjections[j],
                n,
                s,
            )?;
            Ok(if map.is_isomorphism(&self.config.budgets)? {
                Transition::Isomorphism
            } else if map.is_zero() {
                Transition::Zero
            } else {
                Transition::Other
            })
        })?;
        let depth = tower.depth();
        let last: &[Transition] = if transitions.len() >= 2 {
            &transitions[transitions.len() - 2..]
        } else {
            &[]
        };
        let rule = match last {
            [Transition::Isomorphism, Transition::Isomorphism] => {
                Some(StabilizationRule::LastTwoIsomorphisms)
            }
            [Transition::Zero, Transition::Zero] => Some(StabilizationRule::LastTwoZero),
            _ => None,
        };
        Ok(match rule {
            Some(rule) => {
                let value = match rule {
                    StabilizationRule::LastTwoIsomorphisms => {
                        levels.last().expect("nonempty").clone()
                    }
                    StabilizationRule::LastTwoZero => FgAbelianGroup::trivial(),
                };
                (
                    Some(value),
                    Evidence::Stabilized {
                        rule,
                        depth,
                        levels,
                        transitions,
                    },
                )
            }
            None => (
                None,
                Evidence::Unstable {
                    depth,
                    levels,
                    transitions,
                },
            ),
        })
    }
}

/// `H^s_c(G; M)` with a throwaway engine.
pub fn continuous_cohomology(
    g: &ProfiniteDescriptor,
    m: &StructuredAbelian,
    s: usize,
    depth: u32,
    config: &crate::config::Config,
) -> Result<ContinuousCohomology> {
    CohomologyEngine::new(*config).continuous_cohomology(g, m, s, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    #[test]
    fn p_adic_with_fp() {
        let eng = CohomologyEngine::new(Config::sequential());
        for p in [2u64, 3] {
            let g = ProfiniteDescriptor::p_adic(p);
            let fp = StructuredAbelian::cyclic(p);
            let h0 = eng.continuous_cohomology(&g, &fp, 0, 3).unwrap();
            assert_eq!(h0.determined(), Some(&fp));
            let h1 = eng.continuous_cohomology(&g, &fp, 1, 3).unwrap();
            assert_eq!(h1.determined(), Some(&fp), "p={p}");
            let h2 = eng.continuous_cohomology(&g, &fp, 2, 3).unwrap();
            assert_eq!(h2.determined(), Some(&StructuredAbelian::Zero), "p={p}");
            assert!(!h2.is_exact());
        }
    }

    #[test]
    fn integral_coefficients_do_not_stabilize() {
        // H²(Z/p^j; Z) = Z/p^j grows along the tower.
        let eng = CohomologyEngine::new(Config::sequential());
        let r = eng
            .continuous_cohomology(
                &ProfiniteDescriptor::p_adic(2),
                &StructuredAbelian::integers(),
                2,
                3,
            )
            .unwrap();
        assert_eq!(r.value, ContinuousValue::UndeterminedAt { depth: 3 });
    }

    #[test]
    fn countable_sums_and_symbolic_parts() {
        let eng = CohomologyEngine::new(Config::sequential());
        let g = ProfiniteDescriptor::p_adic(3);
        let m = StructuredAbelian::direct_sum([
            StructuredAbelian::rationals(),
            StructuredAbelian::p_primary(3, 1, Cardinal::Countable),
            StructuredAbelian::cyclic(2),
        ]);
        let r = eng.continuous_cohomology(&g, &m, 1, 3).unwrap();
        assert_eq!(
            r.determined(),
            Some(&StructuredAbelian::p_primary(3, 1, Cardinal::Countable))
        );
    }

    #[test]
    fn finite_groups_are_exact() {
        let eng = CohomologyEngine::new(Config::sequential());
        let g = ProfiniteDescriptor::cyclic(2);
        let r = eng
            .continuous_cohomology(&g, &StructuredAbelian::integers(), 2, 3)
            .unwrap();
        assert_eq!(r.determined(), Some(&StructuredAbelian::cyclic(2)));
        assert!(r.is_exact());
    }
}
