//! E₂ pages `H^s_c(U; π_t X) ⟹ π_{t-s}(X^{hU})` for trivial actions.
//!
//! No differentials are computed. A page that is zero in every positive
//! filtration of the window is reported as collapsed; otherwise the abutment
//! is left undetermined.

pub mod chart;

use serde::Serialize;

use crate::abelian::StructuredAbelian;
use crate::cohomology::{
    symbolic_cohomology, CohomologyEngine, ContinuousValue, Evidence, SymbolicVerdict,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::profinite::{subgroup_descriptor, OpenNormalDescriptor, ProfiniteDescriptor};
use crate::spectra::SpectrumDescriptor;

pub use chart::{render_chart, ChartFormat, FORMAT_VERSION};

/// Filtrations `0..=s_max` and internal degrees `t_min..=t_max` (empty if `t_min > t_max`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub s_max: usize,
    pub t_min: i64,
    pub t_max: i64,
}

impl Window {
    pub fn degrees(&self) -> impl Iterator<Item = i64> + Clone {
        self.t_min..=self.t_max
    }

    pub fn is_empty(&self) -> bool {
        self.t_min > self.t_max
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CellValue {
    Determined { group: StructuredAbelian },
    UndeterminedAt { depth: u32 },
}

impl CellValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, CellValue::Determined { group } if group.is_zero())
    }

    pub fn label(&self) -> String {
        match self {
            CellValue::Determined { group } => group.label(),
            CellValue::UndeterminedAt { depth } => format!("?d{depth}"),
        }
    }
}

/// How a cell value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellSource {
    Symbolic,
    Exact,
    DepthEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E2Cell {
    pub s: usize,
    pub t: i64,
    pub value: CellValue,
    pub source: CellSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E2Page {
    pub group: String,
    pub spectrum: String,
    pub window: Window,
    /// Row-major: `s` ascending, then `t` ascending.
    pub cells: Vec<E2Cell>,
    pub collapsed_in_window: bool,
    pub has_undetermined: bool,
    /// Every positive-filtration group vanishes in all degrees by a symbolic rule.
    pub symbolic_collapse: bool,
}

impl E2Page {
    pub fn cell(&self, s: usize, t: i64) -> Option<&E2Cell> {
        self.cells.iter().find(|c| c.s == s && c.t == t)
    }
}

fn source_of(evidence: &[Evidence]) -> CellSource {
    if evidence
        .iter()
        .all(|e| matches!(e, Evidence::Symbolic { .. }))
    {
        CellSource::Symbolic
    } else if evidence
        .iter()
        .all(|e| matches!(e, Evidence::Symbolic { .. } | Evidence::Finite { .. }))
    {
        CellSource::Exact
    } else {
        CellSource::DepthEvidence
    }
}

impl CohomologyEngine {
    /// The E₂ page of `X` under the trivial action of `u`, to tower depth `depth`.
    pub fn e2_page(
        &self,
        u: &ProfiniteDescriptor,
        x: &SpectrumDescriptor,
        window: Window,
        depth: u32,
    ) -> Result<E2Page> {
        x.validate()?;
        if window.s_max > 64 || window.t_max.saturating_sub(window.t_min) > 100_000 {
            return Err(Error::InvalidInput("window too large".into()));
        }
        let ts: Vec<i64> = window.degrees().collect();
        let values: Vec<StructuredAbelian> = ts
            .iter()
            .map(|&t| crate::spectra::homotopy_of(x, t))
            .collect();
        let mut distinct: Vec<StructuredAbelian> = Vec::new();
        for v in &values {
            if !distinct.contains(v) {
                distinct.push(v.clone());
            }
        }
        let jobs: Vec<(usize, usize)> = (0..distinct.len())
            .flat_map(|i| (0..=window.s_max).map(move |s| (i, s)))
            .collect();
        let results = exec::try_map(self.config.execution, jobs, |(i, s)| {
            self.continuous_cohomology(u, &distinct[i], s, depth)
        })?;
        let lookup = |i: usize, s: usize| &results[i * (window.s_max + 1) + s];
        let mut cells = Vec::with_capacity(ts.len() * (window.s_max + 1));
        for s in 0..=window.s_max {
            for (k, &t) in ts.iter().enumerate() {
                let i = distinct
                    .iter()
                    .position(|d| *d == values[k])
                    .expect("listed");
                let r = lookup(i, s);
                let value = match &r.value {
                    ContinuousValue::Determined { group } => CellValue::Determined {
                        group: group.clone(),
                    },
                    ContinuousValue::UndeterminedAt { depth } => {
                        CellValue::UndeterminedAt { depth: *depth }
                    }
                };
                let evidence: Vec<Evidence> = r.pieces.iter().map(|p| p.evidence.clone()).collect();
                cells.push(E2Cell {
                    s,
                    t,
                    value,
                    source: source_of(&evidence),
                });
            }
        }
        let has_undetermined = cells
            .iter()
            .any(|c| matches!(c.value, CellValue::UndeterminedAt { .. }));
        let collapsed_in_window = cells.iter().filter(|c| c.s > 0).all(|c| c.value.is_zero());
        let order = u.order()?;
        let symbolic_collapse = x.homotopy().degree_cover().is_some_and(|cover| {
            cover.iter().all(|(_, v)| {
                matches!(
                    symbolic_cohomology(&order, v, 1),
                    SymbolicVerdict::Vanishes(_)
                )
            })
        });
        Ok(E2Page {
            group: u.label(),
            spectrum: x.label(),
            window,
            cells,
            collapsed_in_window,
            has_undetermined,
            symbolic_collapse,
        })
    }

    /// The page for an open normal subgroup `U′` of `G`.
    pub fn e2_page_for_subgroup(
        &self,
        g: &ProfiniteDescriptor,
        u: &OpenNormalDescriptor,
        x: &SpectrumDescriptor,
        window: Window,
        depth: u32,
    ) -> Result<E2Page> {
        let sub = subgroup_descriptor(g, u)?;
        let mut page = self.e2_page(&sub, x, window, depth)?;
        page.group = format!("{} ≤ {}", u.label(&g.shape()?), g.label());
        Ok(page)
    }
}

/// E₂ page with a throwaway engine.
pub fn e2_page(
    u: &ProfiniteDescriptor,
    x: &SpectrumDescriptor,
    window: Window,
    depth: u32,
    config: &crate::config::Config,
) -> Result<E2Page> {
    CohomologyEngine::new(*config).e2_page(u, x, window, depth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseCertificate {
    /// All positive filtrations vanish in every degree by a symbolic rule.
    Symbolic,
    /// Vanishing was only observed inside the window.
    WindowEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbutmentDegree {
    pub t: i64,
    pub group: StructuredAbelian,
    /// `E₂^{0,t}` is literally the input `π_t(X)`.
    pub equals_input: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Abutment {
    Collapsed {
        certificate: CollapseCertificate,
        degrees: Vec<AbutmentDegree>,
    },
    Undetermined {
        reason: String,
    },
}

/// `π_t(X^{hU}) = E₂^{0,t}` on the window when the page collapses.
pub fn collapse_and_abutment(page: &E2Page, x: &SpectrumDescriptor) -> Abutment {
    if !page.collapsed_in_window {
        let reason = if page.has_undetermined {
            "page has undetermined cells".to_string()
        } else {
            "nonzero groups in positive filtration; differentials are not computed".to_string()
        };
        return Abutment::Undetermined { reason };
    }
    let degrees = page
        .cells
        .iter()
        .filter(|c| c.s == 0)
        .filter_map(|c| match &c.value {
            CellValue::Determined { group } => Some(AbutmentDegree {
                t: c.t,
                group: group.clone(),
                equals_input: *group == crate::spectra::homotopy_of(x, c.t),
            }),
            CellValue::UndeterminedAt { .. } => None,
        })
        .collect();
    Abutment::Collapsed {
        certificate: if page.symbolic_collapse {
            CollapseCertificate::Symbolic
        } else {
            CollapseCertificate::WindowEvidence
        },
        degrees,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn window(s_max: usize, t: i64) -> Window {
        Window {
            s_max,
            t_min: -t,
            t_max: t,
        }
    }

    #[test]
    fn cyclic_against_morava() {
        let k = SpectrumDescriptor::morava_k(1, 3).unwrap();
        let page = e2_page(
            &ProfiniteDescriptor::cyclic(3),
            &k,
            window(3, 4),
            3,
            &Config::sequential(),
        )
        .unwrap();
        for c in &page.cells {
            let expect = if c.t % 4 == 0 { "Z/3" } else { "0" };
            assert_eq!(c.value.label(), expect, "({}, {})", c.s, c.t);
        }
        assert!(!page.collapsed_in_window);
        assert!(matches!(
            collapse_and_abutment(&page, &k),
            Abutment::Undetermined { .. }
        ));
    }

    #[test]
    fn coprime_procyclic_collapses() {
        let k = SpectrumDescriptor::morava_k(1, 3).unwrap();
        let page = e2_page(
            &ProfiniteDescriptor::p_adic(2),
            &k,
            window(2, 4),
            3,
            &Config::sequential(),
        )
        .unwrap();
        assert!(page.collapsed_in_window && page.symbolic_collapse);
        match collapse_and_abutment(&page, &k) {
            Abutment::Collapsed {
                certificate,
                degrees,
            } => {
                assert_eq!(certificate, CollapseCertificate::Symbolic);
                assert!(degrees.iter().all(|d| d.equals_input));
            }
            a => panic!("{a:?}"),
        }
    }

    #[test]
    fn trivial_group_and_hq() {
        let hq = SpectrumDescriptor::Hq;
        let page = e2_page(
            &ProfiniteDescriptor::trivial(),
            &hq,
            window(2, 2),
            2,
            &Config::sequential(),
        )
        .unwrap();
        assert!(page.collapsed_in_window);
        assert_eq!(page.cell(0, 0).unwrap().value.label(), "Q");
        let page = e2_page(
            &ProfiniteDescriptor::p_adic(5),
            &hq,
            window(2, 2),
            2,
            &Config::default(),
        )
        .unwrap();
        match collapse_and_abutment(&page, &hq) {
            Abutment::Collapsed { degrees, .. } => {
                let nonzero: Vec<_> = degrees.iter().filter(|d| !d.group.is_zero()).collect();
                assert_eq!(nonzero.len(), 1);
                assert_eq!(
                    (nonzero[0].t, nonzero[0].group.label()),
                    (0, "Q".to_string())
                );
            }
            a => panic!("{a:?}"),
        }
    }

    #[test]
    fn p_adic_fp_is_not_collapsed() {
        let k = SpectrumDescriptor::morava_k(1, 2).unwrap();
        let page = e2_page(
            &ProfiniteDescriptor::p_adic(2),
            &k,
            window(2, 2),
            3,
            &Config::default(),
        )
        .unwrap();
        assert!(!page.collapsed_in_window);
        assert_eq!(page.cell(1, 0).unwrap().value.label(), "Z/2");
        assert_eq!(page.cell(2, 0).unwrap().value.label(), "0");
        assert_eq!(page.cell(1, 0).unwrap().source, CellSource::DepthEvidence);
    }
}
