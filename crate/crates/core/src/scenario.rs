//! Scenario files: a group, a spectrum, optional family / closed subgroup /
//! prime set, and computation limits.

use serde::{Deserialize, Serialize};

use crate::config::{Budgets, Config, Execution};
use crate::error::{Error, Result};
use crate::hfpss::Window;
use crate::primes::{is_prime, PrimeSet};
use crate::profinite::{closed_subgroup, ClosedSubgroupSpec, CofinalFamily, ProfiniteDescriptor};
use crate::spectra::SpectrumDescriptor;

pub const SCENARIO_FORMAT_VERSION: &str = "1";

/// Hard ceilings for user-supplied limits.
const MAX_S: usize = 64;
const MAX_T_SPAN: i64 = 10_000;
const MAX_DEPTH: u32 = 16;
const MAX_BUDGETS: Budgets = Budgets {
    table_size: 1_000_000,
    bar_cells: 50_000_000,
    matrix_entries: 1_000_000_000,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetLimits {
    #[serde(default = "BudgetLimits::table_size")]
    pub table_size: u64,
    #[serde(default = "BudgetLimits::bar_cells")]
    pub bar_cells: u64,
    #[serde(default = "BudgetLimits::matrix_entries")]
    pub matrix_entries: u64,
}

impl BudgetLimits {
    fn table_size() -> u64 {
        Budgets::default().table_size
    }
    fn bar_cells() -> u64 {
        Budgets::default().bar_cells
    }
    fn matrix_entries() -> u64 {
        Budgets::default().matrix_entries
    }
}

impl From<BudgetLimits> for Budgets {
    fn from(b: BudgetLimits) -> Self {
        Budgets {
            table_size: b.table_size,
            bar_cells: b.bar_cells,
            matrix_entries: b.matrix_entries,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "Limits::default_s_max")]
    pub s_max: usize,
    #[serde(default = "Limits::default_t_min")]
    pub t_min: i64,
    #[serde(default = "Limits::default_t_max")]
    pub t_max: i64,
    #[serde(default = "Limits::default_depth")]
    pub tower_depth: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<BudgetLimits>,
}

impl Limits {
    fn default_s_max() -> usize {
        4
    }
    fn default_t_min() -> i64 {
        -8
    }
    fn default_t_max() -> i64 {
        8
    }
    fn default_depth() -> u32 {
        3
    }

    pub fn window(&self) -> Window {
        Window {
            s_max: self.s_max,
            t_min: self.t_min,
            t_max: self.t_max,
        }
    }

    pub fn budgets(&self) -> Budgets {
        self.budgets.map(Budgets::from).unwrap_or_default()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ScenarioInvalid(m));
        if self.s_max == 0 || self.s_max > MAX_S {
            return bad(format!("limits.s_max must be in 1..={MAX_S}"));
        }
        if self.t_min > self.t_max {
            return bad("limits.t_min exceeds limits.t_max".into());
        }
        if self.t_max - self.t_min > MAX_T_SPAN {
            return bad(format!("limits: t range wider than {MAX_T_SPAN}"));
        }
        if self.tower_depth == 0 || self.tower_depth > MAX_DEPTH {
            return bad(format!("limits.tower_depth must be in 1..={MAX_DEPTH}"));
        }
        let b = self.budgets();
        if b.table_size == 0 || b.bar_cells == 0 || b.matrix_entries == 0 {
            return bad("budgets must be positive".into());
        }
        if b.table_size > MAX_BUDGETS.table_size
            || b.bar_cells > MAX_BUDGETS.bar_cells
            || b.matrix_entries > MAX_BUDGETS.matrix_entries
        {
            return bad("budgets exceed the global ceilings".into());
        }
        Ok(())
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            s_max: Self::default_s_max(),
            t_min: Self::default_t_min(),
            t_max: Self::default_t_max(),
            tower_depth: Self::default_depth(),
            budgets: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<String>,
    pub group: ProfiniteDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<ClosedSubgroupSpec>,
    pub spectrum: SpectrumDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<CofinalFamily>,
    #[serde(default, rename = "primes_J", skip_serializing_if = "Option::is_none")]
    pub primes_j: Option<PrimeSet>,
    #[serde(default)]
    pub limits: Limits,
}

impl Scenario {
    pub fn new(group: ProfiniteDescriptor, spectrum: SpectrumDescriptor) -> Self {
        Scenario {
            format_version: None,
            group,
            subgroup: None,
            spectrum,
            family: None,
            primes_j: None,
            limits: Limits::default(),
        }
    }

    /// Parses and validates a scenario document.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario =
            serde_json::from_str(text).map_err(|e| Error::ScenarioInvalid(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |e: Error| match e {
            Error::ScenarioInvalid(m) => Error::ScenarioInvalid(m),
            other => Error::ScenarioInvalid(other.to_string()),
        };
        if let Some(v) = &self.format_version {
            if v != SCENARIO_FORMAT_VERSION {
                return Err(Error::ScenarioInvalid(format!(
                    "unsupported format_version `{v}`"
                )));
            }
        }
        self.limits.validate()?;
        self.group.shape().map_err(invalid)?;
        self.spectrum.validate().map_err(invalid)?;
        if let Some(f) = &self.family {
            f.validate(&self.group).map_err(invalid)?;
        }
        if let Some(h) = &self.subgroup {
            closed_subgroup(&self.group, h).map_err(invalid)?;
        }
        if let Some(j) = &self.primes_j {
            if j.is_empty() {
                return Err(Error::ScenarioInvalid("primes_J is empty".into()));
            }
            if let Some(ps) = j.members() {
                if let Some(p) = ps.iter().find(|p| !is_prime(**p)) {
                    return Err(Error::ScenarioInvalid(format!(
                        "primes_J: {p} is not prime"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn family_or_canonical(&self) -> CofinalFamily {
        self.family.clone().unwrap_or_default()
    }

    pub fn config(&self, execution: Execution) -> Config {
        Config {
            budgets: self.limits.budgets(),
            execution,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_gets_default_limits() {
        let s =
            Scenario::from_json(r#"{"group": {"procyclic": {"p": 2}}, "spectrum": "hq"}"#).unwrap();
        assert_eq!(s.limits, Limits::default());
        assert_eq!(
            s.family_or_canonical(),
            CofinalFamily::Canonical { from: 0 }
        );
    }

    #[test]
    fn rejections() {
        for bad in [
            "{}",
            r#"{"group": {"procyclic": {"p": 2}}, "spectrum": "hq", "extra": 1}"#,
            r#"{"group": {"procyclic": {"p": 4}}, "spectrum": "hq"}"#,
            r#"{"group": {"procyclic": {"p": 2}}, "spectrum": "hq", "limits": {"s_max": 0}}"#,
            r#"{"group": {"procyclic": {"p": 2}}, "spectrum": "hq", "primes_J": []}"#,
            r#"{"group": {"procyclic": {"p": 2}}, "spectrum": {"morava_k": {"n": 0, "p": 2}}}"#,
        ] {
            assert!(
                matches!(Scenario::from_json(bad), Err(Error::ScenarioInvalid(_))),
                "{bad}"
            );
        }
    }
}
