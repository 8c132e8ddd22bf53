//! Decides which sufficient criterion certifies that `Φ` is a weak
//! equivalence for a scenario, and what else it licenses.
//!
//! The checker only ever proves sufficiency. When no rule applies the
//! verdict is inconclusive; the one negative statement it can make is the
//! rank obstruction of [`refute_equivalence`], which is about `X ≃ X^{hG}`
//! and nothing else.

mod refute;
mod rules;
mod statements;

use serde::Serialize;

use crate::cohomology::CohomologyEngine;
use crate::error::Result;
use crate::scenario::Scenario;

pub use refute::{refute_equivalence, RankRefutation, Refutation};
pub use rules::{check_bounded, check_cor_divisible, check_cor_j, check_finite, check_vanishing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    FiniteG,
    BoundedAbove,
    Vanishing,
    CorDivisible,
    CorJTorsion,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConclusionKind {
    PhiWeakEquivalence,
    ColimPresentation,
    FixedPointsEquiv,
    UnitEquiv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub kind: ConclusionKind,
    /// The subgroup or ambient group the statement is about.
    pub subject: String,
    pub statement: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Symbolic,
    DepthChecked { depth: u32 },
}

/// Results used as black boxes: hypotheses are checked, conclusions trusted.
pub mod imported {
    pub const DIVISIBLE_VANISHING: &str =
        "H^s_c(U; D) = 0 for s > 0 when D is torsion-free divisible with trivial action";
    pub const COPRIME_VANISHING: &str =
        "H^s_c(U; T) = 0 for s > 0 when T is torsion at primes not dividing #U (restriction to the trivial subgroup is injective)";
    pub const HFPSS_EXISTENCE: &str =
        "the homotopy fixed point spectral sequence H^s_c(U; π_t X) ⇒ π_{t-s}(X^{hU}) exists and converges (recorded, not verified)";
    pub const MORAVA_RANK: &str =
        "K(n)^*(BZ/p^r) ≅ K(n)^*[x]/(x^{p^{nr}}), a free K(n)^*-module of rank p^{nr}";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub hypothesis: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub imports: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub rule: Rule,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub rule: Rule,
    pub conclusions: Vec<Conclusion>,
    pub certificates: Vec<Certificate>,
    pub obstructions: Vec<RankRefutation>,
    /// Why each rule tried before (or instead of) the applied one failed.
    pub failures: Vec<Failure>,
    /// Later rules in the priority order that also apply.
    pub also_applicable: Vec<Rule>,
    #[serde(skip)]
    pub diagnostics: Vec<String>,
}

impl Verdict {
    fn applied(rule: Rule, conclusions: Vec<Conclusion>, certificates: Vec<Certificate>) -> Self {
        Verdict {
            rule,
            conclusions,
            certificates,
            obstructions: Vec::new(),
            failures: Vec::new(),
            also_applicable: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn failed(rule: Rule, reason: impl Into<String>) -> Self {
        Verdict {
            failures: vec![Failure {
                rule,
                reason: reason.into(),
            }],
            ..Verdict::applied(Rule::None, Vec::new(), Vec::new())
        }
    }

    pub fn applies(&self) -> bool {
        self.rule != Rule::None
    }

    /// Whether some conclusion is exactly `statement`.
    pub fn concludes(&self, statement: &str) -> bool {
        self.conclusions.iter().any(|c| c.statement == statement)
    }
}

/// Evaluates every rule in the fixed priority order and merges the rank refutation.
pub fn run_all(engine: &CohomologyEngine, scenario: &Scenario) -> Result<Verdict> {
    scenario.validate()?;
    let g = &scenario.group;
    let x = &scenario.spectrum;
    let family = scenario.family_or_canonical();
    let order = [
        Rule::FiniteG,
        Rule::CorDivisible,
        Rule::CorJTorsion,
        Rule::Vanishing,
        Rule::BoundedAbove,
    ];
    let run = |rule: Rule| -> Result<Verdict> {
        match rule {
            Rule::FiniteG => check_finite(g),
            Rule::CorDivisible => check_cor_divisible(g, x),
            Rule::CorJTorsion => {
                check_cor_j(g, scenario.subgroup.as_ref(), x, scenario.primes_j.as_ref())
            }
            Rule::Vanishing => check_vanishing(engine, g, x, &family, &scenario.limits),
            Rule::BoundedAbove => check_bounded(g, x),
            Rule::None => unreachable!(),
        }
    };
    let mut failures = Vec::new();
    let mut chosen: Option<Verdict> = None;
    let mut also = Vec::new();
    let mut diagnostics = Vec::new();
    for rule in order {
        if chosen.is_some() {
            match run(rule) {
                Ok(v) if v.applies() => also.push(rule),
                Ok(_) => {}
                Err(e) => diagnostics.push(format!("{rule:?} not evaluated: {e}")),
            }
            continue;
        }
        let v = run(rule)?;
        if v.applies() {
            chosen = Some(v);
        } else {
            failures.extend(v.failures);
        }
    }
    let mut verdict =
        chosen.unwrap_or_else(|| Verdict::applied(Rule::None, Vec::new(), Vec::new()));
    verdict.failures = failures;
    verdict.also_applicable = also;
    verdict.diagnostics.extend(diagnostics);
    match refute_equivalence(g, x)? {
        Refutation::Refuted(r) => verdict.obstructions.push(r),
        Refutation::NoObstructionFound { reason } => verdict
            .diagnostics
            .push(format!("no rank obstruction: {reason}")),
    }
    Ok(verdict)
}
