//! One function per sufficient criterion.

use std::collections::BTreeSet;

use super::statements::{colim, fixed_points, fixed_points_generic, phi, unit};
use super::{imported, Certificate, Conclusion, ConclusionKind, Rule, Status, Verdict};
use crate::abelian::{Decomposition, StructuredAbelian};
use crate::cohomology::{
    symbolic_cohomology, CohomologyEngine, ContinuousValue, SymbolicVerdict, VanishingReason,
};
use crate::error::Result;
use crate::exec;
use crate::primes::PrimeSet;
use crate::profinite::{
    check_cofinal, closed_subgroup, quotient, subgroup_descriptor, ClosedSubgroupSpec,
    CofinalCertificate, CofinalFamily, Cofinality, OpenNormalDescriptor, ProfiniteDescriptor,
};
use crate::scenario::Limits;
use crate::spectra::{is_bounded_above, torsion_profile, Boundedness, SpectrumDescriptor};

fn conclusion(kind: ConclusionKind, subject: impl Into<String>, statement: String) -> Conclusion {
    Conclusion {
        kind,
        subject: subject.into(),
        statement,
    }
}

fn cert(
    hypothesis: impl Into<String>,
    status: Status,
    detail: impl Into<String>,
    imports: Vec<&'static str>,
) -> Certificate {
    Certificate {
        hypothesis: hypothesis.into(),
        status,
        detail: detail.into(),
        imports,
    }
}

/// Every distinct value of `π_*(X)` with a degree where it occurs.
fn cover(x: &SpectrumDescriptor) -> Result<Option<Vec<(i64, StructuredAbelian)>>> {
    x.validate()?;
    Ok(x.homotopy().degree_cover())
}

fn list_values(values: &[(i64, StructuredAbelian)]) -> String {
    values
        .iter()
        .map(|(t, v)| format!("t={t}: {v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn reason_imports(r: &VanishingReason, out: &mut BTreeSet<&'static str>) {
    match r {
        VanishingReason::Divisible => {
            out.insert(imported::DIVISIBLE_VANISHING);
        }
        VanishingReason::CoprimeTorsion { primes } if !primes.is_empty() => {
            out.insert(imported::COPRIME_VANISHING);
        }
        VanishingReason::CoprimeTorsion { .. } => {}
        VanishingReason::DirectSum(rs) => rs.iter().for_each(|r| reason_imports(r, out)),
    }
}

/// Finite `G`.
pub fn check_finite(g: &ProfiniteDescriptor) -> Result<Verdict> {
    let shape = g.shape()?;
    let gl = g.label();
    if !shape.is_finite() {
        return Ok(Verdict::failed(
            Rule::FiniteG,
            format!("G = {gl} is infinite (#G = {})", g.order()?),
        ));
    }
    Ok(Verdict::applied(
        Rule::FiniteG,
        vec![conclusion(
            ConclusionKind::PhiWeakEquivalence,
            format!("G = {gl}"),
            phi("X", &gl),
        )],
        vec![cert(
            "G is finite",
            Status::Symbolic,
            format!("#G = {}", g.order()?),
            vec![],
        )],
    ))
}

/// `π_t(X) = 0` for all large `t`.
pub fn check_bounded(g: &ProfiniteDescriptor, x: &SpectrumDescriptor) -> Result<Verdict> {
    g.shape()?;
    x.validate()?;
    let (xl, gl) = (x.label(), g.label());
    match is_bounded_above(x) {
        Boundedness::Unbounded => Ok(Verdict::failed(
            Rule::BoundedAbove,
            format!("π_t({xl}) is nonzero in arbitrarily high degrees"),
        )),
        Boundedness::BoundedAbove { witness } => Ok(Verdict::applied(
            Rule::BoundedAbove,
            vec![
                conclusion(
                    ConclusionKind::PhiWeakEquivalence,
                    format!("G = {gl}"),
                    phi(&xl, &gl),
                ),
                conclusion(
                    ConclusionKind::ColimPresentation,
                    format!("G = {gl}"),
                    colim(&xl, &gl),
                ),
            ],
            vec![cert(
                "X is bounded above",
                Status::Symbolic,
                format!("π_t({xl}) = 0 for t > {witness}"),
                vec![],
            )],
        )),
    }
}

/// Every `π_t(X)` torsion-free divisible; the family is all open normal subgroups.
pub fn check_cor_divisible(g: &ProfiniteDescriptor, x: &SpectrumDescriptor) -> Result<Verdict> {
    g.shape()?;
    let Some(values) = cover(x)? else {
        return Ok(Verdict::failed(
            Rule::CorDivisible,
            "homotopy period too large to enumerate",
        ));
    };
    if let Some((t, v)) = values.iter().find(|(_, v)| !v.is_torsion_free_divisible()) {
        return Ok(Verdict::failed(
            Rule::CorDivisible,
            format!("π_{t}(X) = {v} is not torsion-free divisible"),
        ));
    }
    let (xl, gl) = (x.label(), g.label());
    let every = "every open normal N of G";
    Ok(Verdict::applied(
        Rule::CorDivisible,
        vec![
            conclusion(
                ConclusionKind::PhiWeakEquivalence,
                format!("G = {gl}"),
                phi(&xl, &gl),
            ),
            conclusion(
                ConclusionKind::ColimPresentation,
                format!("G = {gl}"),
                colim(&xl, &gl),
            ),
            conclusion(
                ConclusionKind::FixedPointsEquiv,
                every,
                fixed_points_generic(&xl, &gl, "N"),
            ),
            conclusion(ConclusionKind::UnitEquiv, every, unit(&xl, "N")),
            conclusion(
                ConclusionKind::UnitEquiv,
                format!("N = G = {gl}"),
                unit(&xl, &gl),
            ),
        ],
        vec![
            cert(
                "π_t(X) is torsion-free divisible for every t",
                Status::Symbolic,
                format!("all values of π_*: {}", list_values(&values)),
                vec![],
            ),
            cert(
                "H^s_c(N; π_t X) = 0 for every open normal N, s > 0 and every t",
                Status::Symbolic,
                "the family {U} is the set of all open normal subgroups, cofinal by definition",
                vec![imported::DIVISIBLE_VANISHING, imported::HFPSS_EXISTENCE],
            ),
        ],
    ))
}

/// `p ∤ #G` for `p ∈ J` and `π_t(X) ≅ divisible ⊕ J-torsion`, over `G` and a closed subgroup `H`.
pub fn check_cor_j(
    g: &ProfiniteDescriptor,
    h: Option<&ClosedSubgroupSpec>,
    x: &SpectrumDescriptor,
    j: Option<&PrimeSet>,
) -> Result<Verdict> {
    let order = g.order()?;
    let Some(values) = cover(x)? else {
        return Ok(Verdict::failed(
            Rule::CorJTorsion,
            "homotopy period too large to enumerate",
        ));
    };
    let j = match j {
        Some(j) => j.clone(),
        None => {
            let mut ps = BTreeSet::new();
            for (t, v) in &values {
                match v.torsion_primes() {
                    Some(s) => ps.extend(s),
                    None => {
                        return Ok(Verdict::failed(
                            Rule::CorJTorsion,
                            format!("cannot factor the torsion of π_{t}(X) = {v}"),
                        ))
                    }
                }
            }
            if ps.is_empty() {
                return Ok(Verdict::failed(
                    Rule::CorJTorsion,
                    "π_*(X) has no torsion and no J was given; J must be nonempty",
                ));
            }
            PrimeSet::Explicit(ps)
        }
    };
    let mut certificates = Vec::new();
    match (j.members(), order.support()) {
        (Some(ps), _) => {
            for p in ps {
                if order.divisible_by(p) {
                    return Ok(Verdict::failed(
                        Rule::CorJTorsion,
                        format!("{p} ∈ J divides #G = {order}"),
                    ));
                }
                certificates.push(cert(
                    format!("{p} ∤ #G"),
                    Status::Symbolic,
                    format!("p = {p} ∈ J = {j}, #G = {order}"),
                    vec![],
                ));
            }
        }
        (None, Some(support)) => {
            if let Some(p) = support.iter().find(|p| j.contains(**p)) {
                return Ok(Verdict::failed(
                    Rule::CorJTorsion,
                    format!("{p} ∈ J divides #G = {order}"),
                ));
            }
            certificates.push(cert(
                "p ∤ #G for every p ∈ J",
                Status::Symbolic,
                format!("J = {j} misses the support of #G = {order}"),
                vec![],
            ));
        }
        (None, None) => {
            return Ok(Verdict::failed(
                Rule::CorJTorsion,
                format!("J = {j} and #G = {order} both have infinite support"),
            ))
        }
    }
    let mut splits = Vec::new();
    for (t, v) in &values {
        match torsion_profile(x, *t, &j) {
            Decomposition::Split { divisible, torsion } => {
                splits.push(format!("t={t}: {divisible} ⊕ {torsion}"))
            }
            Decomposition::NotDecomposable => {
                return Ok(Verdict::failed(
                    Rule::CorJTorsion,
                    format!("π_{t}(X) = {v} is not a divisible group plus a J-torsion group"),
                ))
            }
        }
    }
    certificates.push(cert(
        "π_t(X) ≅ D_t ⊕ T_t with D_t torsion-free divisible and T_t J-torsion, for every t",
        Status::Symbolic,
        splits.join(", "),
        vec![],
    ));
    let mut ambients = vec![(g.clone(), "G")];
    if let Some(spec) = h {
        let sub = closed_subgroup(g, spec)?;
        if sub != *g {
            certificates.push(cert(
                "H is a closed subgroup of G, so no p ∈ J divides #H",
                Status::Symbolic,
                format!("H = {}, #H = {}", sub.label(), sub.order()?),
                vec![],
            ));
            ambients.push((sub, "H"));
        }
    }
    certificates.push(cert(
        "H^s_c(N; π_t X) = 0 for every open normal N of each ambient group, s > 0 and every t",
        Status::Symbolic,
        "π_t X splits as divisible plus J-torsion and no p ∈ J divides the order of any closed subgroup of G",
        vec![
            imported::DIVISIBLE_VANISHING,
            imported::COPRIME_VANISHING,
            imported::HFPSS_EXISTENCE,
        ],
    ));
    let xl = x.label();
    let mut conclusions = Vec::new();
    for (a, name) in &ambients {
        let al = a.label();
        let subject = format!("{name} = {al}");
        let every = format!("every open normal N of {name}");
        conclusions.extend([
            conclusion(
                ConclusionKind::PhiWeakEquivalence,
                subject.clone(),
                phi(&xl, &al),
            ),
            conclusion(
                ConclusionKind::ColimPresentation,
                subject.clone(),
                colim(&xl, &al),
            ),
            conclusion(ConclusionKind::UnitEquiv, subject, unit(&xl, &al)),
            conclusion(ConclusionKind::UnitEquiv, every.clone(), unit(&xl, "N")),
            conclusion(
                ConclusionKind::FixedPointsEquiv,
                every,
                fixed_points_generic(&xl, &al, "N"),
            ),
        ]);
    }
    Ok(Verdict::applied(
        Rule::CorJTorsion,
        conclusions,
        certificates,
    ))
}

fn dedup(reps: Vec<OpenNormalDescriptor>) -> Vec<OpenNormalDescriptor> {
    let mut out: Vec<OpenNormalDescriptor> = Vec::with_capacity(reps.len());
    for r in reps {
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// A cofinal family whose members have vanishing higher cohomology in every degree.
pub fn check_vanishing(
    engine: &CohomologyEngine,
    g: &ProfiniteDescriptor,
    x: &SpectrumDescriptor,
    family: &CofinalFamily,
    limits: &Limits,
) -> Result<Verdict> {
    x.validate()?;
    let shape = g.shape()?;
    let depth = limits.tower_depth;
    let flabel = family.label(g);
    let mut certificates = Vec::new();
    match check_cofinal(family, g, depth)? {
        Cofinality::RefutedAt { level, witness } => {
            return Ok(Verdict::failed(
                Rule::Vanishing,
                format!(
                    "{flabel} is not cofinal: the canonical kernel {} at level {level} contains no member",
                    witness.label(&shape)
                ),
            ))
        }
        Cofinality::Certified(c) => {
            let status = match c {
                CofinalCertificate::Symbolic { .. } => Status::Symbolic,
                CofinalCertificate::DepthChecked { depth } => Status::DepthChecked { depth },
            };
            certificates.push(cert(
                format!("{flabel} is cofinal in the open normal subgroups of G"),
                status,
                c.to_string(),
                vec![],
            ));
        }
    }
    let (values, scope) = match x.homotopy().degree_cover() {
        Some(c) => (c, "every t (these degrees cover all values of π_*)"),
        None => {
            let mut vs: Vec<(i64, StructuredAbelian)> = Vec::new();
            for t in limits.window().degrees() {
                let v = crate::spectra::homotopy_of(x, t);
                if !vs.iter().any(|(_, w)| *w == v) {
                    vs.push((t, v));
                }
            }
            (vs, "t in the window only")
        }
    };
    let reps = dedup(family.representatives(g, depth)?);
    let subs = reps
        .iter()
        .map(|u| subgroup_descriptor(g, u))
        .collect::<Result<Vec<_>>>()?;

    let symbolic = family.common_member_order(g)?.and_then(|order| {
        let mut reasons = Vec::new();
        for (_, v) in &values {
            match symbolic_cohomology(&order, v, 1) {
                SymbolicVerdict::Vanishes(r) => reasons.push(r),
                _ => return None,
            }
        }
        Some((order, reasons))
    });
    match symbolic {
        Some((order, reasons)) => {
            let mut imports = BTreeSet::new();
            reasons.iter().for_each(|r| reason_imports(r, &mut imports));
            let mut imports: Vec<_> = imports.into_iter().collect();
            imports.push(imported::HFPSS_EXISTENCE);
            let why: Vec<String> = values
                .iter()
                .zip(&reasons)
                .map(|((t, v), r)| format!("t={t}: {v} ({})", r.describe()))
                .collect();
            certificates.push(cert(
                "H^s_c(U; π_t X) = 0 for every U in the family, s > 0 and every t",
                Status::Symbolic,
                format!("every member has order {order}; {}", why.join(", ")),
                imports,
            ));
        }
        None => {
            let mut exact = true;
            for s in 1..=limits.s_max {
                let jobs: Vec<(usize, usize)> = (0..subs.len())
                    .flat_map(|i| (0..values.len()).map(move |k| (i, k)))
                    .collect();
                let results = exec::try_map(engine.config.execution, jobs.clone(), |(i, k)| {
                    engine.continuous_cohomology(&subs[i], &values[k].1, s, depth)
                })?;
                for ((i, k), r) in jobs.into_iter().zip(results) {
                    let (t, v) = &values[k];
                    let at = format!("U = {}, t = {t}", reps[i].label(&shape));
                    let ul = subs[i].label();
                    match &r.value {
                        ContinuousValue::Determined { group } if group.is_zero() => {
                            exact &= r.is_exact()
                        }
                        ContinuousValue::Determined { group } => {
                            return Ok(Verdict::failed(
                                Rule::Vanishing,
                                format!("H^{s}_c({ul}; {v}) = {group} ≠ 0 ({at})"),
                            ))
                        }
                        ContinuousValue::UndeterminedAt { depth } => return Ok(Verdict::failed(
                            Rule::Vanishing,
                            format!(
                                "H^{s}_c({ul}; {v}) is undetermined at tower depth {depth} ({at})"
                            ),
                        )),
                    }
                }
            }
            let all_members = matches!(family, CofinalFamily::Declared(v) if v.len() <= reps.len());
            let status = if exact && all_members {
                Status::Symbolic
            } else {
                Status::DepthChecked { depth }
            };
            let labels: Vec<String> = reps.iter().map(|u| u.label(&shape)).collect();
            certificates.push(cert(
                "H^s_c(U; π_t X) = 0 for every U in the family, s > 0 and every t",
                status,
                format!(
                    "computed for the members {} with 1 ≤ s ≤ {}, {scope}, tower depth {depth}",
                    labels.join(", "),
                    limits.s_max
                ),
                vec![imported::HFPSS_EXISTENCE],
            ));
        }
    }

    let (xl, gl) = (x.label(), g.label());
    let every = format!("every U in {flabel}");
    let mut conclusions = vec![
        conclusion(
            ConclusionKind::PhiWeakEquivalence,
            format!("G = {gl}"),
            phi(&xl, &gl),
        ),
        conclusion(
            ConclusionKind::ColimPresentation,
            format!("G = {gl}"),
            colim(&xl, &gl),
        ),
        conclusion(
            ConclusionKind::FixedPointsEquiv,
            every.clone(),
            fixed_points_generic(&xl, &gl, "U"),
        ),
        conclusion(ConclusionKind::UnitEquiv, every, unit(&xl, "U")),
    ];
    for (u, sub) in reps.iter().zip(&subs) {
        let subject = format!("U = {}", u.label(&shape));
        let q = quotient(g, u, &engine.config.budgets)
            .map(|q| q.label())
            .unwrap_or_else(|_| format!("{gl}/U"));
        conclusions.push(conclusion(
            ConclusionKind::FixedPointsEquiv,
            subject.clone(),
            fixed_points(&xl, &gl, &q),
        ));
        conclusions.push(conclusion(
            ConclusionKind::UnitEquiv,
            subject,
            unit(&xl, &sub.label()),
        ));
    }
    Ok(Verdict::applied(Rule::Vanishing, conclusions, certificates))
}
