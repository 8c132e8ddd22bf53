//! Cofinal families of open normal subgroups.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::descriptor::{
    procyclic_label, subgroup_descriptor, FiniteSub, OpenNormalDescriptor, ProfiniteDescriptor,
    Shape, Slot,
};
use super::supernatural::SupernaturalNumber;
use super::tower::{canonical_kernel, canonical_kernels};
use crate::error::{Error, Result};

/// Exponent rule of a chain pattern at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternExponent {
    /// `m + offset` for the chain parameter `m`.
    Vary {
        offset: u32,
    },
    Fixed(u32),
}

impl PatternExponent {
    fn at(self, m: u32) -> u32 {
        match self {
            PatternExponent::Vary { offset } => m + offset,
            PatternExponent::Fixed(e) => e,
        }
    }
}

impl Serialize for PatternExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PatternExponent::Vary { offset: 0 } => s.serialize_str("m"),
            PatternExponent::Vary { offset } => s.serialize_str(&format!("m+{offset}")),
            PatternExponent::Fixed(e) => s.serialize_u32(*e),
        }
    }
}

impl<'de> Deserialize<'de> for PatternExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u32),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(e) => Ok(PatternExponent::Fixed(e)),
            Repr::Word(w) => {
                let w = w.replace(' ', "");
                if w == "m" {
                    return Ok(PatternExponent::Vary { offset: 0 });
                }
                w.strip_prefix("m+")
                    .and_then(|o| o.parse().ok())
                    .map(|offset| PatternExponent::Vary { offset })
                    .ok_or_else(|| {
                        serde::de::Error::custom(format!(
                            "expected \"m\", \"m+k\" or a number, got `{w}`"
                        ))
                    })
            }
        }
    }
}

/// The chain `m ↦ N_m` for `m ≥ start`, with `N_m` given by per-prime exponent rules
/// and fixed finite parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainPattern {
    #[serde(default)]
    pub procyclic: BTreeMap<u64, PatternExponent>,
    #[serde(default)]
    pub finite: Vec<FiniteSub>,
    #[serde(default)]
    pub start: u32,
}

impl ChainPattern {
    pub fn member(&self, m: u32) -> OpenNormalDescriptor {
        OpenNormalDescriptor::new(
            self.procyclic.iter().map(|(p, e)| (*p, e.at(m))).collect(),
            self.finite.clone(),
        )
    }

    /// Smallest `m ≥ start` whose member lies in `target`, if any.
    fn first_member_inside(
        &self,
        target: &OpenNormalDescriptor,
        shape: &Shape,
    ) -> Result<Option<u32>> {
        let mut m = self.start;
        for (p, need) in &target.procyclic {
            if let Some(PatternExponent::Vary { offset }) = self.procyclic.get(p) {
                m = m.max(need.saturating_sub(*offset));
            }
        }
        let member = self.member(m).normalized(shape)?;
        Ok(member.is_subgroup_of(target, shape).then_some(m))
    }

    pub fn label(&self, shape: &Shape) -> String {
        let mut parts = Vec::new();
        let mut fi = 0;
        for s in &shape.slots {
            match s {
                Slot::Finite(g) => {
                    parts.push(match self.finite.get(fi).unwrap_or(&FiniteSub::Full) {
                        FiniteSub::Full => g.label(),
                        FiniteSub::Identity => "{e}".into(),
                        FiniteSub::Elements(e) => format!("H{}≤{}", e.len(), g.label()),
                    });
                    fi += 1;
                }
                Slot::Procyclic { p, shift } => parts.push(match self.procyclic.get(p) {
                    None => procyclic_label(*p, *shift),
                    Some(PatternExponent::Fixed(e)) => procyclic_label(*p, shift + e),
                    Some(PatternExponent::Vary { offset }) => match shift + offset {
                        0 => format!("{p}^m Z_{p}"),
                        c => format!("{p}^(m+{c}) Z_{p}"),
                    },
                }),
                Slot::Family { .. } => parts.push("∏ Z_p".into()),
            }
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" × ")
        };
        format!("{{{body} : m ≥ {}}}", self.start)
    }
}

/// A family `{U}` of open normal subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CofinalFamily {
    /// Kernels of the canonical tower from level `from` on.
    Canonical {
        from: u32,
    },
    /// An explicit decreasing chain.
    Declared(Vec<OpenNormalDescriptor>),
    Pattern(ChainPattern),
}

impl Default for CofinalFamily {
    fn default() -> Self {
        CofinalFamily::Canonical { from: 0 }
    }
}

impl Serialize for CofinalFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CofinalFamily::Canonical { from: 0 } => s.serialize_str("canonical"),
            CofinalFamily::Canonical { from } => {
                serde_json::json!({ "canonical_from": from }).serialize(s)
            }
            CofinalFamily::Declared(v) => v.serialize(s),
            CofinalFamily::Pattern(p) => serde_json::json!({ "pattern": p }).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CofinalFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        // through `Value` so integer map keys inside members parse
        let v = serde_json::Value::deserialize(d)?;
        let err = |e: serde_json::Error| D::Error::custom(e.to_string());
        match v {
            serde_json::Value::String(w) if w == "canonical" => {
                Ok(CofinalFamily::Canonical { from: 0 })
            }
            serde_json::Value::String(w) => Err(D::Error::custom(format!("unknown family `{w}`"))),
            serde_json::Value::Array(_) => serde_json::from_value(v)
                .map(CofinalFamily::Declared)
                .map_err(err),
            serde_json::Value::Object(mut m) if m.len() == 1 => {
                if let Some(p) = m.remove("pattern") {
                    serde_json::from_value(p)
                        .map(CofinalFamily::Pattern)
                        .map_err(err)
                } else if let Some(f) = m.remove("canonical_from") {
                    serde_json::from_value(f)
                        .map(|from| CofinalFamily::Canonical { from })
                        .map_err(err)
                } else {
                    Err(D::Error::custom(
                        "expected \"pattern\" or \"canonical_from\"",
                    ))
                }
            }
            _ => Err(D::Error::custom(
                "expected \"canonical\", a chain array or {\"pattern\": ...}",
            )),
        }
    }
}

/// How cofinality was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CofinalCertificate {
    /// Proven from the shape of the family.
    Symbolic { reason: String },
    /// Every canonical kernel up to `depth` contains a member.
    DepthChecked { depth: u32 },
}

impl fmt::Display for CofinalCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CofinalCertificate::Symbolic { reason } => write!(f, "symbolic: {reason}"),
            CofinalCertificate::DepthChecked { depth } => write!(f, "depth-checked({depth})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cofinality {
    Certified(CofinalCertificate),
    /// The canonical kernel at `level` contains no member of the family.
    RefutedAt {
        level: u32,
        witness: OpenNormalDescriptor,
    },
}

impl CofinalFamily {
    pub fn label(&self, g: &ProfiniteDescriptor) -> String {
        let Ok(shape) = g.shape() else {
            return "<invalid family>".into();
        };
        match self {
            CofinalFamily::Canonical { from: 0 } => "canonical tower kernels".into(),
            CofinalFamily::Canonical { from } => {
                format!("canonical tower kernels from level {from}")
            }
            CofinalFamily::Declared(v) => {
                let ms: Vec<String> = v.iter().map(|n| n.label(&shape)).collect();
                format!("{{{}}}", ms.join(", "))
            }
            CofinalFamily::Pattern(p) => p.label(&shape),
        }
    }

    /// Validates members against `g`; a declared chain must decrease.
    pub fn validate(&self, g: &ProfiniteDescriptor) -> Result<()> {
        let shape = g.shape()?;
        match self {
            CofinalFamily::Canonical { .. } => Ok(()),
            CofinalFamily::Pattern(p) => p.member(p.start).normalized(&shape).map(|_| ()),
            CofinalFamily::Declared(v) => {
                if v.is_empty() {
                    return Err(Error::InvalidInput("declared family is empty".into()));
                }
                let ms = v
                    .iter()
                    .map(|n| n.normalized(&shape))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(i) = (1..ms.len()).find(|&i| !ms[i].is_subgroup_of(&ms[i - 1], &shape))
                {
                    return Err(Error::InvalidInput(format!(
                        "declared family is not a decreasing chain at position {i}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Representative members: the first `count` members of the chain.
    pub fn representatives(
        &self,
        g: &ProfiniteDescriptor,
        count: u32,
    ) -> Result<Vec<OpenNormalDescriptor>> {
        let shape = g.shape()?;
        match self {
            CofinalFamily::Canonical { from } => (*from..from + count)
                .map(|j| canonical_kernel(&shape, j).normalized(&shape))
                .collect(),
            CofinalFamily::Declared(v) => v
                .iter()
                .take(count as usize)
                .map(|n| n.normalized(&shape))
                .collect(),
            CofinalFamily::Pattern(p) => (p.start..p.start + count)
                .map(|m| p.member(m).normalized(&shape))
                .collect(),
        }
    }

    /// The supernatural order shared by every member, when they all have the same one.
    ///
    /// Procyclic exponents never change `p^∞` and finite parts are fixed
    /// along canonical and pattern chains, so only declared lists need a check.
    pub fn common_member_order(
        &self,
        g: &ProfiniteDescriptor,
    ) -> Result<Option<SupernaturalNumber>> {
        let members = match self {
            CofinalFamily::Declared(v) => v.clone(),
            _ => self.representatives(g, 1)?,
        };
        let mut orders = members
            .iter()
            .map(|n| subgroup_descriptor(g, n)?.order())
            .collect::<Result<Vec<_>>>()?;
        orders.dedup();
        Ok((orders.len() == 1).then(|| orders.pop().unwrap()))
    }
}

/// Decides whether `family` is cofinal in the open normal subgroups of `g`.
pub fn check_cofinal(
    family: &CofinalFamily,
    g: &ProfiniteDescriptor,
    depth: u32,
) -> Result<Cofinality> {
    family.validate(g)?;
    let shape = g.shape()?;
    match family {
        CofinalFamily::Canonical { .. } => {
            return Ok(Cofinality::Certified(CofinalCertificate::Symbolic {
                reason: "canonical tower kernels form a neighborhood basis of the identity".into(),
            }))
        }
        CofinalFamily::Pattern(p) => {
            if let Some(reason) = pattern_is_basis(p, &shape) {
                return Ok(Cofinality::Certified(CofinalCertificate::Symbolic {
                    reason,
                }));
            }
        }
        CofinalFamily::Declared(v) => {
            if shape.is_finite() {
                let last = v.last().expect("validated").normalized(&shape)?;
                if last.is_subgroup_of(&canonical_kernel(&shape, 0).normalized(&shape)?, &shape) {
                    return Ok(Cofinality::Certified(CofinalCertificate::Symbolic {
                        reason: "the family contains the trivial subgroup of a finite group".into(),
                    }));
                }
            }
        }
    }
    for (j, k) in canonical_kernels(g, depth)?.into_iter().enumerate() {
        if !contains_member(family, &k, &shape)? {
            return Ok(Cofinality::RefutedAt {
                level: j as u32,
                witness: k,
            });
        }
    }
    Ok(Cofinality::Certified(CofinalCertificate::DepthChecked {
        depth,
    }))
}

fn pattern_is_basis(p: &ChainPattern, shape: &Shape) -> Option<String> {
    if shape.has_family() {
        return None;
    }
    let primes = shape.procyclic_primes();
    let all_vary = primes
        .iter()
        .all(|q| matches!(p.procyclic.get(q), Some(PatternExponent::Vary { .. })));
    let finite_trivial =
        (0..shape.finite_slots()).all(|i| p.finite.get(i) == Some(&FiniteSub::Identity));
    (all_vary && finite_trivial).then(|| {
        "every procyclic factor runs through its neighborhood basis p^m Z_p with trivial finite part".to_string()
    })
}

fn contains_member(
    family: &CofinalFamily,
    target: &OpenNormalDescriptor,
    shape: &Shape,
) -> Result<bool> {
    Ok(match family {
        CofinalFamily::Canonical { from } => {
            let k = family_bound(target, shape).max(*from);
            canonical_kernel(shape, k)
                .normalized(shape)?
                .is_subgroup_of(target, shape)
        }
        CofinalFamily::Declared(v) => v.iter().try_fold(false, |found, n| {
            Ok::<_, Error>(found || n.normalized(shape)?.is_subgroup_of(target, shape))
        })?,
        CofinalFamily::Pattern(p) => p.first_member_inside(target, shape)?.is_some(),
    })
}

/// A canonical level whose kernel is inside `target`, when one exists.
fn family_bound(target: &OpenNormalDescriptor, shape: &Shape) -> u32 {
    let explicit = shape.procyclic_primes();
    let mut j = target.procyclic.values().copied().max().unwrap_or(0);
    let family: Vec<u64> = target
        .procyclic
        .keys()
        .copied()
        .filter(|p| !explicit.contains(p))
        .collect();
    if let Some(&largest) = family.iter().max() {
        let mut k = 1;
        while !shape.family_primes(k).contains(&largest) {
            k += 1;
        }
        j = j.max(k as u32);
    }
    j
}

/// The members of `family` contained in `u_prime`, which form a cofinal family of open normal subgroups of `U′`.
pub fn induced_family(
    g: &ProfiniteDescriptor,
    u_prime: &OpenNormalDescriptor,
    family: &CofinalFamily,
) -> Result<CofinalFamily> {
    family.validate(g)?;
    let shape = g.shape()?;
    let u = u_prime.normalized(&shape)?;
    let none = || Error::InvalidInput("no member of the family lies in the given subgroup".into());
    match family {
        CofinalFamily::Canonical { from } => {
            let j = family_bound(&u, &shape).max(*from);
            if !canonical_kernel(&shape, j)
                .normalized(&shape)?
                .is_subgroup_of(&u, &shape)
            {
                return Err(none());
            }
            Ok(CofinalFamily::Canonical { from: j })
        }
        CofinalFamily::Pattern(p) => {
            let m = p.first_member_inside(&u, &shape)?.ok_or_else(none)?;
            Ok(CofinalFamily::Pattern(ChainPattern {
                start: m,
                ..p.clone()
            }))
        }
        CofinalFamily::Declared(v) => {
            let mut tail = Vec::new();
            for n in v {
                let n = n.normalized(&shape)?;
                if n.is_subgroup_of(&u, &shape) {
                    tail.push(n);
                }
            }
            if tail.is_empty() {
                return Err(none());
            }
            Ok(CofinalFamily::Declared(tail))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::FiniteGroupTable;

    fn proper_sub_group() -> ProfiniteDescriptor {
        ProfiniteDescriptor::product([
            ProfiniteDescriptor::p_adic(2),
            ProfiniteDescriptor::cyclic(3),
        ])
    }

    fn pattern(finite: FiniteSub) -> CofinalFamily {
        CofinalFamily::Pattern(ChainPattern {
            procyclic: [(2, PatternExponent::Vary { offset: 0 })]
                .into_iter()
                .collect(),
            finite: vec![finite],
            start: 0,
        })
    }

    #[test]
    fn neighborhood_basis_is_certified() {
        let r = check_cofinal(&pattern(FiniteSub::Identity), &proper_sub_group(), 3).unwrap();
        assert!(matches!(
            r,
            Cofinality::Certified(CofinalCertificate::Symbolic { .. })
        ));
        assert_eq!(
            pattern(FiniteSub::Identity).label(&proper_sub_group()),
            "{2^m Z_2 × {e} : m ≥ 0}"
        );
    }

    #[test]
    fn full_finite_part_is_refuted() {
        let g = proper_sub_group();
        let r = check_cofinal(&pattern(FiniteSub::Full), &g, 3).unwrap();
        match r {
            Cofinality::RefutedAt { level, witness } => {
                assert_eq!(level, 0);
                assert_eq!(witness.label(&g.shape().unwrap()), "Z_2 × {e}");
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn whole_finite_group_is_refuted() {
        let g = ProfiniteDescriptor::Finite(FiniteGroupTable::named("S3").unwrap());
        let fam = CofinalFamily::Declared(vec![OpenNormalDescriptor::full()]);
        assert!(matches!(
            check_cofinal(&fam, &g, 2).unwrap(),
            Cofinality::RefutedAt { level: 0, .. }
        ));
        let fam = CofinalFamily::Declared(vec![
            OpenNormalDescriptor::full(),
            OpenNormalDescriptor::new(BTreeMap::new(), vec![FiniteSub::Identity]),
        ]);
        assert!(matches!(
            check_cofinal(&fam, &g, 2).unwrap(),
            Cofinality::Certified(CofinalCertificate::Symbolic { .. })
        ));
    }

    #[test]
    fn declared_chain_gets_depth_evidence() {
        let g = ProfiniteDescriptor::p_adic(3);
        let chain: Vec<OpenNormalDescriptor> = (0..6)
            .map(|m| OpenNormalDescriptor::new([(3, m)].into_iter().collect(), vec![]))
            .collect();
        let fam = CofinalFamily::Declared(chain);
        assert_eq!(
            check_cofinal(&fam, &g, 4).unwrap(),
            Cofinality::Certified(CofinalCertificate::DepthChecked { depth: 4 })
        );
        assert!(matches!(
            check_cofinal(&fam, &g, 7).unwrap(),
            Cofinality::RefutedAt { level: 6, .. }
        ));
        let bad = CofinalFamily::Declared(vec![
            OpenNormalDescriptor::new([(3, 2)].into_iter().collect(), vec![]),
            OpenNormalDescriptor::full(),
        ]);
        assert!(bad.validate(&g).is_err());
    }

    #[test]
    fn induced_families() {
        let g = proper_sub_group();
        let u =
            OpenNormalDescriptor::new([(2, 2)].into_iter().collect(), vec![FiniteSub::Identity]);
        match induced_family(&g, &u, &pattern(FiniteSub::Identity)).unwrap() {
            CofinalFamily::Pattern(p) => assert_eq!(p.start, 2),
            other => panic!("{other:?}"),
        }
        let zp = ProfiniteDescriptor::p_adic(5);
        let u = OpenNormalDescriptor::new([(5, 1)].into_iter().collect(), vec![]);
        assert_eq!(
            induced_family(&zp, &u, &CofinalFamily::default()).unwrap(),
            CofinalFamily::Canonical { from: 1 }
        );
        let s3 = ProfiniteDescriptor::Finite(FiniteGroupTable::named("S3").unwrap());
        let ind = induced_family(
            &s3,
            &OpenNormalDescriptor::full(),
            &CofinalFamily::default(),
        )
        .unwrap();
        assert_eq!(
            ind.representatives(&s3, 1).unwrap(),
            vec![OpenNormalDescriptor::new(
                BTreeMap::new(),
                vec![FiniteSub::Identity]
            )]
        );
    }

    #[test]
    fn family_json() {
        let f: CofinalFamily =
            serde_json::from_str(r#"{"pattern":{"procyclic":{"2":"m"},"finite":["identity"]}}"#)
                .unwrap();
        assert_eq!(f, pattern(FiniteSub::Identity));
        let c: CofinalFamily = serde_json::from_str(r#""canonical""#).unwrap();
        assert_eq!(c, CofinalFamily::default());
    }
}
