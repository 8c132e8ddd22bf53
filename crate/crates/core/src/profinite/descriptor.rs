//! Symbolic profinite groups and their open normal subgroups.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::finite_group::FiniteGroupTable;
use super::supernatural::{Exponent, SupernaturalNumber};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::primes::{is_prime, PrimeSet};

/// Local factor of a prime-indexed product: `p^shift Z_p` or the trivial group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum LocalFactor {
    Shift(u32),
    #[default]
    Trivial,
}

impl LocalFactor {
    pub const FULL: LocalFactor = LocalFactor::Shift(0);
}

impl Serialize for LocalFactor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LocalFactor::Shift(a) => s.serialize_u32(*a),
            LocalFactor::Trivial => s.serialize_str("trivial"),
        }
    }
}

impl<'de> Deserialize<'de> for LocalFactor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u32),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(a) => Ok(LocalFactor::Shift(a)),
            Repr::Word(w) if w == "trivial" => Ok(LocalFactor::Trivial),
            Repr::Word(w) => Err(serde::de::Error::custom(format!(
                "expected a shift or \"trivial\", got `{w}`"
            ))),
        }
    }
}

fn full_local() -> LocalFactor {
    LocalFactor::FULL
}

/// A profinite group built from finite groups and procyclic pro-p factors `p^a Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfiniteDescriptor {
    Finite(FiniteGroupTable),
    Procyclic {
        p: u64,
        #[serde(default)]
        shift: u32,
    },
    Product(Vec<ProfiniteDescriptor>),
    PrimeIndexedProduct {
        index: PrimeSet,
        #[serde(default = "full_local")]
        local: LocalFactor,
        #[serde(default)]
        overrides: BTreeMap<u64, LocalFactor>,
    },
}

/// One factor of the flattened product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Slot {
    Finite(FiniteGroupTable),
    Procyclic {
        p: u64,
        shift: u32,
    },
    /// Infinitely many procyclic factors: primes of `index` other than trivial overrides.
    Family {
        index: PrimeSet,
        shift: u32,
        overrides: BTreeMap<u64, LocalFactor>,
    },
}

/// Flattened, validated form of a descriptor. Slot order follows the descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub(crate) slots: Vec<Slot>,
}

impl Slot {
    fn family_shift(shift: u32, overrides: &BTreeMap<u64, LocalFactor>, p: u64) -> Option<u32> {
        match overrides
            .get(&p)
            .copied()
            .unwrap_or(LocalFactor::Shift(shift))
        {
            LocalFactor::Shift(a) => Some(a),
            LocalFactor::Trivial => None,
        }
    }
}

impl Shape {
    pub fn finite_slots(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| matches!(s, Slot::Finite(_)))
            .count()
    }

    pub fn finite_groups(&self) -> Vec<&FiniteGroupTable> {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::Finite(g) => Some(g),
                _ => None,
            })
            .collect()
    }

    /// Primes of the explicitly listed procyclic factors, in slot order.
    pub fn procyclic_primes(&self) -> Vec<u64> {
        self.slots
            .iter()
            .filter_map(|s| match s {
                Slot::Procyclic { p, .. } => Some(*p),
                _ => None,
            })
            .collect()
    }

    pub fn has_family(&self) -> bool {
        self.slots.iter().any(|s| matches!(s, Slot::Family { .. }))
    }

    pub fn is_finite(&self) -> bool {
        self.slots.iter().all(|s| matches!(s, Slot::Finite(_)))
    }

    /// The `k` smallest primes of the infinite family, if there is one.
    pub fn family_primes(&self, k: usize) -> Vec<u64> {
        for s in &self.slots {
            if let Slot::Family {
                index, overrides, ..
            } = s
            {
                let mut out = Vec::with_capacity(k);
                let mut take = k;
                while out.len() < k {
                    let cand = index.first(take);
                    out = cand
                        .into_iter()
                        .filter(|p| !matches!(overrides.get(p), Some(LocalFactor::Trivial)))
                        .take(k)
                        .collect();
                    take += k.max(1);
                }
                return out;
            }
        }
        Vec::new()
    }

    /// Shift `a` of the factor `p^a Z_p` at prime `p`, if `p` carries a nontrivial factor.
    pub fn shift_at(&self, p: u64) -> Option<u32> {
        let explicit = self.slots.iter().find_map(|s| match s {
            Slot::Procyclic { p: q, shift } if *q == p => Some(*shift),
            _ => None,
        });
        explicit.or_else(|| {
            self.slots.iter().find_map(|s| match s {
                Slot::Family {
                    index,
                    shift,
                    overrides,
                } if index.contains(p) => Slot::family_shift(*shift, overrides, p),
                _ => None,
            })
        })
    }

    fn is_family_prime(&self, p: u64) -> bool {
        !self.procyclic_primes().contains(&p) && self.shift_at(p).is_some()
    }
}

impl ProfiniteDescriptor {
    pub fn finite(g: FiniteGroupTable) -> Self {
        ProfiniteDescriptor::Finite(g)
    }

    pub fn cyclic(n: usize) -> Self {
        ProfiniteDescriptor::Finite(FiniteGroupTable::cyclic(n))
    }

    pub fn trivial() -> Self {
        ProfiniteDescriptor::Finite(FiniteGroupTable::trivial())
    }

    /// `Z_p`.
    pub fn p_adic(p: u64) -> Self {
        ProfiniteDescriptor::Procyclic { p, shift: 0 }
    }

    pub fn product<I: IntoIterator<Item = ProfiniteDescriptor>>(fs: I) -> Self {
        ProfiniteDescriptor::Product(fs.into_iter().collect())
    }

    /// `∏_{p ∈ index} Z_p`.
    pub fn prime_product(index: PrimeSet) -> Self {
        ProfiniteDescriptor::PrimeIndexedProduct {
            index,
            local: LocalFactor::FULL,
            overrides: BTreeMap::new(),
        }
    }

    /// Flattens and validates the descriptor.
    pub fn shape(&self) -> Result<Shape> {
        let mut slots = Vec::new();
        self.flatten(&mut slots)?;
        let mut seen = BTreeSet::new();
        let mut families = 0;
        for s in &slots {
            match s {
                Slot::Procyclic { p, .. } => {
                    if !seen.insert(*p) {
                        return Err(Error::InvalidInput(format!(
                            "prime {p} occurs in two procyclic factors"
                        )));
                    }
                }
                Slot::Family { .. } => families += 1,
                Slot::Finite(_) => {}
            }
        }
        if families > 1 {
            return Err(Error::UnsupportedGroupShape(
                "at most one infinite prime-indexed product is supported".into(),
            ));
        }
        for s in &slots {
            if let Slot::Family {
                index,
                shift,
                overrides,
            } = s
            {
                if let Some(p) = seen.iter().find(|&&p| {
                    index.contains(p) && Slot::family_shift(*shift, overrides, p).is_some()
                }) {
                    return Err(Error::InvalidInput(format!(
                        "prime {p} occurs in two procyclic factors"
                    )));
                }
            }
        }
        Ok(Shape { slots })
    }

    fn flatten(&self, out: &mut Vec<Slot>) -> Result<()> {
        match self {
            ProfiniteDescriptor::Finite(g) => {
                if !g.is_trivial() {
                    out.push(Slot::Finite(g.clone()))
                }
            }
            ProfiniteDescriptor::Procyclic { p, shift } => {
                if !is_prime(*p) {
                    return Err(Error::InvalidInput(format!("{p} is not prime")));
                }
                out.push(Slot::Procyclic {
                    p: *p,
                    shift: *shift,
                });
            }
            ProfiniteDescriptor::Product(fs) => {
                for f in fs {
                    f.flatten(out)?;
                }
            }
            ProfiniteDescriptor::PrimeIndexedProduct {
                index,
                local,
                overrides,
            } => {
                if let Some(p) = overrides.keys().find(|p| !index.contains(**p)) {
                    return Err(Error::InvalidInput(format!(
                        "override for {p}, which is not in the index set"
                    )));
                }
                match (index.members(), local) {
                    (Some(ps), _) => {
                        for p in ps {
                            if let Some(a) = Slot::family_shift(local_shift(*local), overrides, p)
                                .filter(|_| {
                                    overrides.contains_key(&p) || *local != LocalFactor::Trivial
                                })
                            {
                                out.push(Slot::Procyclic { p, shift: a });
                            }
                        }
                    }
                    (None, LocalFactor::Trivial) => {
                        for (p, f) in overrides {
                            if let LocalFactor::Shift(a) = f {
                                out.push(Slot::Procyclic { p: *p, shift: *a });
                            }
                        }
                    }
                    (None, LocalFactor::Shift(a)) => out.push(Slot::Family {
                        index: index.clone(),
                        shift: *a,
                        overrides: overrides.clone(),
                    }),
                }
            }
        }
        Ok(())
    }

    /// Supernatural order `#G`.
    pub fn order(&self) -> Result<SupernaturalNumber> {
        let shape = self.shape()?;
        let mut n = SupernaturalNumber::one();
        for s in &shape.slots {
            let f = match s {
                Slot::Finite(g) => SupernaturalNumber::from_u64(g.size() as u64),
                Slot::Procyclic { p, .. } => {
                    SupernaturalNumber::prime_power(*p, Exponent::Infinite)
                }
                Slot::Family {
                    index, overrides, ..
                } => {
                    let trivial: BTreeSet<u64> = overrides
                        .iter()
                        .filter(|(_, f)| **f == LocalFactor::Trivial)
                        .map(|(p, _)| *p)
                        .collect();
                    let set = match index {
                        PrimeSet::All => PrimeSet::Complement(trivial),
                        PrimeSet::Complement(x) => {
                            PrimeSet::Complement(x.union(&trivial).copied().collect())
                        }
                        PrimeSet::Explicit(_) => unreachable!("finite families are expanded"),
                    };
                    SupernaturalNumber::infinite_on(set)
                }
            };
            n = n.mul(&f);
        }
        Ok(n)
    }

    /// Whether `p` divides `#G`.
    pub fn divides_order(&self, p: u64) -> Result<bool> {
        Ok(self.order()?.divisible_by(p))
    }

    pub fn is_finite(&self) -> Result<bool> {
        Ok(self.shape()?.is_finite())
    }

    /// The finite group, when the descriptor is finite.
    pub fn as_finite(&self) -> Result<Option<FiniteGroupTable>> {
        let shape = self.shape()?;
        if !shape.is_finite() {
            return Ok(None);
        }
        Ok(Some(FiniteGroupTable::product(
            shape.finite_groups().into_iter().cloned(),
        )?))
    }

    pub fn label(&self) -> String {
        match self.shape() {
            Ok(s) => s.label(),
            Err(_) => "<invalid group>".into(),
        }
    }
}

fn local_shift(l: LocalFactor) -> u32 {
    match l {
        LocalFactor::Shift(a) => a,
        LocalFactor::Trivial => 0,
    }
}

pub(crate) fn procyclic_label(p: u64, a: u32) -> String {
    match a {
        0 => format!("Z_{p}"),
        a => format!("{}Z_{p}", BigInt::from(p).pow(a)),
    }
}

fn family_label(index: &PrimeSet, shift: u32, overrides: &BTreeMap<u64, LocalFactor>) -> String {
    let base = match index {
        PrimeSet::All => "∏_p".to_string(),
        PrimeSet::Complement(x) => {
            let l: Vec<String> = x.iter().map(u64::to_string).collect();
            format!("∏_{{p∉{{{}}}}}", l.join(","))
        }
        PrimeSet::Explicit(_) => "∏".to_string(),
    };
    let local = if shift == 0 {
        "Z_p".to_string()
    } else {
        format!("p^{shift}Z_p")
    };
    let mut s = format!("{base} {local}");
    if !overrides.is_empty() {
        let o: Vec<String> = overrides
            .iter()
            .map(|(p, f)| match f {
                LocalFactor::Trivial => format!("{p}:1"),
                LocalFactor::Shift(a) => format!("{p}:{}", procyclic_label(*p, *a)),
            })
            .collect();
        s.push_str(&format!(" [{}]", o.join(", ")));
    }
    s
}

impl Shape {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Finite(g) => g.label(),
                Slot::Procyclic { p, shift } => procyclic_label(*p, *shift),
                Slot::Family {
                    index,
                    shift,
                    overrides,
                } => family_label(index, *shift, overrides),
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" × ")
        }
    }
}

impl fmt::Display for ProfiniteDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Subgroup of one finite factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FiniteSub {
    Full,
    Identity,
    Elements(BTreeSet<usize>),
}

impl FiniteSub {
    fn elements(&self, g: &FiniteGroupTable) -> BTreeSet<usize> {
        match self {
            FiniteSub::Full => (0..g.size()).collect(),
            FiniteSub::Identity => [0].into_iter().collect(),
            FiniteSub::Elements(e) => e.clone(),
        }
    }

    fn canonical(&self, g: &FiniteGroupTable) -> FiniteSub {
        match self {
            FiniteSub::Elements(e) if e.len() == g.size() => FiniteSub::Full,
            FiniteSub::Elements(e) if e.len() == 1 => FiniteSub::Identity,
            FiniteSub::Identity if g.is_trivial() => FiniteSub::Full,
            s => s.clone(),
        }
    }

    pub(crate) fn is_subset_of(&self, other: &FiniteSub, g: &FiniteGroupTable) -> bool {
        match (self, other) {
            (_, FiniteSub::Full) | (FiniteSub::Identity, _) => true,
            (a, b) => a.elements(g).is_subset(&b.elements(g)),
        }
    }
}

impl Serialize for FiniteSub {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FiniteSub::Full => s.serialize_str("full"),
            FiniteSub::Identity => s.serialize_str("identity"),
            FiniteSub::Elements(e) => e.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for FiniteSub {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Word(String),
            Elems(BTreeSet<usize>),
        }
        match Repr::deserialize(d)? {
            Repr::Word(w) if w == "full" => Ok(FiniteSub::Full),
            Repr::Word(w) if w == "identity" => Ok(FiniteSub::Identity),
            Repr::Word(w) => Err(serde::de::Error::custom(format!(
                "unknown subgroup marker `{w}`"
            ))),
            Repr::Elems(e) => Ok(FiniteSub::Elements(e)),
        }
    }
}

/// An open normal subgroup: exponents `m` selecting `p^{a+m} Z_p` inside each
/// procyclic factor (absent means `m = 0`, the whole factor) and a normal
/// subgroup of each finite factor (missing trailing entries mean the whole factor).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenNormalDescriptor {
    #[serde(default)]
    pub procyclic: BTreeMap<u64, u32>,
    #[serde(default)]
    pub finite: Vec<FiniteSub>,
}

impl OpenNormalDescriptor {
    /// The whole group.
    pub fn full() -> Self {
        Self::default()
    }

    pub fn new(procyclic: BTreeMap<u64, u32>, finite: Vec<FiniteSub>) -> Self {
        OpenNormalDescriptor { procyclic, finite }
    }

    /// Validates against `shape` and returns the canonical form.
    pub fn normalized(&self, shape: &Shape) -> Result<OpenNormalDescriptor> {
        let groups = shape.finite_groups();
        if self.finite.len() > groups.len() {
            return Err(Error::InvalidSubgroup(format!(
                "{} finite entries for {} finite factors",
                self.finite.len(),
                groups.len()
            )));
        }
        for (p, _) in self.procyclic.iter().filter(|(_, m)| **m > 0) {
            if shape.shift_at(*p).is_none() {
                return Err(Error::InvalidSubgroup(format!(
                    "no procyclic factor at prime {p}"
                )));
            }
        }
        let mut finite = Vec::with_capacity(groups.len());
        for (i, g) in groups.iter().enumerate() {
            let sub = self.finite.get(i).cloned().unwrap_or(FiniteSub::Full);
            g.check_subgroup(&sub.elements(g), true)?;
            finite.push(sub.canonical(g));
        }
        while finite.last() == Some(&FiniteSub::Full) {
            finite.pop();
        }
        let procyclic = self
            .procyclic
            .iter()
            .filter(|(_, m)| **m > 0)
            .map(|(p, m)| (*p, *m))
            .collect();
        Ok(OpenNormalDescriptor { procyclic, finite })
    }

    pub(crate) fn exponent(&self, p: u64) -> u32 {
        self.procyclic.get(&p).copied().unwrap_or(0)
    }

    pub(crate) fn finite_at(&self, i: usize) -> FiniteSub {
        self.finite.get(i).cloned().unwrap_or(FiniteSub::Full)
    }

    /// `self ⊆ other`, both normalized against `shape`.
    pub fn is_subgroup_of(&self, other: &OpenNormalDescriptor, shape: &Shape) -> bool {
        other.procyclic.iter().all(|(p, m)| self.exponent(*p) >= *m)
            && shape
                .finite_groups()
                .iter()
                .enumerate()
                .all(|(i, g)| self.finite_at(i).is_subset_of(&other.finite_at(i), g))
    }

    /// Label relative to the ambient shape, e.g. `Z_2 × {e}`.
    pub fn label(&self, shape: &Shape) -> String {
        let mut parts = Vec::new();
        let mut fi = 0;
        for s in &shape.slots {
            match s {
                Slot::Finite(g) => {
                    parts.push(match self.finite_at(fi) {
                        FiniteSub::Full => g.label(),
                        FiniteSub::Identity => "{e}".into(),
                        FiniteSub::Elements(e) => format!("H{}≤{}", e.len(), g.label()),
                    });
                    fi += 1;
                }
                Slot::Procyclic { p, shift } => {
                    parts.push(procyclic_label(*p, shift + self.exponent(*p)))
                }
                Slot::Family {
                    index,
                    shift,
                    overrides,
                } => {
                    let mut o = overrides.clone();
                    for (p, m) in &self.procyclic {
                        if shape.is_family_prime(*p) {
                            let a = shape.shift_at(*p).unwrap_or(*shift);
                            o.insert(*p, LocalFactor::Shift(a + m));
                        }
                    }
                    parts.push(family_label(index, *shift, &o));
                }
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" × ")
        }
    }
}

/// Index `[G : N]`.
pub fn index(g: &ProfiniteDescriptor, n: &OpenNormalDescriptor) -> Result<BigInt> {
    let shape = g.shape()?;
    let n = n.normalized(&shape)?;
    let mut idx = BigInt::one();
    for (p, m) in &n.procyclic {
        idx *= BigInt::from(*p).pow(*m);
    }
    for (i, grp) in shape.finite_groups().iter().enumerate() {
        let sub = n.finite_at(i).elements(grp).len();
        idx *= BigInt::from(grp.size() / sub);
    }
    Ok(idx)
}

/// `G/N` as a finite group; factor order follows the descriptor, family primes in increasing order.
pub fn quotient(
    g: &ProfiniteDescriptor,
    n: &OpenNormalDescriptor,
    budgets: &Budgets,
) -> Result<FiniteGroupTable> {
    let size = index(g, n)?;
    budgets.check_table("quotient table", size.to_u128().unwrap_or(u128::MAX))?;
    let shape = g.shape()?;
    let n = n.normalized(&shape)?;
    let mut factors = Vec::new();
    let mut fi = 0;
    for s in &shape.slots {
        match s {
            Slot::Finite(grp) => {
                match n.finite_at(fi) {
                    FiniteSub::Full => {}
                    FiniteSub::Identity => factors.push(grp.clone()),
                    FiniteSub::Elements(e) => factors.push(grp.quotient(&e)?.0),
                }
                fi += 1;
            }
            Slot::Procyclic { p, .. } => factors.push(cyclic_p_power(*p, n.exponent(*p))),
            Slot::Family { .. } => {
                for (p, m) in &n.procyclic {
                    if shape.is_family_prime(*p) {
                        factors.push(cyclic_p_power(*p, *m));
                    }
                }
            }
        }
    }
    FiniteGroupTable::product(factors)
}

fn cyclic_p_power(p: u64, m: u32) -> FiniteGroupTable {
    FiniteGroupTable::cyclic((p as usize).pow(m))
}

/// `N` as a profinite group in its own right.
pub fn subgroup_descriptor(
    g: &ProfiniteDescriptor,
    n: &OpenNormalDescriptor,
) -> Result<ProfiniteDescriptor> {
    let shape = g.shape()?;
    let n = n.normalized(&shape)?;
    let mut parts = Vec::new();
    let mut fi = 0;
    for s in &shape.slots {
        match s {
            Slot::Finite(grp) => {
                match n.finite_at(fi) {
                    FiniteSub::Full => parts.push(ProfiniteDescriptor::Finite(grp.clone())),
                    FiniteSub::Identity => {}
                    FiniteSub::Elements(e) => {
                        parts.push(ProfiniteDescriptor::Finite(grp.subgroup(&e)?))
                    }
                }
                fi += 1;
            }
            Slot::Procyclic { p, shift } => parts.push(ProfiniteDescriptor::Procyclic {
                p: *p,
                shift: shift + n.exponent(*p),
            }),
            Slot::Family {
                index,
                shift,
                overrides,
            } => {
                let mut o = overrides.clone();
                for (p, m) in &n.procyclic {
                    if shape.is_family_prime(*p) {
                        let a = shape.shift_at(*p).unwrap_or(*shift);
                        o.insert(*p, LocalFactor::Shift(a + m));
                    }
                }
                parts.push(ProfiniteDescriptor::PrimeIndexedProduct {
                    index: index.clone(),
                    local: LocalFactor::Shift(*shift),
                    overrides: o,
                });
            }
        }
    }
    Ok(match parts.len() {
        0 => ProfiniteDescriptor::trivial(),
        1 => parts.pop().unwrap(),
        _ => ProfiniteDescriptor::Product(parts),
    })
}

/// A closed subgroup `∏ p^{a_p} Z_p` of a product of procyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosedSubgroupSpec {
    /// prime → absolute shift `a_p` or `"trivial"`
    #[serde(default)]
    pub factors: BTreeMap<u64, LocalFactor>,
    /// What happens at primes not listed: `false` keeps the factor of `G`, `true` drops it.
    #[serde(default)]
    pub others_trivial: bool,
}

impl ClosedSubgroupSpec {
    pub fn identity() -> Self {
        Self::default()
    }
}

pub fn closed_subgroup(
    g: &ProfiniteDescriptor,
    spec: &ClosedSubgroupSpec,
) -> Result<ProfiniteDescriptor> {
    let shape = g.shape()?;
    if shape.finite_slots() > 0 {
        return Err(Error::UnsupportedGroupShape(
            "closed subgroups are supported only for products of procyclic groups".into(),
        ));
    }
    for (p, f) in &spec.factors {
        let Some(a) = shape.shift_at(*p) else {
            return Err(Error::UnsupportedGroupShape(format!(
                "G has no factor at prime {p}"
            )));
        };
        if let LocalFactor::Shift(b) = f {
            if *b < a {
                return Err(Error::InvalidSubgroup(format!(
                    "{} is not contained in {}",
                    procyclic_label(*p, *b),
                    procyclic_label(*p, a)
                )));
            }
        }
    }
    let pick = |p: u64, current: u32| -> LocalFactor {
        match spec.factors.get(&p) {
            Some(f) => *f,
            None if spec.others_trivial => LocalFactor::Trivial,
            None => LocalFactor::Shift(current),
        }
    };
    let mut parts = Vec::new();
    for s in &shape.slots {
        match s {
            Slot::Procyclic { p, shift } => {
                if let LocalFactor::Shift(a) = pick(*p, *shift) {
                    parts.push(ProfiniteDescriptor::Procyclic { p: *p, shift: a });
                }
            }
            Slot::Family {
                index,
                shift,
                overrides,
            } => {
                let mut o = overrides.clone();
                for (p, f) in &spec.factors {
                    if index.contains(*p) {
                        o.insert(*p, *f);
                    }
                }
                if spec.others_trivial {
                    for (p, f) in o {
                        if let LocalFactor::Shift(a) = f {
                            parts.push(ProfiniteDescriptor::Procyclic { p, shift: a });
                        }
                    }
                } else {
                    parts.push(ProfiniteDescriptor::PrimeIndexedProduct {
                        index: index.clone(),
                        local: LocalFactor::Shift(*shift),
                        overrides: o,
                    });
                }
            }
            Slot::Finite(_) => unreachable!(),
        }
    }
    Ok(match parts.len() {
        0 => ProfiniteDescriptor::trivial(),
        1 => parts.pop().unwrap(),
        _ => ProfiniteDescriptor::Product(parts),
    })
}
