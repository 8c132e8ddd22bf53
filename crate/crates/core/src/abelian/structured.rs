//! Coefficient modules that need not be finitely generated.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::fg::FgAbelianGroup;
use crate::primes::{is_prime, prime_factors, valuation, PrimeSet};

/// A multiplicity: a natural number or the countably infinite cardinal ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Finite(u64),
    Countable,
}

impl Cardinal {
    pub fn is_zero(self) -> bool {
        self == Cardinal::Finite(0)
    }

    pub fn is_countable(self) -> bool {
        self == Cardinal::Countable
    }
}

impl std::ops::Add for Cardinal {
    type Output = Cardinal;

    /// Cardinal addition. Finite sums saturate into ω rather than wrap.
    fn add(self, other: Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => a
                .checked_add(b)
                .map_or(Cardinal::Countable, Cardinal::Finite),
            _ => Cardinal::Countable,
        }
    }
}

impl std::ops::Mul for Cardinal {
    type Output = Cardinal;

    /// Cardinal product (0·ω = 0).
    fn mul(self, other: Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => a
                .checked_mul(b)
                .map_or(Cardinal::Countable, Cardinal::Finite),
            (a, b) if a.is_zero() || b.is_zero() => Cardinal::Finite(0),
            _ => Cardinal::Countable,
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Countable => write!(f, "ω"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinal::Finite(n) => s.serialize_u64(*n),
            Cardinal::Countable => s.serialize_str("countable"),
        }
    }
}

impl<'de> Deserialize<'de> for Cardinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(Cardinal::Finite(n)),
            Repr::Word(w) if w == "countable" => Ok(Cardinal::Countable),
            Repr::Word(w) => Err(serde::de::Error::custom(format!(
                "expected a count or \"countable\", got `{w}`"
            ))),
        }
    }
}

/// Abelian group built from finitely generated groups, rational vector spaces
/// and p-primary groups with possibly countable multiplicities.
///
/// Values built through [`StructuredAbelian::normalize`] are in normal form:
/// `Zero`; a single term; or a `DirectSum` holding, in this order, an `Fg` term,
/// one `RationalVS` and `PPrimary` terms by increasing prime. A `PPrimary`
/// term appears only for primes carrying some countable multiplicity and then
/// holds the whole p-part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructuredAbelian {
    Zero,
    Fg(FgAbelianGroup),
    RationalVs {
        dim: Cardinal,
    },
    PPrimary {
        p: u64,
        /// exponent `e` (summand `Z/p^e`) → multiplicity
        summands: BTreeMap<u32, Cardinal>,
    },
    DirectSum(Vec<StructuredAbelian>),
}

/// Components of a structured group, merged per kind.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Parts {
    pub free_rank: usize,
    /// Orders of finite cyclic summands (unsorted, possibly with 1s).
    pub finite_orders: Vec<BigInt>,
    pub rational_dim: u64,
    pub rational_countable: bool,
    /// prime → exponent → multiplicity
    pub primary: BTreeMap<u64, BTreeMap<u32, Cardinal>>,
}

impl Parts {
    fn rational(&self) -> Cardinal {
        if self.rational_countable {
            Cardinal::Countable
        } else {
            Cardinal::Finite(self.rational_dim)
        }
    }

    fn add_rational(&mut self, c: Cardinal) {
        match Cardinal::Finite(self.rational_dim) + c {
            Cardinal::Finite(n) => self.rational_dim = n,
            Cardinal::Countable => self.rational_countable = true,
        }
    }

    fn add_primary(&mut self, p: u64, e: u32, c: Cardinal) {
        if e == 0 || c.is_zero() {
            return;
        }
        let slot = self
            .primary
            .entry(p)
            .or_default()
            .entry(e)
            .or_insert(Cardinal::Finite(0));
        *slot = *slot + c;
    }

    fn collect(&mut self, m: &StructuredAbelian) {
        match m {
            StructuredAbelian::Zero => {}
            StructuredAbelian::Fg(g) => {
                self.free_rank += g.free_rank();
                self.finite_orders
                    .extend(g.invariant_factors().iter().cloned());
            }
            StructuredAbelian::RationalVs { dim } => self.add_rational(*dim),
            StructuredAbelian::PPrimary { p, summands } => {
                for (e, c) in summands {
                    self.add_primary(*p, *e, *c);
                }
            }
            StructuredAbelian::DirectSum(parts) => {
                for x in parts {
                    self.collect(x);
                }
            }
        }
    }

    fn into_normal(mut self) -> StructuredAbelian {
        let infinite: Vec<u64> = self
            .primary
            .iter()
            .filter(|(_, m)| m.values().any(|c| c.is_countable()))
            .map(|(p, _)| *p)
            .collect();
        // finite-multiplicity primary parts become ordinary cyclic summands
        let primary = std::mem::take(&mut self.primary);
        let mut kept = BTreeMap::new();
        for (p, m) in primary {
            if infinite.contains(&p) {
                kept.insert(p, m);
            } else {
                for (e, c) in m {
                    let Cardinal::Finite(k) = c else {
                        unreachable!()
                    };
                    let order = BigInt::from(p).pow(e);
                    self.finite_orders
                        .extend(std::iter::repeat_n(order, k as usize));
                }
            }
        }
        // and the p-part of finite torsion moves into the countable p-primary term
        let mut orders = Vec::with_capacity(self.finite_orders.len());
        for d in std::mem::take(&mut self.finite_orders) {
            let mut rest = d;
            for p in &infinite {
                let (v, r) = valuation(&rest, *p);
                if v > 0 {
                    let slot = kept
                        .get_mut(p)
                        .expect("listed")
                        .entry(v)
                        .or_insert(Cardinal::Finite(0));
                    *slot = *slot + Cardinal::Finite(1);
                }
                rest = r;
            }
            orders.push(rest);
        }

        let mut terms = Vec::new();
        let fg = FgAbelianGroup::new(self.free_rank, orders);
        if !fg.is_trivial() {
            terms.push(StructuredAbelian::Fg(fg));
        }
        let q = self.rational();
        if !q.is_zero() {
            terms.push(StructuredAbelian::RationalVs { dim: q });
        }
        for (p, summands) in kept {
            terms.push(StructuredAbelian::PPrimary { p, summands });
        }
        match terms.len() {
            0 => StructuredAbelian::Zero,
            1 => terms.pop().unwrap(),
            _ => StructuredAbelian::DirectSum(terms),
        }
    }
}

/// Result of splitting a module as divisible ⊕ torsion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Split {
        divisible: StructuredAbelian,
        torsion: StructuredAbelian,
    },
    NotDecomposable,
}

impl StructuredAbelian {
    pub fn fg(g: FgAbelianGroup) -> Self {
        StructuredAbelian::Fg(g).normalize()
    }

    pub fn integers() -> Self {
        Self::fg(FgAbelianGroup::free(1))
    }

    pub fn cyclic(n: u64) -> Self {
        Self::fg(FgAbelianGroup::cyclic(n))
    }

    pub fn rationals() -> Self {
        StructuredAbelian::RationalVs {
            dim: Cardinal::Finite(1),
        }
    }

    pub fn rational_vs(dim: Cardinal) -> Self {
        StructuredAbelian::RationalVs { dim }.normalize()
    }

    /// `(Z/p^e)^(mult)`.
    pub fn p_primary(p: u64, e: u32, mult: Cardinal) -> Self {
        StructuredAbelian::PPrimary {
            p,
            summands: [(e, mult)].into_iter().collect(),
        }
        .normalize()
    }

    pub fn direct_sum<I: IntoIterator<Item = StructuredAbelian>>(parts: I) -> Self {
        StructuredAbelian::DirectSum(parts.into_iter().collect()).normalize()
    }

    /// `M^(k)` for a cardinal `k`. Countable powers of nonzero finitely generated
    /// parts are only representable for torsion and rational pieces.
    pub fn power(&self, k: Cardinal) -> Option<Self> {
        let p = self.parts();
        if k.is_zero() {
            return Some(StructuredAbelian::Zero);
        }
        if k.is_countable() && p.free_rank > 0 {
            return None;
        }
        let mut out = Parts::default();
        match k {
            Cardinal::Finite(n) => {
                out.free_rank = p.free_rank * n as usize;
                for _ in 0..n {
                    out.finite_orders.extend(p.finite_orders.iter().cloned());
                }
            }
            Cardinal::Countable => {
                for d in &p.finite_orders {
                    for q in prime_factors(d)? {
                        out.add_primary(q, valuation(d, q).0, Cardinal::Countable);
                    }
                }
            }
        }
        out.add_rational(p.rational() * k);
        for (q, m) in &p.primary {
            for (e, c) in m {
                out.add_primary(*q, *e, *c * k);
            }
        }
        Some(out.into_normal())
    }

    pub fn parts(&self) -> Parts {
        let mut p = Parts::default();
        p.collect(self);
        p
    }

    pub fn from_parts(parts: Parts) -> Self {
        parts.into_normal()
    }

    pub fn normalize(&self) -> Self {
        self.parts().into_normal()
    }

    pub fn is_zero(&self) -> bool {
        self.normalize() == StructuredAbelian::Zero
    }

    /// The finitely generated group this is, if it is one.
    pub fn as_fg(&self) -> Option<FgAbelianGroup> {
        match self.normalize() {
            StructuredAbelian::Zero => Some(FgAbelianGroup::trivial()),
            StructuredAbelian::Fg(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.as_fg().is_some()
    }

    /// All elements have finite order.
    pub fn is_torsion(&self) -> bool {
        let p = self.parts();
        p.free_rank == 0 && p.rational().is_zero()
    }

    /// A Q-vector space (including 0).
    pub fn is_torsion_free_divisible(&self) -> bool {
        let p = self.parts();
        p.free_rank == 0
            && p.primary.values().all(|m| m.values().all(|c| c.is_zero()))
            && p.finite_orders.iter().all(One::is_one)
    }

    /// Torsion with all element orders supported on `j`.
    pub fn is_j_torsion(&self, j: &PrimeSet) -> bool {
        let p = self.parts();
        self.is_torsion()
            && p.finite_orders.iter().all(|d| j.supports(d))
            && p.primary.keys().all(|q| j.contains(*q))
    }

    /// Primes dividing the order of some torsion element; `None` if a
    /// finite summand is too large to factor.
    pub fn torsion_primes(&self) -> Option<std::collections::BTreeSet<u64>> {
        let p = self.parts();
        let mut out: std::collections::BTreeSet<u64> = p.primary.keys().copied().collect();
        for d in &p.finite_orders {
            out.extend(prime_factors(d)?);
        }
        Some(out)
    }

    /// `M[n] = {m : n·m = 0}`.
    pub fn n_torsion(&self, n: &BigInt) -> Self {
        assert!(n > &BigInt::zero(), "n_torsion needs n >= 1");
        self.torsion_quotient_like(n, false)
    }

    /// `M / nM`.
    pub fn mod_n(&self, n: &BigInt) -> Self {
        assert!(n > &BigInt::zero(), "mod_n needs n >= 1");
        self.torsion_quotient_like(n, true)
    }

    /// On cyclic summands both functors give `Z/gcd(d, n)`; they differ on `Z`
    /// (`0` versus `Z/n`) and agree on `Q` (`0`).
    fn torsion_quotient_like(&self, n: &BigInt, free_to_cyclic: bool) -> Self {
        let p = self.parts();
        let mut out = Parts {
            finite_orders: p
                .finite_orders
                .iter()
                .map(|d| num_integer::Integer::gcd(d, n))
                .collect(),
            ..Parts::default()
        };
        if free_to_cyclic {
            out.finite_orders
                .extend(std::iter::repeat_n(n.clone(), p.free_rank));
        }
        for (q, m) in &p.primary {
            let v = valuation(n, *q).0;
            for (e, c) in m {
                out.add_primary(*q, (*e).min(v), *c);
            }
        }
        out.into_normal()
    }

    /// Splits `M ≅ D ⊕ T` with `D` torsion-free divisible and `T` a `J`-torsion group.
    pub fn decompose_div_plus_torsion(&self, j: &PrimeSet) -> Decomposition {
        let p = self.parts();
        if p.free_rank > 0 {
            return Decomposition::NotDecomposable;
        }
        let divisible = StructuredAbelian::RationalVs { dim: p.rational() }.normalize();
        let torsion = Parts {
            rational_dim: 0,
            rational_countable: false,
            ..p
        }
        .into_normal();
        if !torsion.is_j_torsion(j) {
            return Decomposition::NotDecomposable;
        }
        Decomposition::Split { divisible, torsion }
    }

    /// Short label used in charts and reports.
    pub fn label(&self) -> String {
        self.normalize().to_string()
    }
}

impl fmt::Display for StructuredAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuredAbelian::Zero => write!(f, "0"),
            StructuredAbelian::Fg(g) => write!(f, "{g}"),
            StructuredAbelian::RationalVs { dim } => match dim {
                Cardinal::Finite(1) => write!(f, "Q"),
                Cardinal::Finite(0) => write!(f, "0"),
                d => write!(f, "Q^{d}"),
            },
            StructuredAbelian::PPrimary { p, summands } => {
                let terms: Vec<String> = summands
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(e, c)| {
                        let base = format!("Z/{}", BigInt::from(*p).pow(*e));
                        match c {
                            Cardinal::Finite(1) => base,
                            c => format!("({base})^{c}"),
                        }
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" ⊕ "))
                }
            }
            StructuredAbelian::DirectSum(parts) => {
                if parts.is_empty() {
                    return write!(f, "0");
                }
                let terms: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", terms.join(" ⊕ "))
            }
        }
    }
}

/// Checks the structural preconditions a descriptor-supplied module must meet.
pub fn validate(m: &StructuredAbelian) -> Result<(), String> {
    match m {
        StructuredAbelian::PPrimary { p, summands } => {
            if !is_prime(*p) {
                return Err(format!("p-primary term with non-prime p = {p}"));
            }
            if summands.keys().any(|e| *e == 0) {
                return Err("p-primary summand with exponent 0".into());
            }
            if summands
                .iter()
                .any(|(e, _)| BigInt::from(*p).pow(*e).to_u64().is_none())
            {
                return Err("p-primary summand order too large".into());
            }
            Ok(())
        }
        StructuredAbelian::DirectSum(parts) => parts.iter().try_for_each(validate),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn normal_form_merges_terms() {
        let m = StructuredAbelian::direct_sum([
            StructuredAbelian::cyclic(2),
            StructuredAbelian::cyclic(3),
            StructuredAbelian::rationals(),
            StructuredAbelian::rationals(),
        ]);
        assert_eq!(
            m,
            StructuredAbelian::DirectSum(vec![
                StructuredAbelian::Fg(FgAbelianGroup::cyclic(6)),
                StructuredAbelian::RationalVs {
                    dim: Cardinal::Finite(2)
                },
            ])
        );
        let fp = StructuredAbelian::p_primary(3, 1, Cardinal::Finite(1));
        assert_eq!(fp, StructuredAbelian::cyclic(3));
        let inf = StructuredAbelian::direct_sum([
            StructuredAbelian::p_primary(3, 1, Cardinal::Countable),
            StructuredAbelian::cyclic(6),
        ]);
        assert_eq!(inf.to_string(), "Z/2 ⊕ (Z/3)^ω");
    }

    #[test]
    fn cardinal_arithmetic() {
        let w = Cardinal::Countable;
        assert_eq!(w + Cardinal::Finite(3), w);
        assert_eq!(w + w, w);
        assert_eq!(Cardinal::Finite(0) * w, Cardinal::Finite(0));
    }

    #[test]
    fn torsion_and_quotients() {
        assert_eq!(
            StructuredAbelian::cyclic(4).n_torsion(&n(2)),
            StructuredAbelian::cyclic(2)
        );
        assert_eq!(
            StructuredAbelian::rationals().n_torsion(&n(5)),
            StructuredAbelian::Zero
        );
        assert_eq!(
            StructuredAbelian::cyclic(6).n_torsion(&n(2)),
            StructuredAbelian::cyclic(2)
        );
        assert_eq!(
            StructuredAbelian::cyclic(4).mod_n(&n(2)),
            StructuredAbelian::cyclic(2)
        );
        assert_eq!(
            StructuredAbelian::rationals().mod_n(&n(7)),
            StructuredAbelian::Zero
        );
        assert_eq!(
            StructuredAbelian::fg(FgAbelianGroup::free(2)).mod_n(&n(3)),
            StructuredAbelian::fg(FgAbelianGroup::new(0, [n(3), n(3)]))
        );
        let inf = StructuredAbelian::p_primary(2, 3, Cardinal::Countable);
        assert_eq!(
            inf.n_torsion(&n(6)),
            StructuredAbelian::p_primary(2, 1, Cardinal::Countable)
        );
    }

    #[test]
    fn decomposition() {
        let j = PrimeSet::explicit([3]);
        let m = StructuredAbelian::direct_sum([
            StructuredAbelian::rationals(),
            StructuredAbelian::cyclic(3),
        ]);
        assert_eq!(
            m.decompose_div_plus_torsion(&j),
            Decomposition::Split {
                divisible: StructuredAbelian::rationals(),
                torsion: StructuredAbelian::cyclic(3),
            }
        );
        assert_eq!(
            StructuredAbelian::integers().decompose_div_plus_torsion(&j),
            Decomposition::NotDecomposable
        );
        assert_eq!(
            StructuredAbelian::cyclic(2).decompose_div_plus_torsion(&j),
            Decomposition::NotDecomposable
        );
    }

    #[test]
    fn json_shape() {
        let m: StructuredAbelian =
            serde_json::from_str(r#"{"p_primary":{"p":5,"summands":{"1":"countable"}}}"#).unwrap();
        assert_eq!(m, StructuredAbelian::p_primary(5, 1, Cardinal::Countable));
        let q: StructuredAbelian = serde_json::from_str(r#"{"rational_vs":{"dim":1}}"#).unwrap();
        assert_eq!(q, StructuredAbelian::rationals());
    }
}
