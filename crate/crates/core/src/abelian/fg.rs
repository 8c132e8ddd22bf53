use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
///
/// Fields are private so every value is in canonical form and isomorphic
/// groups compare equal field by field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    /// `Z^free_rank` plus one cyclic summand `Z/n` per entry of `orders`.
    /// Orders 0 count as extra free summands; orders ±1 are dropped.
    pub fn new<I: IntoIterator<Item = BigInt>>(free_rank: usize, orders: I) -> Self {
        let mut free_rank = free_rank;
        let mut finite = Vec::new();
        for n in orders {
            if n.is_zero() {
                free_rank += 1;
            } else if !n.abs().is_one() {
                finite.push(n.abs());
            }
        }
        FgAbelianGroup {
            free_rank,
            invariant_factors: invariant_chain(finite),
        }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(0, [BigInt::from(n)])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of cyclic summands in the canonical decomposition.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Orders of the canonical cyclic summands, free ones first (as 0).
    pub fn summand_orders(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.invariant_factors.iter().cloned())
            .collect()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        FgAbelianGroup::new(
            self.free_rank + other.free_rank,
            self.invariant_factors
                .iter()
                .chain(&other.invariant_factors)
                .cloned(),
        )
    }

    /// `A^k`.
    pub fn power(&self, k: usize) -> FgAbelianGroup {
        let orders = (0..k).flat_map(|_| self.invariant_factors.iter().cloned());
        FgAbelianGroup::new(self.free_rank * k, orders)
    }

    /// `A[n] = {a : n·a = 0}`.
    pub fn n_torsion(&self, n: &BigInt) -> FgAbelianGroup {
        FgAbelianGroup::new(0, self.invariant_factors.iter().map(|d| d.gcd(n)))
    }

    /// `A / nA`.
    pub fn mod_n(&self, n: &BigInt) -> FgAbelianGroup {
        let free = std::iter::repeat_n(n.abs(), self.free_rank);
        let tors = self.invariant_factors.iter().map(|d| d.gcd(n));
        FgAbelianGroup::new(0, free.chain(tors))
    }
}

/// Pairwise gcd/lcm exchange; after step `i` the entry `a[i]` divides every later entry.
fn invariant_chain(mut a: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[j].is_multiple_of(&a[i]) {
                continue;
            }
            let g = a[i].gcd(&a[j]);
            let l = a[i].lcm(&a[j]);
            a[i] = g;
            a[j] = l;
        }
    }
    a.retain(|d| !d.is_one());
    a
}

fn fmt_power(f: &mut fmt::Formatter<'_>, base: &str, k: usize) -> fmt::Result {
    match k {
        1 => write!(f, "{base}"),
        _ if base.contains('/') => write!(f, "({base})^{k}"),
        _ => write!(f, "{base}^{k}"),
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let r = if first { Ok(()) } else { write!(f, " ⊕ ") };
            first = false;
            r
        };
        if self.free_rank > 0 {
            sep(f)?;
            fmt_power(f, "Z", self.free_rank)?;
        }
        let fs = &self.invariant_factors;
        let mut i = 0;
        while i < fs.len() {
            let j = (i..fs.len()).find(|&j| fs[j] != fs[i]).unwrap_or(fs.len());
            sep(f)?;
            fmt_power(f, &format!("Z/{}", fs[i]), j - i)?;
            i = j;
        }
        Ok(())
    }
}

/// Nonnegative integers in JSON: a number when it fits in `u64`, a decimal string otherwise.
pub(crate) mod nat {
    use super::*;

    pub fn to_json(n: &BigInt) -> serde_json::Value {
        match n.to_u64() {
            Some(v) => v.into(),
            None => n.to_string().into(),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(u64),
        Str(String),
    }

    pub fn parse<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(BigInt::from(v)),
            Repr::Str(s) => s
                .parse::<BigInt>()
                .ok()
                .filter(|n| !n.is_negative())
                .ok_or_else(|| serde::de::Error::custom(format!("`{s}` is not a natural number"))),
        }
    }

    pub struct Nat(pub BigInt);

    impl<'de> Deserialize<'de> for Nat {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            parse(d).map(Nat)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FgRepr {
    #[serde(default)]
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<nat::Nat>,
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v = serde_json::json!({
            "free_rank": self.free_rank,
            "torsion": self.invariant_factors.iter().map(nat::to_json).collect::<Vec<_>>(),
        });
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = FgRepr::deserialize(d)?;
        Ok(FgAbelianGroup::new(
            r.free_rank,
            r.torsion.into_iter().map(|n| n.0),
        ))
    }
}
