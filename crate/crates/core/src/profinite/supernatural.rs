use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::primes::{prime_factors, valuation, PrimeSet};

/// An exponent in `ℕ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Exponent::ZERO
    }

    fn add(self, o: Exponent) -> Exponent {
        match (self, o) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a.saturating_add(b)),
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Infinite => write!(f, "∞"),
        }
    }
}

/// Formal product `∏ p^{a_p}` with `a_p ∈ ℕ ∪ {∞}`.
///
/// Explicit assignments override a default rule: primes in `default_set` get
/// `default_exponent`, all others 0. The representation is kept canonical:
/// the default rule is either empty or an infinite set carrying ∞, the
/// excluded primes of a complement carry no explicit entries, and no explicit
/// entry repeats what the default rule says.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    explicit: BTreeMap<u64, Exponent>,
    default_set: PrimeSet,
    default_exponent: Exponent,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        SupernaturalNumber {
            explicit: BTreeMap::new(),
            default_set: PrimeSet::Explicit(BTreeSet::new()),
            default_exponent: Exponent::ZERO,
        }
    }

    pub fn new(
        explicit: BTreeMap<u64, Exponent>,
        default_set: PrimeSet,
        default_exponent: Exponent,
    ) -> Self {
        assert!(
            matches!(default_exponent, Exponent::Finite(0) | Exponent::Infinite),
            "default exponent must be 0 or ∞"
        );
        let mut s = SupernaturalNumber {
            explicit,
            default_set,
            default_exponent,
        };
        s.canonicalize();
        s
    }

    /// `p^∞` for every prime in `set`.
    pub fn infinite_on(set: PrimeSet) -> Self {
        Self::new(BTreeMap::new(), set, Exponent::Infinite)
    }

    pub fn prime_power(p: u64, e: Exponent) -> Self {
        Self::new(
            [(p, e)].into_iter().collect(),
            PrimeSet::explicit([]),
            Exponent::ZERO,
        )
    }

    /// The ordinary positive integer `n`; `None` for `n = 0` or a factor beyond `u64`.
    pub fn from_integer(n: &BigInt) -> Option<Self> {
        if n.sign() != num_bigint::Sign::Plus {
            return None;
        }
        let map = prime_factors(n)?
            .into_iter()
            .map(|p| (p, Exponent::Finite(valuation(n, p).0)))
            .collect();
        Some(Self::new(map, PrimeSet::explicit([]), Exponent::ZERO))
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_integer(&BigInt::from(n)).expect("positive")
    }

    fn canonicalize(&mut self) {
        if self.default_exponent.is_zero() {
            self.default_set = PrimeSet::explicit([]);
        }
        if let PrimeSet::Explicit(s) = &self.default_set {
            for p in s.clone() {
                self.explicit.entry(p).or_insert(self.default_exponent);
            }
            self.default_set = PrimeSet::explicit([]);
            self.default_exponent = Exponent::ZERO;
        }
        let explicit = std::mem::take(&mut self.explicit);
        let mut excluded = match &self.default_set {
            PrimeSet::All => BTreeSet::new(),
            PrimeSet::Complement(x) => x.clone(),
            PrimeSet::Explicit(_) => {
                self.explicit = explicit.into_iter().filter(|(_, e)| !e.is_zero()).collect();
                return;
            }
        };
        for (p, e) in explicit {
            match e {
                Exponent::Finite(0) => {
                    excluded.insert(p);
                }
                Exponent::Infinite => {
                    excluded.remove(&p);
                }
                e => {
                    excluded.remove(&p);
                    self.explicit.insert(p, e);
                }
            }
        }
        self.default_set = if excluded.is_empty() {
            PrimeSet::All
        } else {
            PrimeSet::Complement(excluded)
        };
    }

    fn default_rule(&self, p: u64) -> Exponent {
        if self.default_set.contains(p) {
            self.default_exponent
        } else {
            Exponent::ZERO
        }
    }

    /// Exponent of the prime `p`.
    pub fn exponent(&self, p: u64) -> Exponent {
        self.explicit
            .get(&p)
            .copied()
            .unwrap_or_else(|| self.default_rule(p))
    }

    pub fn divisible_by(&self, p: u64) -> bool {
        !self.exponent(p).is_zero()
    }

    /// Primes where the two numbers may differ from their generic behaviour.
    fn critical(&self, other: &Self) -> BTreeSet<u64> {
        let mut c: BTreeSet<u64> = self
            .explicit
            .keys()
            .chain(other.explicit.keys())
            .copied()
            .collect();
        for s in [&self.default_set, &other.default_set] {
            if let PrimeSet::Complement(x) = s {
                c.extend(x);
            }
        }
        c
    }

    /// Exponent at primes outside every explicit list.
    fn generic(&self) -> Exponent {
        match self.default_set {
            PrimeSet::Explicit(_) => Exponent::ZERO,
            _ => self.default_exponent,
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(Exponent, Exponent) -> Exponent) -> Self {
        let crit = self.critical(other);
        let explicit = crit
            .iter()
            .map(|&p| (p, op(self.exponent(p), other.exponent(p))))
            .collect();
        let g = op(self.generic(), other.generic());
        assert!(matches!(g, Exponent::Finite(0) | Exponent::Infinite));
        let set = if g.is_zero() {
            PrimeSet::explicit([])
        } else {
            PrimeSet::Complement(crit)
        };
        Self::new(explicit, set, g)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, Exponent::add)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.combine(other, Exponent::max)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.combine(other, Exponent::min)
    }

    /// `self | other` prime by prime.
    pub fn divides(&self, other: &Self) -> bool {
        let crit = self.critical(other);
        crit.iter().all(|&p| self.exponent(p) <= other.exponent(p))
            && self.generic() <= other.generic()
    }

    pub fn is_finite(&self) -> bool {
        self.generic().is_zero() && self.explicit.values().all(|e| *e != Exponent::Infinite)
    }

    /// The value as an integer, when finite.
    pub fn to_integer(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        let mut n = BigInt::one();
        for (p, e) in &self.explicit {
            let Exponent::Finite(k) = e else {
                unreachable!()
            };
            n *= BigInt::from(*p).pow(*k);
        }
        Some(n)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_integer()?.to_u64()
    }

    /// Primes with nonzero exponent, when there are finitely many.
    pub fn support(&self) -> Option<BTreeSet<u64>> {
        if !self.generic().is_zero() {
            return None;
        }
        Some(
            self.explicit
                .iter()
                .filter(|(_, e)| !e.is_zero())
                .map(|(p, _)| *p)
                .collect(),
        )
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .explicit
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                e => format!("{p}^{e}"),
            })
            .collect();
        match &self.default_set {
            PrimeSet::All if !self.default_exponent.is_zero() => terms.push("∏_p p^∞".into()),
            PrimeSet::Complement(x) if !self.default_exponent.is_zero() => {
                let list = x.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                terms.push(format!("∏_{{p∉{{{list}}}}} p^∞"));
            }
            _ => {}
        }
        if terms.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", terms.join("·"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_inf(p: u64) -> SupernaturalNumber {
        SupernaturalNumber::prime_power(p, Exponent::Infinite)
    }

    #[test]
    fn canonical_equality() {
        let a = SupernaturalNumber::infinite_on(PrimeSet::explicit([2, 3]));
        let b = p_inf(2).mul(&p_inf(3));
        assert_eq!(a, b);
        let c = SupernaturalNumber::new(
            [(2, Exponent::Infinite)].into_iter().collect(),
            PrimeSet::Complement([2].into_iter().collect()),
            Exponent::Infinite,
        );
        assert_eq!(c, SupernaturalNumber::infinite_on(PrimeSet::All));
    }

    #[test]
    fn arithmetic() {
        let six = SupernaturalNumber::from_u64(6);
        assert_eq!(six.to_string(), "2·3");
        assert_eq!(six.mul(&SupernaturalNumber::from_u64(4)).to_u64(), Some(24));
        assert_eq!(six.lcm(&SupernaturalNumber::from_u64(4)).to_u64(), Some(12));
        assert!(six.divides(&p_inf(2).mul(&p_inf(3))));
        assert!(!p_inf(2).divides(&six));
        let l = p_inf(5);
        assert_eq!(SupernaturalNumber::from_u64(25).mul(&l), l);
        let all = SupernaturalNumber::infinite_on(PrimeSet::All);
        assert!(all.divisible_by(1_000_003));
        assert!(!all.is_finite());
        let odd = SupernaturalNumber::infinite_on(PrimeSet::Complement([2].into_iter().collect()));
        assert!(!odd.divisible_by(2));
        assert_eq!(
            odd.mul(&SupernaturalNumber::from_u64(2)).exponent(2),
            Exponent::Finite(1)
        );
        assert_eq!(odd.to_string(), "∏_{p∉{2}} p^∞");
        assert!(SupernaturalNumber::from_u64(3).divides(&odd));
    }
}
