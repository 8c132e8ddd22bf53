//! Primes, prime sets and p-adic valuations.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// `v_p(n)` and the cofactor `n / p^v`. `n` must be nonzero.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// Prime factors of `n` by trial division, or `None` when `n` does not fit in a `u64`.
pub fn prime_factors(n: &BigInt) -> Option<BTreeSet<u64>> {
    let mut n = n.magnitude().to_u64()?;
    let mut out = BTreeSet::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.insert(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.insert(n);
    }
    Some(out)
}

/// A set of primes: an explicit finite list, all primes, or all but finitely many.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PrimeSetRepr", into = "PrimeSetRepr")]
pub enum PrimeSet {
    Explicit(BTreeSet<u64>),
    All,
    Complement(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn explicit<I: IntoIterator<Item = u64>>(ps: I) -> Self {
        PrimeSet::Explicit(ps.into_iter().collect())
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Explicit(s) => s.contains(&p),
            PrimeSet::All => is_prime(p),
            PrimeSet::Complement(s) => is_prime(p) && !s.contains(&p),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PrimeSet::Explicit(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PrimeSet::Explicit(s) if s.is_empty())
    }

    /// Members in increasing order, if the set is finite.
    pub fn members(&self) -> Option<Vec<u64>> {
        match self {
            PrimeSet::Explicit(s) => Some(s.iter().copied().collect()),
            _ => None,
        }
    }

    /// The `k` smallest members (fewer if the set is finite and smaller).
    pub fn first(&self, k: usize) -> Vec<u64> {
        match self {
            PrimeSet::Explicit(s) => s.iter().copied().take(k).collect(),
            _ => {
                let mut out = Vec::with_capacity(k);
                let mut p = 2;
                while out.len() < k {
                    if self.contains(p) {
                        out.push(p);
                    }
                    p = next_prime(p);
                }
                out
            }
        }
    }

    /// True when every prime factor of `n` (nonzero) lies in the set.
    pub fn supports(&self, n: &BigInt) -> bool {
        match self {
            PrimeSet::All => true,
            PrimeSet::Explicit(s) => {
                let mut rest = n.clone();
                for &p in s {
                    rest = valuation(&rest, p).1;
                }
                rest.magnitude() == &1u32.into()
            }
            PrimeSet::Complement(s) => s.iter().all(|&p| valuation(n, p).0 == 0),
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        match self {
            PrimeSet::Explicit(s) => write!(f, "{{{}}}", list(s)),
            PrimeSet::All => write!(f, "all primes"),
            PrimeSet::Complement(s) => write!(f, "all primes except {{{}}}", list(s)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PrimeSetRepr {
    List(Vec<u64>),
    Word(String),
    Except { all_except: Vec<u64> },
}

impl TryFrom<PrimeSetRepr> for PrimeSet {
    type Error = String;

    fn try_from(r: PrimeSetRepr) -> Result<Self, String> {
        let check = |v: Vec<u64>| -> Result<BTreeSet<u64>, String> {
            match v.iter().find(|p| !is_prime(**p)) {
                Some(p) => Err(format!("{p} is not prime")),
                None => Ok(v.into_iter().collect()),
            }
        };
        match r {
            PrimeSetRepr::List(v) => Ok(PrimeSet::Explicit(check(v)?)),
            PrimeSetRepr::Word(w) if w == "all" => Ok(PrimeSet::All),
            PrimeSetRepr::Word(w) => Err(format!("unknown prime set `{w}`")),
            PrimeSetRepr::Except { all_except } => Ok(PrimeSet::Complement(check(all_except)?)),
        }
    }
}

impl From<PrimeSet> for PrimeSetRepr {
    fn from(s: PrimeSet) -> Self {
        match s {
            PrimeSet::Explicit(v) => PrimeSetRepr::List(v.into_iter().collect()),
            PrimeSet::All => PrimeSetRepr::Word("all".into()),
            PrimeSet::Complement(v) => PrimeSetRepr::Except {
                all_except: v.into_iter().collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(72), 2), (3, BigInt::from(9)));
        assert_eq!(valuation(&BigInt::from(-45), 3), (2, BigInt::from(-5)));
        assert_eq!(
            prime_factors(&BigInt::from(360)).unwrap(),
            [2, 3, 5].into_iter().collect()
        );
    }

    #[test]
    fn prime_sets() {
        let s = PrimeSet::Complement([2, 3].into_iter().collect());
        assert_eq!(s.first(3), vec![5, 7, 11]);
        assert!(s.supports(&BigInt::from(35)));
        assert!(!s.supports(&BigInt::from(6)));
        assert!(PrimeSet::explicit([3]).supports(&BigInt::from(27)));
        assert!(!PrimeSet::explicit([3]).supports(&BigInt::from(12)));
        let j: PrimeSet = serde_json::from_str(r#"{"all_except":[2]}"#).unwrap();
        assert_eq!(j, PrimeSet::Complement([2].into_iter().collect()));
        assert!(serde_json::from_str::<PrimeSet>("[4]").is_err());
    }
}
