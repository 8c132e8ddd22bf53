//! Vanishing rules for continuous cohomology with trivial coefficients that
//! need no computation.
//!
//! These are imported results, not derived here: positive-degree cohomology
//! of a profinite group vanishes on torsion-free divisible coefficients and
//! on torsion coefficients whose primes do not divide the group order.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::abelian::{Parts, StructuredAbelian};
use crate::profinite::SupernaturalNumber;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingReason {
    /// `M` is a Q-vector space.
    Divisible,
    /// `M` is torsion and none of these primes divides the group order.
    CoprimeTorsion { primes: BTreeSet<u64> },
    /// Each summand vanishes for its own reason.
    DirectSum(Vec<VanishingReason>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolicVerdict {
    /// Degree 0 with trivial action.
    EqualsCoefficients,
    Vanishes(VanishingReason),
    Unknown,
}

impl VanishingReason {
    pub fn describe(&self) -> String {
        match self {
            VanishingReason::Divisible => "torsion-free divisible coefficients".into(),
            VanishingReason::CoprimeTorsion { primes } if primes.is_empty() => {
                "zero coefficients".into()
            }
            VanishingReason::CoprimeTorsion { primes } => {
                let list: Vec<String> = primes.iter().map(u64::to_string).collect();
                format!("torsion at {{{}}} prime to the group order", list.join(","))
            }
            VanishingReason::DirectSum(rs) => {
                let parts: Vec<String> = rs.iter().map(Self::describe).collect();
                format!("direct sum of: {}", parts.join("; "))
            }
        }
    }
}

fn torsion_reason(order: &SupernaturalNumber, t: &StructuredAbelian) -> Option<VanishingReason> {
    let primes = t.torsion_primes()?;
    primes
        .iter()
        .all(|&p| !order.divisible_by(p))
        .then_some(VanishingReason::CoprimeTorsion { primes })
}

/// The rule-based verdict for `H^s_c(U; M)` where `U` has order `order`.
pub fn symbolic_cohomology(
    order: &SupernaturalNumber,
    m: &StructuredAbelian,
    s: usize,
) -> SymbolicVerdict {
    if s == 0 {
        return SymbolicVerdict::EqualsCoefficients;
    }
    let m = m.normalize();
    if m.is_torsion_free_divisible() && !m.is_zero() {
        return SymbolicVerdict::Vanishes(VanishingReason::Divisible);
    }
    if m.is_torsion() {
        return match torsion_reason(order, &m) {
            Some(r) => SymbolicVerdict::Vanishes(r),
            None => SymbolicVerdict::Unknown,
        };
    }
    let parts = m.parts();
    if parts.free_rank > 0 {
        return SymbolicVerdict::Unknown;
    }
    // Q-part plus a torsion part.
    let torsion = StructuredAbelian::from_parts(Parts {
        rational_dim: 0,
        rational_countable: false,
        ..parts
    });
    match torsion_reason(order, &torsion) {
        Some(r) => SymbolicVerdict::Vanishes(VanishingReason::DirectSum(vec![
            VanishingReason::Divisible,
            r,
        ])),
        None => SymbolicVerdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Cardinal;
    use crate::primes::PrimeSet;

    #[test]
    fn rules() {
        let zp = SupernaturalNumber::prime_power(2, crate::profinite::Exponent::Infinite);
        let q = StructuredAbelian::rationals();
        assert_eq!(
            symbolic_cohomology(&zp, &q, 0),
            SymbolicVerdict::EqualsCoefficients
        );
        assert_eq!(
            symbolic_cohomology(&zp, &q, 3),
            SymbolicVerdict::Vanishes(VanishingReason::Divisible)
        );
        let f3 = StructuredAbelian::cyclic(3);
        assert!(matches!(
            symbolic_cohomology(&zp, &f3, 1),
            SymbolicVerdict::Vanishes(VanishingReason::CoprimeTorsion { .. })
        ));
        assert_eq!(
            symbolic_cohomology(&zp, &StructuredAbelian::cyclic(2), 1),
            SymbolicVerdict::Unknown
        );
        assert_eq!(
            symbolic_cohomology(&zp, &StructuredAbelian::integers(), 1),
            SymbolicVerdict::Unknown
        );
        let mixed = StructuredAbelian::direct_sum([
            q,
            StructuredAbelian::p_primary(5, 1, Cardinal::Countable),
        ]);
        assert!(matches!(
            symbolic_cohomology(&zp, &mixed, 2),
            SymbolicVerdict::Vanishes(VanishingReason::DirectSum(_))
        ));
        let all = SupernaturalNumber::infinite_on(PrimeSet::All);
        assert_eq!(symbolic_cohomology(&all, &f3, 2), SymbolicVerdict::Unknown);
    }
}
