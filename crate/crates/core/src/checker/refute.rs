//! The rank obstruction to `K(n) ≃ K(n)^{hG}` for `G = (pro-ℓ part, ℓ ≠ p) × Z/p^r`.

use serde::Serialize;

use super::imported;
use super::statements::{fixed, spectrum};
use crate::error::Result;
use crate::profinite::descriptor::Slot;
use crate::profinite::{FiniteSub, OpenNormalDescriptor, ProfiniteDescriptor};
use crate::spectra::SpectrumDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankRefutation {
    pub p: u64,
    pub n: u32,
    pub r: u32,
    /// `p^{nr}`, absent if it does not fit in 64 bits.
    pub rank: Option<u64>,
    pub statement: String,
    pub imports: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    Refuted(RankRefutation),
    NoObstructionFound { reason: String },
}

fn none(reason: &str) -> Result<Refutation> {
    Ok(Refutation::NoObstructionFound {
        reason: reason.into(),
    })
}

/// Exponent `r` with `n = p^r`, if `n` is a power of `p`.
fn log_p(mut n: usize, p: u64) -> Option<u32> {
    let p = p as usize;
    let mut r = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        r += 1;
    }
    Some(r)
}

/// Only the exact shape the rank argument covers is recognized: `X = K(n,p)`,
/// a single finite factor `Z/p^r`, and procyclic factors at primes other than `p`.
pub fn refute_equivalence(g: &ProfiniteDescriptor, x: &SpectrumDescriptor) -> Result<Refutation> {
    let SpectrumDescriptor::MoravaK { n, p } = *x else {
        return none("X is not a single Morava K-theory");
    };
    let shape = g.shape()?;
    if shape.shift_at(p).is_some() {
        return none("G has a p-adic factor");
    }
    let finite: Vec<_> = shape
        .slots
        .iter()
        .filter(|s| matches!(s, Slot::Finite(_)))
        .collect();
    let r = match finite.as_slice() {
        [] => return none("G has no finite cyclic p-factor (r = 0)"),
        [Slot::Finite(k)] => match k.cyclic_orders().as_deref() {
            Some(&[m]) => match log_p(m, p) {
                Some(r) => r,
                None => return none("the finite factor is not a cyclic p-group"),
            },
            _ => return none("the finite factor is not cyclic"),
        },
        _ => return none("G has more than one finite factor"),
    };
    let rank = (p as u128)
        .checked_pow(n * r)
        .and_then(|v| u64::try_from(v).ok());
    let rank_text = rank
        .map(|v| v.to_string())
        .unwrap_or_else(|| format!("{p}^{}", n * r));
    let cyclic = format!("Z/{}", (p as usize).pow(r));
    let xl = x.label();
    let gl = g.label();
    let u0 = OpenNormalDescriptor::new(Default::default(), vec![FiniteSub::Identity]).label(&shape);
    let statement = format!(
        "π_*({hk}) is free of rank {rank_text} > 1 over K({n})^*; since U = {u0} has order prime to {p}, \
         {hg} ≃ {hk}, so π_*({hg}) ≇ π_*({xs}) and there is no equivalence {xs} ≃ {hg}; \
         G does not belong to {{U}} for any family satisfying the vanishing hypotheses",
        hk = fixed(&xl, &cyclic),
        hg = fixed(&xl, &gl),
        xs = spectrum(&xl),
    );
    Ok(Refutation::Refuted(RankRefutation {
        p,
        n,
        r,
        rank,
        statement,
        imports: vec![imported::MORAVA_RANK, imported::COPRIME_VANISHING],
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refuted(g: ProfiniteDescriptor, n: u32, p: u64) -> Option<RankRefutation> {
        match refute_equivalence(&g, &SpectrumDescriptor::morava_k(n, p).unwrap()).unwrap() {
            Refutation::Refuted(r) => Some(r),
            Refutation::NoObstructionFound { .. } => None,
        }
    }

    #[test]
    fn ranks() {
        let g = |l, m| {
            ProfiniteDescriptor::product([
                ProfiniteDescriptor::p_adic(l),
                ProfiniteDescriptor::cyclic(m),
            ])
        };
        assert_eq!(refuted(g(3, 2), 1, 2).unwrap().rank, Some(2));
        assert_eq!(refuted(g(2, 9), 1, 3).unwrap().rank, Some(9));
        assert_eq!(refuted(g(2, 3), 2, 3).unwrap().rank, Some(9));
        assert!(refuted(ProfiniteDescriptor::p_adic(2), 1, 3).is_none());
        assert!(refuted(g(3, 9), 1, 3).is_none());
        assert!(refuted(g(2, 6), 1, 3).is_none());
        let r = refuted(g(2, 3), 1, 3).unwrap();
        assert!(
            r.statement.contains("G does not belong to {U}"),
            "{}",
            r.statement
        );
    }
}
