//! Descriptor-level homotopy groups of the spectra the checker reasons about.
//!
//! Nothing here builds a spectrum; a descriptor determines `π_t` for every
//! `t` as a [`StructuredAbelian`].

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian::{validate as validate_module, Cardinal, Decomposition, StructuredAbelian};
use crate::error::{Error, Result};
use crate::primes::{is_prime, PrimeSet};

/// Largest combined period for which all degrees are enumerated by residue.
const MAX_PERIOD: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpectrumDescriptor {
    /// Eilenberg-Mac Lane spectrum of `Q`.
    Hq,
    /// Morava K-theory `K(n)` at `p`, `n ≥ 1`.
    MoravaK {
        n: u32,
        p: u64,
    },
    /// A single group `M` in degree `degree`.
    GradedPiece {
        group: StructuredAbelian,
        degree: i64,
    },
    /// `Σ^by inner`.
    Shift {
        by: i64,
        inner: Box<SpectrumDescriptor>,
    },
    Wedge(Vec<SpectrumDescriptor>),
    /// `⋁_{p ∈ primes} member(p)`.
    WedgeFamily {
        primes: PrimeSet,
        member: FamilyMember,
    },
}

/// Member template of a prime-indexed wedge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyMember {
    /// `K(0, p) = HQ` for every index prime.
    Hq,
    /// `K(n, p)` at each index prime.
    MoravaK { n: u32 },
}

/// `t ↦ π_t` as a finite combination of finitely supported and periodic shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradedHomotopy {
    Finite(BTreeMap<i64, StructuredAbelian>),
    /// `value` in degrees `t ≡ offset (mod period)`, zero elsewhere.
    Periodic {
        period: u64,
        offset: u64,
        value: StructuredAbelian,
    },
    Sum(Vec<GradedHomotopy>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    /// `π_t = 0` for all `t > witness`.
    BoundedAbove {
        witness: i64,
    },
    Unbounded,
}

impl Boundedness {
    pub fn is_bounded(self) -> bool {
        matches!(self, Boundedness::BoundedAbove { .. })
    }
}

fn morava_period(n: u32, p: u64) -> Result<u64> {
    p.checked_pow(n)
        .and_then(|q| (q - 1).checked_mul(2))
        .ok_or_else(|| Error::InvalidInput(format!("period of K({n},{p}) overflows")))
}

impl SpectrumDescriptor {
    pub fn morava_k(n: u32, p: u64) -> Result<Self> {
        let d = SpectrumDescriptor::MoravaK { n, p };
        d.validate()?;
        Ok(d)
    }

    pub fn graded_piece(group: StructuredAbelian, degree: i64) -> Self {
        SpectrumDescriptor::GradedPiece { group, degree }
    }

    pub fn shift(by: i64, inner: SpectrumDescriptor) -> Self {
        SpectrumDescriptor::Shift {
            by,
            inner: Box::new(inner),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpectrumDescriptor::Hq => Ok(()),
            SpectrumDescriptor::MoravaK { n, p } => {
                if *n == 0 {
                    return Err(Error::InvalidInput("K(0, p) is HQ; write \"hq\"".into()));
                }
                if !is_prime(*p) {
                    return Err(Error::InvalidInput(format!(
                        "K({n}, {p}): {p} is not prime"
                    )));
                }
                morava_period(*n, *p).map(|_| ())
            }
            SpectrumDescriptor::GradedPiece { group, .. } => {
                validate_module(group).map_err(Error::InvalidInput)
            }
            SpectrumDescriptor::Shift { inner, .. } => inner.validate(),
            SpectrumDescriptor::Wedge(xs) => xs.iter().try_for_each(Self::validate),
            SpectrumDescriptor::WedgeFamily { primes, member } => {
                if primes.is_empty() {
                    return Err(Error::InvalidInput("wedge family over no primes".into()));
                }
                match (member, primes.members()) {
                    (FamilyMember::Hq, _) => Ok(()),
                    (FamilyMember::MoravaK { n }, Some(ps)) => ps
                        .iter()
                        .try_for_each(|&p| SpectrumDescriptor::MoravaK { n: *n, p }.validate()),
                    (FamilyMember::MoravaK { .. }, None) => Err(Error::InvalidInput(
                        "Morava K-theory wedge families need an explicit finite prime set".into(),
                    )),
                }
            }
        }
    }

    /// The homotopy shape; the descriptor must validate.
    pub fn homotopy(&self) -> GradedHomotopy {
        match self {
            SpectrumDescriptor::Hq => {
                GradedHomotopy::Finite([(0, StructuredAbelian::rationals())].into_iter().collect())
            }
            SpectrumDescriptor::MoravaK { n, p } => GradedHomotopy::Periodic {
                period: morava_period(*n, *p).expect("validated"),
                offset: 0,
                value: StructuredAbelian::cyclic(*p),
            },
            SpectrumDescriptor::GradedPiece { group, degree } => {
                GradedHomotopy::Finite([(*degree, group.normalize())].into_iter().collect())
            }
            SpectrumDescriptor::Shift { by, inner } => inner.homotopy().shifted(*by),
            SpectrumDescriptor::Wedge(xs) => {
                GradedHomotopy::Sum(xs.iter().map(Self::homotopy).collect())
            }
            SpectrumDescriptor::WedgeFamily { primes, member } => match member {
                FamilyMember::Hq => {
                    let dim = match primes.members() {
                        Some(ps) => Cardinal::Finite(ps.len() as u64),
                        None => Cardinal::Countable,
                    };
                    GradedHomotopy::Finite(
                        [(0, StructuredAbelian::rational_vs(dim))]
                            .into_iter()
                            .collect(),
                    )
                }
                FamilyMember::MoravaK { n } => GradedHomotopy::Sum(
                    primes
                        .members()
                        .expect("validated")
                        .into_iter()
                        .map(|p| SpectrumDescriptor::MoravaK { n: *n, p }.homotopy())
                        .collect(),
                ),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            SpectrumDescriptor::Hq => "HQ".into(),
            SpectrumDescriptor::MoravaK { n, p } => format!("K({n},{p})"),
            SpectrumDescriptor::GradedPiece { group, degree } => {
                let m = group.label();
                let base = if m.contains(' ') {
                    format!("H({m})")
                } else {
                    format!("H{m}")
                };
                if *degree == 0 {
                    base
                } else {
                    format!("Σ^{degree} {base}")
                }
            }
            SpectrumDescriptor::Shift { by, inner } => format!("Σ^{by} ({})", inner.label()),
            SpectrumDescriptor::Wedge(xs) if xs.is_empty() => "*".into(),
            SpectrumDescriptor::Wedge(xs) => {
                xs.iter().map(Self::label).collect::<Vec<_>>().join(" ∨ ")
            }
            SpectrumDescriptor::WedgeFamily { primes, member } => {
                let m = match member {
                    FamilyMember::Hq => "K(0,p)".to_string(),
                    FamilyMember::MoravaK { n } => format!("K({n},p)"),
                };
                format!("⋁_{{p ∈ {primes}}} {m}")
            }
        }
    }
}

impl fmt::Display for SpectrumDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl GradedHomotopy {
    fn shifted(self, by: i64) -> Self {
        match self {
            GradedHomotopy::Finite(m) => {
                GradedHomotopy::Finite(m.into_iter().map(|(t, v)| (t + by, v)).collect())
            }
            GradedHomotopy::Periodic {
                period,
                offset,
                value,
            } => GradedHomotopy::Periodic {
                period,
                offset: (offset as i64 + by).rem_euclid(period as i64) as u64,
                value,
            },
            GradedHomotopy::Sum(xs) => {
                GradedHomotopy::Sum(xs.into_iter().map(|x| x.shifted(by)).collect())
            }
        }
    }

    fn collect_at(&self, t: i64, out: &mut Vec<StructuredAbelian>) {
        match self {
            GradedHomotopy::Finite(m) => out.extend(m.get(&t).cloned()),
            GradedHomotopy::Periodic {
                period,
                offset,
                value,
            } => {
                if t.rem_euclid(*period as i64) as u64 == *offset {
                    out.push(value.clone());
                }
            }
            GradedHomotopy::Sum(xs) => xs.iter().for_each(|x| x.collect_at(t, out)),
        }
    }

    /// `π_t` in normal form.
    pub fn at(&self, t: i64) -> StructuredAbelian {
        let mut parts = Vec::new();
        self.collect_at(t, &mut parts);
        StructuredAbelian::direct_sum(parts)
    }

    fn visit(&self, finite: &mut Vec<i64>, periodic: &mut Vec<(u64, bool)>) {
        match self {
            GradedHomotopy::Finite(m) => {
                finite.extend(m.iter().filter(|(_, v)| !v.is_zero()).map(|(t, _)| *t))
            }
            GradedHomotopy::Periodic { period, value, .. } => {
                periodic.push((*period, !value.is_zero()))
            }
            GradedHomotopy::Sum(xs) => xs.iter().for_each(|x| x.visit(finite, periodic)),
        }
    }

    pub fn boundedness(&self) -> Boundedness {
        let (mut finite, mut periodic) = (Vec::new(), Vec::new());
        self.visit(&mut finite, &mut periodic);
        if periodic.iter().any(|(_, nonzero)| *nonzero) {
            return Boundedness::Unbounded;
        }
        Boundedness::BoundedAbove {
            witness: finite.into_iter().max().unwrap_or(0),
        }
    }

    /// Representative degrees covering every value `π_t` takes over all `t ∈ Z`,
    /// one per distinct value, or `None` if the combined period is too large.
    pub fn degree_cover(&self) -> Option<Vec<(i64, StructuredAbelian)>> {
        let (mut finite, mut periodic) = (Vec::new(), Vec::new());
        self.visit(&mut finite, &mut periodic);
        let mut period: u64 = 1;
        for (d, _) in &periodic {
            period = period.lcm(d);
            if period > MAX_PERIOD {
                return None;
            }
        }
        let top = finite.iter().copied().max().unwrap_or(0);
        let base = (top.div_euclid(period as i64) + 1) * period as i64;
        let mut degrees = finite;
        degrees.sort_unstable();
        degrees.dedup();
        degrees.extend((0..period as i64).map(|r| base + r));
        let mut out: Vec<(i64, StructuredAbelian)> = Vec::new();
        for t in degrees {
            let v = self.at(t);
            if !out.iter().any(|(_, w)| *w == v) {
                out.push((t, v));
            }
        }
        Some(out)
    }
}

/// `π_t(X)`.
pub fn homotopy_of(x: &SpectrumDescriptor, t: i64) -> StructuredAbelian {
    x.homotopy().at(t)
}

pub fn is_bounded_above(x: &SpectrumDescriptor) -> Boundedness {
    x.homotopy().boundedness()
}

/// `π_t(X) ≅ D_t ⊕ T_t` with `D_t` torsion-free divisible and `T_t` `J`-torsion.
pub fn torsion_profile(x: &SpectrumDescriptor, t: i64, j: &PrimeSet) -> Decomposition {
    homotopy_of(x, t).decompose_div_plus_torsion(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn morava_periodicity() {
        let k12 = SpectrumDescriptor::morava_k(1, 2).unwrap();
        assert_eq!(homotopy_of(&k12, 2), StructuredAbelian::cyclic(2));
        let k13 = SpectrumDescriptor::morava_k(1, 3).unwrap();
        assert_eq!(homotopy_of(&k13, 2), StructuredAbelian::Zero);
        assert_eq!(homotopy_of(&k13, -4), StructuredAbelian::cyclic(3));
        assert!(SpectrumDescriptor::morava_k(0, 3).is_err());
        assert!(SpectrumDescriptor::morava_k(1, 4).is_err());
    }

    #[test]
    fn boundedness() {
        assert_eq!(
            is_bounded_above(&SpectrumDescriptor::Hq),
            Boundedness::BoundedAbove { witness: 0 }
        );
        let k = SpectrumDescriptor::morava_k(2, 2).unwrap();
        assert_eq!(is_bounded_above(&k), Boundedness::Unbounded);
        let w = SpectrumDescriptor::Wedge(vec![SpectrumDescriptor::Hq, k]);
        assert_eq!(is_bounded_above(&w), Boundedness::Unbounded);
        let piece = SpectrumDescriptor::graded_piece(StructuredAbelian::cyclic(2), -3);
        assert_eq!(
            is_bounded_above(&piece),
            Boundedness::BoundedAbove { witness: -3 }
        );
    }

    #[test]
    fn shifts_and_wedges() {
        let x = SpectrumDescriptor::shift(1, SpectrumDescriptor::morava_k(1, 3).unwrap());
        assert_eq!(homotopy_of(&x, 5), StructuredAbelian::cyclic(3));
        assert_eq!(homotopy_of(&x, 4), StructuredAbelian::Zero);
        let w = SpectrumDescriptor::WedgeFamily {
            primes: PrimeSet::explicit([2, 3]),
            member: FamilyMember::MoravaK { n: 1 },
        };
        w.validate().unwrap();
        assert_eq!(homotopy_of(&w, 4).label(), "Z/6");
        assert_eq!(homotopy_of(&w, 2).label(), "Z/2");
        let q = SpectrumDescriptor::WedgeFamily {
            primes: PrimeSet::All,
            member: FamilyMember::Hq,
        };
        assert_eq!(homotopy_of(&q, 0).label(), "Q^ω");
        let bad = SpectrumDescriptor::WedgeFamily {
            primes: PrimeSet::All,
            member: FamilyMember::MoravaK { n: 1 },
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn degree_cover_sees_every_value() {
        let w = SpectrumDescriptor::Wedge(vec![
            SpectrumDescriptor::Hq,
            SpectrumDescriptor::morava_k(1, 2).unwrap(),
            SpectrumDescriptor::morava_k(1, 3).unwrap(),
        ]);
        let cover = w.homotopy().degree_cover().unwrap();
        let labels: Vec<String> = cover.iter().map(|(_, v)| v.label()).collect();
        assert_eq!(labels, ["Z/6 ⊕ Q", "Z/6", "0", "Z/2"]);
        for t in -30..30 {
            assert!(cover.iter().any(|(_, v)| *v == homotopy_of(&w, t)));
        }
    }

    #[test]
    fn profiles() {
        let j = PrimeSet::explicit([2]);
        match torsion_profile(&SpectrumDescriptor::Hq, 0, &j) {
            Decomposition::Split { divisible, torsion } => {
                assert_eq!(divisible, StructuredAbelian::rationals());
                assert!(torsion.is_zero());
            }
            d => panic!("{d:?}"),
        }
        let z = SpectrumDescriptor::graded_piece(StructuredAbelian::integers(), 0);
        assert_eq!(torsion_profile(&z, 0, &j), Decomposition::NotDecomposable);
    }

    #[test]
    fn json_grammar() {
        let s = r#"{"wedge": ["hq", {"morava_k": {"n": 1, "p": 3}}, {"shift": {"by": 2, "inner": "hq"}}]}"#;
        let d: SpectrumDescriptor = serde_json::from_str(s).unwrap();
        assert_eq!(d.label(), "HQ ∨ K(1,3) ∨ Σ^2 (HQ)");
        assert_eq!(
            serde_json::from_str::<SpectrumDescriptor>(&serde_json::to_string(&d).unwrap())
                .unwrap(),
            d
        );
        assert!(serde_json::from_str::<SpectrumDescriptor>(
            r#"{"morava_k": {"n": 1, "p": 3, "x": 0}}"#
        )
        .is_err());
    }
}
