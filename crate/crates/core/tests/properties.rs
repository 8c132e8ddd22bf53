use hfp_core::abelian::{
    cokernel, smith_normal_form, FgAbelianGroup, IntegerMatrix, StructuredAbelian,
};
use hfp_core::cohomology::{
    bar_complex_with, symbolic_cohomology, CohomologyEngine, SymbolicVerdict,
};
use hfp_core::primes::PrimeSet;
use hfp_core::profinite::{
    canonical_tower, Exponent, FiniteGroupTable, ProfiniteDescriptor, SupernaturalNumber,
};
use hfp_core::{Config, Execution};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn groups() -> Vec<FiniteGroupTable> {
    let mut out: Vec<FiniteGroupTable> = (1..=8).map(FiniteGroupTable::cyclic).collect();
    for name in ["V4", "S3", "D4", "Q8"] {
        out.push(FiniteGroupTable::named(name).unwrap());
    }
    out.push(
        FiniteGroupTable::product([FiniteGroupTable::cyclic(2), FiniteGroupTable::cyclic(4)])
            .unwrap(),
    );
    out
}

fn group() -> impl Strategy<Value = FiniteGroupTable> {
    let gs = groups();
    (0..gs.len()).prop_map(move |i| gs[i].clone())
}

fn module() -> impl Strategy<Value = FgAbelianGroup> {
    (0usize..=2, prop::collection::vec(2u64..=12, 0..=2)).prop_map(|(free, ts)| {
        ts.iter().fold(FgAbelianGroup::free(free), |acc, &d| {
            acc.direct_sum(&FgAbelianGroup::cyclic(d))
        })
    })
}

fn matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(|rows| IntegerMatrix::from_rows(&rows))
    })
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bar_differential_squares_to_zero(k in group(), m in module(), s_max in 1usize..=3) {
        prop_assume!(k.size().pow(s_max as u32 + 1) <= 4096);
        for mode in [Execution::Sequential, Execution::Parallel] {
            let c = bar_complex_with(&k, &m, s_max, &Config::default().budgets, mode).unwrap();
            for n in 0..s_max {
                prop_assert!(c.differential(n + 1).mul(&c.differential(n)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn positive_degrees_are_killed_by_the_group_order(k in group(), m in module(), s in 1usize..=3) {
        let h = CohomologyEngine::new(Config::default()).group_cohomology(&k, &m, s).unwrap();
        prop_assert_eq!(h.free_rank(), 0);
        let n = big(k.size() as u64);
        for d in h.invariant_factors() {
            prop_assert!(n.is_multiple_of(d), "{} does not divide {}", d, n);
        }
    }

    #[test]
    fn degree_zero_is_the_module(k in group(), m in module()) {
        let h = CohomologyEngine::new(Config::default()).group_cohomology(&k, &m, 0).unwrap();
        prop_assert_eq!(h, m);
    }

    #[test]
    fn sequential_and_parallel_agree(k in group(), m in module(), s in 0usize..=3) {
        let seq = CohomologyEngine::new(Config::sequential()).group_cohomology(&k, &m, s).unwrap();
        let par = CohomologyEngine::new(Config::default()).group_cohomology(&k, &m, s).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn symbolic_vanishing_is_computational_zero(k in group(), m in module(), s in 1usize..=3) {
        let order = SupernaturalNumber::from_u64(k.size() as u64);
        if let SymbolicVerdict::Vanishes(_) = symbolic_cohomology(&order, &StructuredAbelian::fg(m.clone()), s) {
            let h = CohomologyEngine::new(Config::default()).group_cohomology(&k, &m, s).unwrap();
            prop_assert!(h.is_trivial(), "H^{}({}; {}) = {}", s, k.label(), m, h);
        }
    }

    #[test]
    fn coprime_torsion_always_vanishes(p in prop::sample::select(vec![2u64, 3, 5]), e in 1u32..=3, q in prop::sample::select(vec![7u64, 11, 13]), s in 1usize..=4) {
        let order = SupernaturalNumber::prime_power(p, Exponent::Finite(e));
        let v = symbolic_cohomology(&order, &StructuredAbelian::cyclic(q), s);
        prop_assert!(matches!(v, SymbolicVerdict::Vanishes(_)));
        let inf = SupernaturalNumber::prime_power(p, Exponent::Infinite);
        prop_assert!(matches!(symbolic_cohomology(&inf, &StructuredAbelian::rationals(), s), SymbolicVerdict::Vanishes(_)));
    }

    #[test]
    fn inflation_is_functorial(
        which in 0usize..3,
        levels in prop::sample::subsequence(vec![0usize, 1, 2, 3], 3),
        s in 1usize..=2,
        d in prop::sample::select(vec![0u64, 2, 3, 4]),
    ) {
        let g = [
            ProfiniteDescriptor::p_adic(2),
            ProfiniteDescriptor::p_adic(3),
            ProfiniteDescriptor::product([ProfiniteDescriptor::p_adic(2), ProfiniteDescriptor::cyclic(3)]),
        ][which].clone();
        let m = if d == 0 { FgAbelianGroup::free(1) } else { FgAbelianGroup::cyclic(d) };
        let tower = canonical_tower(&g, 3, &Config::default().budgets).unwrap();
        let (a, b, c) = (levels[0], levels[1], levels[2]);
        let down = |hi: usize, lo: usize| -> Vec<usize> {
            (0..tower.quotient(hi).size())
                .map(|mut x| {
                    for j in (lo..hi).rev() {
                        x = tower.surjections[j][x];
                    }
                    x
                })
                .collect()
        };
        let eng = CohomologyEngine::new(Config::default());
        let ab = eng.inflation(tower.quotient(b), tower.quotient(a), &down(b, a), &m, s).unwrap();
        let bc = eng.inflation(tower.quotient(c), tower.quotient(b), &down(c, b), &m, s).unwrap();
        let ac = eng.inflation(tower.quotient(c), tower.quotient(a), &down(c, a), &m, s).unwrap();
        let chained = ab.then(&bc);
        prop_assert_eq!(&chained.target_orders, &ac.target_orders);
        for (i, o) in ac.target_orders.iter().enumerate() {
            for j in 0..ac.source_orders.len() {
                let r = |x: &BigInt| if o.is_zero() { x.clone() } else { x.mod_floor(o) };
                prop_assert_eq!(r(&chained.matrix[i][j]), r(&ac.matrix[i][j]));
            }
        }
    }

    #[test]
    fn smith_form_is_a_certified_diagonalization(a in matrix()) {
        let snf = smith_normal_form(&a).unwrap();
        prop_assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d.clone());
        prop_assert!(snf.d.is_diagonal());
        let diag = snf.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        let coker = cokernel(&a);
        prop_assert_eq!(coker.free_rank(), a.rows() - snf.rank());
    }

    #[test]
    fn supernatural_laws(
        xs in prop::collection::btree_map(prop::sample::select(vec![2u64, 3, 5, 7]), 0u32..=4, 0..4),
        ys in prop::collection::btree_map(prop::sample::select(vec![2u64, 3, 5, 7]), 0u32..=4, 0..4),
        inf in prop::option::of(prop::sample::select(vec![2u64, 3, 5, 7])),
    ) {
        let mk = |m: &BTreeMap<u64, u32>| {
            let mut e: BTreeMap<u64, Exponent> = m.iter().map(|(&p, &k)| (p, Exponent::Finite(k))).collect();
            if let Some(p) = inf {
                e.insert(p, Exponent::Infinite);
            }
            SupernaturalNumber::new(e, PrimeSet::explicit([]), Exponent::ZERO)
        };
        let (a, b) = (mk(&xs), mk(&ys));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.gcd(&b).mul(&a.lcm(&b)), a.mul(&b));
        prop_assert!(a.divides(&a.lcm(&b)) && a.gcd(&b).divides(&b));
        if inf.is_none() {
            let int = |m: &BTreeMap<u64, u32>| m.iter().map(|(&p, &k)| p.pow(k)).product::<u64>();
            prop_assert_eq!(a.mul(&b).to_u64(), Some(int(&xs) * int(&ys)));
        } else {
            prop_assert!(!a.is_finite());
        }
    }
}
