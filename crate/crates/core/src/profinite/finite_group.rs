//! Finite groups stored as direct products of cyclic and tabulated factors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Factor {
    /// `Z/n` with elements `0..n` and addition mod `n`.
    Cyclic(usize),
    /// An explicit group on `0..n`, identity 0, with row-major multiplication table.
    Table {
        name: Option<String>,
        n: usize,
        mul: Arc<Vec<u32>>,
        inv: Arc<Vec<u32>>,
    },
}

impl Factor {
    fn size(&self) -> usize {
        match self {
            Factor::Cyclic(n) => *n,
            Factor::Table { n, .. } => *n,
        }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        match self {
            Factor::Cyclic(n) => (a + b) % n,
            Factor::Table { n, mul, .. } => mul[a * n + b] as usize,
        }
    }

    fn inv(&self, a: usize) -> usize {
        match self {
            Factor::Cyclic(n) => (n - a) % n,
            Factor::Table { inv, .. } => inv[a] as usize,
        }
    }

    fn label(&self) -> String {
        match self {
            Factor::Cyclic(n) => format!("Z/{n}"),
            Factor::Table { name: Some(s), .. } => s.clone(),
            Factor::Table { n, .. } => format!("G{n}"),
        }
    }
}

/// A finite group with elements `0..size`, identity 0.
///
/// Elements of a product are encoded in mixed radix with the last factor
/// varying fastest, so `Z/2 × Z/3` lists `(0,0), (0,1), (0,2), (1,0), ...`.
/// Cyclic factors are never tabulated; [`FiniteGroupTable::table`]
/// materializes the full multiplication table on demand.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroupTable {
    factors: Vec<Factor>,
    size: usize,
}

impl FiniteGroupTable {
    pub fn trivial() -> Self {
        FiniteGroupTable {
            factors: Vec::new(),
            size: 1,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group of order 0");
        if n == 1 {
            return Self::trivial();
        }
        FiniteGroupTable {
            factors: vec![Factor::Cyclic(n)],
            size: n,
        }
    }

    /// Direct product, factors in the given order. Fails if the order overflows.
    pub fn product<I: IntoIterator<Item = FiniteGroupTable>>(groups: I) -> Result<Self> {
        let mut factors = Vec::new();
        let mut size: usize = 1;
        for g in groups {
            size = size.checked_mul(g.size).ok_or_else(|| {
                Error::budget("finite group order", u128::MAX, usize::MAX as u128)
            })?;
            factors.extend(g.factors);
        }
        Ok(FiniteGroupTable { factors, size })
    }

    /// Validates and wraps an explicit multiplication table.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_table_named(None, table)
    }

    pub(crate) fn from_table_named(name: Option<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Err(Error::InvalidInput(format!("multiplication table: {m}")));
        if n == 0 {
            return bad("empty table");
        }
        if n > 512 {
            return bad("tables larger than 512 elements are not accepted");
        }
        if table
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return bad("table must be square with entries in 0..n");
        }
        for (a, row) in table.iter().enumerate() {
            if row[0] != a || table[0][a] != a {
                return bad("element 0 must be the identity");
            }
        }
        let mut inv = vec![0u32; n];
        for (a, row) in table.iter().enumerate() {
            match row.iter().position(|&x| x == 0) {
                Some(b) => inv[a] = b as u32,
                None => return bad(&format!("element {a} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return bad(&format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        if n == 1 {
            return Ok(Self::trivial());
        }
        let mul = table.into_iter().flatten().map(|x| x as u32).collect();
        Ok(FiniteGroupTable {
            factors: vec![Factor::Table {
                name,
                n,
                mul: Arc::new(mul),
                inv: Arc::new(inv),
            }],
            size: n,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// Orders of the cyclic factors, when every factor is cyclic.
    pub fn cyclic_orders(&self) -> Option<Vec<usize>> {
        self.factors
            .iter()
            .map(|f| match f {
                Factor::Cyclic(n) => Some(*n),
                Factor::Table { .. } => None,
            })
            .collect()
    }

    pub fn factor_sizes(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::size).collect()
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.factors.len()];
        for (i, f) in self.factors.iter().enumerate().rev() {
            d[i] = x % f.size();
            x /= f.size();
        }
        d
    }

    fn compose(&self, digits: &[usize]) -> usize {
        self.factors
            .iter()
            .zip(digits)
            .fold(0, |acc, (f, d)| acc * f.size() + d)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let [f] = self.factors.as_slice() {
            return f.mul(a, b);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let d: Vec<usize> = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| f.mul(da[i], db[i]))
            .collect();
        self.compose(&d)
    }

    pub fn inv(&self, a: usize) -> usize {
        let d: Vec<usize> = self
            .digits(a)
            .into_iter()
            .zip(&self.factors)
            .map(|(x, f)| f.inv(x))
            .collect();
        self.compose(&d)
    }

    /// Row-major `size × size` multiplication table.
    pub fn flat_table(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.size * self.size);
        for a in 0..self.size {
            for b in 0..self.size {
                out.push(self.mul(a, b) as u32);
            }
        }
        out
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|a| (0..self.size).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.factors.iter().all(|f| match f {
            Factor::Cyclic(_) => true,
            Factor::Table { n, mul, .. } => {
                (0..*n).all(|a| (0..*n).all(|b| mul[a * n + b] == mul[b * n + a]))
            }
        })
    }

    /// A generating set: one generator per cyclic factor and every element of each tabulated factor.
    pub fn generators(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            let range = match f {
                Factor::Cyclic(_) => 1..2,
                Factor::Table { n, .. } => 1..*n,
            };
            for v in range {
                let mut d = vec![0; self.factors.len()];
                d[i] = v;
                out.push(self.compose(&d));
            }
        }
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Checks that `elems` is a subgroup, and normal when `normal` is set.
    pub fn check_subgroup(&self, elems: &BTreeSet<usize>, normal: bool) -> Result<()> {
        let err = |m: String| Err(Error::InvalidSubgroup(m));
        if elems.iter().any(|&x| x >= self.size) {
            return err("element index out of range".into());
        }
        if !elems.contains(&0) {
            return err("subgroup must contain the identity".into());
        }
        for &a in elems {
            if !elems.contains(&self.inv(a)) {
                return err(format!("inverse of {a} missing"));
            }
            for &b in elems {
                if !elems.contains(&self.mul(a, b)) {
                    return err(format!("not closed: {a}·{b}"));
                }
            }
        }
        if normal {
            for g in 0..self.size {
                let gi = self.inv(g);
                for &h in elems {
                    if !elems.contains(&self.mul(self.mul(g, h), gi)) {
                        return err(format!("not normal: conjugate of {h} by {g}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `G/N` with cosets ordered by their least element, plus the projection.
    pub fn quotient(&self, n: &BTreeSet<usize>) -> Result<(FiniteGroupTable, Vec<usize>)> {
        self.check_subgroup(n, true)?;
        if n.len() == 1 {
            return Ok((self.clone(), (0..self.size).collect()));
        }
        let mut coset = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for g in 0..self.size {
            if coset[g] != usize::MAX {
                continue;
            }
            for &h in n {
                coset[self.mul(g, h)] = reps.len();
            }
            reps.push(g);
        }
        let table: Vec<Vec<usize>> = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset[self.mul(a, b)]).collect())
            .collect();
        Ok((Self::from_table(table)?, coset))
    }

    /// The subgroup on `elems` (assumed valid), elements renumbered in increasing order.
    pub fn subgroup(&self, elems: &BTreeSet<usize>) -> Result<FiniteGroupTable> {
        self.check_subgroup(elems, false)?;
        if elems.len() == self.size {
            return Ok(self.clone());
        }
        let idx: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| idx[&self.mul(a, b)]).collect())
            .collect();
        Self::from_table(table)
    }

    /// Verifies that `q : self → target` is a surjective homomorphism.
    pub fn check_surjection(&self, target: &FiniteGroupTable, q: &[usize]) -> Result<()> {
        if q.len() != self.size || q.iter().any(|&y| y >= target.size) {
            return Err(Error::NotAHomomorphism(
                "index map has the wrong shape".into(),
            ));
        }
        for s in self.generators() {
            for x in 0..self.size {
                if q[self.mul(s, x)] != target.mul(q[s], q[x]) {
                    return Err(Error::NotAHomomorphism(format!("fails on ({s}, {x})")));
                }
            }
        }
        let mut hit = vec![false; target.size];
        for &y in q {
            hit[y] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(Error::NotAHomomorphism("map is not surjective".into()));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(Factor::label)
            .collect::<Vec<_>>()
            .join("×")
    }

    /// Named groups available to scenario files.
    pub fn named(name: &str) -> Option<Self> {
        Some(match name {
            "trivial" | "1" => Self::trivial(),
            "S3" => permutation_group("S3", &[vec![1, 0, 2], vec![1, 2, 0]]),
            "D4" => permutation_group("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]),
            "Q8" => quaternion_group(),
            "V4" => Self::product([Self::cyclic(2), Self::cyclic(2)]).ok()?,
            _ => {
                let n = name.strip_prefix("Z/")?.parse().ok()?;
                if n == 0 {
                    return None;
                }
                Self::cyclic(n)
            }
        })
    }
}

fn closure<T: Ord + Clone>(identity: T, gens: &[T], mul: impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut set: BTreeSet<T> = [identity.clone()].into_iter().collect();
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = mul(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn tabulate<T: Ord + Clone>(
    name: &str,
    elems: Vec<T>,
    mul: impl Fn(&T, &T) -> T,
) -> FiniteGroupTable {
    let idx: BTreeMap<T, usize> = elems
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| idx[&mul(a, b)]).collect())
        .collect();
    FiniteGroupTable::from_table_named(Some(name.into()), table).expect("catalog group")
}

fn permutation_group(name: &str, gens: &[Vec<usize>]) -> FiniteGroupTable {
    let n = gens[0].len();
    let compose = |a: &Vec<usize>, b: &Vec<usize>| b.iter().map(|&i| a[i]).collect::<Vec<_>>();
    let elems = closure((0..n).collect(), gens, compose);
    tabulate(name, elems, compose)
}

fn quaternion_group() -> FiniteGroupTable {
    type Q = [i8; 4];
    let mul = |a: &Q, b: &Q| -> Q {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    };
    let one: Q = [1, 0, 0, 0];
    let mut elems = closure(one, &[[0, 1, 0, 0], [0, 0, 1, 0]], mul);
    elems.retain(|e| *e != one);
    elems.insert(0, one);
    tabulate("Q8", elems, mul)
}

impl fmt::Debug for FiniteGroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroupTable({}, order {})", self.label(), self.size)
    }
}

impl fmt::Display for FiniteGroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TableRepr {
    Cyclic(usize),
    Named(String),
    Table(Vec<Vec<usize>>),
    Product(Vec<TableRepr>),
}

impl TableRepr {
    fn build(self) -> std::result::Result<FiniteGroupTable, String> {
        match self {
            TableRepr::Cyclic(0) => Err("cyclic group of order 0".into()),
            TableRepr::Cyclic(n) => Ok(FiniteGroupTable::cyclic(n)),
            TableRepr::Named(s) => {
                FiniteGroupTable::named(&s).ok_or_else(|| format!("unknown group `{s}`"))
            }
            TableRepr::Table(t) => FiniteGroupTable::from_table(t).map_err(|e| e.to_string()),
            TableRepr::Product(gs) => {
                let gs = gs
                    .into_iter()
                    .map(TableRepr::build)
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                FiniteGroupTable::product(gs).map_err(|e| e.to_string())
            }
        }
    }

    fn of_factor(f: &Factor) -> TableRepr {
        match f {
            Factor::Cyclic(n) => TableRepr::Cyclic(*n),
            Factor::Table { name: Some(s), .. } => TableRepr::Named(s.clone()),
            Factor::Table { n, mul, .. } => TableRepr::Table(
                mul.chunks(*n)
                    .map(|r| r.iter().map(|&x| x as usize).collect())
                    .collect(),
            ),
        }
    }
}

impl Serialize for FiniteGroupTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self.factors.as_slice() {
            [] => TableRepr::Named("trivial".into()),
            [f] => TableRepr::of_factor(f),
            fs => TableRepr::Product(fs.iter().map(TableRepr::of_factor).collect()),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroupTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TableRepr::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}
