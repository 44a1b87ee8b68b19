//! Small finite groups given by multiplication tables, and their labels.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::abelian::FinAbGroup;

pub const MAX_SMALL_GROUP_ORDER: usize = 16;

/// Isomorphism label of a small group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupLabel {
    /// Abelian group by invariant factors `d1 | d2 | ...` (empty for the trivial group).
    Abelian(Vec<u64>),
    /// Dihedral group of order `2n`.
    Dihedral(u64),
    Quaternion,
    NonAbelian(u64),
}

impl GroupLabel {
    pub fn cyclic(n: u64) -> GroupLabel {
        if n == 1 {
            GroupLabel::Abelian(vec![])
        } else {
            GroupLabel::Abelian(vec![n])
        }
    }

    /// `Z_a x Z_b x ...` normalised to invariant factors.
    pub fn product(orders: &[u64]) -> GroupLabel {
        let g = FinAbGroup::from_cyclic_orders(orders).expect("positive orders");
        GroupLabel::Abelian(g.factors().iter().map(|d| d.to_u64().unwrap()).collect())
    }

    pub fn order(&self) -> u64 {
        match self {
            GroupLabel::Abelian(f) => f.iter().product(),
            GroupLabel::Dihedral(n) => 2 * n,
            GroupLabel::Quaternion => 8,
            GroupLabel::NonAbelian(n) => *n,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Abelian(factors) if factors.is_empty() => write!(f, "1"),
            GroupLabel::Abelian(factors) => {
                // largest factor first, equal factors as powers: Z4xZ2, Z2^3
                let mut parts = Vec::new();
                let mut rev: Vec<u64> = factors.iter().rev().copied().collect();
                while let Some(&d) = rev.first() {
                    let k = rev.iter().take_while(|&&x| x == d).count();
                    parts.push(if k == 1 { format!("Z{d}") } else { format!("Z{d}^{k}") });
                    rev.drain(..k);
                }
                write!(f, "{}", parts.join("x"))
            }
            GroupLabel::Dihedral(n) => write!(f, "D{n}"),
            GroupLabel::Quaternion => write!(f, "Q8"),
            GroupLabel::NonAbelian(n) => write!(f, "nonabelian-{n}"),
        }
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for GroupLabel {
    type Err = Error;

    /// Parses `Z8`, `Z4xZ2`, `Z2xZ4`, `Z2^3`, `Z_8`, `D4`, `Q8`, `1`.
    fn from_str(s: &str) -> Result<GroupLabel> {
        let t = s.trim().replace(['×', '*'], "x").replace(' ', "");
        let bad = || Error::Parse(format!("unrecognised group label {s:?}"));
        if t == "1" {
            return Ok(GroupLabel::Abelian(vec![]));
        }
        if t == "Q8" {
            return Ok(GroupLabel::Quaternion);
        }
        if let Some(n) = t.strip_prefix('D') {
            return n.parse().map(GroupLabel::Dihedral).map_err(|_| bad());
        }
        let mut orders = Vec::new();
        for part in t.split('x') {
            let body = part.strip_prefix('Z').ok_or_else(bad)?;
            let body = body.trim_start_matches('_');
            let (base, exp) = match body.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let d: u64 = base.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            orders.extend(std::iter::repeat(d).take(exp));
        }
        Ok(GroupLabel::product(&orders))
    }
}

/// A finite group of order at most 16 given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGroup {
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    identity: usize,
}

impl SmallGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn new(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<SmallGroup> {
        let n = table.len();
        if n == 0 || n > MAX_SMALL_GROUP_ORDER {
            return Err(Error::InvalidGroup(format!("order {n} outside 1..=16")));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup("one label per element required".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not an n x n table on n elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == identity && table[y][x] == identity) {
                return Err(Error::InvalidGroup(format!("element {} has no inverse", labels[x])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(SmallGroup {
            table,
            labels,
            identity,
        })
    }

    /// Closure of `generators` under `mul`, identity listed first.
    pub fn generated_by<T, M, L>(identity: T, generators: &[T], mul: M, label: L) -> Result<SmallGroup>
    where
        T: Clone + Eq + Hash,
        M: Fn(&T, &T) -> T,
        L: Fn(&T) -> String,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() == MAX_SMALL_GROUP_ORDER {
                        return Err(Error::InvalidGroup("generated group exceeds order 16".into()));
                    }
                    index.insert(x.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let table = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        index
                            .get(&mul(a, b))
                            .copied()
                            .ok_or_else(|| Error::InvalidGroup("generators do not close".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = elems.iter().map(label).collect();
        SmallGroup::new(table, labels)
    }

    /// Permutation group generated by permutations of `0..n` (images as vectors).
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<SmallGroup> {
        let n = generators.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..n).collect();
        // (a*b)(i) = a(b(i))
        SmallGroup::generated_by(
            id,
            generators,
            |a, b| b.iter().map(|&i| a[i]).collect(),
            |p| format!("{p:?}"),
        )
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn label_of(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .expect("validated group")
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        (0..k).fold(self.identity, |acc, _| self.table[acc][a])
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.table[x][a];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Number of elements of each order.
    pub fn order_census(&self) -> BTreeMap<u64, usize> {
        let mut census = BTreeMap::new();
        for a in 0..self.order() {
            *census.entry(self.element_order(a)).or_insert(0) += 1;
        }
        census
    }

    /// Invariant factors of an abelian group read off from the element-order census.
    pub fn abelian_invariants(&self) -> Option<Vec<u64>> {
        if !self.is_abelian() {
            return None;
        }
        let n = self.order() as u64;
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                while m % p == 0 {
                    m /= p;
                }
                // s_j = log_p #{x : x^(p^j) = 1}; #{a_i >= j} = s_j - s_{j-1}
                let mut exps_ge = Vec::new();
                let mut prev = 0u32;
                let mut pj = p;
                loop {
                    let count = (0..self.order())
                        .filter(|&a| self.pow(a, pj) == self.identity)
                        .count() as u64;
                    let s = log_exact(count, p);
                    if s == prev {
                        break;
                    }
                    exps_ge.push(s - prev);
                    prev = s;
                    pj *= p;
                }
                // convert "number of parts >= j" to the partition
                let parts = exps_ge.first().copied().unwrap_or(0) as usize;
                let mut exps = vec![0u32; parts];
                for ge in &exps_ge {
                    for e in exps.iter_mut().take(*ge as usize) {
                        *e += 1;
                    }
                }
                per_prime.push((p, exps));
            }
            p += 1;
        }
        let k = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..k)
            .map(|t| {
                per_prime
                    .iter()
                    .map(|(p, e)| e.get(t).map_or(1, |&a| p.pow(a)))
                    .product()
            })
            .collect();
        factors.sort_unstable();
        Some(factors)
    }

    /// Isomorphism label from abelianness and the element-order census.
    pub fn classify(&self) -> GroupLabel {
        if let Some(f) = self.abelian_invariants() {
            return GroupLabel::Abelian(f);
        }
        let n = self.order() as u64;
        let census = self.order_census();
        if n == 8 && census.get(&4) == Some(&6) {
            return GroupLabel::Quaternion;
        }
        if n % 2 == 0 {
            let half = n / 2;
            // dihedral: a rotation r of order n/2 and every element outside <r> an involution
            if let Some(r) = (0..self.order()).find(|&a| self.element_order(a) == half) {
                let rotations: Vec<usize> = (0..half).map(|k| self.pow(r, k)).collect();
                let outside_are_involutions = (0..self.order())
                    .filter(|a| !rotations.contains(a))
                    .all(|a| self.element_order(a) == 2);
                if outside_are_involutions {
                    return GroupLabel::Dihedral(half);
                }
            }
        }
        GroupLabel::NonAbelian(n)
    }

    /// Relabels elements by the permutation `perm` (old index -> new index).
    pub fn relabel(&self, perm: &[usize]) -> Result<SmallGroup> {
        let n = self.order();
        let mut table = vec![vec![0; n]; n];
        let mut labels = vec![String::new(); n];
        for a in 0..n {
            labels[perm[a]] = self.labels[a].clone();
            for b in 0..n {
                table[perm[a]][perm[b]] = perm[self.table[a][b]];
            }
        }
        SmallGroup::new(table, labels)
    }
}

fn log_exact(mut x: u64, p: u64) -> u32 {
    let mut k = 0;
    while x > 1 {
        debug_assert_eq!(x % p, 0);
        x /= p;
        k += 1;
    }
    k
}

/// Classifies a group of order 8: `Z8`, `Z4xZ2`, `Z2^3`, `D4` or `Q8`.
pub fn classify_order8(g: &SmallGroup) -> Result<GroupLabel> {
    if g.order() != 8 {
        return Err(Error::InvalidGroup(format!("order {} is not 8", g.order())));
    }
    let census = g.order_census();
    let count = |k: u64| census.get(&k).copied().unwrap_or(0);
    let label = if g.is_abelian() {
        if count(8) > 0 {
            GroupLabel::cyclic(8)
        } else if count(4) > 0 {
            GroupLabel::Abelian(vec![2, 4])
        } else {
            GroupLabel::Abelian(vec![2, 2, 2])
        }
    } else if count(4) == 2 {
        GroupLabel::Dihedral(4)
    } else if count(4) == 6 {
        GroupLabel::Quaternion
    } else {
        return Err(Error::InvalidGroup("impossible order-8 census".into()));
    };
    Ok(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_cubed() -> SmallGroup {
        SmallGroup::generated_by(
            0u8,
            &[1, 2, 4],
            |a, b| a ^ b,
            |a| format!("{a:03b}"),
        )
        .unwrap()
    }

    fn d4() -> SmallGroup {
        // rho = (0 1 2 3), g1 = reflection fixing 0 and 2
        SmallGroup::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).unwrap()
    }

    #[test]
    fn elementary_abelian() {
        let g = z2_cubed();
        assert_eq!(classify_order8(&g).unwrap().to_string(), "Z2^3");
    }

    #[test]
    fn dihedral_from_presentation() {
        let g = d4();
        assert_eq!(g.order(), 8);
        assert_eq!(classify_order8(&g).unwrap(), GroupLabel::Dihedral(4));
        assert_eq!(g.classify(), GroupLabel::Dihedral(4));
        // g1 rho g1 = rho^3
        let rho = g.index_of("[1, 2, 3, 0]").unwrap();
        let g1 = g.index_of("[0, 3, 2, 1]").unwrap();
        assert_eq!(g.mul(g.mul(g1, rho), g1), g.pow(rho, 3));
    }

    #[test]
    fn quaternion_and_cyclic() {
        // Q8 as unit quaternions: (sign, basis) with basis 0=1, 1=i, 2=j, 3=k
        let mul = |a: &(i8, u8), b: &(i8, u8)| -> (i8, u8) {
            const T: [[(i8, u8); 4]; 4] = [
                [(1, 0), (1, 1), (1, 2), (1, 3)],
                [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                [(1, 3), (1, 2), (-1, 1), (-1, 0)],
            ];
            let (s, e) = T[a.1 as usize][b.1 as usize];
            (a.0 * b.0 * s, e)
        };
        let q8 = SmallGroup::generated_by((1, 0), &[(1, 1), (1, 2)], mul, |x| format!("{x:?}")).unwrap();
        assert_eq!(classify_order8(&q8).unwrap(), GroupLabel::Quaternion);
        let z8 = SmallGroup::generated_by(0u8, &[1], |a, b| (a + b) % 8, |a| a.to_string()).unwrap();
        assert_eq!(classify_order8(&z8).unwrap().to_string(), "Z8");
        let z4z2 =
            SmallGroup::generated_by((0u8, 0u8), &[(1, 0), (0, 1)], |a, b| ((a.0 + b.0) % 4, (a.1 + b.1) % 2), |a| format!("{a:?}"))
                .unwrap();
        assert_eq!(classify_order8(&z4z2).unwrap().to_string(), "Z4xZ2");
    }

    #[test]
    fn wrong_order_rejected() {
        let z4 = SmallGroup::generated_by(0u8, &[1], |a, b| (a + b) % 4, |a| a.to_string()).unwrap();
        assert!(classify_order8(&z4).is_err());
        assert_eq!(z4.classify(), GroupLabel::cyclic(4));
    }

    #[test]
    fn invalid_tables_rejected() {
        let not_assoc = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(SmallGroup::new(not_assoc, vec!["e".into(), "a".into(), "b".into()]).is_err());
        let no_identity = vec![vec![1, 1], vec![1, 1]];
        assert!(SmallGroup::new(no_identity, vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn labels_roundtrip() {
        for s in ["Z8", "Z4xZ2", "Z2^3", "D4", "Q8", "Z6xZ2", "1"] {
            assert_eq!(s.parse::<GroupLabel>().unwrap().to_string(), s);
        }
        assert_eq!("Z2xZ4".parse::<GroupLabel>().unwrap().to_string(), "Z4xZ2");
        assert_eq!("Z2xZ3".parse::<GroupLabel>().unwrap(), GroupLabel::cyclic(6));
        assert_eq!("Z2xZ2xZ2".parse::<GroupLabel>().unwrap().to_string(), "Z2^3");
    }

    #[test]
    fn abelian_invariants_from_census() {
        let g = SmallGroup::generated_by(
            (0u8, 0u8),
            &[(1, 0), (0, 1)],
            |a, b| ((a.0 + b.0) % 2, (a.1 + b.1) % 6),
            |a| format!("{a:?}"),
        )
        .unwrap();
        assert_eq!(g.abelian_invariants().unwrap(), vec![2, 6]);
        assert_eq!(g.classify().to_string(), "Z6xZ2");
    }
}
