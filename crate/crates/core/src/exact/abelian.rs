//! Finitely generated abelian groups in invariant-factor form, and the
//! 2-divisibility test used throughout the lattice computations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::{smith_normal_form, solve_integer, IntMatrix};

/// Finite abelian group `Z_{d1} x ... x Z_{dk}` with `d1 | d2 | ... | dk`, each `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    factors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> FinAbGroup {
        FinAbGroup { factors: vec![] }
    }

    /// Builds the group from invariant factors, validating the divisibility chain.
    pub fn new(factors: Vec<BigInt>) -> Result<FinAbGroup> {
        for d in &factors {
            if d < &BigInt::from(2) {
                return Err(Error::InvalidGroup(format!("invariant factor {d} < 2")));
            }
        }
        for w in factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(Error::InvalidGroup(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub fn from_invariants(factors: &[u64]) -> Result<FinAbGroup> {
        FinAbGroup::new(factors.iter().map(|&d| BigInt::from(d)).collect())
    }

    /// Normalises an arbitrary product of cyclic groups into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<FinAbGroup> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic order 0 is not finite".into()));
        }
        let diag: Vec<BigInt> = orders.iter().map(|&d| BigInt::from(d)).collect();
        let snf = smith_normal_form(&IntMatrix::diagonal(&diag));
        let factors = snf.diagonal().into_iter().filter(|d| !d.is_one()).collect();
        FinAbGroup::new(factors)
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.factors.len()]
    }

    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.factors.len() {
            return Err(Error::Dimension(format!(
                "element of length {} in a group of rank {}",
                x.len(),
                self.factors.len()
            )));
        }
        Ok(x.iter().zip(&self.factors).map(|(a, d)| a.mod_floor(d)).collect())
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
        let sum: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        if a.len() != b.len() {
            return Err(Error::Dimension("element lengths differ".into()));
        }
        self.reduce(&sum)
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Result<Vec<BigInt>> {
        let v: Vec<BigInt> = a.iter().map(|x| k * x).collect();
        self.reduce(&v)
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        self.reduce(a).map(|r| r.iter().all(Zero::is_zero)).unwrap_or(false)
    }

    /// All elements in lexicographic order. Intended for small groups only.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![]];
        for d in &self.factors {
            let d = d.to_u64().expect("group too large to enumerate");
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |v| {
                        let mut e = prefix.clone();
                        e.push(BigInt::from(v));
                        e
                    })
                })
                .collect();
        }
        out
    }

    /// Decides whether `2h == g` modulo the subgroup generated by `modulo`,
    /// returning a half element `h` when one exists.
    pub fn is_two_divisible(&self, g: &[BigInt], modulo: &[Vec<BigInt>]) -> Result<Halving> {
        let group = AbelianGroup {
            free_rank: 0,
            torsion: self.clone(),
        };
        group.is_two_divisible(&[], g, modulo.iter().map(|s| (vec![], s.clone())).collect())
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z{d}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Outcome of a 2-divisibility query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Halving {
    pub divisible: bool,
    /// Free and torsion coordinates of `h` with `2h == g` modulo the subgroup.
    pub witness: Option<(Vec<BigInt>, Vec<BigInt>)>,
}

/// `Z^r (+) T`, the shape of a Picard group with torsion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: FinAbGroup,
}

impl AbelianGroup {
    /// Solves `2h - sum a_j s_j - sum b_i d_i e_i = g` over the integers via
    /// Smith normal form; `s_j` are subgroup generators, `d_i` the torsion relations.
    pub fn is_two_divisible(
        &self,
        g_free: &[BigInt],
        g_tors: &[BigInt],
        modulo: Vec<(Vec<BigInt>, Vec<BigInt>)>,
    ) -> Result<Halving> {
        let r = self.free_rank;
        let k = self.torsion.rank();
        if g_free.len() != r || g_tors.len() != k {
            return Err(Error::Dimension("element does not belong to the group".into()));
        }
        for (sf, st) in &modulo {
            if sf.len() != r || st.len() != k {
                return Err(Error::Dimension("subgroup generator does not belong to the group".into()));
            }
        }
        let n = r + k;
        let m = modulo.len();
        let cols = n + m + k;
        let mut a = IntMatrix::zeros(n, cols);
        for i in 0..n {
            a[(i, i)] = BigInt::from(2);
        }
        for (j, (sf, st)) in modulo.iter().enumerate() {
            for (i, x) in sf.iter().chain(st.iter()).enumerate() {
                a[(i, n + j)] = -x;
            }
        }
        for (i, d) in self.torsion.factors().iter().enumerate() {
            a[(r + i, n + m + i)] = -d;
        }
        let rhs: Vec<BigInt> = g_free.iter().chain(g_tors.iter()).cloned().collect();
        match solve_integer(&a, &rhs)? {
            None => Ok(Halving {
                divisible: false,
                witness: None,
            }),
            Some(x) => {
                let free = x[..r].to_vec();
                let tors = self.torsion.reduce(&x[r..n])?;
                Ok(Halving {
                    divisible: true,
                    witness: Some((free, tors)),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_is_divisible() {
        let g = FinAbGroup::from_invariants(&[2, 4]).unwrap();
        let h = g.is_two_divisible(&g.zero(), &[]).unwrap();
        assert!(h.divisible);
        assert_eq!(h.witness.unwrap().1, g.zero());
    }

    #[test]
    fn generator_of_z4_not_divisible() {
        let g = FinAbGroup::from_invariants(&[4]).unwrap();
        assert!(!g.is_two_divisible(&big(&[1]), &[]).unwrap().divisible);
        assert!(g.is_two_divisible(&big(&[2]), &[]).unwrap().divisible);
    }

    #[test]
    fn quotient_by_subgroup_matches_search() {
        // (1,0) in Z2 x Z4 modulo <(1,2)>
        let g = FinAbGroup::from_invariants(&[2, 4]).unwrap();
        let target = big(&[1, 0]);
        let sub = vec![big(&[1, 2])];
        let res = g.is_two_divisible(&target, &sub).unwrap();
        // 2h ranges over {(0,0),(0,2)}; (1,0) = (0,2) + (1,2)
        let brute = g.elements().iter().any(|h| {
            let two_h = g.scale(&BigInt::from(2), h).unwrap();
            [g.zero(), sub[0].clone()]
                .iter()
                .any(|s| g.add(&two_h, s).unwrap() == g.reduce(&target).unwrap())
        });
        assert_eq!(res.divisible, brute);
        assert!(brute);
        let (_, h) = res.witness.unwrap();
        let two_h = g.scale(&BigInt::from(2), &h).unwrap();
        assert!(two_h == target || g.add(&two_h, &sub[0]).unwrap() == target);
        let res = g.is_two_divisible(&big(&[1, 0]), &[big(&[0, 2])]).unwrap();
        assert!(!res.divisible);
    }

    #[test]
    fn witness_is_a_half() {
        let g = FinAbGroup::from_invariants(&[2, 6]).unwrap();
        let target = big(&[0, 4]);
        let h = g.is_two_divisible(&target, &[]).unwrap().witness.unwrap().1;
        assert_eq!(g.scale(&BigInt::from(2), &h).unwrap(), target);
    }

    #[test]
    fn chain_validated() {
        assert!(FinAbGroup::from_invariants(&[4, 2]).is_err());
        assert!(FinAbGroup::from_invariants(&[1]).is_err());
        let g = FinAbGroup::from_cyclic_orders(&[2, 3, 4]).unwrap();
        assert_eq!(g.factors(), &big(&[2, 12])[..]);
        assert_eq!(g.to_string(), "Z2xZ12");
    }
}
