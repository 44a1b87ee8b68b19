use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Polynomial ring with named variables of positive integer weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WRing {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl WRing {
    pub fn new<S: Into<String>>(names: Vec<S>, weights: Vec<u32>) -> Result<Arc<WRing>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != weights.len() {
            return Err(Error::InvalidRing("one weight per variable required".into()));
        }
        if names.is_empty() {
            return Err(Error::InvalidRing("no variables".into()));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidRing(format!("variable {} has weight 0", names[i])));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidRing(format!("bad variable name {n:?}")));
            }
            if n.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidRing(format!("variable name {n:?} starts with a digit")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidRing(format!("duplicate variable {n}")));
            }
        }
        Ok(Arc::new(WRing { names, weights }))
    }

    /// `P(1,1,1,2,2)` with coordinates `x1, x2, x3, y1, y3`.
    pub fn godeaux() -> Arc<WRing> {
        WRing::new(vec!["x1", "x2", "x3", "y1", "y3"], vec![1, 1, 1, 2, 2]).expect("valid ring")
    }

    /// `P^3` with coordinates `y0..y3`.
    pub fn p3() -> Arc<WRing> {
        WRing::new(vec!["y0", "y1", "y2", "y3"], vec![1; 4]).expect("valid ring")
    }

    /// `P^4` with coordinates `x0..x4`.
    pub fn p4() -> Arc<WRing> {
        WRing::new(vec!["x0", "x1", "x2", "x3", "x4"], vec![1; 5]).expect("valid ring")
    }

    /// `P^2` with coordinates `x, y, z`.
    pub fn p2() -> Arc<WRing> {
        WRing::new(vec!["x", "y", "z"], vec![1; 3]).expect("valid ring")
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// All monomials of weighted degree `d`, in descending lexicographic
    /// order of exponent vectors (the first variable dominates).
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.nvars()];
        self.fill(0, d, &mut current, &mut out);
        out
    }

    fn fill(&self, var: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == self.nvars() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let w = self.weights[var];
        for e in (0..=remaining / w).rev() {
            current[var] = e;
            self.fill(var + 1, remaining - e * w, current, out);
        }
        current[var] = 0;
    }

    /// Graded-lex comparison: weighted degree first, then lexicographic.
    pub fn cmp_graded(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| a.cmp(b))
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Parses `x1^2 x3 y1` (or `1`) into an exponent vector.
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        let mut e = vec![0u32; self.nvars()];
        let t = s.trim();
        if t == "1" || t.is_empty() {
            return Ok(Monomial(e));
        }
        for tok in t.split(|c: char| c.is_whitespace() || c == '*').filter(|x| !x.is_empty()) {
            let (name, exp) = match tok.split_once('^') {
                Some((n, x)) => (
                    n,
                    x.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            let i = self
                .var_index(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}")))?;
            e[i] += exp;
        }
        Ok(Monomial(e))
    }
}

impl fmt::Display for WRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(ToString::to_string).collect();
        write!(f, "P({}) [{}]", w.join(","), self.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_and_two() {
        let r = WRing::godeaux();
        let d1: Vec<String> = r.monomials_of_degree(1).iter().map(|m| r.format_monomial(m)).collect();
        assert_eq!(d1, ["x1", "x2", "x3"]);
        let d2 = r.monomials_of_degree(2);
        assert_eq!(d2.len(), 8);
        assert_eq!(r.format_monomial(&d2[0]), "x1^2");
        assert_eq!(r.format_monomial(d2.last().unwrap()), "y3");
    }

    #[test]
    fn degree_four_splits_15_12_3() {
        let r = WRing::godeaux();
        let d4 = r.monomials_of_degree(4);
        assert_eq!(d4.len(), 30);
        let ydeg = |m: &Monomial| m.0[3] + m.0[4];
        assert_eq!(d4.iter().filter(|m| ydeg(m) == 0).count(), 15);
        assert_eq!(d4.iter().filter(|m| ydeg(m) == 1).count(), 12);
        assert_eq!(d4.iter().filter(|m| ydeg(m) == 2).count(), 3);
    }

    #[test]
    fn bad_rings_rejected() {
        assert!(WRing::new(vec!["a", "a"], vec![1, 1]).is_err());
        assert!(WRing::new(vec!["a"], vec![0]).is_err());
        assert!(WRing::new(vec!["a", "b"], vec![1]).is_err());
    }

    #[test]
    fn monomial_text() {
        let r = WRing::godeaux();
        let m = r.parse_monomial("x1^2 x3 y1").unwrap();
        assert_eq!(m.0, vec![2, 0, 1, 1, 0]);
        assert_eq!(r.format_monomial(&m), "x1^2 x3 y1");
        assert!(r.parse_monomial("z").is_err());
    }
}
