//! Picard lattices with torsion: `Z^r` with an intersection form plus a finite
//! group of numerically trivial classes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::matrix::{solve_integer, IntMatrix};
use crate::exact::FinAbGroup;

/// A divisor class: free coordinates plus a torsion element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DivClass {
    pub model: String,
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
    /// Effectivity as asserted by whoever wrote the class down. Never checked.
    pub effective: bool,
}

impl DivClass {
    fn same_model(&self, other: &DivClass) -> Result<()> {
        if self.model != other.model || self.free.len() != other.free.len() || self.torsion.len() != other.torsion.len() {
            return Err(Error::BuildingData(format!(
                "classes from different models ({} vs {})",
                self.model, other.model
            )));
        }
        Ok(())
    }

    fn zip(&self, other: &DivClass, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<DivClass> {
        self.same_model(other)?;
        Ok(DivClass {
            model: self.model.clone(),
            free: self.free.iter().zip(&other.free).map(|(a, b)| op(a, b)).collect(),
            torsion: self.torsion.iter().zip(&other.torsion).map(|(a, b)| op(a, b)).collect(),
            effective: false,
        })
    }

    pub fn plus(&self, other: &DivClass) -> Result<DivClass> {
        self.zip(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &DivClass) -> Result<DivClass> {
        self.zip(other, |a, b| a - b)
    }

    pub fn times(&self, k: i64) -> DivClass {
        let k = BigInt::from(k);
        DivClass {
            model: self.model.clone(),
            free: self.free.iter().map(|a| a * &k).collect(),
            torsion: self.torsion.iter().map(|a| a * &k).collect(),
            effective: self.effective && k.is_positive(),
        }
    }

    pub fn claimed_effective(mut self) -> DivClass {
        self.effective = true;
        self
    }
}

/// Outcome of halving a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Half {
    pub divisible: bool,
    pub half: Option<DivClass>,
}

/// `Pic` modelled as `Z^r (+) T` with a symmetric integer form on `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardModel {
    pub name: String,
    basis: Vec<String>,
    gram: Vec<Vec<i64>>,
    /// Cyclic orders of the torsion generators (not necessarily invariant factors).
    torsion_orders: Vec<u64>,
    torsion_names: Vec<String>,
    pub even_lattice: bool,
    canonical: DivClass,
    classes: BTreeMap<String, DivClass>,
    effective_basis: Vec<bool>,
    pub chi: i64,
}

impl PicardModel {
    pub fn new(
        name: &str,
        basis: Vec<String>,
        gram: Vec<Vec<i64>>,
        torsion_orders: Vec<u64>,
        torsion_names: Vec<String>,
        even_lattice: bool,
        chi: i64,
    ) -> Result<PicardModel> {
        let r = basis.len();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension(format!("intersection matrix must be {r} x {r}")));
        }
        for i in 0..r {
            for j in 0..r {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::BuildingData(format!(
                        "intersection matrix not symmetric at ({}, {})",
                        basis[i], basis[j]
                    )));
                }
            }
        }
        if even_lattice {
            if let Some(i) = (0..r).find(|&i| gram[i][i] % 2 != 0) {
                return Err(Error::BuildingData(format!(
                    "lattice flagged even but {}^2 = {}",
                    basis[i], gram[i][i]
                )));
            }
        }
        if torsion_orders.iter().any(|&d| d < 2) {
            return Err(Error::InvalidGroup("torsion generators need order >= 2".into()));
        }
        if torsion_names.len() != torsion_orders.len() {
            return Err(Error::BuildingData("one name per torsion generator".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in basis.iter().chain(&torsion_names) {
            if !seen.insert(n.clone()) {
                return Err(Error::BuildingData(format!("name {n} used twice")));
            }
        }
        let canonical = DivClass {
            model: name.to_string(),
            free: vec![BigInt::zero(); r],
            torsion: vec![BigInt::zero(); torsion_orders.len()],
            effective: false,
        };
        Ok(PicardModel {
            name: name.to_string(),
            basis,
            gram,
            torsion_orders,
            torsion_names,
            even_lattice,
            canonical,
            classes: BTreeMap::new(),
            effective_basis: vec![false; r],
            chi,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion_orders
    }

    /// The torsion subgroup in invariant-factor form.
    pub fn torsion_group(&self) -> FinAbGroup {
        FinAbGroup::from_cyclic_orders(&self.torsion_orders).expect("orders validated")
    }

    pub fn canonical(&self) -> &DivClass {
        &self.canonical
    }

    pub fn set_canonical(&mut self, k: DivClass) -> Result<()> {
        self.check(&k)?;
        self.canonical = k;
        Ok(())
    }

    pub fn zero(&self) -> DivClass {
        DivClass {
            model: self.name.clone(),
            free: vec![BigInt::zero(); self.rank()],
            torsion: vec![BigInt::zero(); self.torsion_orders.len()],
            effective: false,
        }
    }

    /// The `i`-th free basis vector.
    pub fn basis_class(&self, i: usize) -> DivClass {
        let mut c = self.zero();
        c.free[i] = BigInt::one();
        c
    }

    pub fn torsion_class(&self, i: usize) -> DivClass {
        let mut c = self.zero();
        c.torsion[i] = BigInt::one();
        c
    }

    pub fn from_coords(&self, free: &[i64], torsion: &[i64]) -> Result<DivClass> {
        let c = DivClass {
            model: self.name.clone(),
            free: free.iter().map(|&v| BigInt::from(v)).collect(),
            torsion: torsion.iter().map(|&v| BigInt::from(v)).collect(),
            effective: false,
        };
        self.check(&c)?;
        Ok(self.reduce(&c))
    }

    pub fn check(&self, c: &DivClass) -> Result<()> {
        if c.model != self.name || c.free.len() != self.rank() || c.torsion.len() != self.torsion_orders.len() {
            return Err(Error::BuildingData(format!(
                "class from model {} used in model {}",
                c.model, self.name
            )));
        }
        Ok(())
    }

    pub fn define(&mut self, name: &str, c: DivClass) -> Result<()> {
        self.check(&c)?;
        if self.basis.iter().chain(&self.torsion_names).any(|n| n == name) {
            return Err(Error::BuildingData(format!("{name} is already a generator")));
        }
        self.classes.insert(name.to_string(), self.reduce(&c));
        Ok(())
    }

    pub fn class(&self, name: &str) -> Result<DivClass> {
        if let Some(c) = self.classes.get(name) {
            return Ok(c.clone());
        }
        if let Some(i) = self.basis.iter().position(|n| n == name) {
            let mut c = self.basis_class(i);
            c.effective = self.effective_basis[i];
            return Ok(c);
        }
        if let Some(i) = self.torsion_names.iter().position(|n| n == name) {
            return Ok(self.torsion_class(i));
        }
        Err(Error::Parse(format!("unknown class {name} in model {}", self.name)))
    }

    /// Tags a basis class as claimed effective (e.g. a nodal curve).
    pub fn claim_effective(&mut self, name: &str) -> Result<()> {
        let i = self
            .basis
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("{name} is not a basis class of {}", self.name)))?;
        self.effective_basis[i] = true;
        Ok(())
    }

    pub fn named_classes(&self) -> &BTreeMap<String, DivClass> {
        &self.classes
    }

    /// Torsion coordinates reduced into `[0, d)`.
    pub fn reduce(&self, c: &DivClass) -> DivClass {
        let mut out = c.clone();
        for (t, &d) in out.torsion.iter_mut().zip(&self.torsion_orders) {
            *t = t.mod_floor(&BigInt::from(d));
        }
        out
    }

    /// Linear equivalence: equal free parts and equal torsion parts.
    pub fn equal(&self, a: &DivClass, b: &DivClass) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        let (a, b) = (self.reduce(a), self.reduce(b));
        Ok(a.free == b.free && a.torsion == b.torsion)
    }

    pub fn is_zero(&self, a: &DivClass) -> Result<bool> {
        self.equal(a, &self.zero())
    }

    /// Intersection number; torsion pairs to zero with everything.
    pub fn dot(&self, a: &DivClass, b: &DivClass) -> Result<BigInt> {
        self.check(a)?;
        self.check(b)?;
        let mut s = BigInt::zero();
        for i in 0..self.rank() {
            if a.free[i].is_zero() {
                continue;
            }
            for j in 0..self.rank() {
                if self.gram[i][j] != 0 {
                    s += &a.free[i] * &b.free[j] * self.gram[i][j];
                }
            }
        }
        Ok(s)
    }

    pub fn square(&self, a: &DivClass) -> Result<BigInt> {
        self.dot(a, a)
    }

    pub fn sum(&self, classes: &[DivClass]) -> Result<DivClass> {
        classes.iter().try_fold(self.zero(), |acc, c| acc.plus(c))
    }

    /// Solves `2h = g + sum a_j s_j` in `Z^r (+) T` over the integers; `h` is a
    /// half of `g` modulo the subgroup spanned by `modulo`.
    pub fn is_two_divisible(&self, g: &DivClass, modulo: &[DivClass]) -> Result<Half> {
        self.check(g)?;
        for s in modulo {
            self.check(s)?;
        }
        let r = self.rank();
        let k = self.torsion_orders.len();
        let n = r + k;
        let m = modulo.len();
        let mut a = IntMatrix::zeros(n, n + m + k);
        for i in 0..n {
            a[(i, i)] = BigInt::from(2);
        }
        for (j, s) in modulo.iter().enumerate() {
            for (i, x) in s.free.iter().chain(&s.torsion).enumerate() {
                a[(i, n + j)] = -x;
            }
        }
        for (i, &d) in self.torsion_orders.iter().enumerate() {
            a[(r + i, n + m + i)] = BigInt::from(-(d as i64));
        }
        let rhs: Vec<BigInt> = g.free.iter().chain(&g.torsion).cloned().collect();
        Ok(match solve_integer(&a, &rhs)? {
            None => Half {
                divisible: false,
                half: None,
            },
            Some(x) => Half {
                divisible: true,
                half: Some(self.reduce(&DivClass {
                    model: self.name.clone(),
                    free: x[..r].to_vec(),
                    torsion: x[r..n].to_vec(),
                    effective: false,
                })),
            },
        })
    }

    /// Order of a class: 0 when the free part is nonzero.
    pub fn order_of(&self, c: &DivClass) -> Result<u64> {
        self.check(c)?;
        if c.free.iter().any(|x| !x.is_zero()) {
            return Ok(0);
        }
        let c = self.reduce(c);
        let mut ord = 1u64;
        for (t, &d) in c.torsion.iter().zip(&self.torsion_orders) {
            let t = t.to_u64().expect("reduced");
            let o = d / num_integer::gcd(d, t);
            ord = num_integer::lcm(ord, o);
        }
        Ok(ord)
    }

    /// Whether the torsion subgroup has no element of order 2.
    pub fn has_trivial_two_torsion(&self) -> bool {
        self.torsion_orders.iter().all(|d| d % 2 == 1)
    }

    /// Orthogonal direct sum, modelling a disjoint union.
    pub fn direct_sum(&self, other: &PicardModel) -> Result<PicardModel> {
        let name = format!("{}+{}", self.name, other.name);
        let (r1, r2) = (self.rank(), other.rank());
        let mut gram = vec![vec![0i64; r1 + r2]; r1 + r2];
        for i in 0..r1 {
            for j in 0..r1 {
                gram[i][j] = self.gram[i][j];
            }
        }
        for i in 0..r2 {
            for j in 0..r2 {
                gram[r1 + i][r1 + j] = other.gram[i][j];
            }
        }
        let prefixed = |m: &PicardModel, names: &[String]| -> Vec<String> {
            names.iter().map(|n| format!("{}.{}", m.name, n)).collect()
        };
        let mut basis = prefixed(self, &self.basis);
        basis.extend(prefixed(other, &other.basis));
        let mut tnames = prefixed(self, &self.torsion_names);
        tnames.extend(prefixed(other, &other.torsion_names));
        let mut orders = self.torsion_orders.clone();
        orders.extend(&other.torsion_orders);
        let mut out = PicardModel::new(
            &name,
            basis,
            gram,
            orders,
            tnames,
            self.even_lattice && other.even_lattice,
            self.chi + other.chi,
        )?;
        let k = out.embed_pair(&self.canonical, &other.canonical)?;
        out.set_canonical(k)?;
        Ok(out)
    }

    /// The class `(a, b)` of a direct sum built by [`PicardModel::direct_sum`].
    pub fn embed_pair(&self, a: &DivClass, b: &DivClass) -> Result<DivClass> {
        let mut free = a.free.clone();
        free.extend(b.free.iter().cloned());
        let mut torsion = a.torsion.clone();
        torsion.extend(b.torsion.iter().cloned());
        let c = DivClass {
            model: self.name.clone(),
            free,
            torsion,
            effective: a.effective && b.effective,
        };
        self.check(&c)?;
        Ok(c)
    }

    /// Parses `2E + C5 + K`, `-2Gamma - 4f`, `2*N - C1`, `0`.
    pub fn parse(&self, s: &str) -> Result<DivClass> {
        let bad = |msg: &str| Error::Parse(format!("class expression {s:?}: {msg}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad("empty"));
        }
        let mut acc = self.zero();
        let chars: Vec<char> = t.chars().collect();
        let mut i = 0;
        let mut first = true;
        while i < chars.len() {
            let mut sign = 1i64;
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -1;
                }
                i += 1;
            } else if !first {
                return Err(bad("expected + or -"));
            }
            first = false;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let coef: i64 = if i > start {
                chars[start..i].iter().collect::<String>().parse().map_err(|_| bad("coefficient"))?
            } else {
                1
            };
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            let name_start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                if i == name_start && chars[i].is_ascii_digit() {
                    break;
                }
                i += 1;
            }
            let name: String = chars[name_start..i].iter().collect();
            let term = if name.is_empty() {
                if i == start {
                    return Err(bad("missing term"));
                }
                if coef != 0 {
                    return Err(bad("bare nonzero integer"));
                }
                self.zero()
            } else {
                self.class(&name)?.times(coef)
            };
            acc = acc.plus(&term.times(sign))?;
        }
        Ok(self.reduce(&acc))
    }

    /// Renders a class in the model's names, e.g. `2E + C5 + K`.
    pub fn format(&self, c: &DivClass) -> String {
        let c = self.reduce(c);
        let mut parts: Vec<(bool, String)> = Vec::new();
        let coords = c.free.iter().zip(&self.basis).chain(c.torsion.iter().zip(&self.torsion_names));
        for (v, name) in coords {
            if v.is_zero() {
                continue;
            }
            let mag = v.abs();
            let body = if mag.is_one() { name.clone() } else { format!("{mag}{name}") };
            parts.push((v.is_negative(), body));
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (neg, body)) in parts.into_iter().enumerate() {
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }

    /// Loads a model file (see [`ModelFile`]).
    pub fn from_file(path: &Path) -> Result<(PicardModel, ModelFile)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        ModelFile::from_json(&text)?.build()
    }

    /// A shipped preset: `enriques`, `f2` (alias `cone`), `p2`, `k3_even_eight`.
    pub fn preset(name: &str) -> Result<(PicardModel, ModelFile)> {
        let text = match name {
            "enriques" => include_str!("../../models/enriques.json"),
            "f2" | "cone" => include_str!("../../models/f2.json"),
            "p2" => include_str!("../../models/p2.json"),
            "k3_even_eight" | "k3" => include_str!("../../models/k3_even_eight.json"),
            other => return Err(Error::Config(format!("unknown preset {other:?}"))),
        };
        ModelFile::from_json(text)?.build()
    }

    /// Loads `spec` as a preset name, or else as a path to a model file.
    pub fn load(spec: &str) -> Result<(PicardModel, ModelFile)> {
        match PicardModel::preset(spec) {
            Ok(m) => Ok(m),
            Err(_) if Path::new(spec).exists() => PicardModel::from_file(Path::new(spec)),
            Err(e) => Err(e),
        }
    }
}

impl fmt::Display for PicardModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (rank {}, torsion {})", self.name, self.rank(), self.torsion_group())
    }
}

/// A named class in a model file: an expression or explicit coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub name: String,
    #[serde(default)]
    pub expr: Option<String>,
    #[serde(default)]
    pub free: Option<Vec<i64>>,
    #[serde(default)]
    pub torsion: Option<Vec<i64>>,
    #[serde(default)]
    pub effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleEntry {
    pub l: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidoubleEntry {
    pub l1: String,
    pub l2: String,
    pub b1: String,
    pub b2: String,
    pub b3: String,
}

/// On-disk model: intersection matrix, torsion orders, named classes and
/// optional building data. Class expressions may use earlier names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    #[serde(default)]
    pub torsion: Vec<u64>,
    #[serde(default)]
    pub torsion_names: Vec<String>,
    #[serde(default)]
    pub even_lattice: bool,
    pub canonical: String,
    #[serde(default = "default_chi")]
    pub chi: i64,
    /// Basis classes claimed effective.
    #[serde(default)]
    pub effective: Vec<String>,
    #[serde(default)]
    pub classes: Vec<ClassEntry>,
    #[serde(default)]
    pub double: Option<DoubleEntry>,
    #[serde(default)]
    pub bidouble: Option<BidoubleEntry>,
    #[serde(default)]
    pub nodes: Vec<String>,
    /// (-1)-curves contracted on the cover after the invariant computation.
    #[serde(default)]
    pub contracted_curves: u32,
    /// Order of a free group action on the cover, if any.
    #[serde(default)]
    pub free_quotient: Option<u32>,
}

fn default_chi() -> i64 {
    1
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("model file: {e}")))
    }

    pub fn build(self) -> Result<(PicardModel, ModelFile)> {
        let torsion_names = if self.torsion_names.is_empty() {
            (0..self.torsion.len()).map(|i| format!("t{}", i + 1)).collect()
        } else {
            self.torsion_names.clone()
        };
        let mut m = PicardModel::new(
            &self.name,
            self.basis.clone(),
            self.gram.clone(),
            self.torsion.clone(),
            torsion_names,
            self.even_lattice,
            self.chi,
        )?;
        for name in &self.effective {
            m.claim_effective(name)?;
        }
        for entry in &self.classes {
            let mut c = match (&entry.expr, &entry.free) {
                (Some(e), None) => m.parse(e)?,
                (None, Some(free)) => {
                    let tors = entry.torsion.clone().unwrap_or_else(|| vec![0; m.torsion_orders().len()]);
                    m.from_coords(free, &tors)?
                }
                _ => {
                    return Err(Error::Config(format!(
                        "class {} needs exactly one of expr or free",
                        entry.name
                    )))
                }
            };
            c.effective = entry.effective;
            m.define(&entry.name, c)?;
        }
        let k = m.parse(&self.canonical)?;
        m.set_canonical(k)?;
        Ok((m, self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enriques_pairings() {
        let (m, _) = PicardModel::preset("enriques").unwrap();
        let c4 = m.class("C4").unwrap();
        assert_eq!(m.square(&c4).unwrap(), BigInt::from(-2));
        for n in ["C1", "C2", "C3", "C5", "E"] {
            assert_eq!(m.dot(&c4, &m.class(n).unwrap()).unwrap(), BigInt::zero(), "{n}");
        }
        assert_eq!(m.format(&m.class("B").unwrap()), "2E + C5 + K");
        assert_eq!(m.order_of(&m.class("K").unwrap()).unwrap(), 2);
        assert!(m.class("C4").unwrap().effective);
    }

    #[test]
    fn parse_round_trip() {
        let (m, _) = PicardModel::preset("f2").unwrap();
        let k = m.canonical().clone();
        assert_eq!(m.format(&k), "-2Gamma - 4f");
        assert_eq!(m.parse(&m.format(&k)).unwrap(), k);
        assert!(m.equal(&m.parse("2*Gamma+4f").unwrap(), &m.class("B1").unwrap()).unwrap());
        assert!(m.parse("2Gamma +").is_err());
        assert!(m.parse("Delta").is_err());
        assert!(m.is_zero(&m.parse("0").unwrap()).unwrap());
    }

    #[test]
    fn halving_with_torsion() {
        let (m, _) = PicardModel::preset("enriques").unwrap();
        let s = m.parse("C1 + C2 + C3 + C4").unwrap();
        assert!(!m.is_two_divisible(&s, &[]).unwrap().divisible);
        let twisted = s.plus(m.canonical()).unwrap();
        let h = m.is_two_divisible(&twisted, &[]).unwrap();
        let half = h.half.unwrap();
        assert!(m.equal(&half.times(2), &twisted).unwrap());
        // modulo K the untwisted sum halves too
        assert!(m.is_two_divisible(&s, &[m.canonical().clone()]).unwrap().divisible);
    }

    #[test]
    fn model_validation() {
        let asym = PicardModel::new("x", vec!["a".into(), "b".into()], vec![vec![0, 1], vec![2, 0]], vec![], vec![], false, 1);
        assert!(asym.is_err());
        let odd = PicardModel::new("x", vec!["a".into()], vec![vec![1]], vec![], vec![], true, 1);
        assert!(odd.is_err());
    }

    #[test]
    fn direct_sum_pairs_blockwise() {
        let (a, _) = PicardModel::preset("p2").unwrap();
        let (b, _) = PicardModel::preset("enriques").unwrap();
        let s = a.direct_sum(&b).unwrap();
        let h = s.embed_pair(&a.basis_class(0), &b.zero()).unwrap();
        let e = s.embed_pair(&a.zero(), &b.class("B").unwrap()).unwrap();
        assert_eq!(s.dot(&h, &e).unwrap(), BigInt::zero());
        assert_eq!(s.square(&e).unwrap(), BigInt::from(2));
        assert_eq!(s.chi, 2);
    }
}
