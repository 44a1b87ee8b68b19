//! Characters of diagonal cyclic actions on weighted rings, sign lifts of an
//! involution, and the sign-type of graded eigenspaces modulo relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Field, FieldMatrix, GroupLabel, SmallGroup};
use crate::wpoly::{Monomial, MonomialMap, WPoly, WRing};

/// `x_v -> zeta_n^{c_v} x_v` for a primitive n-th root of unity `zeta_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicAction {
    order: u32,
    exponents: Vec<u32>,
}

impl CyclicAction {
    pub fn new(order: u32, exponents: Vec<u32>) -> Result<CyclicAction> {
        if order == 0 {
            return Err(Error::InvalidGroup("cyclic order 0".into()));
        }
        let exponents = exponents.into_iter().map(|c| c % order).collect();
        Ok(CyclicAction { order, exponents })
    }

    /// The order-4 generator on `x1, x2, x3, y1, y3`: `(i x1, -x2, -i x3, i y1, -i y3)`.
    pub fn godeaux_generator() -> CyclicAction {
        CyclicAction::new(4, vec![1, 2, 3, 1, 3]).expect("valid action")
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn power(&self, k: u32) -> CyclicAction {
        CyclicAction {
            order: self.order,
            exponents: self.exponents.iter().map(|c| (c * k) % self.order).collect(),
        }
    }

    pub fn character_of(&self, m: &Monomial) -> u32 {
        character_of(m, self)
    }

    /// Realizes the action as a ring map over a field containing `zeta_n`.
    /// Over the rationals only orders 1 and 2 are realizable.
    pub fn to_map(&self, ring: &Arc<WRing>, field: Field) -> Result<MonomialMap> {
        if self.exponents.len() != ring.nvars() {
            return Err(Error::Dimension("action and ring sizes differ".into()));
        }
        let zeta = primitive_root_of_unity(field, self.order)?;
        let scalars = self.exponents.iter().map(|&c| zeta.pow(c)).collect();
        MonomialMap::diagonal(ring, scalars)
    }
}

/// A primitive n-th root of unity in `field`, or an error when none exists.
pub fn primitive_root_of_unity(field: Field, n: u32) -> Result<crate::exact::ExactScalar> {
    match (field, n) {
        (_, 1) => Ok(field.one()),
        (_, 2) => Ok(field.from_i64(-1)),
        (Field::Prime(_), 4) => field.sqrt_minus_one(),
        (Field::Prime(p), n) if (p - 1) % n as u64 == 0 => (2..p)
            .map(|a| field.from_i64(a as i64))
            .find(|z| (1..n).all(|k| !z.pow(k).is_one()) && z.pow(n).is_one())
            .ok_or_else(|| Error::InvalidField(format!("no primitive {n}-th root in {field}"))),
        _ => Err(Error::InvalidField(format!("{field} has no primitive {n}-th root of unity"))),
    }
}

/// `sum_v c_v e_v mod n`.
pub fn character_of(m: &Monomial, a: &CyclicAction) -> u32 {
    let s: u64 = m
        .0
        .iter()
        .zip(&a.exponents)
        .map(|(&e, &c)| e as u64 * c as u64)
        .sum();
    (s % a.order as u64) as u32
}

/// Monomials of weighted degree `d` with character `c`, in ring order.
pub fn eigenspace_basis(r: &WRing, a: &CyclicAction, d: u32, c: u32) -> Vec<Monomial> {
    r.monomials_of_degree(d)
        .into_iter()
        .filter(|m| character_of(m, a) == c % a.order)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftLabel {
    Sigma,
    SigmaG2,
}

impl fmt::Display for LiftLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftLabel::Sigma => write!(f, "sigma"),
            LiftLabel::SigmaG2 => write!(f, "sigma_g2"),
        }
    }
}

/// Diagonal involution `x_v -> signs[v] * x_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvolutionLift {
    pub label: LiftLabel,
    pub signs: Vec<i8>,
}

impl InvolutionLift {
    pub fn new(label: LiftLabel, signs: Vec<i8>) -> Result<InvolutionLift> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidGroup("lift signs must be +1 or -1".into()));
        }
        Ok(InvolutionLift { label, signs })
    }

    /// `(-x1, x2, -x3, y1, y3)`.
    pub fn godeaux_sigma() -> InvolutionLift {
        InvolutionLift::new(LiftLabel::Sigma, vec![-1, 1, -1, 1, 1]).expect("valid signs")
    }

    /// The lift composed with the square of an even-order cyclic action.
    pub fn times_square_of(&self, g: &CyclicAction) -> Result<InvolutionLift> {
        if g.order % 4 != 0 && g.order != 2 {
            return Err(Error::InvalidGroup(format!(
                "square of an order-{} action is not a sign change",
                g.order
            )));
        }
        // g^2 acts by zeta^{2c}; this is -1 exactly when 2c = n/2 mod n.
        let half = g.order / 2;
        let signs = self
            .signs
            .iter()
            .zip(&g.exponents)
            .map(|(&s, &c)| {
                let e = (2 * c) % g.order;
                if e == 0 {
                    Ok(s)
                } else if e == half {
                    Ok(-s)
                } else {
                    Err(Error::InvalidGroup("square is not a sign change".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        InvolutionLift::new(LiftLabel::SigmaG2, signs)
    }

    pub fn sign_of(&self, m: &Monomial) -> i8 {
        let odd: u32 = m
            .0
            .iter()
            .zip(&self.signs)
            .filter(|(_, &s)| s < 0)
            .map(|(&e, _)| e)
            .sum();
        if odd % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn to_map(&self, ring: &Arc<WRing>, field: Field) -> Result<MonomialMap> {
        MonomialMap::signs(ring, field, &self.signs)
    }

    /// Exponent vector in `Z_n` for an even `n` (`-1 = zeta^{n/2}`).
    pub fn as_exponents(&self, n: u32) -> Vec<u32> {
        self.signs.iter().map(|&s| if s < 0 { n / 2 } else { 0 }).collect()
    }
}

/// Dimensions of the `+1` and `-1` eigenspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SigmaType {
    pub plus: usize,
    pub minus: usize,
}

impl SigmaType {
    pub fn new(plus: usize, minus: usize) -> SigmaType {
        SigmaType { plus, minus }
    }

    pub fn total(&self) -> usize {
        self.plus + self.minus
    }

    pub fn swapped(&self) -> SigmaType {
        SigmaType::new(self.minus, self.plus)
    }
}

impl fmt::Display for SigmaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.plus, self.minus)
    }
}

/// Weighted degree, character and sign shared by every term of `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationGrading {
    pub degree: u32,
    pub character: u32,
    pub sign: i8,
}

/// Checks that `q` is homogeneous for degree, character and sign, naming the
/// first offending pair of monomials otherwise.
pub fn relation_grading(q: &WPoly, a: &CyclicAction, lift: &InvolutionLift) -> Result<RelationGrading> {
    let ring = q.ring();
    let mut terms = q.terms().keys();
    let first = terms
        .next()
        .ok_or_else(|| Error::NonHomogeneous("zero relation".into()))?;
    let grading = RelationGrading {
        degree: ring.degree(first),
        character: character_of(first, a),
        sign: lift.sign_of(first),
    };
    for m in terms {
        let (d, c, s) = (ring.degree(m), character_of(m, a), lift.sign_of(m));
        let what = if d != grading.degree {
            Some(format!("degrees {} and {d}", grading.degree))
        } else if c != grading.character {
            Some(format!("characters {} and {c}", grading.character))
        } else if s != grading.sign {
            Some(format!("{} signs {} and {s}", lift.label, grading.sign))
        } else {
            None
        };
        if let Some(what) = what {
            return Err(Error::NonHomogeneous(format!(
                "{} and {} have {what}",
                ring.format_monomial(first),
                ring.format_monomial(m)
            )));
        }
    }
    Ok(grading)
}

/// Sign-type of the degree-`d`, character-`c` piece of `ring / (relations)`.
/// The ideal's piece is the span of every `monomial * relation` landing there.
pub fn sigma_type(
    r: &Arc<WRing>,
    a: &CyclicAction,
    lift: &InvolutionLift,
    relations: &[WPoly],
    d: u32,
    c: u32,
) -> Result<SigmaType> {
    let gradings = relations
        .iter()
        .map(|q| relation_grading(q, a, lift))
        .collect::<Result<Vec<_>>>()?;
    let field = relations.first().map_or(Field::Rational, WPoly::field);
    let basis = eigenspace_basis(r, a, d, c);
    let mut dims = [0usize; 2];
    for (slot, sign) in [(0, 1i8), (1, -1i8)] {
        let part: Vec<&Monomial> = basis.iter().filter(|m| lift.sign_of(m) == sign).collect();
        let index: BTreeMap<&Monomial, usize> = part.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rows = Vec::new();
        for (q, g) in relations.iter().zip(&gradings) {
            if g.degree > d {
                continue;
            }
            let cofactor_char = (c + a.order - g.character % a.order) % a.order;
            for m in eigenspace_basis(r, a, d - g.degree, cofactor_char) {
                if lift.sign_of(&m) * g.sign != sign {
                    continue;
                }
                let mut row = vec![field.zero(); part.len()];
                for (mono, coeff) in q.mul_monomial(&m).terms() {
                    let j = index.get(mono).ok_or_else(|| {
                        Error::Structure(format!("product term {} outside its piece", r.format_monomial(mono)))
                    })?;
                    row[*j] = coeff.clone();
                }
                rows.push(row);
            }
        }
        let rank = if rows.is_empty() {
            0
        } else {
            FieldMatrix::new(field, part.len(), rows)?.rank()
        };
        dims[slot] = part.len() - rank;
    }
    Ok(SigmaType::new(dims[0], dims[1]))
}

/// Rows `m = 1, 2, 4` by characters `0..4` of sign-types for the two lifts.
pub const EXPECTED_SIGMA_TYPES: [(u32, [(usize, usize); 4]); 3] = [
    (1, [(0, 0), (1, 0), (1, 0), (1, 0)]),
    (2, [(2, 0), (1, 1), (2, 0), (1, 1)]),
    (4, [(5, 2), (4, 3), (5, 2), (4, 3)]),
];

/// A 3x4 table of sign-types keyed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaTable {
    pub lift: LiftLabel,
    pub rows: BTreeMap<u32, Vec<SigmaType>>,
}

impl SigmaTable {
    pub fn compute(
        r: &Arc<WRing>,
        a: &CyclicAction,
        lift: &InvolutionLift,
        relations: &[WPoly],
        degrees: &[u32],
    ) -> Result<SigmaTable> {
        let mut rows = BTreeMap::new();
        for &d in degrees {
            let row = (0..a.order)
                .map(|c| sigma_type(r, a, lift, relations, d, c))
                .collect::<Result<Vec<_>>>()?;
            rows.insert(d, row);
        }
        Ok(SigmaTable { lift: lift.label, rows })
    }

    pub fn expected() -> BTreeMap<u32, Vec<SigmaType>> {
        EXPECTED_SIGMA_TYPES
            .iter()
            .map(|(m, row)| (*m, row.iter().map(|&(p, q)| SigmaType::new(p, q)).collect()))
            .collect()
    }

    pub fn matches(&self, expected: &BTreeMap<u32, Vec<SigmaType>>) -> bool {
        &self.rows == expected
    }

    /// Cells `(m, c)` that differ from `expected`.
    pub fn mismatches(&self, expected: &BTreeMap<u32, Vec<SigmaType>>) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (m, row) in expected {
            let mine = self.rows.get(m);
            for (c, want) in row.iter().enumerate() {
                if mine.and_then(|r| r.get(c)) != Some(want) {
                    out.push((*m, c as u32));
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        self.rows
            .iter()
            .map(|(m, row)| {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                format!("m={m}: {}", cells.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Exponent vectors in `Z_n^k` that act trivially on weighted projective space:
/// `d` with `lambda^{w_v} = zeta_n^{d_v}` for some scalar `lambda`.
pub fn projective_scalars(weights: &[u32], n: u32) -> BTreeSet<Vec<u32>> {
    let lcm = weights.iter().fold(1u64, |acc, &w| num_integer::lcm(acc, w as u64));
    let big = n as u64 * lcm;
    let mut out = BTreeSet::new();
    // lambda = zeta_{nW}^k; lambda^{w_v} = zeta_n^{k w_v / W} when W | k w_v.
    for k in 0..big {
        let d: Option<Vec<u32>> = weights
            .iter()
            .map(|&w| {
                let kw = k * w as u64;
                (kw % lcm == 0).then(|| ((kw / lcm) % n as u64) as u32)
            })
            .collect();
        if let Some(d) = d {
            out.insert(d);
        }
    }
    out
}

/// The group generated by diagonal exponent vectors in `Z_n^k`, taken modulo
/// the weighted scalars, i.e. as automorphisms of weighted projective space.
pub fn projective_diagonal_group(weights: &[u32], n: u32, generators: &[Vec<u32>]) -> Result<SmallGroup> {
    let scalars = projective_scalars(weights, n);
    let canon = |v: &Vec<u32>| -> Vec<u32> {
        scalars
            .iter()
            .map(|s| v.iter().zip(s).map(|(a, b)| (a + b) % n).collect::<Vec<u32>>())
            .min()
            .expect("scalars contain zero")
    };
    let gens: Vec<Vec<u32>> = generators.iter().map(canon).collect();
    let identity = vec![0u32; weights.len()];
    SmallGroup::generated_by(
        identity,
        &gens,
        |a, b| canon(&a.iter().zip(b).map(|(x, y)| (x + y) % n).collect()),
        |v| format!("{v:?}"),
    )
}

/// Label of the group generated by `g` and a sign lift, acting projectively.
pub fn projective_census(weights: &[u32], g: Option<&CyclicAction>, lift: Option<&InvolutionLift>) -> Result<GroupLabel> {
    let n = g.map_or(2, |g| g.order().max(2));
    let mut gens = Vec::new();
    if let Some(g) = g {
        gens.push(g.exponents().to_vec());
    }
    if let Some(l) = lift {
        if n % 2 != 0 {
            return Err(Error::InvalidGroup("sign lifts need an even order".into()));
        }
        gens.push(l.as_exponents(n));
    }
    Ok(projective_diagonal_group(weights, n, &gens)?.classify())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(r: &WRing, ms: &[Monomial]) -> Vec<String> {
        ms.iter().map(|m| r.format_monomial(m)).collect()
    }

    #[test]
    fn characters() {
        let r = WRing::godeaux();
        let g = CyclicAction::godeaux_generator();
        assert_eq!(character_of(&r.parse_monomial("x2 x3").unwrap(), &g), 1);
        assert_eq!(character_of(&Monomial::one(5), &g), 0);
    }

    #[test]
    fn eigenspaces() {
        let r = WRing::godeaux();
        let g = CyclicAction::godeaux_generator();
        assert!(eigenspace_basis(&r, &g, 1, 0).is_empty());
        assert_eq!(names(&r, &eigenspace_basis(&r, &g, 2, 1)), ["x2 x3", "y1"]);
        let counts: Vec<usize> = (0..4).map(|c| eigenspace_basis(&r, &g, 4, c).len()).collect();
        assert_eq!(counts, [8, 7, 8, 7]);
    }

    #[test]
    fn lift_signs() {
        let g = CyclicAction::godeaux_generator();
        let s = InvolutionLift::godeaux_sigma();
        assert_eq!(s.times_square_of(&g).unwrap().signs, vec![1, 1, 1, -1, -1]);
    }

    #[test]
    fn nonhomogeneous_relation_names_pair() {
        let r = WRing::godeaux();
        let q = Field::Rational;
        let g = CyclicAction::godeaux_generator();
        let bad = crate::wpoly::parse_poly(&r, q, "x1^4 + x1^3 x2").unwrap();
        let err = relation_grading(&bad, &g, &InvolutionLift::godeaux_sigma()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x1^4") && msg.contains("x1^3 x2"), "{msg}");
    }

    #[test]
    fn scalars_of_godeaux_ring() {
        let s = projective_scalars(&[1, 1, 1, 2, 2], 4);
        assert_eq!(s.len(), 4);
        assert!(s.contains(&vec![2, 2, 2, 0, 0]));
    }

    #[test]
    fn census_labels() {
        let w = [1, 1, 1, 2, 2];
        let g = CyclicAction::godeaux_generator();
        let s = InvolutionLift::godeaux_sigma();
        assert_eq!(projective_census(&w, Some(&g), Some(&s)).unwrap().to_string(), "Z4xZ2");
        assert_eq!(projective_census(&w, Some(&g), None).unwrap().to_string(), "Z4");
        assert_eq!(projective_census(&w, None, Some(&s)).unwrap().to_string(), "Z2");
    }
}
