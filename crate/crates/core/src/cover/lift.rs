//! Lifting an automorphism of the base to a double or bidouble cover, and the
//! Galois group of a double cover stacked on a cyclic etale cover.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::cover::lattice::{DivClass, PicardModel};
use crate::error::{Error, Result};
use crate::exact::matrix::{smith_normal_form, IntMatrix};
use crate::exact::{classify_order8, GroupLabel, SmallGroup};
use crate::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverKind {
    Double,
    Bidouble,
}

/// How the base automorphism `rho` acts on the building data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftSpec {
    pub kind: CoverKind,
    /// `rho^* B_i = B_{perm[i]}` (0-based); length 3 for bidouble covers, 1 for double covers.
    pub branch_permutation: Vec<usize>,
    /// Order of `rho` on the base.
    pub order: u32,
}

impl LiftSpec {
    /// All branch divisors and both `L_j` fixed.
    pub fn case_a() -> LiftSpec {
        LiftSpec {
            kind: CoverKind::Bidouble,
            branch_permutation: vec![0, 1, 2],
            order: 2,
        }
    }

    /// `B1 <-> B2`, `L1 <-> L2`, `B3` fixed.
    pub fn case_b() -> LiftSpec {
        LiftSpec {
            kind: CoverKind::Bidouble,
            branch_permutation: vec![1, 0, 2],
            order: 2,
        }
    }

    /// `rho^* B = B`, `rho^* L = L`, `rho` of order `d`.
    pub fn double(d: u32) -> LiftSpec {
        LiftSpec {
            kind: CoverKind::Double,
            branch_permutation: vec![0],
            order: d,
        }
    }

    pub fn case(&self) -> Result<&'static str> {
        match (self.kind, self.branch_permutation.as_slice()) {
            (CoverKind::Double, [0]) => Ok("double"),
            (CoverKind::Bidouble, [0, 1, 2]) => Ok("a"),
            (CoverKind::Bidouble, [1, 0, 2]) => Ok("b"),
            _ => Err(Error::Structure(format!(
                "branch permutation {:?} is neither case (a) nor case (b)",
                self.branch_permutation
            ))),
        }
    }
}

/// One extension `1 -> G -> G~ -> <rho> -> 1`, indexed by `rho~^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    /// The element `rho~^d` of the cover's Galois group.
    pub power: String,
    pub label: GroupLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftCensus {
    pub case: String,
    pub labels: BTreeSet<GroupLabel>,
    pub extensions: Vec<Extension>,
}

impl fmt::Display for LiftCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels.iter().map(ToString::to_string).collect();
        write!(f, "case {}: {{{}}}", self.case, labels.join(", "))
    }
}

/// The Galois group `G = Z2^n` of the cover with its `rho`-action, elements as bitmasks.
struct Kernel {
    bits: u32,
    action: Vec<u8>,
}

impl Kernel {
    fn new(spec: &LiftSpec) -> Result<Kernel> {
        match spec.kind {
            CoverKind::Double => Ok(Kernel {
                bits: 1,
                action: vec![0, 1],
            }),
            CoverKind::Bidouble => {
                let perm = &spec.branch_permutation;
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                if sorted != [0, 1, 2] {
                    return Err(Error::Structure(format!("{perm:?} is not a permutation of the branch divisors")));
                }
                // g1 = 01, g2 = 10, g3 = 11; every permutation of these is linear
                let elem = [1u8, 2, 3];
                let mut action = vec![0u8; 4];
                for i in 0..3 {
                    action[elem[i] as usize] = elem[perm[i]];
                }
                Ok(Kernel { bits: 2, action })
            }
        }
    }

    fn size(&self) -> usize {
        1 << self.bits
    }

    fn act(&self, a: u8, times: u32) -> u8 {
        (0..times).fold(a, |x, _| self.action[x as usize])
    }

    fn name(&self, a: u8) -> String {
        match (self.bits, a) {
            (_, 0) => "1".into(),
            (1, 1) => "g".into(),
            (_, a) => format!("g{a}"),
        }
    }
}

fn extension_group(k: &Kernel, d: u32, c0: u8) -> Result<SmallGroup> {
    let na = k.size();
    let n = na * d as usize;
    if n > crate::exact::group::MAX_SMALL_GROUP_ORDER {
        return Err(Error::InvalidGroup(format!("extension of order {n} is too large")));
    }
    let decode = |x: usize| ((x % na) as u8, (x / na) as u32);
    let encode = |a: u8, i: u32| i as usize * na + a as usize;
    let mut table = vec![vec![0; n]; n];
    for (x, row) in table.iter_mut().enumerate() {
        let (a, i) = decode(x);
        for (y, cell) in row.iter_mut().enumerate() {
            let (b, j) = decode(y);
            let wrap = if i + j >= d { c0 } else { 0 };
            *cell = encode(a ^ k.act(b, i) ^ wrap, (i + j) % d);
        }
    }
    let labels = (0..n)
        .map(|x| {
            let (a, i) = decode(x);
            match (a, i) {
                (_, 0) => k.name(a),
                (0, 1) => "rho".into(),
                (0, i) => format!("rho^{i}"),
                (a, 1) => format!("{}rho", k.name(a)),
                (a, i) => format!("{}rho^{i}", k.name(a)),
            }
        })
        .collect();
    SmallGroup::new(table, labels)
}

/// Classifies every extension of `<rho>` by the cover's Galois group compatible
/// with the action on the building data: one per `rho`-fixed value of `rho~^d`.
pub fn classify_lift(spec: &LiftSpec) -> Result<LiftCensus> {
    let case = spec.case()?;
    if spec.order == 0 {
        return Err(Error::Structure("rho has order 0".into()));
    }
    let k = Kernel::new(spec)?;
    if (0..k.size() as u8).any(|a| k.act(a, spec.order) != a) {
        return Err(Error::Structure(format!(
            "rho^{} does not act trivially on the building data",
            spec.order
        )));
    }
    let mut extensions = Vec::new();
    for c0 in 0..k.size() as u8 {
        if k.act(c0, 1) != c0 {
            continue;
        }
        let g = extension_group(&k, spec.order, c0)?;
        extensions.push(Extension {
            power: k.name(c0),
            label: g.classify(),
        });
    }
    Ok(LiftCensus {
        case: case.into(),
        labels: extensions.iter().map(|e| e.label.clone()).collect(),
        extensions,
    })
}

/// The case (b) group with `rho~^2 = g3`, written as `<rho, g1>`: checks that
/// `g3 = rho^2`, that `g1 rho` is an involution, and that it is the symmetry
/// group of a square.
pub fn explicit_d4() -> Result<CheckReport> {
    let k = Kernel::new(&LiftSpec::case_b())?;
    let g = extension_group(&k, 2, 3)?;
    let idx = |l: &str| g.index_of(l).ok_or_else(|| Error::InvalidGroup(format!("no element {l}")));
    let (rho, g1, g3) = (idx("rho")?, idx("g1")?, idx("g3")?);
    let sub = SmallGroup::generated_by(g.identity(), &[rho, g1], |a, b| g.mul(*a, *b), |a| g.label_of(*a).to_string())?;
    let square = SmallGroup::from_permutations(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])?;
    let g1rho = g.mul(g1, rho);
    let label = classify_order8(&g)?;
    let children = vec![
        CheckReport::expect("g3-is-rho-squared", g.pow(rho, 2) == g3, "rho^2 != g3"),
        CheckReport::expect("g1rho-involution", g.element_order(g1rho) == 2, "g1 rho is not an involution")
            .with_metric("order", g.element_order(g1rho)),
        CheckReport::expect("generated-by-rho-g1", sub.order() == 8, "<rho, g1> is a proper subgroup")
            .with_metric("order", sub.order()),
        CheckReport::expect(
            "dihedral",
            label == GroupLabel::Dihedral(4) && classify_order8(&square)? == label && g.classify() == label,
            "not isomorphic to the square's symmetry group",
        )
        .with_detail("label", label.to_string()),
    ];
    Ok(CheckReport::group("explicit-d4", children))
}

/// The verdict of the Galois-group criterion: with `Pic(X)[2] = 0` and `f^*D`
/// even, `D` is even iff the Galois group of `Z -> X -> Y` is `Z2 x Zd`.
pub fn lemma_div_geo(model_x: &PicardModel, d_pullback: &DivClass, d: u32, label: &GroupLabel) -> Result<bool> {
    if !model_x.has_trivial_two_torsion() {
        return Err(Error::Structure(format!("{} has nontrivial 2-torsion", model_x.name)));
    }
    if !model_x.is_two_divisible(d_pullback, &[])?.divisible {
        return Err(Error::BuildingData(format!(
            "pullback {} is not even",
            model_x.format(d_pullback)
        )));
    }
    if d == 0 {
        return Err(Error::Structure("degree 0 cover".into()));
    }
    let split = GroupLabel::product(&[2, d as u64]);
    let cyclic = GroupLabel::cyclic(2 * d as u64);
    if *label == split {
        Ok(true)
    } else if *label == cyclic {
        Ok(false)
    } else {
        Err(Error::InvalidGroup(format!("{label} is neither {split} nor {cyclic}")))
    }
}

/// Galois group of the double cover of `X` branched on `f^*D`, composed with
/// the cyclic cover `X -> Y` of degree `d` attached to the torsion class `eta`.
/// Its character group is generated by `eta` and a half `M` of `D` modulo `eta`,
/// with relations `d eta = 0` and `2M = D - 2M' = k eta`.
pub fn composite_galois_label(model_y: &PicardModel, eta: &DivClass, d: u32, dclass: &DivClass) -> Result<GroupLabel> {
    let ord = model_y.order_of(eta)?;
    if ord != d as u64 {
        return Err(Error::Structure(format!("eta has order {ord}, not {d}")));
    }
    let h = model_y.is_two_divisible(dclass, std::slice::from_ref(eta))?;
    let m = h
        .half
        .ok_or_else(|| Error::BuildingData("D is not even modulo the kernel of the pullback".into()))?;
    let rest = dclass.minus(&m.times(2))?;
    let k = (0..d as i64)
        .find(|&k| model_y.equal(&rest, &eta.times(k)).unwrap_or(false))
        .ok_or_else(|| Error::BuildingData("D - 2M is not a multiple of eta".into()))?;
    let rel = IntMatrix::from_rows(&[vec![d as i64, 0], vec![-k, 2]])?;
    let mut factors: Vec<u64> = smith_normal_form(&rel)
        .diagonal()
        .into_iter()
        .filter(|x| !x.is_one())
        .map(|x: BigInt| x.to_u64().expect("nonzero invariant factor"))
        .collect();
    factors.sort_unstable();
    Ok(GroupLabel::Abelian(factors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(c: &LiftCensus) -> Vec<String> {
        c.labels.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn bidouble_cases() {
        let a = classify_lift(&LiftSpec::case_a()).unwrap();
        assert_eq!(labels(&a), ["Z2^3", "Z4xZ2"]);
        assert_eq!(a.extensions.len(), 4);
        let b = classify_lift(&LiftSpec::case_b()).unwrap();
        assert_eq!(labels(&b), ["D4"]);
        let powers: Vec<&str> = b.extensions.iter().map(|e| e.power.as_str()).collect();
        assert_eq!(powers, ["1", "g3"]);
    }

    #[test]
    fn double_analogue() {
        assert_eq!(labels(&classify_lift(&LiftSpec::double(4)).unwrap()), ["Z4xZ2", "Z8"]);
        assert_eq!(labels(&classify_lift(&LiftSpec::double(3)).unwrap()), ["Z6"]);
        assert_eq!(labels(&classify_lift(&LiftSpec::double(2)).unwrap()), ["Z2^2", "Z4"]);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = LiftSpec::case_a();
        s.branch_permutation = vec![2, 1, 0];
        assert!(classify_lift(&s).is_err());
        let mut s = LiftSpec::case_b();
        s.order = 3;
        assert!(classify_lift(&s).is_err());
    }

    #[test]
    fn d4_by_generators() {
        let r = explicit_d4().unwrap();
        assert!(r.passed(), "{}", r.to_canonical_json());
    }

    fn toy(d: u64) -> PicardModel {
        PicardModel::new("y", vec!["h".into()], vec![vec![2]], vec![d, 3], vec!["eta".into(), "u".into()], true, 1).unwrap()
    }

    #[test]
    fn galois_labels() {
        let y = toy(4);
        let eta = y.class("eta").unwrap();
        let even = y.parse("2h + 2eta").unwrap();
        let odd = y.parse("2h + eta").unwrap();
        assert_eq!(composite_galois_label(&y, &eta, 4, &even).unwrap().to_string(), "Z4xZ2");
        assert_eq!(composite_galois_label(&y, &eta, 4, &odd).unwrap().to_string(), "Z8");
        let x = PicardModel::new("x", vec!["h".into()], vec![vec![2]], vec![3], vec!["u".into()], true, 1).unwrap();
        let pull = x.parse("2h").unwrap();
        assert!(lemma_div_geo(&x, &pull, 4, &"Z2xZ4".parse().unwrap()).unwrap());
        assert!(!lemma_div_geo(&x, &pull, 4, &"Z8".parse().unwrap()).unwrap());
        // odd degree: the two labels coincide and the verdict is "even"
        assert!(lemma_div_geo(&x, &pull, 3, &"Z6".parse().unwrap()).unwrap());
        assert!(lemma_div_geo(&x, &pull, 4, &"D4".parse().unwrap()).is_err());
        assert!(lemma_div_geo(&y, &y.parse("2h").unwrap(), 4, &"Z8".parse().unwrap()).is_err());
    }
}
