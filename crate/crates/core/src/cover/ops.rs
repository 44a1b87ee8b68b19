//! Building data of double and bidouble covers and their numerical calculus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::cover::lattice::{DivClass, ModelFile, PicardModel};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Status};

/// `2L = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleData {
    pub l: DivClass,
    pub b: DivClass,
}

/// Reduced building data `(L1, L2, B1, B2, B3)`; `L3` is derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BidoubleData {
    pub l1: DivClass,
    pub l2: DivClass,
    pub b1: DivClass,
    pub b2: DivClass,
    pub b3: DivClass,
}

impl BidoubleData {
    /// `L3 = L1 + L2 - B3`.
    pub fn l3(&self) -> Result<DivClass> {
        self.l1.plus(&self.l2)?.minus(&self.b3)
    }

    pub fn branch(&self) -> [&DivClass; 3] {
        [&self.b1, &self.b2, &self.b3]
    }
}

impl DoubleData {
    pub fn from_model(m: &PicardModel, file: &ModelFile) -> Result<DoubleData> {
        let d = file
            .double
            .as_ref()
            .ok_or_else(|| Error::Config(format!("model {} has no double-cover data", m.name)))?;
        Ok(DoubleData {
            l: m.parse(&d.l)?,
            b: effective_expr(m, &d.b)?,
        })
    }
}

impl BidoubleData {
    pub fn from_model(m: &PicardModel, file: &ModelFile) -> Result<BidoubleData> {
        let d = file
            .bidouble
            .as_ref()
            .ok_or_else(|| Error::Config(format!("model {} has no bidouble-cover data", m.name)))?;
        Ok(BidoubleData {
            l1: m.parse(&d.l1)?,
            l2: m.parse(&d.l2)?,
            b1: effective_expr(m, &d.b1)?,
            b2: effective_expr(m, &d.b2)?,
            b3: effective_expr(m, &d.b3)?,
        })
    }
}

// A branch expression is claimed effective when every named term is.
fn effective_expr(m: &PicardModel, e: &str) -> Result<DivClass> {
    let c = m.parse(e)?;
    let all_named_effective = e
        .split(['+', '-'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .all(|t| {
            let name = t.trim_start_matches(|c: char| c.is_ascii_digit() || c == '*');
            m.class(name).is_ok_and(|c| c.effective)
        });
    Ok(if all_named_effective && !e.contains('-') { c.claimed_effective() } else { c })
}

fn relation(m: &PicardModel, name: &str, lhs: &DivClass, rhs: &DivClass) -> Result<CheckReport> {
    let diff = lhs.minus(rhs)?;
    Ok(if m.is_zero(&diff)? {
        CheckReport::pass(name)
    } else {
        CheckReport::fail(name, "relation does not hold").with_witness(json!({
            "relation": name,
            "difference": m.format(&diff),
        }))
    })
}

fn branch_note(report: CheckReport, branch: &[&DivClass]) -> CheckReport {
    if branch.iter().all(|b| b.effective) {
        report.with_detail("branch_effectivity", "claimed")
    } else {
        report.with_detail("branch_effectivity", "not claimed")
    }
}

/// Checks `2L = B` exactly, free part and torsion.
pub fn validate_double(m: &PicardModel, d: &DoubleData) -> Result<CheckReport> {
    m.check(&d.l)?;
    m.check(&d.b)?;
    let r = relation(m, "2L = B", &d.l.times(2), &d.b)?;
    let r = CheckReport::group("validate-double", vec![r])
        .with_detail("L", m.format(&d.l))
        .with_detail("B", m.format(&d.b))
        .with_metric("L^2", m.square(&d.l)?.to_string());
    Ok(branch_note(r, &[&d.b]))
}

/// Checks the reduced relations, derives `L3`, and then checks every relation
/// of the full set as a consequence.
pub fn validate_bidouble(m: &PicardModel, d: &BidoubleData) -> Result<(CheckReport, DivClass)> {
    for c in [&d.l1, &d.l2, &d.b1, &d.b2, &d.b3] {
        m.check(c)?;
    }
    let l3 = d.l3()?;
    let ls = [&d.l1, &d.l2, &l3];
    let bs = d.branch();
    let reduced = vec![
        relation(m, "2L1 = B2 + B3", &d.l1.times(2), &d.b2.plus(&d.b3)?)?,
        relation(m, "2L2 = B1 + B3", &d.l2.times(2), &d.b1.plus(&d.b3)?)?,
    ];
    let reduced_ok = reduced.iter().all(CheckReport::passed);
    let mut full = Vec::new();
    for (i, j, k) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        let name = format!("2L{} = B{} + B{}", i + 1, j + 1, k + 1);
        full.push(relation(m, &name, &ls[i].times(2), &bs[j].plus(bs[k])?)?);
    }
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let name = format!("L{} + L{} = L{} + B{}", i + 1, j + 1, k + 1, k + 1);
        full.push(relation(m, &name, &ls[i].plus(ls[j])?, &ls[k].plus(bs[k])?)?);
    }
    let full_ok = full.iter().all(CheckReport::passed);
    if reduced_ok && !full_ok {
        // cannot happen in an abelian group; flags an arithmetic bug
        return Err(Error::BuildingData("reduced relations hold but the full set fails".into()));
    }
    let mut children = reduced;
    children.push(CheckReport::group("full-relations", full));
    let r = CheckReport::group("validate-bidouble", children).with_detail("L3", m.format(&l3));
    Ok((branch_note(r, &bs), l3))
}

/// `(chi(O_X), K_X^2)` of a cover, plus bookkeeping for later contractions
/// and free quotients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverInvariants {
    pub chi: BigInt,
    pub k2: BigInt,
}

impl CoverInvariants {
    /// Contracting `n` disjoint (-1)-curves raises `K^2` by `n`.
    pub fn contract(&self, n: u32) -> CoverInvariants {
        CoverInvariants {
            chi: self.chi.clone(),
            k2: &self.k2 + BigInt::from(n),
        }
    }

    /// A free action of order `n` divides both invariants.
    pub fn free_quotient(&self, n: u32) -> Result<CoverInvariants> {
        let n = BigInt::from(n);
        let (chi, r1) = self.chi.div_rem(&n);
        let (k2, r2) = self.k2.div_rem(&n);
        if !r1.is_zero() || !r2.is_zero() {
            return Err(Error::NonIntegral(format!(
                "(chi, K^2) = ({}, {}) is not divisible by {n}",
                self.chi, self.k2
            )));
        }
        Ok(CoverInvariants { chi, k2 })
    }
}

fn half_exact(v: BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = v.div_rem(&BigInt::from(2));
    if !r.is_zero() {
        return Err(Error::NonIntegral(format!("{what} = {v} is odd")));
    }
    Ok(q)
}

/// `chi(O_X) = 2 chi(O_Y) + L(L+K)/2`, `K_X^2 = 2 (K+L)^2`.
pub fn double_invariants(m: &PicardModel, d: &DoubleData, chi_y: i64) -> Result<CoverInvariants> {
    let v = validate_double(m, d)?;
    if !v.passed() {
        return Err(Error::BuildingData("2L != B".into()));
    }
    let k = m.canonical();
    let llk = m.dot(&d.l, &d.l.plus(k)?)?;
    let chi = BigInt::from(2 * chi_y) + half_exact(llk, "L(L+K)")?;
    let k2 = m.square(&d.l.plus(k)?)? * 2;
    Ok(CoverInvariants { chi, k2 })
}

/// `chi(O_X) = 4 chi(O_Y) + sum L_i(L_i+K)/2`, `K_X^2 = (2K + B1 + B2 + B3)^2`.
pub fn bidouble_invariants(m: &PicardModel, d: &BidoubleData, chi_y: i64) -> Result<CoverInvariants> {
    let (v, l3) = validate_bidouble(m, d)?;
    if !v.passed() {
        return Err(Error::BuildingData("bidouble relations fail".into()));
    }
    let k = m.canonical();
    let mut chi = BigInt::from(4 * chi_y);
    for (i, l) in [&d.l1, &d.l2, &l3].into_iter().enumerate() {
        chi += half_exact(m.dot(l, &l.plus(k)?)?, &format!("L{}(L{}+K)", i + 1, i + 1))?;
    }
    let twice_kx = k.times(2).plus(&d.b1)?.plus(&d.b2)?.plus(&d.b3)?;
    let k2 = m.square(&twice_kx)?;
    Ok(CoverInvariants { chi, k2 })
}

fn check_nodal(m: &PicardModel, classes: &[DivClass]) -> Result<()> {
    for (i, c) in classes.iter().enumerate() {
        let s = m.square(c)?;
        if s != BigInt::from(-2) {
            return Err(Error::Structure(format!("class {} has square {s}, not -2", m.format(c))));
        }
        for d in &classes[i + 1..] {
            if !m.dot(c, d)?.is_zero() {
                return Err(Error::Structure(format!(
                    "{} and {} are not orthogonal",
                    m.format(c),
                    m.format(d)
                )));
            }
        }
    }
    Ok(())
}

/// Whether the disjoint nodal classes form an even set: `C1 + ... + Ck` halves
/// in the model. `twist` is added to the sum first (e.g. `K`).
pub fn even_node_set(m: &PicardModel, classes: &[DivClass], twist: Option<&DivClass>) -> Result<CheckReport> {
    check_nodal(m, classes)?;
    let mut total = m.sum(classes)?;
    if let Some(t) = twist {
        total = total.plus(t)?;
    }
    let k = classes.len();
    let name = if twist.is_some() { "even-node-set-twisted" } else { "even-node-set" };
    let h = m.is_two_divisible(&total, &[])?;
    let r = match h.half {
        Some(half) => {
            let base = CheckReport::pass(name).with_witness(json!({ "half": m.format(&half) }));
            if twist.is_none() && k % 4 != 0 {
                // (sum/2)^2 = -k/2 must be even in an even lattice
                CheckReport::new(name, Status::Error)
                    .with_message(format!("even set of {k} nodes; cardinality must be divisible by 4"))
                    .with_witness(json!({ "half": m.format(&half) }))
            } else {
                base
            }
        }
        None => CheckReport::fail(name, "sum of the nodal classes is not divisible by 2")
            .with_witness(json!({ "sum": m.format(&total) })),
    };
    Ok(r.with_metric("k", k).with_detail("sum", m.format(&total)))
}

/// The Enriques-side identities: `B = 2E + C5 + K` with `B^2 = 2`, `L^2 = -2`
/// for `2L = B + C1 + ... + C5`, parity of the form, and the `K`-twisted
/// halving of `C1 + ... + C4`.
pub fn enriques_arithmetic(m: &PicardModel) -> Result<CheckReport> {
    let get = |n: &str| m.class(n);
    let (e, c5, k, b, l) = (get("E")?, get("C5")?, m.canonical().clone(), get("B")?, get("L")?);
    let cs: Vec<DivClass> = (1..=5).map(|i| get(&format!("C{i}"))).collect::<Result<_>>()?;
    let int = |v: BigInt| v.to_i64().expect("small lattice values");
    let mut children = Vec::new();

    let e2 = int(m.square(&e)?);
    let ec5 = int(m.dot(&e, &c5)?);
    let c52 = int(m.square(&c5)?);
    let expanded = 4 * e2 + 4 * ec5 + c52;
    let b_is = m.equal(&b, &e.times(2).plus(&c5)?.plus(&k)?)?;
    let b2 = int(m.square(&b)?);
    children.push(
        CheckReport::expect("b-square", b_is && b2 == 2 && expanded == 2, "B^2 != 2 or B != 2E + C5 + K")
            .with_metric("E^2", e2)
            .with_metric("E.C5", ec5)
            .with_metric("C5^2", c52)
            .with_metric("B^2", b2),
    );

    let branch = m.sum(&cs)?.plus(&b)?;
    let l_ok = m.equal(&l.times(2), &branch)?;
    let branch2 = int(m.square(&branch)?);
    let l2 = int(m.square(&l)?);
    children.push(
        CheckReport::expect("l-square", l_ok && l2 == -2 && branch2 == 4 * l2, "L^2 != -2 or 2L != B + sum C_i")
            .with_metric("(B+sum C)^2", branch2)
            .with_metric("L^2", l2),
    );

    // The rejected alternative: C1..C5 + Z ~ 2L - 2E with Z nodal and disjoint
    // would give (2(L-E))^2 = -12, i.e. an odd square (L-E)^2 = -3.
    let hypothetical = -2 * 6;
    let half_square = hypothetical / 4;
    let form_even = m.even_lattice && m.gram().iter().enumerate().all(|(i, row)| row[i] % 2 == 0);
    children.push(
        CheckReport::expect("parity", form_even && half_square % 2 != 0, "odd square not excluded")
            .with_metric("(L-E)^2 hypothetical", half_square)
            .with_message("an odd square contradicts the even intersection form"),
    );

    let four = m.sum(&cs[..4])?;
    let plain = m.is_two_divisible(&four, &[])?.divisible;
    let twisted = m.is_two_divisible(&four.plus(&k)?, &[])?;
    let mut r = CheckReport::expect("k-twisted-four-set", !plain && twisted.divisible, "C1 + ... + C4 + K does not halve");
    if let Some(h) = twisted.half {
        r = r.with_witness(json!({ "N": m.format(&h) }));
    }
    children.push(r);

    // Riemann-Roch on an Enriques surface: chi(B) = chi(O) + B(B-K)/2
    let chi_b = m.chi + int(m.dot(&b, &b.minus(&k)?)?) / 2;
    Ok(CheckReport::group("enriques-arithmetic", children).with_detail("chi_B", chi_b).with_detail("h0_B_expected", 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(name: &str) -> (PicardModel, ModelFile) {
        PicardModel::preset(name).unwrap()
    }

    #[test]
    fn enriques_double_cover() {
        let (m, f) = preset("enriques");
        let d = DoubleData::from_model(&m, &f).unwrap();
        assert!(d.b.effective);
        let v = validate_double(&m, &d).unwrap();
        assert!(v.passed(), "{}", v.to_canonical_json());
        assert_eq!(m.square(&d.l).unwrap(), BigInt::from(-2));
        let inv = double_invariants(&m, &d, 1).unwrap();
        assert_eq!((inv.chi.clone(), inv.k2.clone()), (BigInt::from(1), BigInt::from(-4)));
        assert_eq!(inv.contract(5).k2, BigInt::from(1));
    }

    #[test]
    fn f2_bidouble_cover() {
        let (m, f) = preset("f2");
        let d = BidoubleData::from_model(&m, &f).unwrap();
        let (v, l3) = validate_bidouble(&m, &d).unwrap();
        assert!(v.passed(), "{}", v.to_canonical_json());
        assert_eq!(m.format(&l3), "2Gamma + 4f");
        let inv = bidouble_invariants(&m, &d, 1).unwrap();
        assert_eq!((inv.chi.clone(), inv.k2.clone()), (BigInt::from(2), BigInt::from(0)));
        let t = inv.contract(2);
        assert_eq!(t.k2, BigInt::from(2));
        let s = t.free_quotient(2).unwrap();
        assert_eq!((s.chi, s.k2), (BigInt::from(1), BigInt::from(1)));
        assert_eq!(m.dot(&d.b1, &d.b2).unwrap(), BigInt::from(8));
    }

    #[test]
    fn p2_double_planes() {
        // hand values: sextic double plane is K3 (2, 0), quartic double plane
        // is del Pezzo of degree 2 (1, 2), conic double plane is P1 x P1 (1, 8)
        let (m, _) = preset("p2");
        let h = m.basis_class(0);
        for (l, want) in [(3, (2, 0)), (2, (1, 2)), (1, (1, 8))] {
            let d = DoubleData {
                l: h.times(l),
                b: h.times(2 * l),
            };
            let inv = double_invariants(&m, &d, 1).unwrap();
            assert_eq!((inv.chi, inv.k2), (BigInt::from(want.0), BigInt::from(want.1)), "L = {l}H");
        }
    }

    #[test]
    fn rejects_bad_data() {
        let (m, _) = preset("p2");
        let h = m.basis_class(0);
        let d = DoubleData { l: h.clone(), b: h.times(3) };
        let v = validate_double(&m, &d).unwrap();
        assert!(!v.passed());
        let w = v.first_failure().unwrap().witness.clone().unwrap();
        assert_eq!(w["difference"], "-H");
        assert!(double_invariants(&m, &d, 1).is_err());
    }

    #[test]
    fn trivial_data_scales_invariants() {
        let (m, _) = preset("enriques");
        let z = m.zero();
        let inv = double_invariants(&m, &DoubleData { l: z.clone(), b: z.clone() }, 1).unwrap();
        assert_eq!((inv.chi, inv.k2), (BigInt::from(2), BigInt::from(0)));
        let (f, _) = preset("f2");
        let z = f.zero();
        let d = BidoubleData {
            l1: z.clone(),
            l2: z.clone(),
            b1: z.clone(),
            b2: z.clone(),
            b3: z,
        };
        let inv = bidouble_invariants(&f, &d, 1).unwrap();
        // K_F2^2 = 8, so K^2 quadruples to 32
        assert_eq!((inv.chi, inv.k2), (BigInt::from(4), BigInt::from(32)));
    }

    #[test]
    fn even_sets() {
        let (k3, f) = preset("k3_even_eight");
        let nodes: Vec<DivClass> = f.nodes.iter().map(|n| k3.class(n).unwrap()).collect();
        let r = even_node_set(&k3, &nodes, None).unwrap();
        assert!(r.passed());
        assert!(!even_node_set(&k3, &nodes[..1], None).unwrap().passed());
        let (en, f) = preset("enriques");
        let four: Vec<DivClass> = f.nodes.iter().map(|n| en.class(n).unwrap()).collect();
        assert!(!even_node_set(&en, &four, None).unwrap().passed());
        assert!(even_node_set(&en, &four, Some(en.canonical())).unwrap().passed());
        let not_nodal = vec![en.class("E").unwrap()];
        assert!(even_node_set(&en, &not_nodal, None).is_err());
    }

    #[test]
    fn enriques_identities() {
        let (m, _) = preset("enriques");
        let r = enriques_arithmetic(&m).unwrap();
        assert!(r.passed(), "{}", r.to_canonical_json());
        assert_eq!(r.details["chi_B"], 2);
    }
}
