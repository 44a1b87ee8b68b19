//! The Z4-Godeaux family: two quartics `q0`, `q2` in `P(1,1,1,2,2)` with
//! prescribed monomial supports, the order-4 action and its involution lifts.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Field, FieldMatrix, GroupLabel};
use crate::report::CheckReport;
use crate::rep::{character_of, projective_census, CyclicAction, InvolutionLift, SigmaTable, SigmaType};
use crate::wpoly::{Monomial, MonomialMap, WPoly, WRing};

/// Allowed monomials of the invariant quartic.
pub const Q0_SUPPORT: [&str; 8] = [
    "x1^4",
    "x2^4",
    "x3^4",
    "x1^2 x3^2",
    "x1 x2^2 x3",
    "x1 x2 y1",
    "x2 x3 y3",
    "y1 y3",
];

/// Allowed monomials of the quartic of character 2.
pub const Q2_SUPPORT: [&str; 8] = [
    "x1^2 x2^2",
    "x2^2 x3^2",
    "x1^3 x3",
    "x1 x3^3",
    "x1 x2 y3",
    "x2 x3 y1",
    "y1^2",
    "y3^2",
];

/// Monomials of each support that are odd under the involution.
pub const Q0_ODD: [&str; 2] = ["x1 x2 y1", "x2 x3 y3"];
pub const Q2_ODD: [&str; 2] = ["x2 x3 y1", "x1 x2 y3"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Q0,
    Q2,
}

impl Equation {
    pub fn character(self) -> u32 {
        match self {
            Equation::Q0 => 0,
            Equation::Q2 => 2,
        }
    }

    pub fn support(self) -> &'static [&'static str; 8] {
        match self {
            Equation::Q0 => &Q0_SUPPORT,
            Equation::Q2 => &Q2_SUPPORT,
        }
    }

    pub fn odd(self) -> &'static [&'static str; 2] {
        match self {
            Equation::Q0 => &Q0_ODD,
            Equation::Q2 => &Q2_ODD,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Equation::Q0 => "q0",
            Equation::Q2 => "q2",
        }
    }
}

/// Monomials of `eq` that may carry a coefficient.
pub fn allowed_monomials(ring: &WRing, eq: Equation, enforce_involution: bool) -> Vec<Monomial> {
    eq.support()
        .iter()
        .filter(|s| !(enforce_involution && eq.odd().contains(s)))
        .map(|s| ring.parse_monomial(s).expect("support monomials parse"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub field: Field,
    pub q0: BTreeMap<Monomial, ExactScalar>,
    pub q2: BTreeMap<Monomial, ExactScalar>,
    pub enforce_involution: bool,
}

impl FamilyParams {
    pub fn empty(field: Field, enforce_involution: bool) -> FamilyParams {
        FamilyParams {
            field,
            q0: BTreeMap::new(),
            q2: BTreeMap::new(),
            enforce_involution,
        }
    }

    /// Coefficient 1 on every allowed monomial.
    pub fn all_ones(field: Field, enforce_involution: bool) -> FamilyParams {
        let ring = WRing::godeaux();
        let mut p = FamilyParams::empty(field, enforce_involution);
        for eq in [Equation::Q0, Equation::Q2] {
            for m in allowed_monomials(&ring, eq, enforce_involution) {
                p.coefficients_mut(eq).insert(m, field.one());
            }
        }
        p
    }

    /// Seeded draw: uniform nonzero residues over `F_p`, integers in `[-9, 9] \ {0}` over Q.
    pub fn random(field: Field, seed: u64, enforce_involution: bool) -> FamilyParams {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        FamilyParams::random_with(field, &mut rng, enforce_involution)
    }

    pub fn random_with(field: Field, rng: &mut impl Rng, enforce_involution: bool) -> FamilyParams {
        let ring = WRing::godeaux();
        let mut p = FamilyParams::empty(field, enforce_involution);
        for eq in [Equation::Q0, Equation::Q2] {
            for m in allowed_monomials(&ring, eq, enforce_involution) {
                let c = match field {
                    Field::Prime(q) => field.from_i64(rng.random_range(1..q) as i64),
                    Field::Rational => {
                        let v: i64 = rng.random_range(1..=9);
                        field.from_i64(if rng.random_bool(0.5) { v } else { -v })
                    }
                };
                p.coefficients_mut(eq).insert(m, c);
            }
        }
        p
    }

    /// Coefficients given as text (`"x1 x2 y1" -> "-3/7"`).
    pub fn from_text(
        field: Field,
        q0: &BTreeMap<String, String>,
        q2: &BTreeMap<String, String>,
        enforce_involution: bool,
    ) -> Result<FamilyParams> {
        let ring = WRing::godeaux();
        let mut p = FamilyParams::empty(field, enforce_involution);
        for (eq, src) in [(Equation::Q0, q0), (Equation::Q2, q2)] {
            for (m, c) in src {
                p.coefficients_mut(eq)
                    .insert(ring.parse_monomial(m)?, ExactScalar::parse_in(field, c)?);
            }
        }
        Ok(p)
    }

    pub fn coefficients(&self, eq: Equation) -> &BTreeMap<Monomial, ExactScalar> {
        match eq {
            Equation::Q0 => &self.q0,
            Equation::Q2 => &self.q2,
        }
    }

    pub fn coefficients_mut(&mut self, eq: Equation) -> &mut BTreeMap<Monomial, ExactScalar> {
        match eq {
            Equation::Q0 => &mut self.q0,
            Equation::Q2 => &mut self.q2,
        }
    }

    pub fn set(&mut self, eq: Equation, monomial: &str, c: ExactScalar) -> Result<()> {
        let m = WRing::godeaux().parse_monomial(monomial)?;
        self.coefficients_mut(eq).insert(m, c);
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GodeauxFamily {
    pub ring: Arc<WRing>,
    pub field: Field,
    pub q0: WPoly,
    pub q2: WPoly,
    pub g: CyclicAction,
    pub sigma: InvolutionLift,
    pub sigma_g2: InvolutionLift,
    pub enforce_involution: bool,
}

/// Validates every coefficient against degree, character, support and parity.
pub fn build_family(params: &FamilyParams) -> Result<GodeauxFamily> {
    let field = params.field;
    if let Field::Prime(_) = field {
        field.sqrt_minus_one()?;
    }
    let ring = WRing::godeaux();
    let g = CyclicAction::godeaux_generator();
    let mut polys = Vec::with_capacity(2);
    for eq in [Equation::Q0, Equation::Q2] {
        let support = allowed_monomials(&ring, eq, false);
        let mut terms = Vec::new();
        for (m, c) in params.coefficients(eq) {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: c.field().to_string(),
                });
            }
            let name = ring.format_monomial(m);
            if ring.degree(m) != 4 {
                return Err(Error::NonHomogeneous(format!(
                    "{name} has degree {} in {}",
                    ring.degree(m),
                    eq.name()
                )));
            }
            let found = character_of(m, &g);
            if found != eq.character() {
                return Err(Error::CharacterMismatch {
                    monomial: name,
                    found,
                    expected: eq.character(),
                });
            }
            if !support.contains(m) {
                return Err(Error::NotInSupport(name));
            }
            if params.enforce_involution && eq.odd().contains(&name.as_str()) && !c.is_zero() {
                return Err(Error::OddUnderInvolution(name));
            }
            terms.push((m.clone(), c.clone()));
        }
        polys.push(WPoly::from_terms(&ring, field, terms)?);
    }
    let q2 = polys.pop().expect("two equations");
    let q0 = polys.pop().expect("two equations");
    let sigma = InvolutionLift::godeaux_sigma();
    let sigma_g2 = sigma.times_square_of(&g)?;
    Ok(GodeauxFamily {
        ring,
        field,
        q0,
        q2,
        g,
        sigma,
        sigma_g2,
        enforce_involution: params.enforce_involution,
    })
}

/// Outcome of comparing the two lifts' sign-type tables with the expected table.
#[derive(Debug, Clone, Serialize)]
pub struct LiftComparison {
    pub tables: Vec<SigmaTable>,
    pub matching: Vec<String>,
    pub mismatched_cells: BTreeMap<String, Vec<(u32, u32)>>,
}

impl GodeauxFamily {
    pub fn equations(&self) -> [&WPoly; 2] {
        [&self.q0, &self.q2]
    }

    pub fn lifts(&self) -> [&InvolutionLift; 2] {
        [&self.sigma, &self.sigma_g2]
    }

    pub fn equation(&self, eq: Equation) -> &WPoly {
        match eq {
            Equation::Q0 => &self.q0,
            Equation::Q2 => &self.q2,
        }
    }

    /// Sign-type tables for degrees 1, 2, 4 under both lifts.
    pub fn sigma_tables(&self) -> Result<LiftComparison> {
        let relations = [self.q0.clone(), self.q2.clone()];
        let expected = SigmaTable::expected();
        let mut tables = Vec::new();
        let mut matching = Vec::new();
        let mut mismatched_cells = BTreeMap::new();
        for lift in self.lifts() {
            let t = SigmaTable::compute(&self.ring, &self.g, lift, &relations, &[1, 2, 4])?;
            if t.matches(&expected) {
                matching.push(lift.label.to_string());
            }
            mismatched_cells.insert(lift.label.to_string(), t.mismatches(&expected));
            tables.push(t);
        }
        Ok(LiftComparison {
            tables,
            matching,
            mismatched_cells,
        })
    }

    /// Every diagonal sign vector whose sign-type table equals the expected one.
    /// Only lifts keeping both relations sign-homogeneous are considered.
    pub fn sign_lifts_matching_table(&self) -> Result<Vec<Vec<i8>>> {
        let relations = [self.q0.clone(), self.q2.clone()];
        let expected = SigmaTable::expected();
        let n = self.ring.nvars();
        let mut out = Vec::new();
        for bits in 0u32..(1 << n) {
            let signs: Vec<i8> = (0..n).map(|v| if bits >> v & 1 == 1 { -1 } else { 1 }).collect();
            let lift = InvolutionLift::new(crate::rep::LiftLabel::Sigma, signs.clone())?;
            match SigmaTable::compute(&self.ring, &self.g, &lift, &relations, &[1, 2, 4]) {
                Ok(t) if t.matches(&expected) => out.push(signs),
                Ok(_) | Err(Error::NonHomogeneous(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// Dimensions per character of the degree-`m` piece of the quotient ring.
    pub fn quotient_dimensions(&self, m: u32) -> Result<Vec<usize>> {
        let relations = [self.q0.clone(), self.q2.clone()];
        (0..self.g.order())
            .map(|c| {
                crate::rep::sigma_type(&self.ring, &self.g, &self.sigma, &relations, m, c).map(|t| t.total())
            })
            .collect()
    }

    /// The order-4 generator as a ring map; needs `i` in the field.
    pub fn g_map(&self) -> Result<MonomialMap> {
        self.g.to_map(&self.ring, self.field)
    }

    pub fn sigma_map(&self) -> Result<MonomialMap> {
        self.sigma.to_map(&self.ring, self.field)
    }

    /// Number of coefficients minus the dimension of the torus-and-rescaling orbit.
    /// Informational only.
    pub fn expected_moduli_dimension(&self) -> Result<(usize, usize)> {
        let mut rows = Vec::new();
        for (k, q) in self.equations().iter().enumerate() {
            for m in q.terms().keys() {
                let mut row: Vec<i64> = m.0.iter().map(|&e| e as i64).collect();
                row.extend([(k == 0) as i64, (k == 1) as i64]);
                rows.push(row);
            }
        }
        let params = rows.len();
        let rank = if rows.is_empty() {
            0
        } else {
            FieldMatrix::from_i64(Field::Rational, &rows)?.rank()
        };
        Ok((params, params - rank))
    }
}

/// First monomial (graded order, descending) where `lhs` and `rhs` differ.
fn first_difference(lhs: &WPoly, rhs: &WPoly) -> Option<String> {
    let diff = lhs.sub(rhs);
    diff.sorted_terms()
        .first()
        .map(|(m, _)| lhs.ring().format_monomial(m))
}

/// g-invariance of `q0`, eigenvalue `-1` of `q2`, and involution invariance of both.
pub fn verify_equivariance(f: &GodeauxFamily) -> CheckReport {
    let mut children = Vec::new();
    let g_map = f.g_map();
    for eq in [Equation::Q0, Equation::Q2] {
        let q = f.equation(eq);
        let check = format!("g-eigenvalue-{}", eq.name());
        let eigenvalue = if eq.character() == 0 { 1 } else { -1 };
        let report = match &g_map {
            Ok(map) => {
                let image = map.apply(q).expect("map on the family ring");
                let expected = q.scale(&f.field.from_i64(eigenvalue));
                match first_difference(&image, &expected) {
                    None => CheckReport::pass(&check),
                    Some(w) => CheckReport::fail(&check, "g does not scale the equation by its eigenvalue").with_witness(w),
                }
                .with_detail("method", "apply_map")
            }
            Err(_) => {
                // No i in the field: use characters, which determine the eigenvalue i^c.
                let bad = q
                    .sorted_terms()
                    .into_iter()
                    .find(|(m, _)| character_of(m, &f.g) != eq.character());
                match bad {
                    None => CheckReport::pass(&check),
                    Some((m, _)) => CheckReport::fail(&check, "term of the wrong character")
                        .with_witness(f.ring.format_monomial(m)),
                }
                .with_detail("method", "character")
            }
        };
        children.push(report.with_detail("eigenvalue", eigenvalue));
    }
    let sigma = f.sigma_map().expect("sign maps exist over every field");
    for eq in [Equation::Q0, Equation::Q2] {
        let q = f.equation(eq);
        let check = format!("sigma-invariance-{}", eq.name());
        let image = sigma.apply(q).expect("map on the family ring");
        children.push(match first_difference(&image, q) {
            None => CheckReport::pass(&check),
            Some(w) => CheckReport::fail(&check, "term odd under the involution").with_witness(w),
        });
    }
    CheckReport::group("equivariance", children).with_field(f.field)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionCensus {
    pub generated_by_g_and_lift: GroupLabel,
    pub generated_by_g: GroupLabel,
    pub generated_by_lift: GroupLabel,
}

/// Groups generated by `g` and the involution lift acting on weighted projective space.
pub fn torsion_group_census(f: &GodeauxFamily) -> Result<TorsionCensus> {
    let w = f.ring.weights();
    Ok(TorsionCensus {
        generated_by_g_and_lift: projective_census(w, Some(&f.g), Some(&f.sigma))?,
        generated_by_g: projective_census(w, Some(&f.g), None)?,
        generated_by_lift: projective_census(w, None, Some(&f.sigma))?,
    })
}

/// The cells of a sign-type table as `{plus,minus}` strings, for reports.
pub fn render_row(row: &[SigmaType]) -> Vec<String> {
    row.iter().map(ToString::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_enforced_has_six_terms() {
        let f = build_family(&FamilyParams::all_ones(Field::Rational, true)).unwrap();
        assert_eq!(f.q0.len(), 6);
        assert_eq!(f.q2.len(), 6);
        assert!(verify_equivariance(&f).passed());
    }

    #[test]
    fn wrong_character_rejected() {
        let mut p = FamilyParams::all_ones(Field::Rational, true);
        p.set(Equation::Q0, "x1^3 x2", Field::Rational.one()).unwrap();
        let err = build_family(&p).unwrap_err();
        assert!(matches!(err, Error::CharacterMismatch { ref monomial, found: 1, .. } if monomial == "x1^3 x2"));
    }

    #[test]
    fn field_without_i_rejected() {
        let p = FamilyParams::all_ones(Field::prime(7).unwrap(), true);
        assert!(build_family(&p).is_err());
    }

    #[test]
    fn reenabled_odd_monomial_is_witness() {
        let f = build_family(&FamilyParams::all_ones(Field::Rational, false)).unwrap();
        let r = verify_equivariance(&f);
        assert!(!r.passed());
        let bad = r.first_failure().unwrap();
        assert_eq!(bad.check, "sigma-invariance-q0");
        assert_eq!(bad.witness.as_ref().unwrap(), "x1 x2 y1");
    }

    #[test]
    fn seeded_draw_over_f13() {
        let p = FamilyParams::random(Field::prime(13).unwrap(), 42, true);
        let f = build_family(&p).unwrap();
        let r = verify_equivariance(&f);
        assert!(r.passed(), "{}", r.to_canonical_json());
        assert_eq!(r.children[1].details["method"], "apply_map");
        assert_eq!(r.children[1].details["eigenvalue"], -1);
    }

    #[test]
    fn exactly_one_lift_matches_table() {
        let f = build_family(&FamilyParams::random(Field::Rational, 7, true)).unwrap();
        let cmp = f.sigma_tables().unwrap();
        assert!(cmp.matching.is_empty());
        assert_eq!(cmp.mismatched_cells["sigma"], [(1, 1), (1, 3)]);
        assert_eq!(cmp.mismatched_cells["sigma_g2"], [(4, 1), (4, 3)]);
        assert!(f.sign_lifts_matching_table().unwrap().is_empty());
        assert_eq!(f.quotient_dimensions(4).unwrap(), [7, 7, 7, 7]);
        assert_eq!(f.quotient_dimensions(1).unwrap().iter().sum::<usize>(), 3);
    }

    #[test]
    fn moduli_count() {
        let f = build_family(&FamilyParams::all_ones(Field::Rational, true)).unwrap();
        assert_eq!(f.expected_moduli_dimension().unwrap(), (12, 6));
    }

    #[test]
    fn census() {
        let f = build_family(&FamilyParams::all_ones(Field::Rational, true)).unwrap();
        let c = torsion_group_census(&f).unwrap();
        assert_eq!(c.generated_by_g_and_lift.to_string(), "Z4xZ2");
        assert_eq!(c.generated_by_g.to_string(), "Z4");
        assert_eq!(c.generated_by_lift.to_string(), "Z2");
    }
}
