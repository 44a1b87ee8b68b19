//! The quadric cone `y0^2 = y1 y2` in `P^3`, the involution
//! `tau = diag(1, -1, -1, 1)` and the quotient map to a quartic in `P^4`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::scalar::rational_sqrt;
use crate::exact::{ExactScalar, Field};
use crate::report::CheckReport;
use crate::variety::checks::is_fixed;
use crate::variety::{enumerate_points, FpMap, PointSet};
use crate::wpoly::{parse_poly, MonomialMap, WPoly, WRing};

/// Fixed points of `tau` on the cone: the vertex and the two smooth ones.
/// `Q1`, `Q2` are the intersections of the cone with the `-1` eigenline.
pub const Q0: [i64; 4] = [0, 0, 0, 1];
pub const Q1: [i64; 4] = [0, 1, 0, 0];
pub const Q2: [i64; 4] = [0, 0, 1, 0];
/// Their images on the quartic: the `A3`-vertex and the two simple vertices.
pub const P0: [i64; 5] = [0, 0, 0, 1, 0];
pub const P1: [i64; 5] = [0, 1, 0, 0, 0];
pub const P2: [i64; 5] = [0, 0, 1, 0, 0];

#[derive(Debug, Clone)]
pub struct ConeSetup {
    pub ring: Arc<WRing>,
    pub field: Field,
    pub cone: WPoly,
    pub tau: MonomialMap,
    /// `y0^2, y1^2, y2^2, y3^2, y0 y3`
    pub invariant_basis: Vec<WPoly>,
    pub image_ring: Arc<WRing>,
    /// `x0^2 - x1 x2` and `x0 x3 - x4^2`
    pub image_equations: Vec<WPoly>,
}

impl ConeSetup {
    pub fn new(field: Field) -> Result<ConeSetup> {
        let ring = WRing::p3();
        let image_ring = WRing::p4();
        let cone = parse_poly(&ring, field, "y0^2 - y1 y2")?;
        let tau = MonomialMap::signs(&ring, field, &[1, -1, -1, 1])?;
        let invariant_basis = ["y0^2", "y1^2", "y2^2", "y3^2", "y0 y3"]
            .iter()
            .map(|s| parse_poly(&ring, field, s))
            .collect::<Result<_>>()?;
        let image_equations = ["x0^2 - x1 x2", "x0 x3 - x4^2"]
            .iter()
            .map(|s| parse_poly(&image_ring, field, s))
            .collect::<Result<_>>()?;
        let c = ConeSetup {
            ring,
            field,
            cone,
            tau,
            invariant_basis,
            image_ring,
            image_equations,
        };
        if !c.tau.compose(&c.tau)?.eq(&MonomialMap::identity(&c.ring, field)) {
            return Err(Error::Structure("tau is not an involution".into()));
        }
        if c.tau.apply(&c.cone)? != c.cone {
            return Err(Error::Structure("tau does not preserve the cone".into()));
        }
        Ok(c)
    }

    pub fn rational() -> ConeSetup {
        ConeSetup::new(Field::Rational).expect("standard setup")
    }

    pub fn point(&self, coords: &[i64]) -> Vec<ExactScalar> {
        coords.iter().map(|&v| self.field.from_i64(v)).collect()
    }

    /// The quotient map `y -> (y0^2, y1^2, y2^2, y3^2, y0 y3)` on points.
    pub fn map_point(&self, y: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        self.invariant_basis.iter().map(|q| q.evaluate(y)).collect()
    }
}

/// Pulls the quartic's equations back along the invariant map: the first
/// vanishes identically, the second is divisible by the cone equation with
/// quotient `y0^2 + y1 y2`. Over prime fields in `primes`, every cone point is
/// also mapped onto the quartic.
pub fn verify_invariant_map(c: &ConeSetup, primes: &[u64]) -> Result<CheckReport> {
    let pull: Vec<WPoly> = c
        .image_equations
        .iter()
        .map(|e| e.substitute(&c.invariant_basis))
        .collect::<Result<_>>()?;
    let mut children = vec![CheckReport::expect(
        "x0x3-x4^2-pullback",
        pull[1].is_zero(),
        "pullback is not identically zero",
    )
    .with_detail("pullback", pull[1].to_string())];
    let (q, r) = pull[0].div_rem(&c.cone)?;
    let expected_q = parse_poly(&c.ring, c.field, "y0^2 + y1 y2")?;
    children.push(
        CheckReport::expect(
            "x0^2-x1x2-pullback",
            r.is_zero() && q == expected_q,
            "pullback is not (y0^2 - y1 y2)(y0^2 + y1 y2)",
        )
        .with_detail("pullback", pull[0].to_string())
        .with_detail("quotient", q.to_string())
        .with_detail("remainder", r.to_string()),
    );
    let tau_inv: Vec<bool> = c
        .invariant_basis
        .iter()
        .map(|q| c.tau.apply(q).map(|t| t == *q))
        .collect::<Result<_>>()?;
    children.push(CheckReport::expect(
        "basis-tau-invariant",
        tau_inv.iter().all(|&b| b),
        "an invariant-basis quadric is moved by tau",
    ));
    for &p in primes {
        children.push(image_on_quartic(c, p)?);
    }
    Ok(CheckReport::group("invariant-map", children).with_field(c.field))
}

fn image_on_quartic(c: &ConeSetup, p: u64) -> Result<CheckReport> {
    let field = Field::prime(p)?;
    let basis: Vec<WPoly> = c.invariant_basis.iter().map(|q| q.to_field(field)).collect::<Result<_>>()?;
    let eqs: Vec<WPoly> = c.image_equations.iter().map(|q| q.to_field(field)).collect::<Result<_>>()?;
    let pts = enumerate_points(&c.ring, p, &[c.cone.to_field(field)?])?;
    let mut bad = None;
    for pt in pts.iter() {
        let y: Vec<ExactScalar> = pt.0.iter().map(|&v| field.from_i64(v as i64)).collect();
        let x: Vec<ExactScalar> = basis.iter().map(|q| q.evaluate(&y)).collect::<Result<_>>()?;
        let on = x.iter().any(|v| !v.is_zero())
            && eqs.iter().all(|e| e.evaluate(&x).map(|v| v.is_zero()).unwrap_or(false));
        if !on {
            bad = Some(pt.clone());
            break;
        }
    }
    let r = match bad {
        None => CheckReport::pass(format!("image-on-quartic-f{p}")),
        Some(pt) => CheckReport::fail(format!("image-on-quartic-f{p}"), "cone point not mapped onto the quartic").with_witness(pt),
    };
    Ok(r.with_prime(p).with_metric("cone_points", pts.len()))
}

fn normalize(v: &[BigRational]) -> Vec<BigRational> {
    let lead = v.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(BigRational::one);
    v.iter().map(|x| x / &lead).collect()
}

/// Roots `[s : t]` of `a s^2 + b s t + c t^2` over the rationals, or `None`
/// when the form vanishes identically.
fn binary_roots(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<Option<Vec<[BigRational; 2]>>> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(None);
    }
    if a.is_zero() {
        // t (b s + c t) = 0
        let mut out = vec![[one.clone(), zero.clone()]];
        if !b.is_zero() {
            out.push([-c / b, one]);
        }
        out.dedup();
        return Ok(Some(out));
    }
    let disc = b * b - BigRational::from_integer(4.into()) * a * c;
    if disc.is_negative() {
        return Ok(Some(vec![]));
    }
    let root = rational_sqrt(&disc).ok_or_else(|| Error::Structure("irrational fixed points".into()))?;
    let two_a = a * BigRational::from_integer(2.into());
    let mut out = vec![[(-b + &root) / &two_a, one.clone()], [(-b - &root) / &two_a, one]];
    out.dedup();
    Ok(Some(out))
}

/// Fixed points of `tau` on the cone, exactly: the cone restricted to each
/// eigenline of `tau` is a binary quadric whose rational roots are the points.
pub fn tau_fixed_points_symbolic(c: &ConeSetup) -> Result<Vec<Vec<BigRational>>> {
    if c.field != Field::Rational {
        return Err(Error::InvalidField("symbolic mode works over Q".into()));
    }
    let signs: Vec<bool> = c.tau.scalars().iter().map(|s| s.is_one()).collect();
    let mut out = Vec::new();
    for eigen in [true, false] {
        let idx: Vec<usize> = (0..4).filter(|&i| signs[i] == eigen).collect();
        if idx.len() != 2 {
            return Err(Error::Structure("eigenspaces of tau are not lines".into()));
        }
        let (s, t) = (idx[0], idx[1]);
        let coef = |e: [u32; 4]| -> BigRational {
            c.cone
                .coefficient(&crate::wpoly::Monomial(e.to_vec()))
                .as_rational()
                .cloned()
                .unwrap_or_else(BigRational::zero)
        };
        let mono = |i: usize, j: usize| {
            let mut e = [0u32; 4];
            e[i] += 1;
            e[j] += 1;
            e
        };
        let roots = binary_roots(&coef(mono(s, s)), &coef(mono(s, t)), &coef(mono(t, t)))?
            .ok_or_else(|| Error::Structure("an eigenline lies on the cone".into()))?;
        for [a, b] in roots {
            let mut pt = vec![BigRational::zero(); 4];
            pt[s] = a;
            pt[t] = b;
            out.push(normalize(&pt));
        }
    }
    out.sort();
    Ok(out)
}

/// Fixed points of `tau` on the `F_p`-points of the cone.
pub fn tau_fixed_points(c: &ConeSetup, p: u64) -> Result<PointSet> {
    let field = Field::prime(p)?;
    let tau = FpMap::from_map(&MonomialMap::signs(&c.ring, field, &[1, -1, -1, 1])?, p)?;
    let pts = enumerate_points(&c.ring, p, &[c.cone.to_field(field)?])?;
    Ok(pts.filter(|pt| is_fixed(&tau, &pt.0, c.ring.weights(), p)))
}

fn proj_eq(a: &[ExactScalar], b: &[ExactScalar]) -> bool {
    // a ~ b iff all 2x2 minors vanish
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j]) == (&a[j] * &b[i])))
        && a.iter().any(|x| !x.is_zero())
        && b.iter().any(|x| !x.is_zero())
}

/// The three fixed points, symbolically and over each prime, with their
/// images `P0, P1, P2` on the quartic.
pub fn fixed_point_report(c: &ConeSetup, primes: &[u64]) -> Result<CheckReport> {
    let sym = tau_fixed_points_symbolic(c)?;
    let expected: Vec<Vec<BigRational>> = {
        let mut e: Vec<Vec<BigRational>> = [Q0, Q1, Q2]
            .iter()
            .map(|q| q.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        e.sort();
        e
    };
    let fmt = |p: &[BigRational]| format!("[{}]", p.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    let mut children = vec![CheckReport::expect("symbolic", sym == expected, "fixed points differ from Q0, Q1, Q2")
        .with_witness(sym.iter().map(|p| fmt(p)).collect::<Vec<_>>())];
    let mut images = Vec::new();
    let mut images_ok = true;
    for (q, pimg, name) in [(Q0, P0, "Q0"), (Q1, P1, "Q1"), (Q2, P2, "Q2")] {
        let img = c.map_point(&c.point(&q))?;
        let want: Vec<ExactScalar> = pimg.iter().map(|&v| c.field.from_i64(v)).collect();
        images_ok &= proj_eq(&img, &want);
        images.push(json!({"point": name, "image": format!("[{}]", img.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))}));
    }
    children.push(CheckReport::expect("images", images_ok, "images are not P0, P1, P2").with_witness(images));
    let tau2 = c.tau.compose(&c.tau)?;
    children.push(CheckReport::expect(
        "tau-squared-identity",
        tau2 == MonomialMap::identity(&c.ring, c.field),
        "tau^2 moves points",
    ));
    for &p in primes {
        let fixed = tau_fixed_points(c, p)?;
        let want: Vec<String> = vec!["[0,0,0,1]".into(), "[0,0,1,0]".into(), "[0,1,0,0]".into()];
        let got: Vec<String> = fixed.iter().map(ToString::to_string).collect();
        children.push(
            CheckReport::expect(format!("enumerated-f{p}"), got == want, "enumerated fixed points differ")
                .with_witness(got)
                .with_prime(p),
        );
    }
    Ok(CheckReport::group("tau-fixed-points", children).with_metric("count", sym.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_map_identities() {
        let c = ConeSetup::rational();
        let r = verify_invariant_map(&c, &[13]).unwrap();
        assert!(r.passed(), "{}", r.to_canonical_json());
        assert_eq!(r.children[1].details["remainder"], "0");
    }

    #[test]
    fn three_fixed_points() {
        let c = ConeSetup::rational();
        let pts = tau_fixed_points_symbolic(&c).unwrap();
        assert_eq!(pts.len(), 3);
        let r = fixed_point_report(&c, &[5, 13]).unwrap();
        assert!(r.passed(), "{}", r.to_canonical_json());
        let img = c.map_point(&c.point(&Q1)).unwrap();
        assert_eq!(img.iter().map(ToString::to_string).collect::<Vec<_>>(), ["0", "1", "0", "0", "0"]);
    }

    #[test]
    fn binary_forms() {
        let q = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(binary_roots(&q(0), &q(-1), &q(0)).unwrap().unwrap().len(), 2);
        assert_eq!(binary_roots(&q(1), &q(0), &q(0)).unwrap().unwrap().len(), 1);
        assert!(binary_roots(&q(1), &q(0), &q(1)).unwrap().unwrap().is_empty());
        assert!(binary_roots(&q(1), &q(0), &q(-2)).is_err());
        assert!(binary_roots(&q(0), &q(0), &q(0)).unwrap().is_none());
    }
}
