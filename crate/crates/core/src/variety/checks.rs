//! Quasi-smoothness, free-action and fixed-locus certificates over `F_p`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Field;
use crate::family::{build_family, FamilyParams, GodeauxFamily};
use crate::report::CheckReport;
use crate::variety::fp::{same_point_geometric, FpMap, FpPoly};
use crate::variety::points::{enumerate_points, PointSet, WProjPoint};
use crate::wpoly::{jacobian, MonomialMap, WPoly, WRing};

fn family_prime_field(f: &GodeauxFamily, p: u64) -> Result<Field> {
    let field = Field::prime(p)?;
    match f.field {
        Field::Rational => Ok(field),
        Field::Prime(q) if q == p => Ok(field),
        other => Err(Error::FieldMismatch {
            left: other.to_string(),
            right: field.to_string(),
        }),
    }
}

/// `F_p`-points of the surface `q0 = q2 = 0`.
pub fn surface_points(f: &GodeauxFamily, p: u64) -> Result<PointSet> {
    family_prime_field(f, p)?;
    enumerate_points(&f.ring, p, &[f.q0.clone(), f.q2.clone()])
}

fn matrix_has_rank_two(rows: &[Vec<u64>; 2], p: u64) -> bool {
    let n = rows[0].len();
    for i in 0..n {
        for j in i + 1..n {
            let a = rows[0][i] as u128 * rows[1][j] as u128 % p as u128;
            let b = rows[0][j] as u128 * rows[1][i] as u128 % p as u128;
            if a != b {
                return true;
            }
        }
    }
    false
}

/// Quasi-smoothness of `q0 = q2 = 0` over `F_p`: no surface point on the
/// ambient singular locus `x1 = x2 = x3 = 0`, and a rank-2 Jacobian at every
/// surface point.
pub fn check_quasi_smooth(f: &GodeauxFamily, p: u64) -> Result<CheckReport> {
    let pts = surface_points(f, p)?;
    quasi_smooth_on(f, &pts)
}

/// As [`check_quasi_smooth`], on an already enumerated point set.
pub fn quasi_smooth_on(f: &GodeauxFamily, pts: &PointSet) -> Result<CheckReport> {
    let p = pts.prime;
    let base = |r: CheckReport| {
        r.with_prime(p)
            .with_metric("points_scanned", pts.points_scanned)
            .with_metric("surface_points", pts.len())
    };
    let eqs = [f.q0.clone(), f.q2.clone()];
    let jac = jacobian(&eqs)?;
    let compiled: Vec<Vec<FpPoly>> = jac
        .entries
        .iter()
        .map(|row| row.iter().map(|d| FpPoly::from_wpoly(d, p)).collect())
        .collect::<Result<_>>()?;
    let flags: Vec<String> = jac
        .characteristic_vanishing
        .iter()
        .map(|(i, j, m)| format!("d/d{} of {}: {}", f.ring.names()[*j], ["q0", "q2"][*i], f.ring.format_monomial(m)))
        .collect();
    let nx = 3;
    if let Some(bad) = pts.iter().find(|pt| pt.0[..nx].iter().all(|&v| v == 0)) {
        let msg = "ambient-singular-locus hit: the surface meets x1 = x2 = x3 = 0";
        return Ok(base(CheckReport::fail("quasi-smooth", msg).with_witness(bad)));
    }
    let bad = pts.iter().find(|pt| {
        let rows = [
            compiled[0].iter().map(|d| d.eval(&pt.0)).collect(),
            compiled[1].iter().map(|d| d.eval(&pt.0)).collect(),
        ];
        !matrix_has_rank_two(&rows, p)
    });
    let report = match bad {
        None => CheckReport::pass("quasi-smooth"),
        Some(pt) => CheckReport::fail("quasi-smooth", "Jacobian rank below 2").with_witness(pt),
    };
    let report = base(report);
    Ok(if flags.is_empty() {
        report
    } else {
        report.with_detail("characteristic_vanishing", flags)
    })
}

/// Whether the point action of `a` fixes `x` as a point over `F_p`-bar.
pub fn is_fixed(a: &FpMap, x: &[u64], weights: &[u32], p: u64) -> bool {
    same_point_geometric(x, &a.apply(x), weights, p)
}

/// Points of the zero locus of `eqs` fixed by `action`.
pub fn fixed_locus(r: &WRing, action: &MonomialMap, p: u64, eqs: &[WPoly]) -> Result<PointSet> {
    let a = FpMap::from_map(action, p)?;
    let all = enumerate_points(r, p, eqs)?;
    Ok(all.filter(|pt| is_fixed(&a, &pt.0, r.weights(), p)))
}

/// `g`, `g^2`, `g^3` have no fixed point on the surface.
pub fn check_free_action(f: &GodeauxFamily, p: u64) -> Result<CheckReport> {
    let pts = surface_points(f, p)?;
    free_action_on(f, &pts)
}

pub fn free_action_on(f: &GodeauxFamily, pts: &PointSet) -> Result<CheckReport> {
    let p = pts.prime;
    let field = family_prime_field(f, p)?;
    let g = f.g.to_map(&f.ring, field)?;
    let mut h = g.clone();
    let mut children = Vec::new();
    for k in 1..f.g.order() {
        let a = FpMap::from_map(&h, p)?;
        let name = format!("free-action-g{k}");
        let fixed = pts.iter().find(|pt| is_fixed(&a, &pt.0, f.ring.weights(), p));
        children.push(match fixed {
            None => CheckReport::pass(name),
            Some(pt) => CheckReport::fail(name, "group element fixes a surface point")
                .with_witness(serde_json::json!({"element": format!("g^{k}"), "point": pt})),
        });
        h = g.compose(&h)?;
    }
    Ok(CheckReport::group("free-action", children)
        .with_prime(p)
        .with_metric("points_scanned", pts.points_scanned)
        .with_metric("surface_points", pts.len()))
}

/// The involution's fixed locus meets the surface, with a point on `x2 = 0`.
pub fn check_sigma_fixed_part(f: &GodeauxFamily, p: u64) -> Result<CheckReport> {
    let pts = surface_points(f, p)?;
    sigma_fixed_part_on(f, &pts)
}

pub fn sigma_fixed_part_on(f: &GodeauxFamily, pts: &PointSet) -> Result<CheckReport> {
    let p = pts.prime;
    let field = family_prime_field(f, p)?;
    let a = FpMap::from_map(&f.sigma.to_map(&f.ring, field)?, p)?;
    let fixed: Vec<&WProjPoint> = pts.iter().filter(|pt| is_fixed(&a, &pt.0, f.ring.weights(), p)).collect();
    let on_curve = fixed.iter().filter(|pt| pt.0[1] == 0).count();
    let r = match fixed.iter().find(|pt| pt.0[1] == 0) {
        Some(pt) => CheckReport::pass("sigma-fixed-part").with_witness(pt),
        None => CheckReport::fail("sigma-fixed-part", "no fixed surface point on x2 = 0"),
    };
    Ok(r.with_prime(p)
        .with_metric("fixed_surface_points", fixed.len())
        .with_metric("fixed_points_on_x2_zero", on_curve))
}

/// One resampled draw and why it was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resample {
    pub attempt: u32,
    pub failed: Vec<String>,
}

/// A certified draw: the family, its reports and any resamples on the way.
#[derive(Debug, Clone)]
pub struct CertifiedDraw {
    pub family: GodeauxFamily,
    pub reports: Vec<CheckReport>,
    pub resamples: Vec<Resample>,
}

impl CertifiedDraw {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(CheckReport::passed)
    }
}

/// Which finite-field checks to run on a draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    pub quasi_smooth: bool,
    pub free_action: bool,
    pub sigma_fixed: bool,
}

impl Checks {
    pub const ALL: Checks = Checks {
        quasi_smooth: true,
        free_action: true,
        sigma_fixed: true,
    };
}

pub fn run_checks(f: &GodeauxFamily, p: u64, checks: Checks) -> Result<Vec<CheckReport>> {
    let pts = surface_points(f, p)?;
    let mut out = Vec::new();
    if checks.quasi_smooth {
        out.push(quasi_smooth_on(f, &pts)?);
    }
    if checks.free_action {
        out.push(free_action_on(f, &pts)?);
    }
    if checks.sigma_fixed {
        out.push(sigma_fixed_part_on(f, &pts)?);
    }
    Ok(out)
}

/// Draws enforced families over `F_p` from a ChaCha8 stream seeded with `seed`,
/// resampling degenerate draws up to `retry_budget` times.
pub fn certify_random_draw(p: u64, seed: u64, retry_budget: u32, checks: Checks) -> Result<CertifiedDraw> {
    let field = Field::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resamples = Vec::new();
    let mut attempt = 0;
    loop {
        let family = build_family(&FamilyParams::random_with(field, &mut rng, true))?;
        let reports = run_checks(&family, p, checks)?;
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.clone()).collect();
        if failed.is_empty() || attempt == retry_budget {
            return Ok(CertifiedDraw {
                family,
                reports,
                resamples,
            });
        }
        log::info!("seed {seed}: draw {attempt} degenerate ({}), resampling", failed.join(", "));
        resamples.push(Resample { attempt, failed });
        attempt += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Equation;

    #[test]
    fn seed_42_passes_over_f13() {
        let f = build_family(&FamilyParams::random(Field::prime(13).unwrap(), 42, true)).unwrap();
        let reports = run_checks(&f, 13, Checks::ALL).unwrap();
        for r in &reports {
            assert!(r.passed(), "{}", r.to_canonical_json());
        }
    }

    #[test]
    fn ambient_singular_hit() {
        let field = Field::prime(13).unwrap();
        let mut p = FamilyParams::all_ones(field, true);
        p.set(Equation::Q0, "y1 y3", field.zero()).unwrap();
        p.set(Equation::Q2, "y1^2", field.one()).unwrap();
        p.set(Equation::Q2, "y3^2", field.zero()).unwrap();
        let f = build_family(&p).unwrap();
        let r = check_quasi_smooth(&f, 13).unwrap();
        assert!(!r.passed());
        assert!(r.message.as_ref().unwrap().contains("ambient-singular-locus"));
        assert_eq!(r.witness.unwrap(), "[0,0,0,0,1]");
    }

    #[test]
    fn sign_change_of_x_is_projective_identity() {
        let r = WRing::godeaux();
        let field = Field::prime(13).unwrap();
        let m = FpMap::from_map(&MonomialMap::signs(&r, field, &[-1, -1, -1, 1, 1]).unwrap(), 13).unwrap();
        let all = enumerate_points(&r, 13, &[]).unwrap();
        assert!(all.iter().all(|pt| is_fixed(&m, &pt.0, r.weights(), 13)));
    }

    #[test]
    fn sigma_fixes_x2_zero_component() {
        let r = WRing::godeaux();
        let field = Field::prime(5).unwrap();
        let sigma = MonomialMap::signs(&r, field, &[-1, 1, -1, 1, 1]).unwrap();
        let fixed = fixed_locus(&r, &sigma, 5, &[]).unwrap();
        let x2_zero = enumerate_points(&r, 5, &[WPoly::named(&r, field, "x2")]).unwrap();
        assert!(x2_zero.iter().all(|pt| fixed.contains(pt)));
    }
}
