//! The plane construction with normalization `P2`: four points in general
//! position, the projectivity `phi` cycling them, and the pencil of conics
//! through them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::scalar::rational_sqrt;
use crate::exact::{ExactScalar, Field, FieldMatrix};
use crate::report::CheckReport;
use crate::wpoly::{Monomial, WPoly, WRing};

/// Four points of `P2` with integer coordinates, as read from a points file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointsFile {
    pub points: Vec<Vec<i64>>,
}

impl PointsFile {
    pub fn standard() -> PointsFile {
        PointsFile {
            points: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]],
        }
    }

    pub fn from_json(s: &str) -> Result<PointsFile> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("points file: {e}")))
    }

    pub fn to_points(&self) -> Result<Vec<Vec<ExactScalar>>> {
        if self.points.len() != 4 || self.points.iter().any(|p| p.len() != 3) {
            return Err(Error::Config("expected four points with three coordinates".into()));
        }
        Ok(self
            .points
            .iter()
            .map(|p| p.iter().map(|&v| Field::Rational.from_i64(v)).collect())
            .collect())
    }
}

/// A preimage of a base point in the normalization `C + phi_* C` of the
/// double curve: `(sheet, i)` is `P_(i+1)` on `C` (sheet 0) or on `phi_* C`.
pub type Preimage = (u8, u8);

#[derive(Debug, Clone)]
pub struct PencilOfConics {
    pub ring: Arc<WRing>,
    pub points: Vec<Vec<ExactScalar>>,
    /// Normalized so that the last nonzero entry, row-major, is 1.
    pub phi: FieldMatrix,
    pub pencil: [WPoly; 2],
    /// Matrix of `C -> phi_* C` on the pencil basis (columns are images).
    pub action: FieldMatrix,
    pub fixed: [WPoly; 2],
    pub reducible: WPoly,
    pub lines: [WPoly; 2],
    pub smooth_fixed: WPoly,
    pub chosen: WPoly,
    pub chosen_image: WPoly,
    pub iota: Vec<(Preimage, Preimage)>,
}

fn det3(a: &[ExactScalar], b: &[ExactScalar], c: &[ExactScalar]) -> Result<ExactScalar> {
    FieldMatrix::new(Field::Rational, 3, vec![a.to_vec(), b.to_vec(), c.to_vec()])?.det()
}

fn cross(a: &[ExactScalar], b: &[ExactScalar]) -> Vec<ExactScalar> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn proportional(a: &[ExactScalar], b: &[ExactScalar]) -> bool {
    a.iter().any(|x| !x.is_zero())
        && b.iter().any(|x| !x.is_zero())
        && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j]) == (&a[j] * &b[i])))
}

fn transpose(m: &FieldMatrix) -> Result<FieldMatrix> {
    let rows = (0..m.ncols()).map(|j| (0..m.nrows()).map(|i| m.get(i, j).clone()).collect()).collect();
    FieldMatrix::new(m.field(), m.nrows(), rows)
}

/// Scales so that the last nonzero entry in row-major order is 1.
fn normalize_matrix(m: &FieldMatrix) -> Result<FieldMatrix> {
    let last = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| (i, j)))
        .filter(|&(i, j)| !m.get(i, j).is_zero())
        .last()
        .ok_or(Error::DivisionByZero)?;
    let inv = m.get(last.0, last.1).inv()?;
    let rows = (0..m.nrows()).map(|i| m.row(i).iter().map(|x| x * &inv).collect()).collect();
    FieldMatrix::new(m.field(), m.ncols(), rows)
}

fn is_scalar(m: &FieldMatrix) -> bool {
    let d = m.get(0, 0);
    !d.is_zero() && (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| if i == j { m.get(i, j) == d } else { m.get(i, j).is_zero() }))
}

/// The frame matrix sending `e1, e2, e3, e1+e2+e3` to `p[0..4]`.
fn frame(p: &[Vec<ExactScalar>]) -> Result<FieldMatrix> {
    let cols = transpose(&FieldMatrix::new(Field::Rational, 3, p[..3].to_vec())?)?;
    let lambda = cols
        .solve(&p[3])
        .ok_or_else(|| Error::DegeneratePosition("first three points are collinear".into()))?;
    let rows = (0..3).map(|i| (0..3).map(|j| cols.get(i, j) * &lambda[j]).collect()).collect();
    FieldMatrix::new(Field::Rational, 3, rows)
}

fn linear_form(ring: &Arc<WRing>, u: &[ExactScalar]) -> Result<WPoly> {
    WPoly::from_terms(ring, Field::Rational, u.iter().enumerate().map(|(i, c)| (Monomial::var(3, i), c.clone())))
}

fn conic_coeffs(ring: &WRing, f: &WPoly) -> Vec<ExactScalar> {
    ring.monomials_of_degree(2).iter().map(|m| f.coefficient(m)).collect()
}

fn conic_from(ring: &Arc<WRing>, v: &[ExactScalar]) -> Result<WPoly> {
    WPoly::from_terms(ring, Field::Rational, ring.monomials_of_degree(2).into_iter().zip(v.iter().cloned()))
}

/// Scales so that the leading coefficient is 1.
fn monic(f: &WPoly) -> Result<WPoly> {
    let (_, c) = f.leading_term().ok_or(Error::DivisionByZero)?;
    Ok(f.scale(&c.inv()?))
}

/// Determinant of the symmetric matrix of a conic; zero iff it is singular.
pub fn conic_discriminant(f: &WPoly) -> Result<ExactScalar> {
    let n = f.ring().nvars();
    let entry = |i: usize, j: usize| {
        let mut e = vec![0u32; n];
        e[i] += 1;
        e[j] += 1;
        let c = f.coefficient(&Monomial(e));
        if i == j {
            c.scale(2)
        } else {
            c
        }
    };
    let rows = (0..3).map(|i| (0..3).map(|j| entry(i, j)).collect()).collect();
    FieldMatrix::new(Field::Rational, 3, rows)?.det()
}

/// `C -> C o phi^-1`, the equation of `phi(C)`.
fn push_forward(f: &WPoly, phi_inv: &FieldMatrix) -> Result<WPoly> {
    let images = (0..3).map(|i| linear_form(f.ring(), phi_inv.row(i))).collect::<Result<Vec<_>>>()?;
    f.substitute(&images)
}

/// Builds `phi`, the pencil, its two fixed members and the gluing involution.
pub fn pencil_of_conics(points: &[Vec<ExactScalar>]) -> Result<PencilOfConics> {
    if points.len() != 4 || points.iter().any(|p| p.len() != 3) {
        return Err(Error::Dimension("four points of P2 required".into()));
    }
    for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        if det3(&points[a], &points[b], &points[c])?.is_zero() {
            return Err(Error::DegeneratePosition(format!("P{}, P{}, P{} are collinear", a + 1, b + 1, c + 1)));
        }
    }
    let ring = WRing::p2();
    let f = frame(points)?;
    let shifted: Vec<Vec<ExactScalar>> = (0..4).map(|i| points[(i + 1) % 4].clone()).collect();
    let g = frame(&shifted)?;
    let f_inv = f.inverse().ok_or(Error::DivisionByZero)?;
    let phi = normalize_matrix(&g.mul(&f_inv)?)?;
    let phi_inv = phi.inverse().ok_or(Error::DivisionByZero)?;

    let monos = ring.monomials_of_degree(2);
    let eval_rows = points
        .iter()
        .map(|p| monos.iter().map(|m| WPoly::monomial(&ring, m.clone(), Field::Rational.one()).evaluate(p)).collect())
        .collect::<Result<Vec<Vec<ExactScalar>>>>()?;
    let kernel = FieldMatrix::new(Field::Rational, monos.len(), eval_rows)?.nullspace();
    if kernel.len() != 2 {
        return Err(Error::DegeneratePosition("conics through the points do not form a pencil".into()));
    }
    let pencil = [conic_from(&ring, &kernel[0])?, conic_from(&ring, &kernel[1])?];

    // coordinates of phi_* C_i in the basis (C_0, C_1)
    let basis_cols = transpose(&FieldMatrix::new(Field::Rational, monos.len(), kernel.clone())?)?;
    let mut action_cols = Vec::new();
    for c in &pencil {
        let img = conic_coeffs(&ring, &push_forward(c, &phi_inv)?);
        let coords = solve_in_span(&basis_cols, &img)?;
        action_cols.push(coords);
    }
    let action = transpose(&FieldMatrix::new(Field::Rational, 2, action_cols)?)?;
    let sq = action.mul(&action)?;
    if !is_scalar(&sq) {
        return Err(Error::Structure("phi does not induce an involution on the pencil".into()));
    }
    if is_scalar(&action) {
        return Err(Error::Structure("phi acts trivially on the pencil".into()));
    }
    // M^2 = c I with M not scalar: eigenvalues are the two square roots of c
    let c = sq.get(0, 0).as_rational().cloned().ok_or_else(|| Error::InvalidField("pencil over Q".into()))?;
    let root = rational_sqrt(&c).ok_or_else(|| Error::Structure("fixed members are not rational".into()))?;
    let mut fixed = Vec::new();
    for lambda in [root.clone(), -root] {
        let l = Field::Rational.from_rational(&lambda)?;
        let shifted = FieldMatrix::new(
            Field::Rational,
            2,
            (0..2).map(|i| (0..2).map(|j| if i == j { action.get(i, j) - &l } else { action.get(i, j).clone() }).collect()).collect(),
        )?;
        let v = shifted.nullspace();
        if v.len() != 1 {
            return Err(Error::Structure("eigenspace of the pencil action is not a line".into()));
        }
        fixed.push(monic(&pencil[0].scale(&v[0][0]).add(&pencil[1].scale(&v[0][1])))?);
    }
    let singular: Vec<bool> = fixed.iter().map(|f| conic_discriminant(f).map(|d| d.is_zero())).collect::<Result<_>>()?;
    let (reducible, smooth_fixed) = match singular.as_slice() {
        [true, false] => (fixed[0].clone(), fixed[1].clone()),
        [false, true] => (fixed[1].clone(), fixed[0].clone()),
        _ => return Err(Error::Structure("expected exactly one reducible fixed member".into())),
    };
    let lines = [
        monic(&linear_form(&ring, &cross(&points[0], &points[2]))?)?,
        monic(&linear_form(&ring, &cross(&points[1], &points[3]))?)?,
    ];

    // a smooth member other than C0
    let mut chosen = None;
    for t in 0..8 {
        let cand = pencil[0].add(&pencil[1].scale(&Field::Rational.from_i64(t)));
        let img = push_forward(&cand, &phi_inv)?;
        let moved = !proportional(&conic_coeffs(&ring, &cand), &conic_coeffs(&ring, &img));
        if moved && !conic_discriminant(&cand)?.is_zero() {
            chosen = Some((monic(&cand)?, monic(&img)?));
            break;
        }
    }
    let (chosen, chosen_image) = chosen.ok_or_else(|| Error::Structure("no smooth non-fixed member found".into()))?;
    let iota = (0..4u8)
        .flat_map(|i| [((0, i), (1, (i + 1) % 4)), ((1, i), (0, (i + 3) % 4))])
        .collect();
    Ok(PencilOfConics {
        ring,
        points: points.to_vec(),
        phi,
        pencil,
        action,
        fixed: [fixed[0].clone(), fixed[1].clone()],
        reducible,
        lines,
        smooth_fixed,
        chosen,
        chosen_image,
        iota,
    })
}

/// The unique `x` with `A x = b` for a full-column-rank `A`.
fn solve_in_span(a: &FieldMatrix, b: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
    let rows = (0..a.nrows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(-&b[i]);
            r
        })
        .collect();
    let ker = FieldMatrix::new(a.field(), a.ncols() + 1, rows)?.nullspace();
    let v = ker
        .iter()
        .find(|v| !v[a.ncols()].is_zero())
        .ok_or_else(|| Error::Structure("image conic left the pencil".into()))?;
    let inv = v[a.ncols()].inv()?;
    Ok(v[..a.ncols()].iter().map(|x| x * &inv).collect())
}

impl PencilOfConics {
    pub fn apply_phi(&self, x: &[ExactScalar]) -> Vec<ExactScalar> {
        self.phi.mul_vec(x)
    }

    fn matrix_rows(m: &FieldMatrix) -> Vec<Vec<String>> {
        (0..m.nrows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
    }

    pub fn phi_rows(&self) -> Vec<Vec<String>> {
        Self::matrix_rows(&self.phi)
    }

    pub fn report(&self) -> Result<CheckReport> {
        let mut children = Vec::new();
        let cycles = (0..4).all(|i| proportional(&self.apply_phi(&self.points[i]), &self.points[(i + 1) % 4]));
        children.push(CheckReport::expect("phi-cycles-points", cycles, "phi(P_i) is not P_(i+1)"));
        let phi4 = self.phi.mul(&self.phi)?.mul(&self.phi.mul(&self.phi)?)?;
        children.push(
            CheckReport::expect("phi-order-four", is_scalar(&phi4), "phi^4 is not the identity")
                .with_detail("phi^2_scalar", is_scalar(&self.phi.mul(&self.phi)?)),
        );
        let through_all = |f: &WPoly| self.points.iter().all(|p| f.evaluate(p).map(|v| v.is_zero()).unwrap_or(false));
        children.push(CheckReport::expect(
            "fixed-members",
            self.fixed.iter().all(through_all)
                && !proportional(&conic_coeffs(&self.ring, &self.fixed[0]), &conic_coeffs(&self.ring, &self.fixed[1])),
            "fixed members are not two distinct conics of the pencil",
        ));
        let product = self.lines[0].mul(&self.lines[1]);
        children.push(
            CheckReport::expect(
                "reducible-member",
                proportional(&conic_coeffs(&self.ring, &self.reducible), &conic_coeffs(&self.ring, &product)),
                "the reducible fixed member is not L(P1,P3) L(P2,P4)",
            )
            .with_detail("reducible", self.reducible.to_string())
            .with_detail("lines", [self.lines[0].to_string(), self.lines[1].to_string()]),
        );
        let phi_inv = self.phi.inverse().ok_or(Error::DivisionByZero)?;
        let on_image = (0..4).all(|i| {
            let img = self.apply_phi(&self.points[i]);
            self.chosen_image.evaluate(&img).map(|v| v.is_zero()).unwrap_or(false)
                && self.chosen.evaluate(&phi_inv.mul_vec(&self.points[i])).map(|v| v.is_zero()).unwrap_or(false)
        });
        let involution = self.iota.iter().all(|(a, b)| self.iota.iter().any(|(c, d)| c == b && d == a));
        let free = self.iota.iter().all(|(a, b)| a != b);
        let bijective = {
            let mut targets: Vec<Preimage> = self.iota.iter().map(|x| x.1).collect();
            targets.sort();
            targets.dedup();
            targets.len() == 8 && self.iota.len() == 8
        };
        children.push(
            CheckReport::expect(
                "iota-free",
                on_image && involution && free && bijective,
                "iota is not a free involution on the eight preimages",
            )
            .with_detail("chosen", self.chosen.to_string())
            .with_detail("chosen_image", self.chosen_image.to_string())
            .with_witness(self.iota.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>()),
        );
        let c_img2 = push_forward(&push_forward(&self.chosen, &phi_inv)?, &phi_inv)?;
        children.push(CheckReport::expect(
            "phi-squared-preserves-members",
            proportional(&conic_coeffs(&self.ring, &self.chosen), &conic_coeffs(&self.ring, &c_img2)),
            "phi^2 moves a member of the pencil",
        ));
        Ok(CheckReport::group("pencil-of-conics", children)
            .with_detail("phi", self.phi_rows())
            .with_detail("pencil", [self.pencil[0].to_string(), self.pencil[1].to_string()])
            .with_detail("action", Self::matrix_rows(&self.action))
            .with_detail("smooth_fixed", self.smooth_fixed.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_frame() {
        let pc = pencil_of_conics(&PointsFile::standard().to_points().unwrap()).unwrap();
        assert_eq!(pc.phi_rows(), [["0", "0", "1"], ["-1", "0", "1"], ["0", "-1", "1"]]);
        let r = pc.report().unwrap();
        assert!(r.passed(), "{}", r.to_canonical_json());
        let target = monic(&parse("x y - y z")).unwrap();
        assert_eq!(pc.reducible, target);
        assert_eq!(pc.iota.len(), 8);
    }

    fn parse(s: &str) -> WPoly {
        crate::wpoly::parse_poly(&WRing::p2(), Field::Rational, s).unwrap()
    }

    #[test]
    fn collinear_rejected() {
        let pts = PointsFile {
            points: vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![1, 1, 1]],
        };
        assert!(matches!(pencil_of_conics(&pts.to_points().unwrap()), Err(Error::DegeneratePosition(_))));
    }

    #[test]
    fn other_frame() {
        let pts = PointsFile {
            points: vec![vec![1, 2, 3], vec![-1, 0, 4], vec![2, -3, 1], vec![5, 1, -2]],
        };
        let pc = pencil_of_conics(&pts.to_points().unwrap()).unwrap();
        assert!(pc.report().unwrap().passed());
    }
}
