//! Exact enumeration of `F_p`-points of weighted projective zero loci.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::scalar::{is_prime, mul_mod, pow_mod};
use crate::variety::fp::FpPoly;
use crate::wpoly::{WPoly, WRing};

/// A point stored as the lexicographically least member of its `F_p^*`-orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WProjPoint(pub Vec<u64>);

impl WProjPoint {
    /// Canonical representative of the orbit of a nonzero vector.
    pub fn canonical(x: &[u64], weights: &[u32], p: u64) -> Option<WProjPoint> {
        if x.iter().all(|&v| v == 0) {
            return None;
        }
        let mut best = x.to_vec();
        for lambda in 2..p {
            let y = scale(x, lambda, weights, p);
            if y < best {
                best = y;
            }
        }
        Some(WProjPoint(best))
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for WProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Serialize for WProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `lambda . x = (lambda^{w_i} x_i)`.
pub fn scale(x: &[u64], lambda: u64, weights: &[u32], p: u64) -> Vec<u64> {
    x.iter()
        .zip(weights)
        .map(|(&v, &w)| mul_mod(pow_mod(lambda, w as u64, p), v, p))
        .collect()
}

/// Sorted `F_p`-points of a zero locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet {
    pub prime: u64,
    pub weights: Vec<u32>,
    pub points: Vec<WProjPoint>,
    #[serde(skip)]
    equations: Vec<FpPoly>,
    /// Affine candidates examined (one per orbit of the ambient space).
    pub points_scanned: u64,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &WProjPoint> {
        self.points.iter()
    }

    pub fn contains(&self, x: &WProjPoint) -> bool {
        self.points.binary_search(x).is_ok()
    }

    /// Point `i`, re-checked against the defining equations.
    pub fn get(&self, i: usize) -> Option<&WProjPoint> {
        let pt = self.points.get(i)?;
        debug_assert!(self.equations.iter().all(|f| f.eval(&pt.0) == 0));
        Some(pt)
    }

    /// Re-evaluates every equation at every point.
    pub fn self_check(&self) -> bool {
        self.points
            .iter()
            .all(|pt| self.equations.iter().all(|f| f.eval(&pt.0) == 0))
    }

    pub fn equations(&self) -> &[FpPoly] {
        &self.equations
    }

    /// Points satisfying `keep`, with the same equations and prime.
    pub fn filter(&self, keep: impl Fn(&WProjPoint) -> bool) -> PointSet {
        PointSet {
            prime: self.prime,
            weights: self.weights.clone(),
            points: self.points.iter().filter(|p| keep(p)).cloned().collect(),
            equations: self.equations.clone(),
            points_scanned: self.points_scanned,
        }
    }
}

/// One enumeration task: leading index, leading value, and optionally the
/// value of the next coordinate.
#[derive(Debug, Clone, Copy)]
struct Chunk {
    lead: usize,
    value: u64,
    next: Option<u64>,
}

fn coset_minima(w: u32, p: u64) -> Vec<u64> {
    let powers: Vec<u64> = (1..p).map(|l| pow_mod(l, w as u64, p)).collect();
    (1..p)
        .filter(|&a| powers.iter().all(|&s| mul_mod(a, s, p) >= a))
        .collect()
}

fn chunks(weights: &[u32], p: u64) -> Vec<Chunk> {
    let n = weights.len();
    let mut out = Vec::new();
    for lead in 0..n {
        for value in coset_minima(weights[lead], p) {
            if lead + 1 < n {
                out.extend((0..p).map(|v| Chunk {
                    lead,
                    value,
                    next: Some(v),
                }));
            } else {
                out.push(Chunk { lead, value, next: None });
            }
        }
    }
    out
}

struct Scan {
    points: Vec<WProjPoint>,
    scanned: u64,
}

fn scan_chunk(c: Chunk, weights: &[u32], p: u64, eqs: &[FpPoly]) -> Scan {
    let n = weights.len();
    let w = weights[c.lead] as u64;
    // scalars fixing the leading coordinate
    let stabilizer: Vec<u64> = (2..p).filter(|&l| pow_mod(l, w, p) == 1).collect();
    let mut x = vec![0u64; n];
    x[c.lead] = c.value;
    let free_start = match c.next {
        Some(v) => {
            x[c.lead + 1] = v;
            c.lead + 2
        }
        None => c.lead + 1,
    };
    let mut out = Vec::new();
    let mut scanned = 0u64;
    loop {
        let least = stabilizer.iter().all(|&l| scale(&x, l, weights, p) >= x);
        if least {
            scanned += 1;
            if eqs.iter().all(|f| f.eval(&x) == 0) {
                out.push(WProjPoint(x.clone()));
            }
        }
        // odometer over the free coordinates
        let mut i = n;
        loop {
            if i == free_start {
                return Scan { points: out, scanned };
            }
            i -= 1;
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
        }
    }
}

fn prepare(r: &WRing, p: u64, eqs: &[WPoly]) -> Result<Vec<FpPoly>> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    for f in eqs {
        if f.ring().as_ref() != r {
            return Err(Error::InvalidRing("equation on a different ring".into()));
        }
        if !f.is_homogeneous() {
            return Err(Error::NonHomogeneous(f.to_string()));
        }
    }
    eqs.iter().map(|f| FpPoly::from_wpoly(f, p)).collect()
}

fn assemble(scans: Vec<Scan>, weights: &[u32], p: u64, equations: Vec<FpPoly>) -> PointSet {
    let points_scanned = scans.iter().map(|s| s.scanned).sum();
    let mut points: Vec<WProjPoint> = scans.into_iter().flat_map(|s| s.points).collect();
    points.sort();
    PointSet {
        prime: p,
        weights: weights.to_vec(),
        points,
        equations,
        points_scanned,
    }
}

/// All `F_p`-points of the zero locus, each orbit once, data-parallel over
/// disjoint partitions of the coordinate space.
pub fn enumerate_points(r: &WRing, p: u64, eqs: &[WPoly]) -> Result<PointSet> {
    let compiled = prepare(r, p, eqs)?;
    let w = r.weights();
    let scans: Vec<Scan> = chunks(w, p)
        .into_par_iter()
        .map(|c| scan_chunk(c, w, p, &compiled))
        .collect();
    Ok(assemble(scans, w, p, compiled))
}

/// Single-threaded reference for [`enumerate_points`].
pub fn enumerate_points_serial(r: &WRing, p: u64, eqs: &[WPoly]) -> Result<PointSet> {
    let compiled = prepare(r, p, eqs)?;
    let w = r.weights();
    let scans: Vec<Scan> = chunks(w, p)
        .into_iter()
        .map(|c| scan_chunk(c, w, p, &compiled))
        .collect();
    Ok(assemble(scans, w, p, compiled))
}

/// Number of `F_p`-points of `P(w)` counted by orbit sizes: a vector with
/// support `S` has stabilizer of order `gcd(p-1, gcd(w_S))`.
pub fn ambient_point_count(weights: &[u32], p: u64) -> u64 {
    let n = weights.len();
    let mut total = 0u64;
    for mask in 1u32..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let vectors = (p - 1).pow(support.len() as u32);
        let g = support
            .iter()
            .fold(0u64, |acc, &i| num_integer::gcd(acc, weights[i] as u64));
        let stab = num_integer::gcd(p - 1, g);
        total += vectors * stab / (p - 1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Field;

    #[test]
    fn unit_equation_has_no_points() {
        let r = WRing::p3();
        let one = WPoly::constant(&r, Field::Rational.one());
        assert!(enumerate_points(&r, 5, &[one]).unwrap().is_empty());
    }

    #[test]
    fn godeaux_ambient_over_f3() {
        let r = WRing::godeaux();
        let pts = enumerate_points(&r, 3, &[]).unwrap();
        let p = 3u64;
        assert_eq!(pts.len() as u64, (p * p + p + 1) * p * p + 2 * (p + 1));
        assert_eq!(pts.len(), 125);
        assert_eq!(ambient_point_count(r.weights(), 3), 125);
    }

    #[test]
    fn cone_over_f5() {
        let r = WRing::p3();
        let cone = crate::wpoly::parse_poly(&r, Field::Rational, "y0^2 - y1 y2").unwrap();
        let pts = enumerate_points(&r, 5, &[cone]).unwrap();
        assert_eq!(pts.len(), 31);
        assert!(pts.self_check());
    }

    #[test]
    fn points_are_canonical() {
        let r = WRing::godeaux();
        let pts = enumerate_points(&r, 5, &[]).unwrap();
        for pt in pts.iter() {
            assert_eq!(WProjPoint::canonical(&pt.0, r.weights(), 5).unwrap(), *pt);
        }
        assert_eq!(pts.len() as u64, ambient_point_count(r.weights(), 5));
    }
}
