//! Polynomials and maps compiled to `u64` arithmetic modulo a fixed prime.

use crate::error::{Error, Result};
use crate::exact::scalar::{inv_mod, mul_mod, pow_mod};
use crate::exact::Field;
use crate::wpoly::{MonomialMap, WPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    terms: Vec<(u64, Vec<u32>)>,
}

impl FpPoly {
    /// Reduces `f` modulo `p`; rational coefficients must have denominators prime to `p`.
    pub fn from_wpoly(f: &WPoly, p: u64) -> Result<FpPoly> {
        let field = Field::prime(p)?;
        let g = match f.field() {
            Field::Rational => f.to_field(field)?,
            Field::Prime(q) if q == p => f.clone(),
            other => {
                return Err(Error::FieldMismatch {
                    left: other.to_string(),
                    right: field.to_string(),
                })
            }
        };
        let terms = g
            .terms()
            .iter()
            .map(|(m, c)| (c.as_fp().expect("prime-field coefficient"), m.0.clone()))
            .collect();
        Ok(FpPoly { p, terms })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (&xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    t = mul_mod(t, xi, p);
                }
                if t == 0 {
                    break;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

/// A scaled variable permutation acting on `F_p` points: `y_v = s_v * x_{target[v]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMap {
    p: u64,
    scalars: Vec<u64>,
    target: Vec<usize>,
}

impl FpMap {
    pub fn from_map(a: &MonomialMap, p: u64) -> Result<FpMap> {
        if a.field() != Field::Prime(p) {
            return Err(Error::FieldMismatch {
                left: a.field().to_string(),
                right: format!("F_{p}"),
            });
        }
        Ok(FpMap {
            p,
            scalars: a.scalars().iter().map(|s| s.as_fp().expect("prime field")).collect(),
            target: a.target().to_vec(),
        })
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        (0..x.len())
            .map(|v| mul_mod(self.scalars[v], x[self.target[v]], self.p))
            .collect()
    }
}

/// `(g, c)` with `g = gcd(ws)` and `g = sum c_i ws_i`.
fn bezout(ws: &[u32]) -> (i64, Vec<i64>) {
    let mut g = ws[0] as i64;
    let mut c = vec![0i64; ws.len()];
    c[0] = 1;
    for i in 1..ws.len() {
        let (d, s, t) = ext_gcd(g, ws[i] as i64);
        for ci in c.iter_mut() {
            *ci *= s;
        }
        c[i] = t;
        g = d;
    }
    (g, c)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (d, s, t) = ext_gcd(b, a % b);
        (d, t, s - (a / b) * t)
    }
}

fn pow_signed(x: u64, e: i64, p: u64) -> u64 {
    if e >= 0 {
        pow_mod(x, e as u64, p)
    } else {
        pow_mod(inv_mod(x, p).expect("nonzero"), e.unsigned_abs(), p)
    }
}

/// Whether `y` and `x` are the same point of weighted projective space over the
/// algebraic closure: `y_i = lambda^{w_i} x_i` for some `lambda != 0` in `F_p-bar`.
pub fn same_point_geometric(x: &[u64], y: &[u64], weights: &[u32], p: u64) -> bool {
    let mut support = Vec::new();
    let mut ratios = Vec::new();
    for i in 0..x.len() {
        match (x[i] == 0, y[i] == 0) {
            (true, true) => {}
            (false, false) => {
                support.push(weights[i]);
                ratios.push(mul_mod(y[i], inv_mod(x[i], p).expect("nonzero"), p));
            }
            _ => return false,
        }
    }
    if support.is_empty() {
        return false;
    }
    // lambda^g = mu is forced by Bezout; a g-th root of mu exists in F_p-bar.
    let (g, c) = bezout(&support);
    let mu = ratios
        .iter()
        .zip(&c)
        .fold(1u64, |acc, (&r, &ci)| mul_mod(acc, pow_signed(r, ci, p), p));
    support
        .iter()
        .zip(&ratios)
        .all(|(&w, &r)| pow_mod(mu, (w as i64 / g) as u64, p) == r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bezout_identity() {
        let (g, c) = bezout(&[4, 6, 9]);
        assert_eq!(g, 1);
        assert_eq!(4 * c[0] + 6 * c[1] + 9 * c[2], 1);
    }

    #[test]
    fn geometric_equality() {
        let w = [1, 1, 1, 2, 2];
        // (-1)-scaling: weights 1 pick up -1, weights 2 do not.
        assert!(same_point_geometric(&[1, 0, 2, 3, 4], &[12, 0, 11, 3, 4], &w, 13));
        // pure-y point scaled by a non-square: lambda lives in F_169 only.
        assert!(same_point_geometric(&[0, 0, 0, 1, 1], &[0, 0, 0, 2, 2], &w, 13));
        assert!(!same_point_geometric(&[0, 0, 0, 1, 1], &[0, 0, 0, 1, 2], &w, 13));
        assert!(!same_point_geometric(&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &w, 13));
    }
}
