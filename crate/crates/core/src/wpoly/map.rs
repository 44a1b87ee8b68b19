use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Field};
use crate::wpoly::poly::WPoly;
use crate::wpoly::ring::{Monomial, WRing};

/// Ring automorphism `x_v -> s_v * x_{target[v]}`, a scaled variable permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    ring: Arc<WRing>,
    scalars: Vec<ExactScalar>,
    target: Vec<usize>,
}

impl MonomialMap {
    pub fn new(ring: &Arc<WRing>, scalars: Vec<ExactScalar>, target: Vec<usize>) -> Result<MonomialMap> {
        let n = ring.nvars();
        if scalars.len() != n || target.len() != n {
            return Err(Error::Dimension("one scalar and target per variable required".into()));
        }
        let field = scalars[0].field();
        if let Some(s) = scalars.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch {
                left: field.to_string(),
                right: s.field().to_string(),
            });
        }
        if scalars.iter().any(ExactScalar::is_zero) {
            return Err(Error::DivisionByZero);
        }
        let mut seen = vec![false; n];
        for &t in &target {
            if t >= n || seen[t] {
                return Err(Error::Dimension("target indices must form a permutation".into()));
            }
            seen[t] = true;
        }
        let w = ring.weights();
        for (v, &t) in target.iter().enumerate() {
            if w[v] != w[t] {
                return Err(Error::WeightMismatch {
                    source_var: ring.names()[v].clone(),
                    source_weight: w[v],
                    target_var: ring.names()[t].clone(),
                    target_weight: w[t],
                });
            }
        }
        Ok(MonomialMap {
            ring: ring.clone(),
            scalars,
            target,
        })
    }

    pub fn diagonal(ring: &Arc<WRing>, scalars: Vec<ExactScalar>) -> Result<MonomialMap> {
        let target = (0..ring.nvars()).collect();
        MonomialMap::new(ring, scalars, target)
    }

    pub fn identity(ring: &Arc<WRing>, field: Field) -> MonomialMap {
        MonomialMap::diagonal(ring, vec![field.one(); ring.nvars()]).expect("identity is valid")
    }

    /// Diagonal map with entries `±1` over the given field.
    pub fn signs(ring: &Arc<WRing>, field: Field, signs: &[i8]) -> Result<MonomialMap> {
        let s = signs.iter().map(|&e| field.from_i64(e as i64)).collect();
        MonomialMap::diagonal(ring, s)
    }

    pub fn ring(&self) -> &Arc<WRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.scalars[0].field()
    }

    pub fn scalars(&self) -> &[ExactScalar] {
        &self.scalars
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn is_diagonal(&self) -> bool {
        self.target.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// `b.compose(a)` is "a first, then b": `apply(apply(f, a), b) == apply(f, b.compose(a))`.
    pub fn compose(&self, a: &MonomialMap) -> Result<MonomialMap> {
        if self.ring != a.ring {
            return Err(Error::InvalidRing("maps on different rings".into()));
        }
        let scalars = (0..self.ring.nvars())
            .map(|v| a.scalars[v].checked_mul(&self.scalars[a.target[v]]))
            .collect::<Result<Vec<_>>>()?;
        let target = (0..self.ring.nvars()).map(|v| self.target[a.target[v]]).collect();
        MonomialMap::new(&self.ring, scalars, target)
    }

    /// Image of a single monomial: a scalar times a permuted monomial.
    pub fn apply_monomial(&self, m: &Monomial) -> (ExactScalar, Monomial) {
        let mut out = vec![0; m.0.len()];
        let mut c = self.field().one();
        for (v, &e) in m.0.iter().enumerate() {
            if e > 0 {
                c = &c * &self.scalars[v].pow(e);
                out[self.target[v]] += e;
            }
        }
        (c, Monomial(out))
    }

    /// Substitution homomorphism applied to `f`.
    pub fn apply(&self, f: &WPoly) -> Result<WPoly> {
        if f.ring() != &self.ring {
            return Err(Error::InvalidRing("map and polynomial on different rings".into()));
        }
        if f.field() != self.field() {
            return Err(Error::FieldMismatch {
                left: f.field().to_string(),
                right: self.field().to_string(),
            });
        }
        let terms = f.terms().iter().map(|(m, c)| {
            let (s, img) = self.apply_monomial(m);
            (img, c * &s)
        });
        WPoly::from_terms(&self.ring, f.field(), terms)
    }

    /// Point action dual to `apply`: `f(apply_point(x)) == apply(f)(x)`.
    pub fn apply_point(&self, x: &[ExactScalar]) -> Vec<ExactScalar> {
        (0..x.len()).map(|v| &self.scalars[v] * &x[self.target[v]]).collect()
    }
}

pub fn apply_map(f: &WPoly, a: &MonomialMap) -> Result<WPoly> {
    a.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_action(f: Field) -> MonomialMap {
        let r = WRing::godeaux();
        let i = f.sqrt_minus_one().unwrap();
        let m1 = f.from_i64(-1);
        MonomialMap::diagonal(&r, vec![i.clone(), m1, -&i, i.clone(), -&i]).unwrap()
    }

    #[test]
    fn g_fixes_x1x2y1() {
        let f = Field::prime(13).unwrap();
        let r = WRing::godeaux();
        let p = WPoly::monomial(&r, r.parse_monomial("x1 x2 y1").unwrap(), f.one());
        assert_eq!(g_action(f).apply(&p).unwrap(), p);
    }

    #[test]
    fn sigma_negates_x2x3() {
        let q = Field::Rational;
        let r = WRing::godeaux();
        let sigma = MonomialMap::signs(&r, q, &[-1, 1, -1, 1, 1]).unwrap();
        let p = WPoly::monomial(&r, r.parse_monomial("x2 x3").unwrap(), q.one());
        assert_eq!(sigma.apply(&p).unwrap(), p.neg());
    }

    #[test]
    fn weight_mismatch_rejected() {
        let r = WRing::godeaux();
        let q = Field::Rational;
        let err = MonomialMap::new(&r, vec![q.one(); 5], vec![3, 1, 2, 0, 4]).unwrap_err();
        assert!(matches!(err, Error::WeightMismatch { .. }));
    }

    #[test]
    fn g_has_order_four() {
        let f = Field::prime(13).unwrap();
        let g = g_action(f);
        let g2 = g.compose(&g).unwrap();
        let g4 = g2.compose(&g2).unwrap();
        assert_eq!(g4, MonomialMap::identity(&WRing::godeaux(), f));
        assert_ne!(g2, MonomialMap::identity(&WRing::godeaux(), f));
    }
}
