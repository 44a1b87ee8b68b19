use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Field};
use crate::wpoly::ring::{Monomial, WRing};

/// Sparse polynomial over an exact field in a weighted ring.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WPoly {
    ring: Arc<WRing>,
    field: Field,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl WPoly {
    pub fn zero(ring: &Arc<WRing>, field: Field) -> WPoly {
        WPoly {
            ring: ring.clone(),
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<WRing>, c: ExactScalar) -> WPoly {
        let field = c.field();
        WPoly::monomial(ring, Monomial::one(ring.nvars()), c).with_field(field)
    }

    fn with_field(mut self, field: Field) -> WPoly {
        self.field = field;
        self
    }

    pub fn var(ring: &Arc<WRing>, field: Field, i: usize) -> WPoly {
        WPoly::monomial(ring, Monomial::var(ring.nvars(), i), field.one())
    }

    /// Variable by name; panics on an unknown name (programming error).
    pub fn named(ring: &Arc<WRing>, field: Field, name: &str) -> WPoly {
        let i = ring.var_index(name).unwrap_or_else(|| panic!("no variable {name}"));
        WPoly::var(ring, field, i)
    }

    pub fn monomial(ring: &Arc<WRing>, m: Monomial, c: ExactScalar) -> WPoly {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        WPoly {
            ring: ring.clone(),
            field,
            terms,
        }
    }

    /// Collects terms, summing repeats and dropping zeros.
    pub fn from_terms<I>(ring: &Arc<WRing>, field: Field, terms: I) -> Result<WPoly>
    where
        I: IntoIterator<Item = (Monomial, ExactScalar)>,
    {
        let mut p = WPoly::zero(ring, field);
        for (m, c) in terms {
            if m.0.len() != ring.nvars() {
                return Err(Error::Dimension(format!(
                    "monomial with {} exponents in a ring with {} variables",
                    m.0.len(),
                    ring.nvars()
                )));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.to_string(),
                    right: c.field().to_string(),
                });
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn ring(&self) -> &Arc<WRing> {
        &self.ring
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, ExactScalar> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactScalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex descending order (the order used for display and reports).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &ExactScalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| self.ring.cmp_graded(b.0, a.0));
        v
    }

    /// The weighted degree if the polynomial is weighted-homogeneous.
    /// The zero polynomial is homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| self.ring.degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    fn check_compatible(&self, other: &WPoly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::InvalidRing(format!("{} vs {}", self.ring, other.ring)));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &WPoly) -> Result<WPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &WPoly) -> Result<WPoly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &WPoly) -> Result<WPoly> {
        self.check_compatible(other)?;
        let mut out = WPoly::zero(&self.ring, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &WPoly) -> WPoly {
        self.checked_add(other).expect("compatible polynomials")
    }

    pub fn sub(&self, other: &WPoly) -> WPoly {
        self.checked_sub(other).expect("compatible polynomials")
    }

    pub fn mul(&self, other: &WPoly) -> WPoly {
        self.checked_mul(other).expect("compatible polynomials")
    }

    pub fn neg(&self) -> WPoly {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &ExactScalar) -> WPoly {
        let mut out = WPoly::zero(&self.ring, self.field);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &(a * c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> WPoly {
        WPoly {
            ring: self.ring.clone(),
            field: self.field,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> WPoly {
        let mut acc = WPoly::constant(&self.ring, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact evaluation at a point of the same field.
    pub fn evaluate(&self, point: &[ExactScalar]) -> Result<ExactScalar> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Dimension(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        if let Some(x) = point.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: x.field().to_string(),
            });
        }
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Formal partial derivative. Also returns the monomials whose derivative
    /// vanished only because the characteristic divides the exponent.
    pub fn partial(&self, var: usize) -> (WPoly, Vec<Monomial>) {
        let mut out = WPoly::zero(&self.ring, self.field);
        let mut vanished = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let d = c.scale(e as i64);
            if d.is_zero() {
                vanished.push(m.clone());
                continue;
            }
            let mut dm = m.clone();
            dm.0[var] -= 1;
            out.add_term(dm, &d);
        }
        (out, vanished)
    }

    pub fn derivative(&self, var: usize) -> WPoly {
        self.partial(var).0
    }

    /// Substitutes `images[i]` for variable `i`; all images share one target ring.
    pub fn substitute(&self, images: &[WPoly]) -> Result<WPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Dimension("one image per variable required".into()));
        }
        let target = images[0].ring.clone();
        for img in images {
            if img.ring != target || img.field != self.field {
                return Err(Error::InvalidRing("images must share ring and field".into()));
            }
        }
        let mut out = WPoly::zero(&target, self.field);
        for (m, c) in &self.terms {
            let mut t = WPoly::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&img.pow(e));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Reduces rational coefficients into a prime field (or re-tags within one field).
    pub fn to_field(&self, field: Field) -> Result<WPoly> {
        if field == self.field {
            return Ok(self.clone());
        }
        let rational = |c: &ExactScalar| {
            c.as_rational()
                .cloned()
                .ok_or_else(|| Error::InvalidField(format!("cannot map {} into {field}", self.field)))
        };
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((m.clone(), field.from_rational(&rational(c)?)?)))
            .collect::<Result<Vec<_>>>()?;
        WPoly::from_terms(&self.ring, field, terms)
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().max_by(|a, b| self.ring.cmp_graded(a.0, b.0))
    }

    /// Multivariate division by a single divisor under graded-lex order:
    /// `self = q * divisor + r` with no term of `r` divisible by the leading monomial.
    pub fn div_rem(&self, divisor: &WPoly) -> Result<(WPoly, WPoly)> {
        self.check_compatible(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv()?;
        let mut q = WPoly::zero(&self.ring, self.field);
        let mut r = WPoly::zero(&self.ring, self.field);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let t = WPoly::monomial(&self.ring, lm.quotient_of(&m), &c * &lc_inv);
                q = q.add(&t);
                p = p.sub(&t.mul(divisor));
            } else {
                r.add_term(m.clone(), &c);
                p.terms.remove(&m);
            }
        }
        Ok((q, r))
    }
}

impl fmt::Display for WPoly {
    /// `coeff * x1^a x2^b + ...`; constants print as the bare coefficient.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else {
                    format!("{c} * {}", self.ring.format_monomial(m))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Formal Jacobian matrix with characteristic-vanishing flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jacobian {
    /// `entries[i][j] = d f_i / d x_j`
    pub entries: Vec<Vec<WPoly>>,
    /// `(equation, variable, monomial)` where `p | exponent` killed a term.
    pub characteristic_vanishing: Vec<(usize, usize, Monomial)>,
}

pub fn jacobian(fs: &[WPoly]) -> Result<Jacobian> {
    let Some(first) = fs.first() else {
        return Ok(Jacobian {
            entries: vec![],
            characteristic_vanishing: vec![],
        });
    };
    for f in fs {
        first.check_compatible(f)?;
    }
    let n = first.ring.nvars();
    let mut entries = Vec::with_capacity(fs.len());
    let mut flags = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let (d, vanished) = f.partial(j);
            flags.extend(vanished.into_iter().map(|m| (i, j, m)));
            row.push(d);
        }
        entries.push(row);
    }
    Ok(Jacobian {
        entries,
        characteristic_vanishing: flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone() -> WPoly {
        let r = WRing::p3();
        let q = Field::Rational;
        let y = |i| WPoly::var(&r, q, i);
        y(0).mul(&y(0)).sub(&y(1).mul(&y(2)))
    }

    #[test]
    fn cone_partials() {
        let f = cone();
        let j = jacobian(&[f.clone()]).unwrap();
        let shown: Vec<String> = j.entries[0].iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["2 * y0", "-1 * y2", "-1 * y1", "0"]);
        assert!(j.characteristic_vanishing.is_empty());
    }

    #[test]
    fn vertex_lies_on_cone() {
        let f = cone();
        let q = Field::Rational;
        let v = [q.zero(), q.zero(), q.zero(), q.one()];
        assert!(f.evaluate(&v).unwrap().is_zero());
    }

    #[test]
    fn euler_identity_for_x1sq_x3sq() {
        let r = WRing::godeaux();
        let q = Field::Rational;
        let f = WPoly::monomial(&r, r.parse_monomial("x1^2 x3^2").unwrap(), q.one());
        let mut euler = WPoly::zero(&r, q);
        for (i, &w) in r.weights().iter().enumerate() {
            euler = euler.add(&WPoly::var(&r, q, i).mul(&f.derivative(i)).scale(&q.from_i64(w as i64)));
        }
        assert_eq!(euler, f.scale(&q.from_i64(4)));
    }

    #[test]
    fn characteristic_vanishing_flagged() {
        let r = WRing::p3();
        let f5 = Field::prime(5).unwrap();
        let f = WPoly::monomial(&r, Monomial(vec![5, 0, 0, 0]), f5.one());
        let j = jacobian(&[f]).unwrap();
        assert!(j.entries[0][0].is_zero());
        assert_eq!(j.characteristic_vanishing.len(), 1);
    }

    #[test]
    fn division_by_cone() {
        let r = WRing::p3();
        let q = Field::Rational;
        let y = |i| WPoly::var(&r, q, i);
        let num = y(0).pow(4).sub(&y(1).pow(2).mul(&y(2).pow(2)));
        let (quot, rem) = num.div_rem(&cone()).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, y(0).pow(2).add(&y(1).mul(&y(2))));
    }

    #[test]
    fn mixed_fields_rejected() {
        let r = WRing::p3();
        let a = WPoly::var(&r, Field::Rational, 0);
        let b = WPoly::var(&r, Field::prime(13).unwrap(), 0);
        assert!(a.checked_add(&b).is_err());
    }
}
