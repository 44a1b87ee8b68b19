//! Text form of polynomials: `coeff * x1^a x2^b + ...`, coefficients as `-3/7`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Field};
use crate::wpoly::poly::WPoly;
use crate::wpoly::ring::WRing;

/// Parses the output of `WPoly`'s `Display`. Also accepts bare monomials
/// (`x1 x2`, coefficient 1), bare constants, and ` - ` between terms.
pub fn parse_poly(ring: &Arc<WRing>, field: Field, s: &str) -> Result<WPoly> {
    let normalized = s.replace(" - ", " + -");
    let t = normalized.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if t == "0" {
        return Ok(WPoly::zero(ring, field));
    }
    let mut terms = Vec::new();
    for raw in t.split('+') {
        let term = raw.trim();
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {s:?}")));
        }
        let (coeff, mono) = match term.split_once('*') {
            Some((c, m)) if !c.trim().chars().any(|ch| ch.is_ascii_alphabetic()) => {
                (ExactScalar::parse_in(field, c.trim())?, ring.parse_monomial(m)?)
            }
            _ => {
                if term.chars().any(|ch| ch.is_ascii_alphabetic()) {
                    let (sign, rest) = match term.strip_prefix('-') {
                        Some(r) => (-1, r),
                        None => (1, term),
                    };
                    (field.from_i64(sign), ring.parse_monomial(rest)?)
                } else {
                    (ExactScalar::parse_in(field, term)?, ring.parse_monomial("1")?)
                }
            }
        };
        terms.push((mono, coeff));
    }
    WPoly::from_terms(ring, field, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let r = WRing::godeaux();
        let q = Field::Rational;
        let p = parse_poly(&r, q, "-3/7 * x1^2 x3^2 + 2 * y1 y3 + x1^4 - 5").unwrap();
        assert_eq!(p.len(), 4);
        let back = parse_poly(&r, q, &p.to_string()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn rejects_unknown_variable() {
        let r = WRing::godeaux();
        assert!(parse_poly(&r, Field::Rational, "1 * z").is_err());
        assert!(parse_poly(&r, Field::Rational, "1 + + x1").is_err());
    }

    #[test]
    fn prime_field_coefficients_reduce() {
        let r = WRing::p3();
        let f = Field::prime(13).unwrap();
        let p = parse_poly(&r, f, "14 * y0^2 + -1 * y1 y2").unwrap();
        assert_eq!(p.to_string(), "1 * y0^2 + 12 * y1 y2");
    }
}
