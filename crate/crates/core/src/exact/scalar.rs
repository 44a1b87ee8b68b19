//! Exact scalars: arbitrary-precision rationals and elements of odd prime fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// An odd prime field. Even and composite moduli are rejected.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> ExactScalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> ExactScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> ExactScalar {
        match self {
            Field::Rational => ExactScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => ExactScalar::Prime(Fp::new(v.rem_euclid(*p as i64) as u64, *p)),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> ExactScalar {
        match self {
            Field::Rational => ExactScalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                ExactScalar::Prime(Fp::new(r.to_u64().unwrap_or(0), *p))
            }
        }
    }

    /// Maps a rational into this field. Fails when the denominator vanishes mod p.
    pub fn from_rational(&self, v: &BigRational) -> Result<ExactScalar> {
        match self {
            Field::Rational => Ok(ExactScalar::Rational(v.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(v.numer());
                let den = self.from_bigint(v.denom());
                num.checked_div(&den)
            }
        }
    }

    /// A square root of -1, found by exhaustive search in a prime field.
    pub fn sqrt_minus_one(&self) -> Result<ExactScalar> {
        match self {
            Field::Rational => Err(Error::InvalidField("Q has no square root of -1".into())),
            Field::Prime(p) => {
                if p % 4 != 1 {
                    return Err(Error::InvalidField(format!(
                        "F_{p} has no square root of -1 (p is not 1 mod 4)"
                    )));
                }
                let target = p - 1;
                (2..*p)
                    .find(|&x| mul_mod(x, x, *p) == target)
                    .map(|x| ExactScalar::Prime(Fp::new(x, *p)))
                    .ok_or_else(|| Error::InvalidField(format!("no square root of -1 in F_{p}")))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `QQ`, `rational`, `F13`, `F_13`, `GF(13)` or a bare prime.
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "q" | "qq" | "rational" | "rationals" => return Ok(Field::Rational),
            _ => {}
        }
        let digits = t
            .trim_start_matches("GF(")
            .trim_start_matches("gf(")
            .trim_end_matches(')')
            .trim_start_matches("F_")
            .trim_start_matches('F')
            .trim_start_matches('f');
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("unrecognised field spec {s:?}")))?;
        Field::prime(p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// An element of F_p, stored as its representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Fp {
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// A rational number or a prime-field element. Arithmetic never mixes fields:
/// the `checked_*` methods return [`Error::FieldMismatch`], the operator
/// impls panic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExactScalar {
    Rational(BigRational),
    Prime(Fp),
}

impl ExactScalar {
    pub fn field(&self) -> Field {
        match self {
            ExactScalar::Rational(_) => Field::Rational,
            ExactScalar::Prime(x) => Field::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_zero(),
            ExactScalar::Prime(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_one(),
            ExactScalar::Prime(x) => x.value == 1,
        }
    }

    fn mismatch(&self, other: &ExactScalar) -> Error {
        Error::FieldMismatch {
            left: self.field().to_string(),
            right: other.field().to_string(),
        }
    }

    pub fn checked_add(&self, other: &ExactScalar) -> Result<ExactScalar> {
        match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => Ok(ExactScalar::Rational(a + b)),
            (ExactScalar::Prime(a), ExactScalar::Prime(b)) if a.modulus == b.modulus => {
                let p = a.modulus;
                Ok(ExactScalar::Prime(Fp::new(
                    ((a.value as u128 + b.value as u128) % p as u128) as u64,
                    p,
                )))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &ExactScalar) -> Result<ExactScalar> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &ExactScalar) -> Result<ExactScalar> {
        match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => Ok(ExactScalar::Rational(a * b)),
            (ExactScalar::Prime(a), ExactScalar::Prime(b)) if a.modulus == b.modulus => Ok(
                ExactScalar::Prime(Fp::new(mul_mod(a.value, b.value, a.modulus), a.modulus)),
            ),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn inv(&self) -> Result<ExactScalar> {
        match self {
            ExactScalar::Rational(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(ExactScalar::Rational(r.recip()))
                }
            }
            ExactScalar::Prime(x) => inv_mod(x.value, x.modulus)
                .map(|v| ExactScalar::Prime(Fp::new(v, x.modulus)))
                .ok_or(Error::DivisionByZero),
        }
    }

    pub fn checked_div(&self, other: &ExactScalar) -> Result<ExactScalar> {
        if self.field() != other.field() {
            return Err(self.mismatch(other));
        }
        self.checked_mul(&other.inv()?)
    }

    pub fn neg_ref(&self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::Prime(x) => {
                ExactScalar::Prime(Fp::new((x.modulus - x.value) % x.modulus, x.modulus))
            }
        }
    }

    pub fn pow(&self, e: u32) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(num_traits::pow(r.clone(), e as usize)),
            ExactScalar::Prime(x) => {
                ExactScalar::Prime(Fp::new(pow_mod(x.value, e as u64, x.modulus), x.modulus))
            }
        }
    }

    /// Multiplies by a machine integer (used for formal derivatives).
    pub fn scale(&self, k: i64) -> ExactScalar {
        self * &self.field().from_i64(k)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            ExactScalar::Prime(_) => None,
        }
    }

    pub fn as_fp(&self) -> Option<u64> {
        match self {
            ExactScalar::Rational(_) => None,
            ExactScalar::Prime(x) => Some(x.value),
        }
    }

    /// Parses an exact decimal-free rational string (`-3/7`, `12`) into `field`.
    pub fn parse_in(field: Field, s: &str) -> Result<ExactScalar> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let parse = |x: &str| {
            x.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
        };
        let (n, d) = (parse(num)?, parse(den)?);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        field.from_rational(&BigRational::new(n, d))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ExactScalar::Prime(x) => write!(f, "{}", x.value),
        }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_add(rhs).expect("mixed-field arithmetic rejected")
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_sub(rhs).expect("mixed-field arithmetic rejected")
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_mul(rhs).expect("mixed-field arithmetic rejected")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        &self - &rhs
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.neg_ref()
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let a = ExactScalar::parse_in(q, "6/-4").unwrap();
        assert_eq!(a.to_string(), "-3/2");
        let b = ExactScalar::parse_in(q, "1/2").unwrap();
        assert_eq!((&a + &b).to_string(), "-1");
    }

    #[test]
    fn prime_field_values_in_range() {
        let f = Field::prime(13).unwrap();
        let a = f.from_i64(-1);
        assert_eq!(a.as_fp(), Some(12));
        assert_eq!((&a * &a).as_fp(), Some(1));
        assert_eq!(a.inv().unwrap().as_fp(), Some(12));
        assert_eq!(ExactScalar::parse_in(f, "1/2").unwrap().as_fp(), Some(7));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::Rational.one();
        let b = Field::prime(13).unwrap().one();
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch { .. })));
        let c = Field::prime(5).unwrap().one();
        assert!(b.checked_mul(&c).is_err());
    }

    #[test]
    fn even_and_composite_moduli_rejected() {
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(15).is_err());
        assert!(Field::prime(29).is_ok());
    }

    #[test]
    fn square_root_of_minus_one() {
        let f = Field::prime(13).unwrap();
        let i = f.sqrt_minus_one().unwrap();
        assert_eq!((&i * &i).as_fp(), Some(12));
        assert!(Field::prime(7).unwrap().sqrt_minus_one().is_err());
        assert!(Field::Rational.sqrt_minus_one().is_err());
    }

    #[test]
    fn field_specs_parse() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("F13".parse::<Field>().unwrap(), Field::Prime(13));
        assert_eq!("GF(29)".parse::<Field>().unwrap(), Field::Prime(29));
        assert!("F9".parse::<Field>().is_err());
    }

    #[test]
    fn denominator_vanishing_mod_p() {
        let f = Field::prime(7).unwrap();
        assert_eq!(ExactScalar::parse_in(f, "1/7"), Err(Error::DivisionByZero));
    }
}
