//! Exact scalars: arbitrary-precision rationals and prime residue fields.
//!
//! A [`FieldScalar`] carries its field with it; containers enforce a uniform
//! field at construction time, so mixed-field arithmetic deeper down is a
//! programming error and panics.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Largest allowed prime modulus. Keeps `u64` products away from overflow.
const MAX_MODULUS: u64 = 1 << 31;

/// The active coefficient field: the rationals or a prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// GF(p) for a prime `p`; rejects composites and out-of-range moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    /// Number of field elements; `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let r = v.rem_euclid(*p as i64) as u64;
                FieldScalar::Prime { value: r, modulus: *p }
            }
        }
    }

    /// All field elements, ascending; only available for finite fields.
    pub fn elements(&self) -> Result<Vec<FieldScalar>> {
        match self {
            Field::Rational => Err(Error::NeedsFiniteField),
            Field::Prime(p) => Ok((0..*p)
                .map(|v| FieldScalar::Prime { value: v, modulus: *p })
                .collect()),
        }
    }

    /// Parses a scalar in this field. Rationals accept `"n"` or `"n/d"`;
    /// prime fields accept a decimal residue (negative values are reduced).
    pub fn parse(&self, text: &str) -> Result<FieldScalar> {
        let bad = |reason: &str| Error::BadScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        match self {
            Field::Rational => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (text, "1"),
                };
                let n = BigInt::from_str(num.trim()).map_err(|e| bad(&e.to_string()))?;
                let d = BigInt::from_str(den.trim()).map_err(|e| bad(&e.to_string()))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(FieldScalar::Rational(BigRational::new(n, d)))
            }
            Field::Prime(_) => {
                let n = i64::from_str(text.trim()).map_err(|e| bad(&e.to_string()))?;
                Ok(self.from_i64(n))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({})", p),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|t| t.strip_suffix(')')) {
            let p: u64 = inner.trim().parse().map_err(|_| Error::BadScalar {
                text: s.to_string(),
                reason: "bad modulus".to_string(),
            })?;
            return Field::prime(p);
        }
        Err(Error::BadScalar {
            text: s.to_string(),
            reason: "expected \"Q\" or \"GF(p)\"".to_string(),
        })
    }
}

/// An exact element of the active field. Rationals are kept reduced with a
/// positive denominator (the representation is canonical); prime-field
/// residues live in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Prime { value, .. } => *value == 1,
        }
    }

    fn same_field(&self, other: &FieldScalar) {
        assert_eq!(self.field(), other.field(), "mixed-field arithmetic");
    }

    pub fn add(&self, other: &FieldScalar) -> FieldScalar {
        self.same_field(other);
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Prime { value: a, modulus: p }, FieldScalar::Prime { value: b, .. }) => {
                FieldScalar::Prime { value: (a + b) % p, modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &FieldScalar) -> FieldScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldScalar) -> FieldScalar {
        self.same_field(other);
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Prime { value: a, modulus: p }, FieldScalar::Prime { value: b, .. }) => {
                FieldScalar::Prime { value: a * b % p, modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { value, modulus: p } => FieldScalar::Prime {
                value: if *value == 0 { 0 } else { p - value },
                modulus: *p,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(a.recip()),
            FieldScalar::Prime { value, modulus: p } => FieldScalar::Prime {
                value: mod_pow(*value, p - 2, *p),
                modulus: *p,
            },
        })
    }

    pub fn div(&self, other: &FieldScalar) -> Result<FieldScalar> {
        let inv = other.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul(&inv))
    }

    /// Numerator/denominator as big integers (denominator 1 over GF(p)).
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        match self {
            FieldScalar::Rational(r) => (r.numer().clone(), r.denom().clone()),
            FieldScalar::Prime { value, .. } => (BigInt::from(*value), BigInt::one()),
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Prime { value, .. } => write!(f, "{}", value),
        }
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for FieldScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_scalars_are_reduced() {
        let f = Field::Rational;
        let x = f.parse("4/6").unwrap();
        assert_eq!(x.to_string(), "2/3");
        let y = f.parse("-3/-9").unwrap();
        assert_eq!(y.to_string(), "1/3");
        let z = f.parse("7").unwrap();
        assert_eq!(z.to_string(), "7");
    }

    #[test]
    fn prime_field_arithmetic_wraps() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.mul(&b), f.from_i64(2));
        assert_eq!(a.neg(), f.from_i64(2));
        assert_eq!(b.inv().unwrap(), f.from_i64(4));
        assert_eq!(f.from_i64(-1), f.from_i64(4));
    }

    #[test]
    fn inverses_multiply_to_one() {
        for p in [2u64, 3, 5, 7, 11] {
            let f = Field::prime(p).unwrap();
            for v in 1..p {
                let x = f.from_i64(v as i64);
                assert!(x.mul(&x.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(91).is_err());
    }

    #[test]
    fn field_round_trips_through_strings() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("GF(7)".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("GF(6)".parse::<Field>().is_err());
        assert!("R".parse::<Field>().is_err());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(Field::Rational.zero().inv().is_none());
        assert!(Field::prime(3).unwrap().zero().inv().is_none());
    }
}
