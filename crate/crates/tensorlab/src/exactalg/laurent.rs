//! Laurent polynomials in one deformation parameter.
//!
//! Used by the border-rank curve verifier: entries of an epsilon-curve are
//! Laurent polynomials, and the lowest-order coefficient of an expanded
//! curve is what gets compared against the target tensor. Supports are kept
//! inside an explicit exponent window; growing past it is an error rather
//! than silent truncation, so cancellation bugs surface immediately.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Field, FieldScalar};
use crate::{Error, Result};

/// Allowed exponent range for Laurent supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    pub min_exp: i64,
    pub max_exp: i64,
}

impl Default for LaurentWindow {
    fn default() -> Self {
        LaurentWindow { min_exp: -8, max_exp: 8 }
    }
}

impl LaurentWindow {
    pub fn new(min_exp: i64, max_exp: i64) -> LaurentWindow {
        assert!(min_exp <= max_exp, "empty window");
        LaurentWindow { min_exp, max_exp }
    }

    pub fn check(&self, exp: i64) -> Result<()> {
        if exp < self.min_exp || exp > self.max_exp {
            Err(Error::WindowOverflow { exp, min: self.min_exp, max: self.max_exp })
        } else {
            Ok(())
        }
    }
}

/// A Laurent polynomial with exact coefficients. Zero coefficients are never
/// stored, so the zero polynomial has an empty support.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    coeffs: BTreeMap<i64, FieldScalar>,
}

impl LaurentPoly {
    pub fn zero(field: Field) -> LaurentPoly {
        LaurentPoly { field, coeffs: BTreeMap::new() }
    }

    pub fn constant(c: FieldScalar) -> LaurentPoly {
        LaurentPoly::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: FieldScalar) -> LaurentPoly {
        let field = c.field();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { field, coeffs }
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (i64, FieldScalar)>) -> LaurentPoly {
        let mut p = LaurentPoly::zero(field);
        for (e, c) in terms {
            p = p.add(&LaurentPoly::monomial(e, c));
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> FieldScalar {
        self.coeffs.get(&exp).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &FieldScalar)> {
        self.coeffs.iter()
    }

    /// Lowest exponent with a nonzero coefficient, with that coefficient.
    pub fn lowest_term(&self) -> Result<(i64, FieldScalar)> {
        self.coeffs
            .iter()
            .next()
            .map(|(e, c)| (*e, c.clone()))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.field, other.field, "mixed-field polynomials");
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let v = match coeffs.remove(e) {
                Some(old) => old.add(c),
                None => c.clone(),
            };
            if !v.is_zero() {
                coeffs.insert(*e, v);
            }
        }
        LaurentPoly { field: self.field, coeffs }
    }

    pub fn neg(&self) -> LaurentPoly {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect();
        LaurentPoly { field: self.field, coeffs }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &FieldScalar) -> LaurentPoly {
        if s.is_zero() {
            return LaurentPoly::zero(self.field);
        }
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, c.mul(s))).collect();
        LaurentPoly { field: self.field, coeffs }
    }

    /// Product with an explicit support window; exponents escaping the
    /// window are an error, never dropped.
    pub fn mul_within(&self, other: &LaurentPoly, window: &LaurentWindow) -> Result<LaurentPoly> {
        assert_eq!(self.field, other.field, "mixed-field polynomials");
        let mut coeffs: BTreeMap<i64, FieldScalar> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                let e = ea + eb;
                window.check(e)?;
                let prod = ca.mul(cb);
                let v = match coeffs.remove(&e) {
                    Some(old) => old.add(&prod),
                    None => prod,
                };
                if !v.is_zero() {
                    coeffs.insert(e, v);
                }
            }
        }
        Ok(LaurentPoly { field: self.field, coeffs })
    }

    /// Product under the default window.
    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.mul_within(other, &LaurentWindow::default())
    }

    /// Evaluation at a nonzero field point (needs all exponents >= 0 unless
    /// the point is invertible, which in a field is any nonzero point).
    pub fn eval(&self, x: &FieldScalar) -> Result<FieldScalar> {
        let mut acc = self.field.zero();
        for (e, c) in &self.coeffs {
            let powed = if *e >= 0 {
                pow_scalar(x, *e as u64)
            } else {
                let inv = x.inv().ok_or(Error::DivisionByZero)?;
                pow_scalar(&inv, (-e) as u64)
            };
            acc = acc.add(&c.mul(&powed));
        }
        Ok(acc)
    }
}

fn pow_scalar(x: &FieldScalar, mut e: u64) -> FieldScalar {
    let mut base = x.clone();
    let mut acc = x.field().one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    acc
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*e", c)?,
                _ => write!(f, "({})*e^{}", c, e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(q(), terms.iter().map(|&(e, c)| (e, q().from_i64(c))))
    }

    #[test]
    fn addition_cancels_cleanly() {
        let p = poly(&[(-1, 2), (0, 1)]);
        let r = p.add(&p.neg());
        assert!(r.is_zero());
        assert!(r.lowest_term().is_err());
    }

    #[test]
    fn product_of_lowest_terms() {
        let p = poly(&[(-2, 3), (1, 1)]);
        let r = poly(&[(1, 2), (4, 5)]);
        let prod = p.mul(&r).unwrap();
        let (e, c) = prod.lowest_term().unwrap();
        assert_eq!(e, -1);
        assert_eq!(c, q().from_i64(6));
    }

    #[test]
    fn window_overflow_is_an_error() {
        let p = poly(&[(5, 1)]);
        let err = p.mul(&p).unwrap_err();
        match err {
            Error::WindowOverflow { exp, .. } => assert_eq!(exp, 10),
            other => panic!("unexpected error {other:?}"),
        }
        // a wider explicit window allows it
        let w = LaurentWindow::new(-16, 16);
        assert!(p.mul_within(&p, &w).is_ok());
    }

    #[test]
    fn evaluation_with_negative_exponents() {
        let p = poly(&[(-1, 1), (1, 1)]); // x^{-1} + x
        let two = q().from_i64(2);
        // 1/2 + 2 = 5/2
        assert_eq!(p.eval(&two).unwrap(), q().parse("5/2").unwrap());
        assert!(p.eval(&q().zero()).is_err());
    }

    #[test]
    fn zero_coefficients_never_stored() {
        let p = poly(&[(0, 1), (2, 3)]);
        let r = p.sub(&poly(&[(2, 3)]));
        assert_eq!(r.support().count(), 1);
        assert_eq!(r.coeff(2), q().zero());
    }
}
