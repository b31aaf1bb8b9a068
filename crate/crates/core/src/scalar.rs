//! The numeric tower: exact rationals or binary floats behind one trait.
//!
//! Every algebraic routine in the crate is generic over [`Scalar`]. In exact
//! mode zero tests are exact and tolerances are ignored; in float mode they
//! compare magnitudes against the supplied tolerance.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = BigRational;

/// Tolerance used by predicates in float mode.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Pivot threshold for rank-revealing elimination in float mode.
pub const PIVOT_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for the exact rational type.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_rational(r: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    /// Zero test: exact for rationals, `|x| <= tol` for floats.
    fn is_zero_tol(&self, tol: f64) -> bool;

    /// Square root when it is representable in this type.
    fn sqrt_exact(&self) -> Option<Self>;

    fn is_finite(&self) -> bool;

    /// Text used in JSON reports: `p/q` for rationals, shortest round-trip
    /// decimal for floats.
    fn to_report_string(&self) -> String {
        self.to_string()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn is_zero_tol(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(Rational::new(rn, rd))
        } else {
            None
        }
    }

    fn is_finite(&self) -> bool {
        true
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Parses `"p/q"`, an integer, or a terminating decimal such as `"-1.25"`
/// or `"3e-2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value = value * pow;
    } else {
        value = value / pow;
    }
    Ok(if negative { -value } else { value })
}

/// Exact rational value of a finite float (binary expansion, no rounding).
pub fn rational_from_f64(x: f64) -> Result<Rational, Error> {
    Rational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite number {x}")))
}

/// Largest absolute value in a slice, zero when empty.
pub fn max_abs<S: Scalar>(values: &[S]) -> S {
    values.iter().fold(S::zero(), |acc, v| {
        let a = v.abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/2").unwrap(), q(3, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("-1.25").unwrap(), q(-5, 4));
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("3e-2").unwrap(), q(3, 100));
        assert_eq!(parse_rational("2.5E1").unwrap(), q(25, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(9, 4).sqrt_exact(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-1, 1).sqrt_exact(), None);
        assert_eq!(4.0f64.sqrt_exact(), Some(2.0));
    }

    #[test]
    fn report_strings() {
        assert_eq!(q(3, 2).to_report_string(), "3/2");
        assert_eq!(q(3, 1).to_report_string(), "3");
        assert_eq!(q(0, 1).to_report_string(), "0");
    }

    #[test]
    fn float_round_trip_is_exact() {
        let r = rational_from_f64(0.1).unwrap();
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert!(rational_from_f64(f64::NAN).is_err());
    }
}
