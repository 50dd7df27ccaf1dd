//! Numeric backend abstraction: exact rationals and f64 behind one trait.
//!
//! Model materialization, kappa computation, and invariant evaluation are
//! generic over [`Scalar`]. The rational backend gives exact answers (equality
//! tests are meaningful); the float backend trades exactness for speed.
//! Conversion from rationals to floats is provided; the reverse is not part of
//! the trait, so exact results can never silently depend on float artifacts.

use crate::error::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational scalar.
pub type Rat = BigRational;

/// Arithmetic interface shared by the exact and floating backends.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    /// True when equality tests on this backend are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// `num / den` with `den > 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// Non-negative integer power.
    fn powu(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
    /// Accepts `p/q` fractions and plain decimals (`3`, `-0.25`).
    fn parse_number(s: &str) -> Result<Self, Error>;
    /// Exact round-trip text for the backend (`p/q` for rationals, shortest
    /// float form for f64).
    fn format_number(&self) -> String;

    /// Backend-appropriate closeness: exact equality on the rational side,
    /// absolute tolerance on the float side.
    fn close_abs(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    /// Exact equality, or relative closeness for floats
    /// (`|a-b| <= rel * max(1, |a|, |b|)`).
    fn close_rel(&self, other: &Self, rel: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            let a = self.to_f64();
            let b = other.to_f64();
            (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
        }
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as num::Zero>::zero()
    }

    fn one() -> Self {
        BigRational::from_integer(BigInt::from(1))
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }

    fn parse_number(s: &str) -> Result<Self, Error> {
        parse_rational(s)
    }

    fn format_number(&self) -> String {
        if self.denom() == &BigInt::from(1) {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_negative(&self) -> bool {
        *self < 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn parse_number(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if d == 0.0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(n / d)
        } else {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad number {s:?}")))
        }
    }

    fn format_number(&self) -> String {
        format!("{self}")
    }
}

/// Converts a rational-backed value to f64 (projection, not a round trip).
pub fn rat_to_f64(x: &Rat) -> f64 {
    Scalar::to_f64(x)
}

fn parse_rational(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    let mut numer = if int_part.is_empty() {
        BigInt::from(0)
    } else {
        BigInt::from_str(int_part).map_err(|_| Error::Parse(format!("bad number {s:?}")))?
    };
    let mut denom = BigInt::from(1);
    for ch in frac_part.chars() {
        numer = numer * 10 + (ch as u8 - b'0');
        denom *= 10;
    }
    Ok(BigRational::new(numer * sign, denom))
}
