//! Arbitrary-precision real numbers with a decimal precision budget.
//!
//! `BigReal` wraps an MPFR float and remembers how many significant decimal
//! digits it is meant to carry. Binary operations run at the larger of the
//! two operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

const BITS_PER_DIGIT: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 16;

/// Working precision measured in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const DEFAULT: Precision = Precision(100);

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Usage(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        Ok(Precision(digits))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    /// Binary precision handed to MPFR.
    pub fn bits(self) -> u32 {
        (f64::from(self.0) * BITS_PER_DIGIT).ceil() as u32 + GUARD_BITS
    }

    pub fn max(self, other: Precision) -> Precision {
        Precision(self.0.max(other.0))
    }

    /// Same precision with `extra` more digits.
    pub fn widen(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone)]
pub struct BigReal {
    value: Float,
    prec: Precision,
}

impl BigReal {
    fn wrap(value: Float, prec: Precision) -> Self {
        BigReal { value, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::wrap(Float::new(prec.bits()), prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: Precision) -> Self {
        Self::wrap(Float::with_val(prec.bits(), x), prec)
    }

    /// Exact binary value of `x`; use [`BigReal::parse`] for decimal literals.
    pub fn from_f64(x: f64, prec: Precision) -> Self {
        Self::wrap(Float::with_val(prec.bits(), x), prec)
    }

    pub fn from_ratio(num: i64, den: i64, prec: Precision) -> Self {
        let mut f = Float::with_val(prec.bits(), num);
        f /= den;
        Self::wrap(f, prec)
    }

    pub fn half(prec: Precision) -> Self {
        Self::from_ratio(1, 2, prec)
    }

    /// `10^exponent`.
    pub fn pow10(exponent: i32, prec: Precision) -> Self {
        let ten = Float::with_val(prec.bits(), 10);
        Self::wrap(ten.pow(exponent), prec)
    }

    pub fn pi(prec: Precision) -> Self {
        Self::wrap(Float::with_val(prec.bits(), Constant::Pi), prec)
    }

    pub fn ln2(prec: Precision) -> Self {
        Self::wrap(Float::with_val(prec.bits(), Constant::Log2), prec)
    }

    /// Parses a decimal literal (`-12.5`, `3e-4`, `+7`).
    pub fn parse(text: &str, prec: Precision) -> Result<Self> {
        let trimmed = text.trim();
        let valid = !trimmed.is_empty()
            && trimmed
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        if !valid {
            return Err(Error::Parse(text.to_string()));
        }
        let incomplete = Float::parse(trimmed).map_err(|_| Error::Parse(text.to_string()))?;
        Ok(Self::wrap(Float::with_val(prec.bits(), incomplete), prec))
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    /// Re-rounds to another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        Self::wrap(Float::with_val(prec.bits(), &self.value), prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.value.is_sign_negative() && !self.value.is_zero()
    }

    pub fn is_sign_positive(&self) -> bool {
        self.value.is_sign_positive() && !self.value.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.value.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    fn map(&self, f: impl FnOnce(Float) -> Float) -> Self {
        Self::wrap(f(self.value.clone()), self.prec)
    }

    pub fn abs(&self) -> Self {
        self.map(Float::abs)
    }

    pub fn sqrt(&self) -> Self {
        self.map(Float::sqrt)
    }

    pub fn square(&self) -> Self {
        self.map(Float::square)
    }

    pub fn exp(&self) -> Self {
        self.map(Float::exp)
    }

    pub fn ln(&self) -> Self {
        self.map(Float::ln)
    }

    pub fn log10(&self) -> Self {
        self.map(Float::log10)
    }

    pub fn sinh(&self) -> Self {
        self.map(Float::sinh)
    }

    pub fn cosh(&self) -> Self {
        self.map(Float::cosh)
    }

    pub fn tanh(&self) -> Self {
        self.map(Float::tanh)
    }

    pub fn sech(&self) -> Self {
        self.map(Float::sech)
    }

    pub fn acosh(&self) -> Self {
        self.map(Float::acosh)
    }

    pub fn floor(&self) -> Self {
        self.map(Float::floor)
    }

    pub fn recip(&self) -> Self {
        self.map(Float::recip)
    }

    pub fn powi(&self, k: i32) -> Self {
        self.map(|f| f.pow(k))
    }

    pub fn powf(&self, exponent: &BigReal) -> Self {
        let prec = self.prec.max(exponent.prec);
        let base = Float::with_val(prec.bits(), &self.value);
        Self::wrap(base.pow(&exponent.value), prec)
    }

    /// Exact conversion of an integral value; `None` when not integral or out of range.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.value.is_integer() {
            return None;
        }
        self.value.to_integer()?.to_i64()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `|self - other| <= tol`.
    pub fn close_to(&self, other: &BigReal, tol: &BigReal) -> bool {
        (self - other).abs() <= *tol
    }

    /// Decimal form with all `precision` significant digits.
    pub fn to_decimal_string(&self) -> String {
        self.to_significant(self.prec.digits() as usize)
    }

    /// Decimal form rounded to `digits` significant digits: sign, integer
    /// part, '.', fraction, and an `e` exponent only for very large or
    /// very small magnitudes.
    pub fn to_significant(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let (negative, mantissa, exp) = self.value.to_sign_string_exp(10, Some(digits));
        let Some(exp) = exp else {
            return if self.value.is_zero() {
                "0.0".to_string()
            } else {
                mantissa
            };
        };
        let mantissa = mantissa.trim_end_matches('0');
        let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
        let sign = if negative { "-" } else { "" };
        // value = 0.<mantissa> * 10^exp
        if (-6..=40).contains(&exp) {
            let body = if exp <= 0 {
                format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
            } else {
                let exp = exp as usize;
                if mantissa.len() <= exp {
                    format!("{}{}.0", mantissa, "0".repeat(exp - mantissa.len()))
                } else {
                    format!("{}.{}", &mantissa[..exp], &mantissa[exp..])
                }
            };
            format!("{sign}{body}")
        } else {
            let (lead, rest) = mantissa.split_at(1);
            let rest = if rest.is_empty() { "0" } else { rest };
            format!("{sign}{lead}.{rest}e{}", exp - 1)
        }
    }

    /// Fixed-point decimal form with exactly `places` fractional digits.
    pub fn to_fixed(&self, places: usize) -> String {
        let scale = Float::with_val(self.value.prec(), 10).pow(places as u32);
        let scaled = Float::with_val(self.value.prec() + 64, &self.value * &scale);
        let int = scaled
            .to_integer_round(Round::Nearest)
            .map(|(i, _)| i)
            .unwrap_or_default();
        let negative = int < 0;
        let digits = int.abs().to_string();
        let digits = format!("{:0>width$}", digits, width = places + 1);
        let (whole, frac) = digits.split_at(digits.len() - places);
        let sign = if negative { "-" } else { "" };
        if places == 0 {
            format!("{sign}{whole}")
        } else {
            format!("{sign}{whole}.{frac}")
        }
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {}d)", self.to_significant(24), self.prec.0)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_significant(p)),
            None => f.write_str(&self.to_decimal_string()),
        }
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl PartialEq<i64> for BigReal {
    fn eq(&self, other: &i64) -> bool {
        self.value == *other
    }
}

impl PartialOrd<i64> for BigReal {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.value.partial_cmp(other)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(-self.value, self.prec)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(Float::with_val(self.value.prec(), -&self.value), self.prec)
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident) => {
        impl $trait<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                let prec = self.prec.max(rhs.prec);
                BigReal::wrap(
                    Float::with_val(prec.bits(), (&self.value).$method(&rhs.value)),
                    prec,
                )
            }
        }
        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                self.$method(&rhs)
            }
        }
        impl $trait<i64> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                BigReal::wrap(
                    Float::with_val(self.value.prec(), (&self.value).$method(rhs)),
                    self.prec,
                )
            }
        }
        impl $trait<i64> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: i64) -> BigReal {
                (&self).$method(rhs)
            }
        }
    };
}

binary_op!(Add, add);
binary_op!(Sub, sub);
binary_op!(Mul, mul);
binary_op!(Div, div);

impl AddAssign<&BigReal> for BigReal {
    fn add_assign(&mut self, rhs: &BigReal) {
        self.widen_to(rhs.prec);
        self.value += &rhs.value;
    }
}

impl SubAssign<&BigReal> for BigReal {
    fn sub_assign(&mut self, rhs: &BigReal) {
        self.widen_to(rhs.prec);
        self.value -= &rhs.value;
    }
}

impl MulAssign<&BigReal> for BigReal {
    fn mul_assign(&mut self, rhs: &BigReal) {
        self.widen_to(rhs.prec);
        self.value *= &rhs.value;
    }
}

impl BigReal {
    fn widen_to(&mut self, prec: Precision) {
        if prec > self.prec {
            self.value.set_prec(prec.bits());
            self.prec = prec;
        }
    }

    /// `self += a * b` without an intermediate allocation.
    pub(crate) fn add_product(&mut self, a: &BigReal, b: &BigReal) {
        self.widen_to(a.prec.max(b.prec));
        self.value += &a.value * &b.value;
    }
}
