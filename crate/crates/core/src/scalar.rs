//! Numeric backends: plain `f64` and exact `BigRational`.
//!
//! Every algorithm in the crate is generic over [`Scalar`], so the same code
//! path runs in floating-point mode for speed and in rational mode wherever
//! exact ties matter (the hardness construction relies on them).

use std::fmt::{Debug, Display};

use num::bigint::Sign;
use num::{BigInt, BigRational, Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Float,
    Rational,
}

impl NumericMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NumericMode::Float => "float",
            NumericMode::Rational => "rational",
        }
    }
}

pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    const MODE: NumericMode;

    /// Converts a finite `f64`. Exact for the rational backend.
    fn lift(x: f64) -> Self;

    fn from_usize(n: usize) -> Self;

    fn as_f64(&self) -> f64;

    /// `floor(self / unit)` for nonnegative `self` and positive `unit`.
    fn floor_div(&self, unit: &Self) -> u64;

    /// Absolute slack used when checking analytic inequalities.
    /// Zero in rational mode.
    fn slack() -> Self;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Scalar for f64 {
    const MODE: NumericMode = NumericMode::Float;

    fn lift(x: f64) -> Self {
        x
    }

    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn floor_div(&self, unit: &Self) -> u64 {
        let q = (self / unit).floor();
        if q <= 0.0 {
            0
        } else {
            q as u64
        }
    }

    fn slack() -> Self {
        1e-9
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("{n} is not representable as f64"))),
            Value::String(s) => Ok(parse_rational(s)?.as_f64()),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }
}

impl Scalar for BigRational {
    const MODE: NumericMode = NumericMode::Rational;

    fn lift(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn as_f64(&self) -> f64 {
        // Ratio::to_f64 handles huge numerators and denominators gracefully.
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn floor_div(&self, unit: &Self) -> u64 {
        let q = (self / unit).floor().to_integer();
        if q.sign() == Sign::Minus {
            0
        } else {
            q.to_u64().unwrap_or(u64::MAX)
        }
    }

    fn slack() -> Self {
        BigRational::zero()
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => parse_decimal(&n.to_string()),
            Value::String(s) => parse_rational(s),
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }
}

/// Formats as `p/q` with an explicit denominator, even for integers.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, a bare integer, or a decimal literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10)
            .map_err(|e| Error::Parse(format!("bad numerator in {s:?}: {e}")))?;
        let q = BigInt::from_str_radix(q.trim(), 10)
            .map_err(|e| Error::Parse(format!("bad denominator in {s:?}: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(p, q))
    } else {
        parse_decimal(s)
    }
}

/// Parses a decimal literal such as `-1.25e-3` exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad decimal literal {s:?}"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value =
        BigRational::from_integer(BigInt::from_str_radix(&digits, 10).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    let scale = num::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Converts between backends; float to rational is exact.
pub fn convert<A: Scalar, B: Scalar>(x: &A) -> B {
    B::lift(x.as_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(
            parse_decimal("0.1").unwrap(),
            BigRational::new(1.into(), 10.into())
        );
        assert_eq!(
            parse_decimal("-1.25e-3").unwrap(),
            BigRational::new((-1).into(), 800.into())
        );
        assert_eq!(
            parse_decimal("3e2").unwrap(),
            BigRational::from_integer(300.into())
        );
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("").is_err());
    }

    #[test]
    fn rational_strings() {
        let r = parse_rational("49/50").unwrap();
        assert_eq!(format_rational(&r), "49/50");
        assert_eq!(format_rational(&parse_rational("6/3").unwrap()), "2/1");
        assert!(parse_rational("1/0").is_err());
        assert_eq!(f64::from_json(&Value::String("1/4".into())).unwrap(), 0.25);
    }

    #[test]
    fn floor_div_agrees_across_backends() {
        let a = BigRational::new(7.into(), 2.into());
        let u = BigRational::new(1.into(), 2.into());
        assert_eq!(a.floor_div(&u), 7);
        assert_eq!(3.5f64.floor_div(&0.5), 7);
        assert_eq!(BigRational::lift(0.1).as_f64(), 0.1);
    }
}
