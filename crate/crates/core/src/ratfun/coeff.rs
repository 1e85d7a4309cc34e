//! Coefficient backends: exact rationals and complex doubles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A coefficient field usable inside [`Poly`](super::Poly) and
/// [`RatFun`](super::RatFun).
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
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
    /// Exact backends normalize rational functions by gcd; floating ones
    /// cannot decide divisibility and skip it.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(q: &Rational) -> Self;

    /// Magnitude used for tolerances and root matching.
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;
}

impl Coeff for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n
                .as_i64()
                .map(Rational::from_i64)
                .ok_or_else(|| Error::Json(format!("exact coefficient {n} is not an integer"))),
            other => Err(Error::Json(format!(
                "expected an exact rational string \"n/d\", got {other}"
            ))),
        }
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn to_json(&self) -> Value {
        serde_json::json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(items) if items.len() == 2 => {
                let re = items[0].as_f64();
                let im = items[1].as_f64();
                match (re, im) {
                    (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
                    _ => Err(Error::Json(format!("bad complex pair {v}"))),
                }
            }
            Value::Number(n) => n
                .as_f64()
                .map(|re| Complex64::new(re, 0.0))
                .ok_or_else(|| Error::Json(format!("bad number {n}"))),
            Value::String(s) => Ok(Complex64::from_rational(&parse_rational(s)?)),
            other => Err(Error::Json(format!(
                "expected a complex pair [re, im], got {other}"
            ))),
        }
    }
}

/// `"n/d"` with `d > 0`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"n/d"`, `"n"` and terminating decimals such as `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let magnitude = int_part.abs() * &scale + frac_part;
        let n = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(n, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Shorthand for `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("1.5").unwrap(), q(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&q(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(5, 1)), "5/1");
    }

    #[test]
    fn json_coefficients() {
        let c = Complex64::new(1.5, -2.0);
        assert_eq!(Complex64::from_json(&c.to_json()).unwrap(), c);
        let r = q(7, 3);
        assert_eq!(Rational::from_json(&r.to_json()).unwrap(), r);
        assert!(Rational::from_json(&serde_json::json!([1.0, 0.0])).is_err());
    }
}
