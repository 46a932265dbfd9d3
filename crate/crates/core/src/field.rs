//! Scalar fields the geometric code is generic over.
//!
//! `f64` is the floating mode; [`Rational`] (arbitrary-precision fractions)
//! is the exact mode. Tolerances collapse to zero in exact mode, so the same
//! comparison code is exact there and tolerant in floating mode.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Arithmetic mode of a point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Exact,
}

pub trait Field: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    const MODE: Mode;

    fn from_int(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Converts a floating tolerance into this field. Always zero in exact mode.
    fn tolerance(t: f64) -> Self;

    /// Exact rational value (the binary expansion for floats); `None` for
    /// non-finite floats.
    fn to_rational(&self) -> Option<Rational>;

    /// True when `self` is zero relative to `scale` (exactly zero in exact mode).
    fn negligible(&self, scale: &Self) -> bool;

    /// The exact value of a finite float.
    fn from_f64(x: f64) -> Option<Self>;

    fn half() -> Self {
        Self::one() / Self::from_int(2)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Field for f64 {
    const MODE: Mode = Mode::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance(t: f64) -> Self {
        t
    }

    fn to_rational(&self) -> Option<Rational> {
        <Rational as FromPrimitive>::from_f64(*self)
    }

    fn negligible(&self, scale: &Self) -> bool {
        self.abs() <= 1e-12 * scale.abs().max(f64::MIN_POSITIVE)
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }
}

impl Field for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator or denominator overflowed f64; go through the quotient
            let q = self.numer() / self.denom();
            q.to_f64().unwrap_or(f64::NAN)
        })
    }

    fn tolerance(_t: f64) -> Self {
        Rational::zero()
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn from_f64(x: f64) -> Option<Self> {
        <Rational as FromPrimitive>::from_f64(x)
    }
}

/// Converts a finite float to the rational with the same shortest decimal
/// representation, so `0.1` becomes `1/10` rather than its binary expansion.
pub fn rational_from_f64_decimal(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("non-finite number {x}"),
        });
    }
    parse_rational(&format!("{x:e}"))
}

/// Exact conversion of a finite float (binary expansion).
pub fn rational_from_f64_exact(x: f64) -> Option<Rational> {
    <Rational as FromPrimitive>::from_f64(x)
}

/// Parses `p/q`, an integer, or a decimal with optional exponent.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = |msg: &str| Error::Parse {
        line: 0,
        msg: format!("{msg}: {s:?}"),
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(err("empty number"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err("bad numerator"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err("bad denominator"))?;
        if q.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| err("bad exponent"))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    if exponent.abs() > 4096 {
        return Err(err("exponent too large"));
    }
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err("invalid digit"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| err("bad digits"))?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
