//! Exact rational scalars and their text forms.
//!
//! `Rational` is an arbitrary-precision fraction that is always kept in lowest
//! terms with a positive denominator. The text form used everywhere on the
//! wire is `"p/q"`, including integers (`"1/1"`, `"0/1"`).

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational string")]
    Empty,
    #[error("malformed rational {0:?}: expected \"p/q\" with integer p and q")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or a bare integer `"p"`. Decimal notation is rejected so that
/// no input ever passes through a rounding step.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let malformed = || ParseRationalError::Malformed(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(malformed());
    }
    let num: BigInt = num.parse().map_err(|_| malformed())?;
    let den: BigInt = den.parse().map_err(|_| malformed())?;
    if den.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` rendering; integers keep the `/1`.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Display-only decimal with 12 significant digits, rounded half away from
/// zero. Values whose decimal exponent falls outside `[-6, 12)` use scientific
/// notation.
pub fn format_decimal(value: &Rational) -> String {
    const DIGITS: i64 = 12;
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |v| < 10^(e+1)
    let mut exponent = magnitude.numer().to_string().len() as i64
        - magnitude.denom().to_string().len() as i64;
    loop {
        let lower = pow10(exponent);
        if magnitude < lower {
            exponent -= 1;
        } else if magnitude >= pow10(exponent + 1) {
            exponent += 1;
        } else {
            break;
        }
    }

    // digits = round(|v| * 10^(DIGITS - 1 - e))
    let scaled = &magnitude * pow10(DIGITS - 1 - exponent);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if r * 2 >= *scaled.denom() {
        mantissa += 1;
    }
    if mantissa == ten.pow(DIGITS as u32) {
        mantissa /= &ten;
        exponent += 1;
    }
    let digits = mantissa.to_string();
    debug_assert_eq!(digits.len() as i64, DIGITS);

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-6..DIGITS).contains(&exponent) {
        if exponent >= 0 {
            let split = (exponent + 1) as usize;
            out.push_str(&digits[..split]);
            if split < digits.len() {
                out.push('.');
                out.push_str(&digits[split..]);
            }
        } else {
            out.push_str("0.");
            for _ in 0..(-exponent - 1) {
                out.push('0');
            }
            out.push_str(&digits);
        }
    } else {
        out.push_str(&digits[..1]);
        out.push('.');
        out.push_str(&digits[1..]);
        let _ = write!(out, "e{exponent}");
    }
    out
}

fn pow10(exponent: i64) -> Rational {
    let base = BigInt::from(10).pow(exponent.unsigned_abs() as u32);
    if exponent >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

/// Lossy conversion for the floating-point paths and for display.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // numerator or denominator too wide for f64; shift both down
        let bits = value.numer().bits().max(value.denom().bits());
        let shift = bits.saturating_sub(1000);
        let n = value.numer() >> shift;
        let d = value.denom() >> shift;
        match (n.to_f64(), d.to_f64()) {
            (Some(n), Some(d)) if d != 0.0 => n / d,
            _ if value.numer().sign() == Sign::Minus => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        }
    })
}

/// Serde adapters that carry rationals as canonical `"p/q"` strings.
pub mod serde_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod option {
        use serde::{Serialize, Serializer};

        use super::super::{format_rational, Rational};

        pub fn serialize<S: Serializer>(
            value: &Option<Rational>,
            serializer: S,
        ) -> Result<S::Ok, S::Error> {
            value.as_ref().map(format_rational).serialize(serializer)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_rational("15/18").unwrap(), ratio(5, 6));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(" 1 / 3 ").unwrap(), ratio(1, 3));
    }

    #[test]
    fn parse_rejects_decimals_and_garbage() {
        assert!(matches!(parse_rational("0.5"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("1/-2"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("a/b"), Err(ParseRationalError::Malformed(_))));
        assert!(matches!(parse_rational("1/0"), Err(ParseRationalError::ZeroDenominator(_))));
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
    }

    #[test]
    fn canonical_form_keeps_unit_denominator() {
        assert_eq!(format_rational(&int(1)), "1/1");
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(format_rational(&ratio(15, 18)), "5/6");
        assert_eq!(format_rational(&ratio(3, -6)), "-1/2");
    }

    #[test]
    fn decimal_has_twelve_significant_digits() {
        assert_eq!(format_decimal(&ratio(1, 6)), "0.166666666667");
        assert_eq!(format_decimal(&int(2)), "2.00000000000");
        assert_eq!(format_decimal(&ratio(5, 36)), "0.138888888889");
        assert_eq!(format_decimal(&ratio(-1, 3)), "-0.333333333333");
        assert_eq!(format_decimal(&int(0)), "0");
        assert_eq!(format_decimal(&ratio(1, 10_000_000)), "1.00000000000e-7");
        assert_eq!(format_decimal(&ratio(9_999_999_999_999, 10)), "1.00000000000e12");
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = Rational::new(BigInt::from(3) << 3000usize, BigInt::from(4) << 3000usize);
        assert!((to_f64(&big) - 0.75).abs() < 1e-15);
    }
}
