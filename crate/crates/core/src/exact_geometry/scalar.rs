//! Exact rational scalars and their text encoding.
//!
//! Literals are accepted as integers (`"-3"`), decimals (`"0.125"`,
//! `"-2.5e-3"`) or fractions (`"7/4"`). Output always uses the canonical
//! reduced form: `"n"` for integers, `"p/q"` otherwise.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::GeometryError;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse_scalar(text: &str) -> Result<Scalar, GeometryError> {
    let bad = || GeometryError::BadLiteral(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Scalar::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let mut value = Scalar::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac.len() as i32;
    let ten = Scalar::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

pub fn format_scalar(value: &Scalar) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Scalar) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Fall back for magnitudes the direct conversion rejects.
        let n = value.numer().to_f64().unwrap_or(f64::NAN);
        let d = value.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact conversion of a finite double (every finite f64 is a dyadic rational).
pub fn from_f64(value: f64) -> Option<Scalar> {
    Scalar::from_float(value)
}

pub fn sign_of(value: &Scalar) -> i8 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_scalar("3").unwrap(), int(3));
        assert_eq!(parse_scalar("-1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_scalar("4/8").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_scalar("-2.5e-1").unwrap(), ratio(-1, 4));
        assert_eq!(parse_scalar("1.5E2").unwrap(), int(150));
        assert_eq!(parse_scalar(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar("+7.").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "-", ".", "1e", "0x10"] {
            assert!(parse_scalar(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_scalar(&ratio(6, -4)), "-3/2");
        assert_eq!(format_scalar(&int(0)), "0");
        assert_eq!(format_scalar(&ratio(10, 5)), "2");
    }

    #[test]
    fn float_round_trip_is_exact() {
        let x = from_f64(0.1).unwrap();
        assert_eq!(to_f64(&x), 0.1);
        assert!(from_f64(f64::NAN).is_none());
    }
}
