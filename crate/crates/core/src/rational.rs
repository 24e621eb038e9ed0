//! Exact rational numbers: parsing of integer, fraction and decimal literals,
//! and the canonical text renderings used in reports and model files.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Exact rational number used for every probability, spectrum value and moment.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid number literal `{}`", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `7`, `-3`, `11/30`, `0.38`, `-1.25` or `.5` without any rounding.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_integer(num).ok_or_else(err)?;
        let d = parse_integer(den).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| err())?
    };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical exact rendering: `n` for integers, `n/d` otherwise.
pub fn fraction(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact decimal expansion when the denominator has only factors 2 and 5.
pub fn exact_decimal(q: &Rational) -> Option<String> {
    let mut d = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(q.numer().to_string());
    }
    let scaled = q * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    let n = scaled.to_integer();
    let digits = n.abs().to_string();
    let padded = format!("{:0>width$}", digits, width = places + 1);
    let (w, f) = padded.split_at(padded.len() - places);
    let sign = if n.is_negative() { "-" } else { "" };
    Some(format!("{sign}{w}.{f}"))
}

/// Human rendering: the exact decimal when one exists, else the fraction.
pub fn display(q: &Rational) -> String {
    exact_decimal(q).unwrap_or_else(|| fraction(q))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Fixed nine-digit rendering of a float, `.` separator regardless of locale.
pub fn float9(x: f64) -> String {
    let s = format!("{x:.9}");
    if s == "-0.000000000" {
        "0.000000000".to_string()
    } else {
        s
    }
}

pub fn in_unit_interval(q: &Rational) -> bool {
    !q.is_negative() && *q <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse("0.3").unwrap(), ratio(3, 10));
        assert_eq!(parse("0.38").unwrap(), ratio(19, 50));
        assert_eq!(parse("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("5.").unwrap(), int(5));
    }

    #[test]
    fn fractions_and_integers() {
        assert_eq!(parse("11/30").unwrap(), ratio(11, 30));
        assert_eq!(parse("-4/8").unwrap(), ratio(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("-1").unwrap(), int(-1));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", ".", "1/0", "a", "1.2.3", "1e3", "1/2/3", "--1", "0x10"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn renderings() {
        assert_eq!(fraction(&ratio(11, 30)), "11/30");
        assert_eq!(fraction(&int(-1)), "-1");
        assert_eq!(display(&ratio(3, 25)), "0.12");
        assert_eq!(display(&ratio(-2, 5)), "-0.4");
        assert_eq!(display(&ratio(-1, 20)), "-0.05");
        assert_eq!(display(&ratio(11, 30)), "11/30");
        assert_eq!(display(&int(0)), "0");
        assert_eq!(float9(-0.0), "0.000000000");
        assert_eq!(float9(-0.178174161), "-0.178174161");
    }
}
