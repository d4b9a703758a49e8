use num_bigint::BigInt;
use num_traits::{Num, Zero};

use super::constants::{named_constant, NamedConstant};
use super::{reduce, Rational};
use crate::error::{Error, Result};

/// Parses a real given as `p/q`, a decimal literal, or one of the named
/// constants `sqrt2`, `sqrt3`, `sqrt5`, `phi`, `e`, `pi`.
///
/// Fractions and decimals convert exactly. Named constants are truncated
/// toward zero to `precision` decimal digits, so the returned stand-in is a
/// function of `precision` alone. A leading `-` is accepted on constants.
pub fn parse_real(text: &str, precision: u32) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse(text, "empty input"));
    }
    if s.starts_with(|c: char| c.is_ascii_alphabetic())
        || s.strip_prefix('-')
            .is_some_and(|rest| rest.starts_with(|c: char| c.is_ascii_alphabetic()))
    {
        let (neg, name) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let constant: NamedConstant = name.parse()?;
        let value = named_constant(constant, precision);
        return Ok(if neg { -value } else { value });
    }
    parse_exact(s)
}

pub(super) fn parse_exact(text: &str) -> Result<Rational> {
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(|| Error::parse(text, "bad numerator"))?;
        let den = parse_integer(den.trim()).ok_or_else(|| Error::parse(text, "bad denominator"))?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        return reduce(num, den);
    }
    parse_decimal(s)
        .ok_or_else(|| Error::parse(text, "expected p/q, a decimal literal or a named constant"))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str_radix(s.strip_prefix('+').unwrap_or(s), 10).ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    if neg {
        num = -num;
    }
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    reduce(num, den).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn exact_forms() {
        assert_eq!(parse_real("3/7", 5).unwrap(), r(3, 7));
        assert_eq!(parse_real("0.25", 5).unwrap(), r(1, 4));
        assert_eq!(parse_real("-0.5", 5).unwrap(), r(-1, 2));
        assert_eq!(parse_real(" 6/-4 ", 5).unwrap(), r(-3, 2));
        assert_eq!(parse_real("12", 5).unwrap(), r(12, 1));
        assert_eq!(parse_real(".5", 5).unwrap(), r(1, 2));
        assert_eq!(parse_real("2.", 5).unwrap(), r(2, 1));
        assert_eq!(parse_real("+1/3", 5).unwrap(), r(1, 3));
    }

    #[test]
    fn sqrt2_truncated() {
        assert_eq!(parse_real("sqrt2", 5).unwrap(), r(141421, 100000));
        assert_eq!(parse_real("-sqrt2", 5).unwrap(), r(-141421, 100000));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_real("1/0", 5), Err(Error::ZeroDenominator));
        assert!(matches!(
            parse_real("tau", 5),
            Err(Error::UnknownConstant(_))
        ));
        assert!(matches!(parse_real("1/x", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_real("", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_real("1.2.3", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_real("-", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_real(".", 5), Err(Error::Parse { .. })));
        assert!(matches!(parse_real("1e5", 5), Err(Error::Parse { .. })));
    }
}
