//! Exact rational time arithmetic.
//!
//! All interval endpoints, timestamps and predicate thresholds are kept as
//! `Ratio<i64>` so that interval addition and grid alignment are bit-exact.
//! Values are written either as decimals (`27.5`) or fractions (`55/2`); the
//! printer picks the decimal form whenever the denominator divides a power
//! of ten, so printed values re-parse to the same rational.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::fmt::Write as _;

pub type Rational = Ratio<i64>;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Ratio::from_integer(n)
}

/// Shorthand for a ratio `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{text}`: {reason}")]
pub struct NumberError {
    pub text: String,
    pub reason: String,
}

fn number_error(text: &str, reason: &str) -> NumberError {
    NumberError {
        text: text.to_string(),
        reason: reason.to_string(),
    }
}

/// Parses a decimal (`30`, `27.5`, `-0.04`) or fraction (`1/25`) into an
/// exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, NumberError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(number_error(text, "empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num).map_err(|r| number_error(text, &r))?;
        let d = parse_decimal(den).map_err(|r| number_error(text, &r))?;
        if d.is_zero() {
            return Err(number_error(text, "zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal(s).map_err(|r| number_error(text, &r))
}

fn parse_decimal(text: &str) -> Result<Rational, String> {
    let s = text.trim();
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() {
        return Err("missing digits".to_string());
    }
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("missing digits".to_string());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err("not a number".to_string());
    }
    let mut numer: i64 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add((c as u8 - b'0') as i64))
            .ok_or_else(|| "number too large".to_string())?;
    }
    let mut denom: i64 = 1;
    for _ in 0..frac_part.len() {
        denom = denom.checked_mul(10).ok_or_else(|| "number too large".to_string())?;
    }
    let value = Ratio::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// Renders a rational as a decimal when the denominator divides a power of
/// ten, otherwise as `n/d`. The output re-parses to the same value.
pub fn format_rational(value: &Rational) -> String {
    let denom = *value.denom();
    if denom == 1 {
        return value.numer().to_string();
    }
    // Strip factors of 2 and 5; anything left means no finite decimal form.
    let (mut twos, mut fives, mut rest) = (0u32, 0u32, denom);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let digits = twos.max(fives);
    let mut scale: i64 = 1;
    for _ in 0..digits {
        match scale.checked_mul(10) {
            Some(s) => scale = s,
            None => return format!("{}/{}", value.numer(), value.denom()),
        }
    }
    let scaled = match value.numer().checked_mul(scale / denom) {
        Some(s) => s,
        None => return format!("{}/{}", value.numer(), value.denom()),
    };
    let sign = if scaled < 0 { "-" } else { "" };
    let abs = scaled.abs();
    let int = abs / scale;
    let frac = abs % scale;
    let mut out = String::new();
    let _ = write!(out, "{sign}{int}.{frac:0width$}", width = digits as usize);
    while out.ends_with('0') {
        out.pop();
    }
    if out.ends_with('.') {
        out.pop();
    }
    out
}

/// True when `value` is an integer multiple of `step`.
pub fn is_multiple_of(value: &Rational, step: &Rational) -> bool {
    !step.is_zero() && (value / step).is_integer()
}

/// `value / step` as an integer index; caller must ensure divisibility.
pub fn multiple_index(value: &Rational, step: &Rational) -> i64 {
    debug_assert!(is_multiple_of(value, step));
    (value / step).to_integer()
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("30").unwrap(), rat(30));
        assert_eq!(parse_rational("27.5").unwrap(), ratio(55, 2));
        assert_eq!(parse_rational("0.04").unwrap(), ratio(1, 25));
        assert_eq!(parse_rational("1/25").unwrap(), ratio(1, 25));
        assert_eq!(parse_rational("-3.5").unwrap(), ratio(-7, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1..2").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for v in [rat(0), rat(30), ratio(55, 2), ratio(1, 25), ratio(-7, 2), ratio(1, 3), ratio(22, 7)] {
            let text = format_rational(&v);
            assert_eq!(parse_rational(&text).unwrap(), v, "text was {text}");
        }
        assert_eq!(format_rational(&ratio(55, 2)), "27.5");
        assert_eq!(format_rational(&ratio(1, 25)), "0.04");
        assert_eq!(format_rational(&ratio(1, 3)), "1/3");
    }

    #[test]
    fn multiples() {
        assert!(is_multiple_of(&rat(30), &rat(1)));
        assert!(is_multiple_of(&ratio(55, 2), &ratio(1, 2)));
        assert!(!is_multiple_of(&ratio(1, 3), &ratio(1, 2)));
        assert_eq!(multiple_index(&rat(30), &ratio(1, 2)), 60);
    }
}
