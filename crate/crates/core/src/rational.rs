//! Exact rational numbers and their textual form.
//!
//! Every quantity in the toolkit (masses, utilities, objective values, LP
//! coefficients) is a [`Rational`]. The textual form is `num/den` in lowest
//! terms, or a bare integer when the denominator is one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

fn parse_integer(text: &str, whole: &str) -> Result<BigInt, RationalParseError> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RationalParseError::Malformed(whole.to_string()));
    }
    text.parse::<BigInt>()
        .map_err(|_| RationalParseError::Malformed(whole.to_string()))
}

/// Parses `"n"`, `"n/d"` (with optional sign on either part). The result is
/// reduced to lowest terms, so `"2/4"` and `"1/2"` parse to the same value.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(RationalParseError::Empty);
    }
    match trimmed.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(trimmed, text)?)),
        Some((num, den)) => {
            let num = parse_integer(num.trim(), text)?;
            let den = parse_integer(den.trim(), text)?;
            if den.is_zero() {
                return Err(RationalParseError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Canonical text: lowest terms, positive denominator, `"n"` for integers.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}
