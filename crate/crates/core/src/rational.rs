//! Exact rational arithmetic carrier and text parsing.
//!
//! All probabilities, weights, and threshold parameters in this crate are
//! `Rational` values; no operation ever rounds.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical reduced form.
pub type Rational = num_rational::BigRational;

/// Convenience constructor from machine integers. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parse a rational from text.
///
/// Accepted forms: an integer `N`, a fraction `N/D`, or a finite decimal
/// such as `0.25` (converted exactly). A leading `-` is allowed.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let fail = |reason: &str| Error::InvalidRational {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(fail("empty"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| fail("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| fail("bad denominator"))?;
        if den.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(fail("bad decimal"));
        }
        if !int_digits.is_empty() && !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(fail("bad decimal"));
        }
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        let whole: BigInt = int_digits.parse().map_err(|_| fail("bad decimal"))?;
        let frac: BigInt = frac_part.parse().map_err(|_| fail("bad decimal"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let value = Rational::new(whole * &scale + frac, scale);
        return Ok(if sign < 0 { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| fail("not a number"))?;
    Ok(Rational::from_integer(n))
}

/// `1 - r`.
pub fn one_minus(r: &Rational) -> Rational {
    Rational::one() - r
}
