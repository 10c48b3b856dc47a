//! Exact rational scalars.
//!
//! All scalar quantities (scales, radii, ratios, thresholds) are
//! arbitrary-precision rationals in canonical form: reduced, with a positive
//! denominator. `num_rational::BigRational` provides exactly that, so the
//! crate uses it directly under the [`Rational`] alias.

use alloc::string::String;
use alloc::string::ToString;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational scalar: reduced fraction with positive denominator.
pub type Rational = num_rational::BigRational;

/// Error parsing a rational from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The fraction `n / d`.
///
/// Panics if `d == 0`; meant for literals in code and tests.
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` into a rational, exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| ParseRationalError::Invalid(s.into())),
        Some((num, den)) => {
            let n = num
                .trim()
                .parse::<BigInt>()
                .map_err(|_| ParseRationalError::Invalid(s.into()))?;
            let d = den
                .trim()
                .parse::<BigInt>()
                .map_err(|_| ParseRationalError::Invalid(s.into()))?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.into()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Largest integer `<= r`, as `i64`. `None` on overflow.
pub fn floor_to_i64(r: &Rational) -> Option<i64> {
    r.floor().to_integer().to_i64()
}

/// Numerator and denominator as machine integers, when they fit.
pub fn to_i64_parts(r: &Rational) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

/// Exact absolute value.
pub fn rational_abs(r: &Rational) -> Rational {
    r.abs()
}
