//! Exact rationals in lowest terms, plus the textual form shared by the
//! radical serialization and the witness columns.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unexpected character at byte {0}")]
    Unexpected(usize),
    #[error("numeric token longer than {0} digits")]
    TooLong(usize),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero radical index")]
    ZeroIndex,
    #[error("malformed list: {0}")]
    List(String),
}

/// Longest accepted digit run; keeps adversarial inputs from tying up the
/// factorizer.
pub const MAX_DIGITS: usize = 80;

/// Lowest-terms rendering: `"7"`, `"-3/2"`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `-?digits(/digits)?` with the crate-wide digit limit.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let (q, rest) = lex_rational(s.as_bytes(), 0)?;
    if rest != s.len() {
        return Err(ParseError::Unexpected(rest));
    }
    Ok(q)
}

pub(crate) fn lex_rational(bytes: &[u8], mut pos: usize) -> Result<(Rational, usize), ParseError> {
    let negative = if bytes.get(pos) == Some(&b'-') {
        pos += 1;
        true
    } else {
        false
    };
    let (numer, next) = lex_uint(bytes, pos)?;
    pos = next;
    let mut numer = BigInt::from(numer);
    if negative {
        numer = -numer;
    }
    if bytes.get(pos) == Some(&b'/') {
        let (denom, next) = lex_uint(bytes, pos + 1)?;
        if denom.is_zero() {
            return Err(ParseError::ZeroDenominator);
        }
        Ok((Rational::new(numer, BigInt::from(denom)), next))
    } else {
        Ok((Rational::from_integer(numer), pos))
    }
}

pub(crate) fn lex_uint(bytes: &[u8], pos: usize) -> Result<(BigUint, usize), ParseError> {
    let start = pos;
    let mut end = pos;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == start {
        return Err(ParseError::Unexpected(start));
    }
    if end - start > MAX_DIGITS {
        return Err(ParseError::TooLong(MAX_DIGITS));
    }
    let text = std::str::from_utf8(&bytes[start..end]).expect("digits are ascii");
    Ok((text.parse().expect("digit run parses"), end))
}

/// Exact ceiling as a big integer.
pub fn ceil_to_int(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Exact floor as a big integer.
pub fn floor_to_int(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Sum of `ceil(|coeff|)` used for enclosure width budgeting.
pub fn abs_ceil(q: &Rational) -> BigUint {
    ceil_to_int(&q.abs())
        .to_biguint()
        .expect("ceil of abs is nonnegative")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for s in ["0", "7", "-3/2", "16/3", "-1"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(format_rational(&q), s);
        }
    }

    #[test]
    fn reduces() {
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
    }

    #[test]
    fn rejects() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("--1").is_err());
        let long = "9".repeat(MAX_DIGITS + 1);
        assert_eq!(
            parse_rational(&long).unwrap_err(),
            ParseError::TooLong(MAX_DIGITS)
        );
    }

    #[test]
    fn ceilings() {
        assert_eq!(
            ceil_to_int(&parse_rational("7/2").unwrap()),
            BigInt::from(4)
        );
        assert_eq!(
            ceil_to_int(&parse_rational("-7/2").unwrap()),
            BigInt::from(-3)
        );
        assert_eq!(ceil_to_int(&parse_rational("3").unwrap()), BigInt::from(3));
    }
}
