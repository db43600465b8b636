//! Exact rational scalars.
//!
//! Everything in this crate computes over ℚ with arbitrary-precision
//! integers; there is no floating point anywhere in the core. Scalars are
//! [`num::BigRational`], kept in canonical reduced form by the `num` crate
//! (gcd 1, positive denominator).

use std::str::FromStr;

use thiserror::Error;

/// Exact rational scalar.
pub type Q = num::BigRational;
/// Arbitrary-precision integer.
pub type Z = num::BigInt;

/// Rational from an integer pair, `qq(3, 4)` = 3/4.
///
/// ```
/// use lcscoh::scalar::{qq, qz};
/// assert_eq!(qq(6, 8), qq(3, 4));
/// assert_eq!(qq(7, 1), qz(7));
/// ```
pub fn qq(numer: i64, denom: i64) -> Q {
    Q::new(Z::from(numer), Z::from(denom))
}

/// Rational from an integer.
pub fn qz(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational {input:?}: expected \"p\" or \"p/q\" with integer p, q")]
pub struct ParseQError {
    pub input: String,
}

/// Parse `"p/q"` or `"p"` into an exact rational.
///
/// Used by every external interface (JSON documents, CLI flags); numbers
/// cross process boundaries as strings so exactness is never lost.
///
/// ```
/// use lcscoh::scalar::{parse_q, qq};
/// assert_eq!(parse_q("-3/2").unwrap(), qq(-3, 2));
/// assert_eq!(parse_q("5").unwrap(), qq(5, 1));
/// assert!(parse_q("1.5").is_err());
/// ```
pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    use num::Zero;
    let err = || ParseQError {
        input: s.to_owned(),
    };
    match s.trim().split_once('/') {
        None => Z::from_str(s.trim()).map(Q::from_integer).map_err(|_| err()),
        Some((p, q)) => {
            let p = Z::from_str(p.trim()).map_err(|_| err())?;
            let q = Z::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Q::new(p, q))
        }
    }
}

/// Format a rational as `"p/q"` (or `"p"` when the denominator is 1).
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips_display() {
        for s in ["0", "-7", "22/7", "-1/2"] {
            let x = parse_q(s).unwrap();
            assert_eq!(fmt_q(&x), s);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1.5", "a/b", "1/0"] {
            assert!(parse_q(s).is_err(), "{s} should not parse");
        }
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(parse_q("4/6").unwrap(), qq(2, 3));
        assert_eq!(fmt_q(&parse_q("-4/2").unwrap()), "-2");
    }
}
