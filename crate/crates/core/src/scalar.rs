//! Exact scalars.
//!
//! Every value in this crate is an arbitrary-precision rational. The string
//! encoding is `"p"` or `"p/q"` with `q > 0` and `gcd(p, q) = 1`; parsing
//! accepts any nonzero denominator and reduces.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serializer;

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_biguint(v: &BigUint) -> Scalar {
    Scalar::from_integer(BigInt::from(v.clone()))
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse(s: &str) -> Result<Scalar, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let p: BigInt = parse_int(num)?;
    let q: BigInt = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Scalar::new(p, q))
}

fn parse_int(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not an integer: {s:?}"));
    }
    s.parse::<BigInt>().map_err(|e| format!("{s:?}: {e}"))
}

/// Canonical `"p"` / `"p/q"` form.
pub fn format(v: &Scalar) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn is_integer(v: &Scalar) -> bool {
    v.denom().is_one()
}

pub fn abs(v: &Scalar) -> Scalar {
    v.abs()
}

pub(crate) fn serialize<S: Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(v))
}

pub(crate) fn serialize_vec<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("83871744").unwrap(), int(83871744));
        assert_eq!(parse("4/6").unwrap(), ratio(2, 3));
        assert_eq!(parse("3/-6").unwrap(), ratio(-1, 2));
        assert_eq!(format(&ratio(-1, 2)), "-1/2");
        assert_eq!(format(&int(-7)), "-7");
        assert!(parse("1/0").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse("").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn beyond_64_bits() {
        let big = "1238948617930752123894861793075212389486179307521";
        assert_eq!(format(&parse(big).unwrap()), big);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
    }
}
