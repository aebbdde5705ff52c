//! Exact rationals. Backed by `num_rational::BigRational`, which keeps every
//! value in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Always `p/q`, including integers (`0/1`, `3/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p`, `-p`, `p/q`; the result is normalised.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = |msg: &str| Error::Syntax { pos: 0, msg: format!("{msg}: {t:?}") };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |x: &str| {
        let digits = x.strip_prefix('-').unwrap_or(x);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(bad("malformed rational"));
    }
    let n: BigInt = num.parse().map_err(|_| bad("malformed numerator"))?;
    let d: BigInt = den.parse().map_err(|_| bad("malformed denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Smallest integer >= r.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Representative of `r mod 1` in the half-open interval (-1, 0].
pub fn class_mod_one(r: &Rational) -> Rational {
    r - Rational::from_integer(ceil(r))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalised_after_construction() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn format_and_parse() {
        assert_eq!(format_rational(&int(0)), "0/1");
        assert_eq!(format_rational(&rat(-7, 10)), "-7/10");
        assert_eq!(parse_rational("14/20").unwrap(), rat(7, 10));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("/2").is_err());
        assert!(parse_rational("--2").is_err());
    }

    #[test]
    fn classes() {
        assert_eq!(class_mod_one(&rat(1, 2)), rat(-1, 2));
        assert_eq!(class_mod_one(&rat(-1, 2)), rat(-1, 2));
        assert_eq!(class_mod_one(&int(1)), int(0));
        assert_eq!(class_mod_one(&rat(-3, 10)), rat(-3, 10));
        assert_eq!(class_mod_one(&rat(13, 10)), rat(-7, 10));
    }
}
