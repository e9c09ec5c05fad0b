//! Exact rational scalars.
//!
//! Every coefficient in the engine is a [`Rational`]; there is no floating
//! point anywhere on the computation path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `"p/q"`, `"p"` or a JSON-style integer literal into a canonical rational.
pub fn parse(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format(q: &Rational) -> String {
    q.to_string()
}

/// Generalized binomial coefficient `C(n, i)` for any integer `n` and `i >= 0`.
///
/// This is the coefficient of `x^{n-i} y^i` in the expansion of `(x + y)^n`
/// in nonnegative powers of `y`.
pub fn binomial(n: i64, i: i64) -> BigInt {
    if i < 0 {
        return BigInt::zero();
    }
    if n >= 0 && i > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..i {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

pub fn binomial_q(n: i64, i: i64) -> Rational {
    Rational::from_integer(binomial(n, i))
}

/// `(-1)^n` for any integer `n`.
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn is_integer_valued(q: &Rational) -> bool {
    q.is_integer()
}

pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

pub mod serde_str {
    use super::Rational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::from_json(&v).map_err(D::Error::custom)
    }
}

/// Accepts `"p/q"` strings and integer JSON numbers.
pub fn from_json(v: &serde_json::Value) -> Result<Rational, ParseError> {
    match v {
        serde_json::Value::String(s) => parse(s),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(int(i)),
            None => Err(ParseError::Rational(n.to_string())),
        },
        other => Err(ParseError::Rational(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(parse("2/4").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse("3/-6").unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(format(&parse("-4/2").unwrap()), "-2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn binomials_with_negative_top() {
        assert_eq!(binomial(5, 2), 10.into());
        assert_eq!(binomial(2, 5), 0.into());
        // (1+y)^{-1} = 1 - y + y^2 - ...
        assert_eq!(binomial(-1, 3), (-1).into());
        // (1+y)^{-2} = 1 - 2y + 3y^2 - 4y^3
        assert_eq!(binomial(-2, 3), (-4).into());
        assert_eq!(binomial(-3, 0), 1.into());
    }

    #[test]
    fn sign_of_negative_exponent() {
        assert_eq!(sign(-1), -1);
        assert_eq!(sign(-2), 1);
        assert_eq!(sign(0), 1);
    }
}
