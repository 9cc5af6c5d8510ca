//! Small helpers around GMP integers and rationals.
//!
//! Rationals are rendered as `p/q` in lowest terms, or just `p` when the
//! denominator is one.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n, k))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    s.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64()
}

pub fn rational_to_float(r: &Rational, prec: u32) -> Float {
    Float::with_val(prec, r)
}

/// `(-1)^k` as a sign multiplier.
pub fn sign(k: i64) -> i32 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Decimal rendering of a float with `digits` significant digits.
pub fn format_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Number of decimal digits that `bits` of binary precision support.
pub fn decimal_digits(bits: u32) -> usize {
    ((bits as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

pub mod serde_rational {
    //! Serialize `Rational` as its `p/q` string.
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_float {
    //! Serialize `Float` as a decimal string carrying the digits its
    //! precision supports.
    use rug::Float;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Float, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_float(x, super::decimal_digits(x.prec())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        let r = Rational::from((-863, 5600));
        assert_eq!(format_rational(&r), "-863/5600");
        assert_eq!(parse_rational("-863/5600").unwrap(), r);
        assert_eq!(format_rational(&Rational::from(1)), "1");
        assert_eq!(parse_rational(" 6 ").unwrap(), Rational::from(6));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 7), 0);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(factorial(0), 1);
    }
}
