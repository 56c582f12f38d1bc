//! Exact truth values in the unit interval.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A rational truth value `0 <= v <= 1`, stored exactly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValueError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("value {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn one() -> Self {
        Value(BigRational::one())
    }

    /// Builds `num/den`, rejecting anything outside `[0,1]`.
    pub fn new(num: i64, den: i64) -> Result<Self, ValueError> {
        if den == 0 {
            return Err(ValueError::ZeroDenominator(format!("{num}/{den}")));
        }
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Panicking shorthand used for literals known to be in range.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("literal truth value out of range")
    }

    pub fn from_rational(q: BigRational) -> Result<Self, ValueError> {
        if q.is_negative() || q > BigRational::one() {
            return Err(ValueError::OutOfRange(q.to_string()));
        }
        Ok(Value(q))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Arithmetic mean of two values; always stays inside `[0,1]`.
    pub fn midpoint(&self, other: &Value) -> Value {
        Value((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a rational `p/q` or integer `p` without range checks.
pub fn parse_rational(text: &str) -> Result<BigRational, ValueError> {
    let text = text.trim();
    let malformed = || ValueError::Malformed(text.to_string());
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| malformed())?;
            let d: BigInt = d.trim().parse().map_err(|_| malformed())?;
            if d.is_zero() {
                return Err(ValueError::ZeroDenominator(text.to_string()));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| malformed())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

impl FromStr for Value {
    type Err = ValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Value::from_rational(parse_rational(s)?)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_fractions() {
        let v: Value = "2/4".parse().unwrap();
        assert_eq!(v.to_string(), "1/2");
        assert_eq!("1".parse::<Value>().unwrap(), Value::one());
        assert_eq!("0".parse::<Value>().unwrap().to_string(), "0");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!("3/2".parse::<Value>(), Err(ValueError::OutOfRange(_))));
        assert!(matches!("-1/2".parse::<Value>(), Err(ValueError::OutOfRange(_))));
        assert!(matches!("1/0".parse::<Value>(), Err(ValueError::ZeroDenominator(_))));
        assert!(matches!("x".parse::<Value>(), Err(ValueError::Malformed(_))));
    }

    #[test]
    fn midpoint_is_exact() {
        let a = Value::ratio(1, 3);
        let b = Value::ratio(1, 2);
        assert_eq!(a.midpoint(&b), Value::ratio(5, 12));
    }
}
