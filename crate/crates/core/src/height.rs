//! Exact vertex heights.
//!
//! Heights are rationals, written and read as decimal strings. Every public
//! constructor and operation keeps denominators of the form 2^a·5^b, so a
//! height always has an exact, canonical decimal representation and encoding
//! round-trips are bit-exact.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Height(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal number `{input}`: {reason}")]
pub struct HeightParseError {
    pub input: String,
    pub reason: String,
}

impl Height {
    pub fn from_int(n: i64) -> Self {
        Height(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Height(BigRational::zero())
    }

    /// Parses `[+-]?digits[.digits][eE[+-]digits]`.
    pub fn parse(s: &str) -> Result<Self, HeightParseError> {
        let err = |reason: &str| HeightParseError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        if t.is_empty() {
            return Err(err("empty string"));
        }
        let (sign, rest) = match t.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        let (mantissa, exp_str) = match rest.find(['e', 'E']) {
            Some(i) => (&rest[..i], Some(&rest[i + 1..])),
            None => (rest, None),
        };
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err("no digits"));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(err("non-digit character"));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer = BigInt::from_str(&digits).map_err(|_| err("bad digits"))?;
        let mut value = BigRational::new(numer, BigInt::from(10u32).pow(frac_part.len() as u32));
        if let Some(e) = exp_str {
            let exp: i32 = e.parse().map_err(|_| err("bad exponent"))?;
            let ten = BigRational::from_integer(BigInt::from(10));
            if exp >= 0 {
                value *= ten.pow(exp);
            } else {
                value /= ten.pow(-exp);
            }
        }
        if sign < 0 {
            value = -value;
        }
        Ok(Height(value))
    }

    /// Exact decimal string, canonical (no trailing zeros, no exponent).
    /// Denominators are always 2^a·5^b by construction; anything else would
    /// indicate an internal bug, reported as a fraction for debuggability.
    pub fn to_decimal_string(&self) -> String {
        let numer = self.0.numer();
        let denom = self.0.denom();
        let (mut twos, mut fives, mut d) = (0u32, 0u32, denom.clone());
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return format!("{}/{}", numer, denom);
        }
        let k = twos.max(fives);
        let scaled: BigInt = numer * BigInt::from(10u32).pow(k) / denom;
        let neg = scaled.sign() == Sign::Minus;
        let digits = scaled.magnitude().to_string();
        let digits = if (digits.len() as u32) <= k {
            format!("{}{}", "0".repeat((k + 1) as usize - digits.len()), digits)
        } else {
            digits
        };
        let split = digits.len() - k as usize;
        let (int_part, frac_part) = digits.split_at(split);
        let frac_part = frac_part.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(int_part);
        if !frac_part.is_empty() {
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }

    pub fn midpoint(a: &Height, b: &Height) -> Height {
        Height((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }

    pub fn shifted_by_int(&self, n: i64) -> Height {
        Height(&self.0 + BigRational::from_integer(BigInt::from(n)))
    }

    pub fn add(&self, other: &Height) -> Height {
        Height(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Height) -> Height {
        Height(&self.0 - &other.0)
    }

    pub fn negated(&self) -> Height {
        Height(-&self.0)
    }

    pub fn times_int(&self, n: i64) -> Height {
        Height(&self.0 * BigRational::from_integer(BigInt::from(n)))
    }

    /// Divides by a nonzero integer. Panics on zero.
    pub fn divided_by_int(&self, n: i64) -> Height {
        assert!(n != 0, "division of a height by zero");
        Height(&self.0 / BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl fmt::Debug for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl serde::Serialize for Height {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> serde::Deserialize<'de> for Height {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Height::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A fresh height strictly between `lo` and `hi`, avoiding `occupied`.
/// Repeated binary subdivision toward `lo`; deterministic.
pub fn fresh_between(lo: &Height, hi: &Height, occupied: &[Height]) -> Height {
    assert!(lo < hi, "empty interval");
    let mut candidate = Height::midpoint(lo, hi);
    while occupied.contains(&candidate) {
        candidate = Height::midpoint(lo, &candidate);
    }
    candidate
}
