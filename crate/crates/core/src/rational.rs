//! Exact rational arithmetic.
//!
//! Every weight, threshold, and payoff in the library is a [`Rational`];
//! equilibrium verdicts frequently hinge on exact ties (e.g. a deviation
//! payoff of exactly zero), so no floating point is used anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A rational number kept in canonical reduced form:
/// `den > 0` and `gcd(|num|, den) == 1`.
///
/// Stored as `i64 / i64` with `i128` intermediates; arithmetic panics if a
/// reduced result no longer fits, which does not happen for the edge
/// weights, thresholds, and welfare sums this library manipulates.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational literal {0:?} (expected \"p\" or \"p/q\")")]
    Malformed(String),
    #[error("rational overflow")]
    Overflow,
}

fn gcd128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num/den` in reduced form. Fails on a zero denominator or if
    /// the reduced value does not fit in `i64`.
    pub fn new(num: i64, den: i64) -> Result<Rational, RationalError> {
        Rational::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Result<Rational, RationalError> {
        if den == 0 {
            return Err(RationalError::ZeroDenominator);
        }
        let sign: i128 = if (num < 0) == (den < 0) { 1 } else { -1 };
        let g = gcd128(num, den);
        let (rn, rd) = if num == 0 {
            (0, 1)
        } else {
            (num.abs() / g * sign, den.abs() / g)
        };
        if rn < i64::MIN as i128 || rn > i64::MAX as i128 || rd > i64::MAX as i128 {
            return Err(RationalError::Overflow);
        }
        Ok(Rational {
            num: rn as i64,
            den: rd as i64,
        })
    }

    fn from_i128_or_panic(num: i128, den: i128) -> Rational {
        Rational::from_i128(num, den).expect("rational arithmetic overflow")
    }

    pub fn from_integer(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn abs(&self) -> Rational {
        Rational {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn recip(&self) -> Result<Rational, RationalError> {
        Rational::new(self.den, self.num)
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, RationalError> {
        if rhs.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Rational::from_i128(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::from_i128_or_panic(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational::from_i128_or_panic(
            self.num as i128 * rhs.den as i128 - rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::from_i128_or_panic(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).expect("rational division error")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        // Denominators are positive, so cross multiplication preserves order.
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `"p"` or `"p/q"` with an optional sign on `p` only.
    /// Decimal notation is rejected: exactness is the whole point.
    fn from_str(s: &str) -> Result<Rational, RationalError> {
        let malformed = || RationalError::Malformed(s.to_string());
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num_body = num_str.strip_prefix(['+', '-']).unwrap_or(num_str);
        if num_body.is_empty() || !num_body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let num: i64 = num_str.parse().map_err(|_| RationalError::Overflow)?;
        let den: i64 = match den_str {
            None => 1,
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                d.parse().map_err(|_| RationalError::Overflow)?
            }
        };
        Rational::new(num, den)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Shorthand used pervasively in tests and gadget constructions.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den).expect("literal rational")
}
