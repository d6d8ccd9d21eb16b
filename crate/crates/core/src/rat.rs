//! Exact rational scalars.
//!
//! [`Rat`] wraps an arbitrary-precision rational kept in lowest terms with a
//! positive denominator. Its canonical text form is always `p/q` (so zero is
//! `0/1`), with the sign carried on the numerator.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRatError {
    pub literal: String,
    pub reason: &'static str,
}

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let denom = denom.into();
        assert!(!denom.is_zero(), "zero denominator");
        Rat(BigRational::new(numer.into(), denom))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    /// Largest integer not exceeding `self`.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Smallest integer not below `self`.
    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Rat {
        self - &Rat::from_int(self.floor())
    }

    pub fn pow(&self, exp: i32) -> Rat {
        Rat(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn min(self, other: Rat) -> Rat {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Only used for human-facing decimal renderings.
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Decimal rendering with `digits` digits after the point, truncated toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (self.0.numer().abs() * &scale) / self.0.denom();
        let int_part = &scaled / &scale;
        let frac_part = &scaled % &scale;
        let sign = if self.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part:0>digits$}")
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason| ParseRatError { literal: s.to_string(), reason };
        let parse_int = |t: &str| -> Result<BigInt, ParseRatError> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("expected an integer or p/q"));
            }
            t.parse::<BigInt>().map_err(|_| err("expected an integer or p/q"))
        };
        match s.split_once('/') {
            None => Ok(Rat::from_int(parse_int(s)?)),
            Some((p, q)) => {
                if q.starts_with('-') {
                    return Err(err("denominator must be positive"));
                }
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(Rat::new(parse_int(p)?, q))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat::from_int(v))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Rat {
        Rat::from_int(n)
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Shorthand for a literal rational, `rat(1, 4)` is one quarter.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer, denom)
}

/// Parses a literal, panicking on malformed input. Intended for fixtures and tests.
pub fn r(s: &str) -> Rat {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

/// Content of a rational vector: the positive rational `c` such that `v / c` is a
/// primitive integer vector. Zero for the zero vector.
pub fn content(v: &[Rat]) -> Rat {
    let mut lcm_den = BigInt::one();
    for x in v {
        lcm_den = lcm_den.lcm(x.denom());
    }
    let mut g = BigInt::zero();
    for x in v {
        let scaled = x.numer() * (&lcm_den / x.denom());
        g = g.gcd(&scaled);
    }
    Rat::new(g, lcm_den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_form() {
        assert_eq!(rat(0, 5).to_string(), "0/1");
        assert_eq!(rat(7, -300).to_string(), "-7/300");
        assert_eq!(rat(2, 36).to_string(), "1/18");
        assert_eq!(Rat::from_int(3).to_string(), "3/1");
    }

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(r("-1/4"), rat(-1, 4));
        assert_eq!(r("6/8"), rat(3, 4));
        assert_eq!(r("12"), Rat::from_int(12));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("0.5".parse::<Rat>().is_err());
        assert!("+3".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(rat(7, 3).fract(), rat(1, 3));
        assert_eq!(rat(-1, 4).fract(), rat(3, 4));
        assert_eq!(rat(-1, 4).floor(), BigInt::from(-1));
        assert_eq!(rat(-1, 4).ceil(), BigInt::from(0));
        assert_eq!(rat(5, 1).ceil(), BigInt::from(5));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rat(1, 12).to_decimal(6), "0.083333");
        assert_eq!(rat(-1, 36).to_decimal(4), "-0.0277");
        assert_eq!(Rat::zero().to_decimal(3), "0.000");
    }

    #[test]
    fn content_of_vectors() {
        assert_eq!(content(&[rat(3, 1), rat(4, 1)]), Rat::one());
        assert_eq!(content(&[rat(2, 1), rat(2, 1)]), rat(2, 1));
        assert_eq!(content(&[rat(1, 2), rat(1, 3)]), rat(1, 6));
        assert_eq!(content(&[Rat::zero()]), Rat::zero());
    }

    #[test]
    fn deserializes_strings_and_integers() {
        use serde::de::IntoDeserializer;
        type E = de::value::Error;
        let v = Rat::deserialize(IntoDeserializer::<E>::into_deserializer("3/9")).unwrap();
        assert_eq!(v, rat(1, 3));
        let v = Rat::deserialize(IntoDeserializer::<E>::into_deserializer(-4i64)).unwrap();
        assert_eq!(v, Rat::from_int(-4));
        assert!(Rat::deserialize(IntoDeserializer::<E>::into_deserializer("x")).is_err());
    }
}
