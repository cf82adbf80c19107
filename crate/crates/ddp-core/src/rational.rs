//! Exact fractions with arbitrary-precision integer numerator/denominator.
//!
//! Every value is kept in canonical lowest terms with a positive denominator,
//! so two equal fractions always have identical representations. That is what
//! makes the zero-tolerance identity checks elsewhere in the crate meaningful:
//! equality of `Rational`s is equality of numbers, not of spellings.
//!
//! The textual format is `p/q` (optional leading minus, no whitespace); plain
//! integers are accepted as `p`, and finite decimal strings like `0.25` parse
//! to the exact fraction they denote.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decimal::HighPrecDecimal;
use crate::error::{Error, Result};

/// An exact fraction in canonical lowest terms.
///
/// Invariants (enforced on every construction path):
/// - the denominator is strictly positive;
/// - `gcd(|numerator|, denominator) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Canonicalizes `num/den` to lowest terms with a positive denominator.
    ///
    /// Errors with [`Error::ZeroDenominator`] when `den = 0`.
    pub fn new<N, D>(num: N, den: D) -> Result<Self>
    where
        N: Into<BigInt>,
        D: Into<BigInt>,
    {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_integer<N: Into<BigInt>>(n: N) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// The whole number part `[r]`: the greatest integer not exceeding `r`.
    ///
    /// For negative inputs this is the mathematical floor, e.g.
    /// `-7/3 -> -3`.
    pub fn whole_part(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Exact division; errors instead of panicking on a zero divisor.
    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Exact integer power (negative exponents invert; `0^negative` errors).
    pub fn pow_int(&self, exp: i64) -> Result<Rational> {
        if exp == 0 {
            return Ok(Rational::one());
        }
        if self.is_zero() {
            if exp < 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(Rational::zero());
        }
        let mag = exp.unsigned_abs();
        let mag = u32::try_from(mag)
            .map_err(|_| Error::Domain(format!("exponent {exp} out of range")))?;
        let num = self.numerator().pow(mag);
        let den = self.denominator().pow(mag);
        if exp > 0 {
            Rational::new(num, den)
        } else {
            Rational::new(den, num)
        }
    }

    /// Correctly rounded decimal approximation with `digits` significant
    /// digits (`digits >= 15`).
    pub fn to_decimal(&self, digits: u32) -> Result<HighPrecDecimal> {
        HighPrecDecimal::from_rational(self, digits)
    }

    /// Lossy conversion for fitting/reporting only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min(self, other: Rational) -> Rational {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub(crate) fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub(crate) fn from_ratio(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::Parse(format!("{msg}: {s:?}"));
    if s.is_empty() {
        return Err(bad("empty rational"));
    }
    if s.chars().any(char::is_whitespace) {
        return Err(bad("whitespace in rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.parse().map_err(|_| bad("invalid numerator"))?;
        if den.is_empty() || !den.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("denominator must be a positive integer"));
        }
        let den: BigInt = den.parse().map_err(|_| bad("invalid denominator"))?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        return Rational::new(num, den);
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // Finite decimals are exact rationals.
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part),
        };
        if !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
            || frac_part.is_empty()
            || int_digits.is_empty()
        {
            return Err(bad("invalid decimal"));
        }
        let combined: BigInt = format!("{int_digits}{frac_part}")
            .parse()
            .map_err(|_| bad("invalid decimal"))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Rational::new(combined * sign, den);
    }
    let n: BigInt = s.parse().map_err(|_| bad("invalid integer"))?;
    Ok(Rational::from_integer(n))
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Total order helper for slices of rationals.
pub fn cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn normalize_sign_and_gcd() {
        assert_eq!(r(6, -4), r(-3, 2));
        assert_eq!(r(6, -4).to_string(), "-3/2");
        assert_eq!(r(0, 7).to_string(), "0/1");
        assert_eq!(r(3, 7).to_string(), "3/7");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(Rational::new(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(r(3, 7) * r(7, 3), Rational::one());
        assert_eq!(r(3, 7).cmp(&r(1, 2)), Ordering::Less);
        assert!(matches!(
            r(1, 2).checked_div(&Rational::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn whole_part_examples() {
        assert_eq!(r(7, 3).whole_part(), BigInt::from(2));
        assert_eq!(r(2, 1).whole_part(), BigInt::from(2));
        assert_eq!(r(99, 100).whole_part(), BigInt::from(0));
        // Mathematical floor for negative inputs.
        assert_eq!(r(-7, 3).whole_part(), BigInt::from(-3));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/7".parse::<Rational>().unwrap(), r(3, 7));
        assert_eq!("-3/2".parse::<Rational>().unwrap(), r(-3, 2));
        assert_eq!("5".parse::<Rational>().unwrap(), r(5, 1));
        assert_eq!("0.25".parse::<Rational>().unwrap(), r(1, 4));
        assert_eq!("-0.5".parse::<Rational>().unwrap(), r(-1, 2));
        assert!("1/ 2".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    proptest! {
        #[test]
        fn add_sub_round_trip(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = r(a, b);
            let y = r(c, d);
            prop_assert_eq!((&x - &y) + &y, x);
        }

        #[test]
        fn whole_part_bracket(p in 1i64..100_000, n in 1i64..100_000) {
            let w = r(p, n).whole_part();
            let n = BigInt::from(n);
            let p = BigInt::from(p);
            prop_assert!(&w * &n <= p);
            prop_assert!((&w + 1) * &n > p);
        }

        #[test]
        fn display_parse_round_trip(a in -100_000i64..100_000, b in 1i64..100_000) {
            let x = r(a, b);
            let back: Rational = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
