//! A numeric value that is either an exact fraction or a high-precision
//! decimal.
//!
//! Arithmetic is exact whenever both operands are exact; as soon as a decimal
//! enters, the computation stays decimal. A rational operand is promoted
//! without loss when it is a finite decimal (denominator `2^a 5^b`), otherwise
//! it is rounded at the decimal operand's precision. Comparisons are always
//! exact: a decimal is itself a rational number, so ordering never rounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decimal::{HighPrecDecimal, MIN_PRECISION};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub enum Value {
    Exact(Rational),
    Decimal(HighPrecDecimal),
}

impl Value {
    pub fn zero() -> Self {
        Value::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Value::Exact(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Value::Exact(Rational::from_integer(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_zero(),
            Value::Decimal(d) => d.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Value::Exact(r) => r.is_negative(),
            Value::Decimal(d) => d.is_negative(),
        }
    }

    /// The exact rational content of the representation. For decimals this is
    /// `mantissa/10^k` — exact as a number, approximate as a stand-in for
    /// whatever the decimal was rounded from.
    pub fn to_rational(&self) -> Rational {
        match self {
            Value::Exact(r) => r.clone(),
            Value::Decimal(d) => d.to_rational(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64(),
            Value::Decimal(d) => d.to_f64(),
        }
    }

    fn promote(r: &Rational, precision: u32) -> HighPrecDecimal {
        let working = precision.max(MIN_PRECISION) + 8;
        HighPrecDecimal::try_from_rational_exact(r, working)
            .unwrap_or_else(|| HighPrecDecimal::from_rational(r, working).expect("digits >= 15"))
    }

    /// Force the decimal form at the given working precision.
    pub fn to_decimal(&self, precision: u32) -> HighPrecDecimal {
        match self {
            Value::Exact(r) => Value::promote(r, precision),
            Value::Decimal(d) => d.clone(),
        }
    }

    pub fn add(&self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b),
            (Value::Decimal(a), Value::Decimal(b)) => Value::Decimal(a.add(b)),
            (Value::Exact(a), Value::Decimal(b)) => {
                Value::Decimal(Value::promote(a, b.precision()).add(b))
            }
            (Value::Decimal(a), Value::Exact(b)) => {
                Value::Decimal(a.add(&Value::promote(b, a.precision())))
            }
        }
    }

    pub fn sub(&self, rhs: &Value) -> Value {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Value) -> Value {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a * b),
            (Value::Decimal(a), Value::Decimal(b)) => Value::Decimal(a.mul(b)),
            (Value::Exact(a), Value::Decimal(b)) => {
                Value::Decimal(Value::promote(a, b.precision()).mul(b))
            }
            (Value::Decimal(a), Value::Exact(b)) => {
                Value::Decimal(a.mul(&Value::promote(b, a.precision())))
            }
        }
    }

    pub fn div(&self, rhs: &Value, precision: u32) -> Result<Value> {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(a.checked_div(b)?)),
            _ => {
                if rhs.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let a = self.to_decimal(precision);
                let b = rhs.to_decimal(precision);
                Ok(Value::Decimal(a.div(&b, precision)?))
            }
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(-r),
            Value::Decimal(d) => Value::Decimal(d.neg()),
        }
    }

    pub fn abs(&self) -> Value {
        match self {
            Value::Exact(r) => Value::Exact(r.abs()),
            Value::Decimal(d) => Value::Decimal(d.abs()),
        }
    }

    /// `self^(p/q)`. Exact when the result is rational (perfect q-th powers),
    /// decimal otherwise.
    pub fn pow_rational(&self, exp: &Rational, precision: u32) -> Result<Value> {
        match self {
            Value::Exact(r) => match rational_pow_exact(r, exp)? {
                Some(v) => Ok(Value::Exact(v)),
                None => Ok(Value::Decimal(
                    Value::promote(r, precision).pow_rational(exp, precision)?,
                )),
            },
            Value::Decimal(d) => Ok(Value::Decimal(d.pow_rational(exp, precision)?)),
        }
    }

    pub fn sqrt(&self, precision: u32) -> Result<Value> {
        self.pow_rational(&Rational::new(1, 2).expect("nonzero"), precision)
    }

    pub fn max(self, other: Value) -> Value {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Value) -> Value {
        if self <= other {
            self
        } else {
            other
        }
    }
}

/// Exact rational power when one exists: both `|numerator|` and `denominator`
/// of the base must be perfect `q`-th powers.
pub fn rational_pow_exact(base: &Rational, exp: &Rational) -> Result<Option<Rational>> {
    if exp.is_zero() {
        return Ok(Some(Rational::one()));
    }
    if base.is_zero() {
        if exp.is_negative() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Some(Rational::zero()));
    }
    let q = exp
        .denominator()
        .to_u32()
        .ok_or_else(|| Error::Domain("exponent denominator out of range".into()))?;
    let p = exp
        .numerator()
        .to_i64()
        .ok_or_else(|| Error::Domain("exponent numerator out of range".into()))?;
    if base.is_negative() && q % 2 == 0 {
        return Err(Error::EvenRootOfNegative);
    }
    let (root_num, root_den) = if q == 1 {
        (base.numerator().abs(), base.denominator().clone())
    } else {
        let a = base.numerator().abs();
        let b = base.denominator().clone();
        let ra = a.nth_root(q);
        if Pow::pow(&ra, q) != a {
            return Ok(None);
        }
        let rb = b.nth_root(q);
        if Pow::pow(&rb, q) != b {
            return Ok(None);
        }
        (ra, rb)
    };
    let root = if base.is_negative() {
        Rational::new(-root_num, root_den)?
    } else {
        Rational::new(root_num, root_den)?
    };
    Ok(Some(root.pow_int(p)?))
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => a.cmp(b),
            (Value::Decimal(a), Value::Decimal(b)) => a.cmp(b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Exact(r)
    }
}

impl From<HighPrecDecimal> for Value {
    fn from(d: HighPrecDecimal) -> Self {
        Value::Decimal(d)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Decimal(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ValueRepr {
    Exact { value: String },
    Decimal { value: String, precision: u32 },
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Value::Exact(r) => ValueRepr::Exact {
                value: r.to_string(),
            },
            Value::Decimal(d) => ValueRepr::Decimal {
                value: d.to_string(),
                precision: d.precision(),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match ValueRepr::deserialize(deserializer)? {
            ValueRepr::Exact { value } => Ok(Value::Exact(
                value.parse().map_err(serde::de::Error::custom)?,
            )),
            ValueRepr::Decimal { value, precision } => {
                let decimal: HighPrecDecimal = value.parse().map_err(serde::de::Error::custom)?;
                Ok(Value::Decimal(decimal.round_to(
                    precision.max(MIN_PRECISION).max(decimal.precision()),
                )))
            }
        }
    }
}

/// Tolerance used when a computation was forced into decimals: `10^-(p-10)`
/// for working precision `p`.
pub fn decimal_tolerance(precision: u32) -> Rational {
    let p = precision.saturating_sub(10).max(1);
    Rational::new(1, BigInt::from(10u32).pow(p)).expect("positive power of ten")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn exact_ops_stay_exact() {
        let a = Value::Exact(r(1, 2));
        let b = Value::Exact(r(1, 3));
        assert_eq!(a.add(&b), Value::Exact(r(5, 6)));
        assert!(a.add(&b).is_exact());
    }

    #[test]
    fn mixed_ops_become_decimal() {
        let a = Value::Exact(r(1, 2));
        let d = Value::Decimal(HighPrecDecimal::from_rational(&r(1, 3), 30).unwrap());
        let sum = a.add(&d);
        assert!(!sum.is_exact());
        // 1/2 is dyadic, so the promotion is lossless and the sum equals the
        // stored decimal plus exactly one half.
        let expected = d.to_rational() + r(1, 2);
        assert_eq!(sum.to_rational(), expected);
    }

    #[test]
    fn pow_exact_when_perfect() {
        let quarter = Value::Exact(r(1, 4));
        let half = quarter.pow_rational(&r(1, 2), 50).unwrap();
        assert_eq!(half, Value::Exact(r(1, 2)));
        assert!(half.is_exact());

        let third = Value::Exact(r(1, 3));
        let root = third.pow_rational(&r(1, 2), 50).unwrap();
        assert!(!root.is_exact());
    }

    #[test]
    fn even_root_of_negative_errors() {
        let neg = Value::Exact(r(-1, 4));
        assert!(matches!(
            neg.pow_rational(&r(1, 2), 50),
            Err(Error::EvenRootOfNegative)
        ));
        let cube = Value::Exact(r(-8, 1)).pow_rational(&r(1, 3), 50).unwrap();
        assert_eq!(cube, Value::Exact(r(-2, 1)));
        let squared = Value::Exact(r(-8, 1)).pow_rational(&r(2, 3), 50).unwrap();
        assert_eq!(squared, Value::Exact(r(4, 1)));
    }

    #[test]
    fn ordering_is_exact_across_kinds() {
        let exact = Value::Exact(r(1, 3));
        let below = Value::Decimal(HighPrecDecimal::from_rational(&r(1, 3), 20).unwrap());
        // 0.33...33 (20 digits, rounded) is strictly below 1/3.
        assert!(below < exact);
    }
}
