//! High-precision decimals: `mantissa * 10^exponent` over arbitrary-precision
//! integers.
//!
//! These carry an explicit `precision` field, the number of significant
//! digits the value is claimed to be good for. Addition, subtraction and
//! multiplication are exact on the representation; division and roots are
//! correctly rounded (round half to even) at a requested digit count, with
//! internal guard digits. A decimal is itself an exact rational
//! (`mantissa/10^-exponent`), which is what makes comparisons against exact
//! fractions possible without any further rounding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Smallest admissible significant-digit count.
pub const MIN_PRECISION: u32 = 15;
/// Default working precision for decimal evaluation.
pub const DEFAULT_PRECISION: u32 = 50;

/// Guard digits used internally before a final rounding.
const GUARD: u32 = 8;

/// A decimal `mantissa * 10^exponent` with a claimed significant-digit count.
///
/// The mantissa never ends in a zero digit (zero itself is stored as `0 * 10^0`),
/// so equal values have equal representations.
#[derive(Clone, Debug)]
pub struct HighPrecDecimal {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

fn digits10(n: &BigInt) -> u64 {
    if n.is_zero() {
        0
    } else {
        n.magnitude().to_str_radix(10).len() as u64
    }
}

/// `round(n / d)` with ties to even; `n >= 0`, `d > 0`.
fn round_half_even_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    let twice: BigInt = &r * 2;
    match twice.cmp(d) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    }
}

impl HighPrecDecimal {
    pub fn zero(precision: u32) -> Self {
        HighPrecDecimal {
            mantissa: BigInt::zero(),
            exponent: 0,
            precision,
        }
    }

    pub fn from_bigint<N: Into<BigInt>>(n: N, precision: u32) -> Self {
        HighPrecDecimal {
            mantissa: n.into(),
            exponent: 0,
            precision,
        }
        .normalized()
    }

    /// Correctly rounded conversion of an exact fraction, `digits`
    /// significant digits. `digits` must be at least [`MIN_PRECISION`].
    pub fn from_rational(r: &Rational, digits: u32) -> Result<Self> {
        if digits < MIN_PRECISION {
            return Err(Error::PrecisionTooLow(digits));
        }
        if r.is_zero() {
            return Ok(HighPrecDecimal::zero(digits));
        }
        let negative = r.is_negative();
        let a = r.numerator().abs();
        let b = r.denominator().clone();
        let da = digits10(&a) as i64;
        let db = digits10(&b) as i64;
        let mut shift = digits as i64 + db - da;
        for _ in 0..4 {
            let (num, den) = if shift >= 0 {
                (&a * pow10(shift as u32), b.clone())
            } else {
                (a.clone(), &b * pow10((-shift) as u32))
            };
            let q = round_half_even_div(&num, &den);
            let dq = digits10(&q) as i64;
            if dq == digits as i64 {
                let mantissa = if negative { -q } else { q };
                return Ok(HighPrecDecimal {
                    mantissa,
                    exponent: -shift,
                    precision: digits,
                }
                .normalized());
            }
            shift += digits as i64 - dq;
        }
        unreachable!("rational-to-decimal rounding did not settle");
    }

    /// Exact conversion when the denominator is of the form `2^a 5^b`
    /// (i.e. the fraction is a finite decimal) and reasonably small.
    pub fn try_from_rational_exact(r: &Rational, max_digits: u32) -> Option<Self> {
        let mut den = r.denominator().clone();
        let mut two = 0u32;
        let mut five = 0u32;
        let big2 = BigInt::from(2);
        let big5 = BigInt::from(5);
        while (&den % &big2).is_zero() {
            den /= &big2;
            two += 1;
            if two > max_digits {
                return None;
            }
        }
        while (&den % &big5).is_zero() {
            den /= &big5;
            five += 1;
            if five > max_digits {
                return None;
            }
        }
        if den != BigInt::from(1) {
            return None;
        }
        let k = two.max(five);
        // num/den = num * 2^(k-two) * 5^(k-five) / 10^k
        let mantissa =
            r.numerator() * BigInt::from(2).pow(k - two) * BigInt::from(5).pow(k - five);
        Some(
            HighPrecDecimal {
                mantissa,
                exponent: -(k as i64),
                precision: max_digits.max(MIN_PRECISION),
            }
            .normalized(),
        )
    }

    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        let ten = BigInt::from(10);
        while (&self.mantissa % &ten).is_zero() {
            self.mantissa /= &ten;
            self.exponent += 1;
        }
        self
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn neg(&self) -> Self {
        HighPrecDecimal {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        HighPrecDecimal {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    /// Exact sum on the representation.
    pub fn add(&self, rhs: &Self) -> Self {
        let e = self.exponent.min(rhs.exponent);
        let lm = &self.mantissa * pow10((self.exponent - e) as u32);
        let rm = &rhs.mantissa * pow10((rhs.exponent - e) as u32);
        HighPrecDecimal {
            mantissa: lm + rm,
            exponent: e,
            precision: self.precision.min(rhs.precision),
        }
        .normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Exact product on the representation.
    pub fn mul(&self, rhs: &Self) -> Self {
        HighPrecDecimal {
            mantissa: &self.mantissa * &rhs.mantissa,
            exponent: self.exponent + rhs.exponent,
            precision: self.precision.min(rhs.precision),
        }
        .normalized()
    }

    /// Correctly rounded quotient at `digits` significant digits.
    pub fn div(&self, rhs: &Self, digits: u32) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(HighPrecDecimal::zero(digits));
        }
        let q = self.to_rational().checked_div(&rhs.to_rational())?;
        HighPrecDecimal::from_rational(&q, digits.max(MIN_PRECISION))
    }

    /// Floor-based `q`-th root, then rounding to `digits` significant digits.
    /// Requires a nonnegative value; the caller dispatches on sign.
    pub fn nth_root(&self, q: u32, digits: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("0th root".into()));
        }
        if self.is_negative() {
            return Err(Error::EvenRootOfNegative);
        }
        if self.is_zero() {
            return Ok(HighPrecDecimal::zero(digits));
        }
        let qi = q as i64;
        let u = self.exponent.rem_euclid(qi);
        let s = (self.exponent - u) / qi;
        let k = digits as i64 + GUARD as i64;
        let scaled = &self.mantissa * pow10(u as u32) * pow10((qi * k) as u32);
        let root = scaled.nth_root(q);
        Ok(HighPrecDecimal {
            mantissa: root,
            exponent: s - k,
            precision: digits + GUARD,
        }
        .round_to(digits))
    }

    /// Integer power; negative exponents go through a rounded reciprocal.
    pub fn powi(&self, exp: i64, digits: u32) -> Result<Self> {
        if exp == 0 {
            return Ok(HighPrecDecimal::from_bigint(1, digits));
        }
        if self.is_zero() {
            if exp < 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(HighPrecDecimal::zero(digits));
        }
        let mag = u32::try_from(exp.unsigned_abs())
            .map_err(|_| Error::Domain(format!("exponent {exp} out of range")))?;
        let powed = HighPrecDecimal {
            mantissa: self.mantissa.pow(mag),
            exponent: self.exponent * mag as i64,
            precision: self.precision,
        }
        .normalized();
        if exp > 0 {
            Ok(powed.round_to(digits))
        } else {
            HighPrecDecimal::from_bigint(1, digits + GUARD).div(&powed, digits)
        }
    }

    /// `x^(p/q)` for a reduced rational exponent. Even roots of negative
    /// values error; odd roots carry the sign.
    pub fn pow_rational(&self, exp: &Rational, digits: u32) -> Result<Self> {
        if exp.is_zero() {
            return Ok(HighPrecDecimal::from_bigint(1, digits));
        }
        let p = exp
            .numerator()
            .to_i64()
            .ok_or_else(|| Error::Domain("exponent numerator out of range".into()))?;
        let q = exp
            .denominator()
            .to_u32()
            .ok_or_else(|| Error::Domain("exponent denominator out of range".into()))?;
        if self.is_zero() {
            if p < 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(HighPrecDecimal::zero(digits));
        }
        let negative = self.is_negative();
        if negative && q % 2 == 0 {
            return Err(Error::EvenRootOfNegative);
        }
        let working = digits + GUARD;
        let root = self.abs().nth_root(q, working)?;
        let powed = root.powi(p, working)?;
        let signed = if negative && p.rem_euclid(2) == 1 {
            powed.neg()
        } else {
            powed
        };
        Ok(signed.round_to(digits))
    }

    /// Round (half to even) to `digits` significant digits.
    pub fn round_to(&self, digits: u32) -> Self {
        let len = digits10(&self.mantissa);
        if len <= digits as u64 {
            let mut out = self.clone();
            out.precision = digits;
            return out;
        }
        let excess = (len - digits as u64) as u32;
        let scale = pow10(excess);
        let rounded = round_half_even_div(&self.mantissa.abs(), &scale);
        let mantissa = if self.mantissa.is_negative() {
            -rounded
        } else {
            rounded
        };
        HighPrecDecimal {
            mantissa,
            exponent: self.exponent + excess as i64,
            precision: digits,
        }
        .normalized()
    }

    /// The exact rational value of the representation.
    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa * pow10(self.exponent as u32))
        } else {
            Rational::new(self.mantissa.clone(), pow10((-self.exponent) as u32))
                .expect("positive power of ten")
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64()
    }
}

impl PartialEq for HighPrecDecimal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HighPrecDecimal {}

impl PartialOrd for HighPrecDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HighPrecDecimal {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.min(other.exponent);
        let lm = &self.mantissa * pow10((self.exponent - e) as u32);
        let rm = &other.mantissa * pow10((other.exponent - e) as u32);
        lm.cmp(&rm)
    }
}

impl fmt::Display for HighPrecDecimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mantissa.is_zero() {
            return write!(f, "0.0");
        }
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let digits = self.mantissa.magnitude().to_str_radix(10);
        if self.exponent >= 0 {
            let zeros = "0".repeat(self.exponent as usize);
            return write!(f, "{sign}{digits}{zeros}.0");
        }
        let point = digits.len() as i64 + self.exponent;
        if point > 0 {
            let (int_part, frac_part) = digits.split_at(point as usize);
            write!(f, "{sign}{int_part}.{frac_part}")
        } else {
            let zeros = "0".repeat((-point) as usize);
            write!(f, "{sign}0.{zeros}{digits}")
        }
    }
}

impl FromStr for HighPrecDecimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid decimal: {s:?}"));
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i32, rest),
            None => (1, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, fr)) => (i, fr),
            None => (body, ""),
        };
        if int_part.is_empty()
            || !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
        let mantissa = if sign < 0 { -mantissa } else { mantissa };
        let sig = digits10(&mantissa).max(MIN_PRECISION as u64) as u32;
        Ok(HighPrecDecimal {
            mantissa,
            exponent: -(frac_part.len() as i64),
            precision: sig,
        }
        .normalized())
    }
}

#[derive(Serialize, Deserialize)]
struct DecimalRepr {
    value: String,
    precision: u32,
}

impl Serialize for HighPrecDecimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecimalRepr {
            value: self.to_string(),
            precision: self.precision,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HighPrecDecimal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DecimalRepr::deserialize(deserializer)?;
        let mut parsed: HighPrecDecimal = repr.value.parse().map_err(serde::de::Error::custom)?;
        parsed.precision = repr.precision.max(MIN_PRECISION);
        Ok(parsed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn repeating_decimal_rounds() {
        let third = HighPrecDecimal::from_rational(&r(1, 3), 20).unwrap();
        assert_eq!(third.to_string(), "0.33333333333333333333");
    }

    #[test]
    fn zero_renders() {
        let z = HighPrecDecimal::from_rational(&Rational::zero(), 15).unwrap();
        assert_eq!(z.to_string(), "0.0");
    }

    #[test]
    fn sqrt_two_fifteen_digits() {
        let two = HighPrecDecimal::from_bigint(2, 30);
        let root = two.nth_root(2, 15).unwrap();
        // 1.41421356237309504880... rounds up at 15 significant digits.
        let expected = Rational::new(141421356237310i64, 100_000_000_000_000i64).unwrap();
        assert_eq!(root.to_rational(), expected);
    }

    #[test]
    fn precision_floor_enforced() {
        assert!(matches!(
            HighPrecDecimal::from_rational(&r(1, 3), 10),
            Err(Error::PrecisionTooLow(10))
        ));
    }

    #[test]
    fn exact_dyadic_conversion() {
        let exact = HighPrecDecimal::try_from_rational_exact(&r(1, 64), 40).unwrap();
        assert_eq!(exact.to_rational(), r(1, 64));
        assert_eq!(exact.to_string(), "0.015625");
        assert!(HighPrecDecimal::try_from_rational_exact(&r(1, 3), 40).is_none());
    }

    #[test]
    fn cube_root_of_negative_is_signed() {
        let x = HighPrecDecimal::from_bigint(-8, 30);
        let y = x.pow_rational(&r(1, 3), 20).unwrap();
        assert_eq!(y.to_rational(), r(-2, 1));
        assert!(matches!(
            x.pow_rational(&r(1, 2), 20),
            Err(Error::EvenRootOfNegative)
        ));
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["1.4142", "-0.015625", "250.0", "0.0007"] {
            let d: HighPrecDecimal = s.parse().unwrap();
            let back: HighPrecDecimal = d.to_string().parse().unwrap();
            assert_eq!(d, back);
        }
    }

    /// Exact floor(log10(x)) for positive rationals.
    fn ilog10_floor(x: &Rational) -> i64 {
        let mut e = digits10(x.numerator()) as i64 - digits10(x.denominator()) as i64;
        let ten = r(10, 1);
        while *x < ten.pow_int(e).unwrap() {
            e -= 1;
        }
        while *x >= ten.pow_int(e + 1).unwrap() {
            e += 1;
        }
        e
    }

    proptest! {
        // Two conversions at different digit counts agree to d-2 significant
        // digits: their difference is below one unit in the (d-2)th digit.
        #[test]
        fn precision_consistency(a in 1i64..1_000_000, b in 1i64..1_000_000, d in 16u32..40) {
            let x = r(a, b);
            let lo = HighPrecDecimal::from_rational(&x, d).unwrap();
            let hi = HighPrecDecimal::from_rational(&x, d + 10).unwrap();
            let diff = lo.sub(&hi).abs().to_rational();
            let e = ilog10_floor(&x);
            let tol = r(10, 1).pow_int(e - d as i64 + 3).unwrap();
            prop_assert!(diff <= tol, "diff {} tol {}", diff, tol);
        }

        #[test]
        fn add_sub_round_trip(a in -10_000i64..10_000, b in -10_000i64..10_000, ea in -6i64..6, eb in -6i64..6) {
            let x = HighPrecDecimal { mantissa: BigInt::from(a), exponent: ea, precision: 30 }.normalized();
            let y = HighPrecDecimal { mantissa: BigInt::from(b), exponent: eb, precision: 30 }.normalized();
            prop_assert_eq!(x.add(&y).sub(&y), x);
        }

        #[test]
        fn root_then_power_is_close(n in 2u64..10_000, q in 2u32..6) {
            let x = HighPrecDecimal::from_bigint(n as i64, 40);
            let root = x.nth_root(q, 30).unwrap();
            let back = root.powi(q as i64, 40).unwrap();
            let diff = back.sub(&x).abs().to_rational();
            let tol = Rational::new(1, BigInt::from(10u32).pow(24)).unwrap();
            prop_assert!(diff <= tol, "n={} q={} diff={}", n, q, diff);
        }
    }
}
