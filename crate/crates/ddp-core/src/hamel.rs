//! Simulated pathological additive functions.
//!
//! A genuinely discontinuous additive function on ℝ needs a Hamel basis and
//! is not constructible. What *is* constructible is its restriction to the
//! rational span of finitely many reals that are linearly independent over ℚ:
//! the basis here is always `1` together with square roots of distinct
//! square-free integers, and the map `A(Σ qᵢ·bᵢ) = Σ qᵢ·sᵢ` is ℚ-linear on
//! that span by construction. On such a slice every prediction about the
//! additive part of a decomposition can be checked exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decimal::HighPrecDecimal;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A span basis element: `1` or `sqrt(d)` for a square-free integer `d > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisElement {
    One,
    Sqrt(u64),
}

/// Largest radicand we are willing to certify square-free by trial division.
const MAX_RADICAND: u64 = 1_000_000_000_000;

impl BasisElement {
    pub fn sqrt(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(Error::UnsupportedDescriptor(format!(
                "sqrt({d}): radicand must exceed 1"
            )));
        }
        if d > MAX_RADICAND {
            return Err(Error::UnsupportedDescriptor(format!(
                "sqrt({d}): radicand too large to validate"
            )));
        }
        let mut f = 2u64;
        while f * f <= d {
            if d % (f * f) == 0 {
                return Err(Error::UnsupportedDescriptor(format!(
                    "sqrt({d}): {d} is not square-free (divisible by {f}^2)"
                )));
            }
            f += 1;
        }
        Ok(BasisElement::Sqrt(d))
    }

    /// Correctly rounded decimal value at `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> Result<HighPrecDecimal> {
        match self {
            BasisElement::One => Ok(HighPrecDecimal::from_bigint(1, digits)),
            BasisElement::Sqrt(d) => {
                HighPrecDecimal::from_bigint(*d as i64, digits + 8).nth_root(2, digits)
            }
        }
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::One => write!(f, "1"),
            BasisElement::Sqrt(d) => write!(f, "sqrt{d}"),
        }
    }
}

impl FromStr for BasisElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(BasisElement::One);
        }
        let body = s
            .strip_prefix("sqrt")
            .ok_or_else(|| Error::UnsupportedDescriptor(s.to_string()))?;
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let d: u64 = body
            .parse()
            .map_err(|_| Error::UnsupportedDescriptor(s.to_string()))?;
        BasisElement::sqrt(d)
    }
}

/// A ℚ-linear map on the span of a basis: `A(Σ qᵢ·bᵢ) = Σ qᵢ·sᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamelAdditive {
    basis: Vec<BasisElement>,
    slopes: Vec<Rational>,
}

impl HamelAdditive {
    pub fn new(basis: Vec<BasisElement>, slopes: Vec<Rational>) -> Result<Self> {
        if basis.is_empty() || basis[0] != BasisElement::One {
            return Err(Error::Domain("basis must start with 1".into()));
        }
        if basis.len() != slopes.len() {
            return Err(Error::Domain(format!(
                "basis has {} elements but {} slopes were given",
                basis.len(),
                slopes.len()
            )));
        }
        for (i, b) in basis.iter().enumerate() {
            if let BasisElement::Sqrt(d) = b {
                BasisElement::sqrt(*d)?;
            }
            if basis[..i].contains(b) {
                return Err(Error::Domain(format!("duplicate basis element {b}")));
            }
        }
        Ok(HamelAdditive { basis, slopes })
    }

    /// Parses the inline form `basis=1,sqrt2;slopes=0,5`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in hamel spec {spec:?}"));
        let (basis_part, slopes_part) = spec
            .split_once(';')
            .ok_or_else(|| bad("missing ';' separator"))?;
        let basis_list = basis_part
            .trim()
            .strip_prefix("basis=")
            .ok_or_else(|| bad("expected basis=..."))?;
        let slopes_list = slopes_part
            .trim()
            .strip_prefix("slopes=")
            .ok_or_else(|| bad("expected slopes=..."))?;
        let basis = basis_list
            .split(',')
            .map(|tok| tok.trim().parse())
            .collect::<Result<Vec<BasisElement>>>()?;
        let slopes = slopes_list
            .split(',')
            .map(|tok| tok.trim().parse())
            .collect::<Result<Vec<Rational>>>()?;
        HamelAdditive::new(basis, slopes)
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn span_point(&self, coords: Vec<Rational>) -> Result<SpanPoint> {
        SpanPoint::new(self.basis.clone(), coords)
    }

    /// The rational point `r` as the span point `r·1 + 0·b₁ + ...`.
    pub fn rational_point(&self, r: &Rational) -> SpanPoint {
        let mut coords = vec![Rational::zero(); self.basis.len()];
        coords[0] = r.clone();
        SpanPoint {
            basis: self.basis.clone(),
            coords,
        }
    }

    /// Exact value of the additive map at a span point.
    pub fn apply(&self, point: &SpanPoint) -> Result<Rational> {
        if point.basis != self.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(point
            .coords
            .iter()
            .zip(&self.slopes)
            .map(|(q, s)| q * s)
            .sum())
    }
}

impl fmt::Display for HamelAdditive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis: Vec<String> = self.basis.iter().map(|b| b.to_string()).collect();
        let slopes: Vec<String> = self.slopes.iter().map(|s| s.to_string()).collect();
        write!(f, "basis={};slopes={}", basis.join(","), slopes.join(","))
    }
}

/// A point of the span, given by its rational coordinates in a basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanPoint {
    basis: Vec<BasisElement>,
    coords: Vec<Rational>,
}

impl SpanPoint {
    pub fn new(basis: Vec<BasisElement>, coords: Vec<Rational>) -> Result<Self> {
        if basis.is_empty() || basis[0] != BasisElement::One {
            return Err(Error::Domain("basis must start with 1".into()));
        }
        if basis.len() != coords.len() {
            return Err(Error::Domain(format!(
                "span point has {} coordinates for a basis of {}",
                coords.len(),
                basis.len()
            )));
        }
        Ok(SpanPoint { basis, coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// `Some(q₀)` when all irrational coordinates vanish.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords[1..].iter().all(Rational::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Coordinate-wise sum (the span is closed under addition).
    pub fn add(&self, other: &SpanPoint) -> Result<SpanPoint> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SpanPoint {
            basis: self.basis.clone(),
            coords,
        })
    }

    /// Numeric value `Σ qᵢ·bᵢ` at `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> Result<HighPrecDecimal> {
        let working = digits + 8;
        let mut acc = HighPrecDecimal::zero(working);
        for (q, b) in self.coords.iter().zip(&self.basis) {
            if q.is_zero() {
                continue;
            }
            let coeff = crate::value::Value::Exact(q.clone()).to_decimal(working);
            acc = acc.add(&coeff.mul(&b.to_decimal(working)?));
        }
        Ok(acc.round_to(digits))
    }
}

impl fmt::Display for SpanPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .zip(&self.basis)
            .map(|(q, b)| format!("{q}*{b}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    fn sample() -> HamelAdditive {
        HamelAdditive::new(
            vec![BasisElement::One, BasisElement::Sqrt(2)],
            vec![Rational::zero(), r(5, 1)],
        )
        .unwrap()
    }

    #[test]
    fn square_free_validation() {
        assert!(BasisElement::sqrt(2).is_ok());
        assert!(BasisElement::sqrt(10).is_ok());
        assert!(BasisElement::sqrt(8).is_err());
        assert!(BasisElement::sqrt(9).is_err());
        assert!(BasisElement::sqrt(1).is_err());
    }

    #[test]
    fn spec_round_trip() {
        let add = HamelAdditive::parse_spec("basis=1,sqrt2;slopes=0,5").unwrap();
        assert_eq!(add, sample());
        let again = HamelAdditive::parse_spec(&add.to_string()).unwrap();
        assert_eq!(again, add);
    }

    #[test]
    fn apply_is_linear_in_coordinates() {
        let add = sample();
        let p = add.span_point(vec![r(1, 2), r(3, 1)]).unwrap();
        assert_eq!(add.apply(&p).unwrap(), r(15, 1));
    }

    #[test]
    fn basis_mismatch_rejected() {
        let add = sample();
        let other = SpanPoint::new(
            vec![BasisElement::One, BasisElement::Sqrt(3)],
            vec![r(1, 1), r(1, 1)],
        )
        .unwrap();
        assert!(matches!(add.apply(&other), Err(Error::BasisMismatch)));
    }

    #[test]
    fn span_point_numeric_value() {
        // -1 + sqrt(2) = 0.41421356...
        let p = SpanPoint::new(
            vec![BasisElement::One, BasisElement::Sqrt(2)],
            vec![r(-1, 1), r(1, 1)],
        )
        .unwrap();
        let v = p.to_decimal(30).unwrap().to_rational();
        let lo = r(41421356, 100_000_000);
        let hi = r(41421357, 100_000_000);
        assert!(v > lo && v < hi, "got {v}");
    }

    proptest! {
        // Additivity is exact on the span: A(p + q) = A(p) + A(q).
        #[test]
        fn additivity_exact(a0 in -50i64..50, a1 in -50i64..50, b0 in -50i64..50, b1 in -50i64..50, d in 1i64..20) {
            let add = sample();
            let p = add.span_point(vec![r(a0, d), r(a1, d)]).unwrap();
            let q = add.span_point(vec![r(b0, d), r(b1, d)]).unwrap();
            let lhs = add.apply(&p.add(&q).unwrap()).unwrap();
            let rhs = add.apply(&p).unwrap() + add.apply(&q).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
