//! A small univariate expression language for test functions.
//!
//! Grammar (byte offsets reported on error):
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := power (('*'|'/') power)*
//! power    := unary ('^' exponent)*            -- left associative
//! unary    := '-' unary | primary
//! primary  := NUMBER | 'x' | '(' expr ')'
//!           | 'abs' '(' expr ')' | 'sqrt' '(' expr ')'
//!           | 'pow' '(' expr ',' exponent ')'
//! exponent := ['-'] (NUMBER ['/' NUMBER] | '(' exponent ')')
//! NUMBER   := digits ['.' digits]
//! ```
//!
//! Unary minus binds tighter than `^`, so `-x^2` is `(-x)^2`. Exponents are
//! rational literals only; `sqrt(e)` is sugar for `e^(1/2)`.
//!
//! Evaluation is exact whenever every node is rational-closed at the point
//! (rational operations, `abs`, and perfect roots); otherwise the whole
//! expression is evaluated in high-precision decimals at the requested
//! working precision — no mixed-mode rounding inside one evaluation.

use std::fmt;

use crate::decimal::HighPrecDecimal;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::value::{rational_pow_exact, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Var,
    Lit(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Abs(Box<Expr>),
    Pow(Box<Expr>, Rational),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr> {
        if text.trim().is_empty() {
            return Err(Error::Syntax {
                offset: 0,
                message: "empty expression".into(),
            });
        }
        let tokens = lex(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.expr()?;
        parser.expect_eof()?;
        Ok(expr)
    }

    /// Exact evaluation at a rational point; `Ok(None)` means some node is
    /// not rational-closed there and the decimal path must be used.
    pub fn eval_exact(&self, x: &Rational) -> Result<Option<Rational>> {
        Ok(Some(match self {
            Expr::Var => x.clone(),
            Expr::Lit(r) => r.clone(),
            Expr::Add(a, b) => match (a.eval_exact(x)?, b.eval_exact(x)?) {
                (Some(a), Some(b)) => a + b,
                _ => return Ok(None),
            },
            Expr::Sub(a, b) => match (a.eval_exact(x)?, b.eval_exact(x)?) {
                (Some(a), Some(b)) => a - b,
                _ => return Ok(None),
            },
            Expr::Mul(a, b) => match (a.eval_exact(x)?, b.eval_exact(x)?) {
                (Some(a), Some(b)) => a * b,
                _ => return Ok(None),
            },
            Expr::Div(a, b) => match (a.eval_exact(x)?, b.eval_exact(x)?) {
                (Some(a), Some(b)) => a.checked_div(&b)?,
                _ => return Ok(None),
            },
            Expr::Neg(a) => match a.eval_exact(x)? {
                Some(a) => -a,
                None => return Ok(None),
            },
            Expr::Abs(a) => match a.eval_exact(x)? {
                Some(a) => a.abs(),
                None => return Ok(None),
            },
            Expr::Pow(a, e) => match a.eval_exact(x)? {
                Some(a) => match rational_pow_exact(&a, e)? {
                    Some(v) => v,
                    None => return Ok(None),
                },
                None => return Ok(None),
            },
        }))
    }

    /// Decimal evaluation at a decimal point, carrying guard digits
    /// internally and rounding the result to `precision`.
    pub fn eval_decimal(&self, x: &HighPrecDecimal, precision: u32) -> Result<HighPrecDecimal> {
        let working = precision + 8;
        Ok(self.eval_decimal_inner(x, working)?.round_to(precision))
    }

    fn eval_decimal_inner(&self, x: &HighPrecDecimal, working: u32) -> Result<HighPrecDecimal> {
        Ok(match self {
            Expr::Var => x.clone(),
            Expr::Lit(r) => Value::Exact(r.clone()).to_decimal(working),
            Expr::Add(a, b) => a
                .eval_decimal_inner(x, working)?
                .add(&b.eval_decimal_inner(x, working)?),
            Expr::Sub(a, b) => a
                .eval_decimal_inner(x, working)?
                .sub(&b.eval_decimal_inner(x, working)?),
            Expr::Mul(a, b) => a
                .eval_decimal_inner(x, working)?
                .mul(&b.eval_decimal_inner(x, working)?),
            Expr::Div(a, b) => a
                .eval_decimal_inner(x, working)?
                .div(&b.eval_decimal_inner(x, working)?, working)?,
            Expr::Neg(a) => a.eval_decimal_inner(x, working)?.neg(),
            Expr::Abs(a) => a.eval_decimal_inner(x, working)?.abs(),
            Expr::Pow(a, e) => a.eval_decimal_inner(x, working)?.pow_rational(e, working)?,
        })
    }

    /// Evaluate at a rational point: exact when rational-closed, decimal
    /// otherwise.
    pub fn evaluate(&self, x: &Rational, precision: u32) -> Result<Value> {
        match self.eval_exact(x)? {
            Some(r) => Ok(Value::Exact(r)),
            None => {
                let xd = Value::Exact(x.clone()).to_decimal(precision);
                Ok(Value::Decimal(self.eval_decimal(&xd, precision)?))
            }
        }
    }

    /// Coefficients `[c0, c1, ..]` when the expression is a polynomial with
    /// rational coefficients; conservative (`abs`, roots, fractional powers
    /// and non-constant divisors all yield `None`).
    pub fn as_polynomial(&self) -> Option<Vec<Rational>> {
        const MAX_DEGREE: usize = 64;
        let coeffs = match self {
            Expr::Var => vec![Rational::zero(), Rational::one()],
            Expr::Lit(r) => vec![r.clone()],
            Expr::Add(a, b) => poly_add(&a.as_polynomial()?, &b.as_polynomial()?, false),
            Expr::Sub(a, b) => poly_add(&a.as_polynomial()?, &b.as_polynomial()?, true),
            Expr::Mul(a, b) => {
                let (pa, pb) = (a.as_polynomial()?, b.as_polynomial()?);
                if pa.len() + pb.len() > MAX_DEGREE {
                    return None;
                }
                poly_mul(&pa, &pb)
            }
            Expr::Div(a, b) => {
                let pb = trim(b.as_polynomial()?);
                if pb.len() != 1 || pb[0].is_zero() {
                    return None;
                }
                a.as_polynomial()?
                    .iter()
                    .map(|c| c.checked_div(&pb[0]).ok())
                    .collect::<Option<Vec<_>>>()?
            }
            Expr::Neg(a) => a.as_polynomial()?.iter().map(|c| -c).collect(),
            Expr::Abs(_) => return None,
            Expr::Pow(a, e) => {
                if !e.is_integer() || e.is_negative() {
                    return None;
                }
                let k: u64 = e.whole_part().try_into().ok()?;
                if k > 16 {
                    return None;
                }
                let base = a.as_polynomial()?;
                let mut acc = vec![Rational::one()];
                for _ in 0..k {
                    if acc.len() + base.len() > MAX_DEGREE {
                        return None;
                    }
                    acc = poly_mul(&acc, &base);
                }
                acc
            }
        };
        Some(trim(coeffs))
    }
}

fn poly_add(a: &[Rational], b: &[Rational], subtract: bool) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = out[i].clone() + c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = if subtract {
            out[i].clone() - c
        } else {
            out[i].clone() + c
        };
    }
    out
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + ca * cb;
        }
    }
    out
}

fn trim(mut coeffs: Vec<Rational>) -> Vec<Rational> {
    while coeffs.len() > 1 && coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(Rational::zero());
    }
    coeffs
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eof,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(Error::Syntax {
                            offset: i.min(bytes.len()),
                            message: "expected digits after decimal point".into(),
                        });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let value: Rational = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("invalid number {text:?}"),
                })?;
                out.push((Tok::Num(value), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!(
                        "unexpected character {:?}",
                        src[start..].chars().next().unwrap()
                    ),
                });
            }
        }
        i += 1;
    }
    out.push((Tok::Eof, bytes.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let (t, off) = self.bump();
        if t == tok {
            Ok(())
        } else {
            Err(self.err(off, format!("expected {what}")))
        }
    }

    fn expect_eof(&mut self) -> Result<()> {
        let (t, off) = self.peek().clone();
        if t == Tok::Eof {
            Ok(())
        } else {
            Err(self.err(off, "unexpected trailing input"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.unary()?;
        while self.peek().0 == Tok::Caret {
            self.bump();
            let exp = self.exponent()?;
            base = Expr::Pow(Box::new(base), exp);
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().0 == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, off) = self.bump();
        match tok {
            Tok::Num(n) => Ok(Expr::Lit(n)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::Var),
                "abs" => {
                    self.expect(Tok::LParen, "'(' after abs")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Abs(Box::new(inner)))
                }
                "sqrt" => {
                    self.expect(Tok::LParen, "'(' after sqrt")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Pow(
                        Box::new(inner),
                        Rational::new(1, 2).expect("nonzero"),
                    ))
                }
                "pow" => {
                    self.expect(Tok::LParen, "'(' after pow")?;
                    let base = self.expr()?;
                    self.expect(Tok::Comma, "','")?;
                    let exp = self.exponent()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Expr::Pow(Box::new(base), exp))
                }
                _ => Err(self.err(off, format!("unknown identifier {name:?}"))),
            },
            _ => Err(self.err(off, "expected a number, 'x', or '('")),
        }
    }

    /// Rational-literal exponents only.
    fn exponent(&mut self) -> Result<Rational> {
        let (tok, off) = self.bump();
        match tok {
            Tok::Minus => Ok(-self.exponent()?),
            Tok::LParen => {
                let inner = self.exponent()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Num(n) => {
                if self.peek().0 == Tok::Slash {
                    self.bump();
                    let (dtok, doff) = self.bump();
                    match dtok {
                        Tok::Num(d) => {
                            if d.is_zero() {
                                Err(self.err(doff, "zero denominator in exponent"))
                            } else {
                                Ok(n / d)
                            }
                        }
                        _ => Err(self.err(doff, "expected denominator")),
                    }
                } else {
                    Ok(n)
                }
            }
            _ => Err(self.err(off, "non-rational exponent")),
        }
    }
}

// ---------------------------------------------------------------------------
// Pretty-printing
// ---------------------------------------------------------------------------

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Neg(..) => 4,
            Expr::Var | Expr::Lit(_) | Expr::Abs(..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Var => write!(f, "x"),
            Expr::Lit(r) => write!(f, "{}", literal_string(r)),
            Expr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "+")?;
                b.fmt_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, "-")?;
                b.fmt_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "/")?;
                b.fmt_prec(f, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 4)
            }
            Expr::Abs(a) => {
                write!(f, "abs(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")
            }
            Expr::Pow(a, e) => {
                a.fmt_prec(f, 4)?;
                write!(f, "^{}", exponent_string(e))
            }
        }
    }
}

/// Literals print as integers or finite decimals so they re-lex as a single
/// number token. Rationals with other denominators (only constructible
/// programmatically) fall back to `p/q`, which re-parses as a quotient.
fn literal_string(r: &Rational) -> String {
    if r.is_integer() {
        return r.numerator().to_string();
    }
    match HighPrecDecimal::try_from_rational_exact(r, 30) {
        Some(d) => d.to_string(),
        None => format!("{r}"),
    }
}

fn exponent_string(e: &Rational) -> String {
    if e.is_integer() && !e.is_negative() {
        e.numerator().to_string()
    } else if e.is_integer() {
        format!("({})", e.numerator())
    } else {
        format!("({}/{})", e.numerator(), e.denominator())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    fn parse(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn precedence_examples() {
        let e = parse("x^2 + 3*x");
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Pow(Box::new(Expr::Var), r(2, 1))),
                Box::new(Expr::Mul(
                    Box::new(Expr::Lit(r(3, 1))),
                    Box::new(Expr::Var)
                )),
            )
        );

        let e = parse("abs(x)^(1/2)");
        assert_eq!(
            e,
            Expr::Pow(Box::new(Expr::Abs(Box::new(Expr::Var))), r(1, 2))
        );

        // Unary minus binds tighter than '^'.
        let e = parse("-x^2");
        assert_eq!(
            e,
            Expr::Pow(Box::new(Expr::Neg(Box::new(Expr::Var))), r(2, 1))
        );
    }

    #[test]
    fn syntax_error_offsets() {
        match Expr::parse("x^^2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match Expr::parse("x^x") {
            Err(Error::Syntax { offset, message }) => {
                assert_eq!(offset, 2);
                assert!(message.contains("non-rational exponent"));
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("x +").is_err());
        assert!(Expr::parse("y").is_err());
        assert!(Expr::parse("x x").is_err());
    }

    #[test]
    fn evaluate_examples() {
        let e = parse("x^2+3*x");
        assert_eq!(e.evaluate(&r(1, 2), 50).unwrap(), Value::Exact(r(7, 4)));

        let e = parse("abs(x)^(1/2)");
        assert_eq!(e.evaluate(&r(1, 4), 50).unwrap(), Value::Exact(r(1, 2)));

        // Not a perfect square: falls to the decimal path as a whole.
        let v = e.evaluate(&r(1, 3), 50).unwrap();
        assert!(!v.is_exact());
        // (1/sqrt(3))^2 should reproduce 1/3 to well beyond 40 digits.
        let sq = v.mul(&v).to_rational() - r(1, 3);
        assert!(sq.abs() <= r(1, 10).pow_int(40).unwrap());
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e = parse("1/x");
        assert!(matches!(
            e.evaluate(&Rational::zero(), 50),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn even_root_of_negative_is_reported() {
        let e = parse("sqrt(x)");
        assert!(matches!(
            e.evaluate(&r(-1, 4), 50),
            Err(Error::EvenRootOfNegative)
        ));
    }

    #[test]
    fn polynomial_extraction() {
        assert_eq!(
            parse("x^2+3*x").as_polynomial().unwrap(),
            vec![r(0, 1), r(3, 1), r(1, 1)]
        );
        assert_eq!(
            parse("(x+1)*(x-1)").as_polynomial().unwrap(),
            vec![r(-1, 1), r(0, 1), r(1, 1)]
        );
        assert_eq!(parse("7").as_polynomial().unwrap(), vec![r(7, 1)]);
        assert_eq!(
            parse("x^3-x").as_polynomial().unwrap(),
            vec![r(0, 1), r(-1, 1), r(0, 1), r(1, 1)]
        );
        assert!(parse("abs(x)").as_polynomial().is_none());
        assert!(parse("x^(1/2)").as_polynomial().is_none());
        assert_eq!(
            parse("x/2").as_polynomial().unwrap(),
            vec![r(0, 1), r(1, 2)]
        );
    }

    fn arb_literal() -> impl Strategy<Value = Rational> {
        (
            0i64..1000,
            prop_oneof![Just(1i64), Just(2), Just(4), Just(10), Just(100)],
        )
            .prop_map(|(n, d)| r(n, d))
    }

    fn arb_exponent() -> impl Strategy<Value = Rational> {
        prop_oneof![
            (-6i64..7).prop_map(|n| r(n, 1)),
            Just(r(1, 2)),
            Just(r(3, 2)),
            Just(r(-1, 2)),
            Just(r(2, 3)),
        ]
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![Just(Expr::Var), arb_literal().prop_map(Expr::Lit)];
        leaf.prop_recursive(5, 32, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Abs(Box::new(a))),
                (inner, arb_exponent()).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
            ]
        })
    }

    proptest! {
        // Pretty-printing then reparsing reproduces the AST exactly.
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = Expr::parse(&printed).unwrap();
            prop_assert_eq!(reparsed, e, "printed as {}", printed);
        }
    }
}
