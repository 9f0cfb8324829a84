//! Elements of the three supported quotient fields — ℚ, ℚ(√d), ℚ(Y) — with
//! exact arithmetic, canonical forms, and the shared text syntax used by the
//! CLI and reports (`3/4`, `1+2*w`, `2*Y^2-3`, `(Y+1)/(2*Y)`).
//!
//! Values are plain field elements; which ring they are integral over is a
//! question answered against a `Domain` (see the ideal layer for localized
//! rings).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::ints;
use crate::arith::upoly::UPoly;
use crate::domain::Domain;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Rat(BigRational),
    Quad {
        d: i64,
        x: BigRational,
        y: BigRational,
    },
    Fun {
        num: UPoly,
        den: UPoly,
    },
}

/// Which quotient field a domain's elements live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rat,
    Quad(i64),
    Fun,
}

pub fn field_kind(domain: &Domain) -> FieldKind {
    match domain.base() {
        Domain::Int | Domain::Rat => FieldKind::Rat,
        Domain::Quad { d } | Domain::QuadField { d } => FieldKind::Quad(*d),
        Domain::IntPoly | Domain::RatPoly | Domain::RatFunc => FieldKind::Fun,
        Domain::Localized(_) => unreachable!("base() is plain"),
    }
}

impl Value {
    pub fn zero(kind: FieldKind) -> Value {
        Value::from_rational(kind, BigRational::zero())
    }

    pub fn one(kind: FieldKind) -> Value {
        Value::from_rational(kind, BigRational::one())
    }

    pub fn from_rational(kind: FieldKind, q: BigRational) -> Value {
        match kind {
            FieldKind::Rat => Value::Rat(q),
            FieldKind::Quad(d) => Value::Quad {
                d,
                x: q,
                y: BigRational::zero(),
            },
            FieldKind::Fun => fun_make(
                UPoly::constant(q),
                UPoly::one(),
            ),
        }
    }

    pub fn from_int(kind: FieldKind, n: i64) -> Value {
        Value::from_rational(kind, BigRational::from(BigInt::from(n)))
    }

    /// The generator w of ℚ(√d).
    pub fn gen_w(d: i64) -> Value {
        Value::Quad {
            d,
            x: BigRational::zero(),
            y: BigRational::one(),
        }
    }

    /// The variable Y of ℚ(Y).
    pub fn var_y() -> Value {
        fun_make(UPoly::var(), UPoly::one())
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Value::Rat(_) => FieldKind::Rat,
            Value::Quad { d, .. } => FieldKind::Quad(*d),
            Value::Fun { .. } => FieldKind::Fun,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Rat(q) => q.is_zero(),
            Value::Quad { x, y, .. } => x.is_zero() && y.is_zero(),
            Value::Fun { num, .. } => num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Rat(q) => q.is_one(),
            Value::Quad { x, y, .. } => x.is_one() && y.is_zero(),
            Value::Fun { num, den } => num.is_one() && den.is_one(),
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (
                Value::Quad { d, x, y },
                Value::Quad { d: d2, x: x2, y: y2 },
            ) => {
                assert_eq!(d, d2, "mixed quadratic fields");
                Value::Quad {
                    d: *d,
                    x: x + x2,
                    y: y + y2,
                }
            }
            (Value::Fun { num: n1, den: d1 }, Value::Fun { num: n2, den: d2 }) => {
                fun_make(n1.mul(d2).add(&n2.mul(d1)), d1.mul(d2))
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn neg(&self) -> Value {
        match self {
            Value::Rat(q) => Value::Rat(-q),
            Value::Quad { d, x, y } => Value::Quad {
                d: *d,
                x: -x,
                y: -y,
            },
            Value::Fun { num, den } => Value::Fun {
                num: num.neg(),
                den: den.clone(),
            },
        }
    }

    pub fn sub(&self, other: &Value) -> Value {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (
                Value::Quad { d, x, y },
                Value::Quad { d: d2, x: x2, y: y2 },
            ) => {
                assert_eq!(d, d2, "mixed quadratic fields");
                let dd = BigRational::from(BigInt::from(*d));
                Value::Quad {
                    d: *d,
                    x: x * x2 + &dd * (y * y2),
                    y: x * y2 + y * x2,
                }
            }
            (Value::Fun { num: n1, den: d1 }, Value::Fun { num: n2, den: d2 }) => {
                fun_make(n1.mul(n2), d1.mul(d2))
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn inverse(&self) -> Result<Value> {
        if self.is_zero() {
            return Err(Error::InexactDivision("inverse of zero".into()));
        }
        Ok(match self {
            Value::Rat(q) => Value::Rat(q.recip()),
            Value::Quad { d, x, y } => {
                // 1/(x + y w) = (x - y w)/(x² - d y²)
                let dd = BigRational::from(BigInt::from(*d));
                let norm = x * x - &dd * (y * y);
                assert!(!norm.is_zero(), "nonzero element has nonzero norm");
                Value::Quad {
                    d: *d,
                    x: x / &norm,
                    y: -(y / &norm),
                }
            }
            Value::Fun { num, den } => fun_make(den.clone(), num.clone()),
        })
    }

    pub fn div(&self, other: &Value) -> Result<Value> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: i32) -> Result<Value> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = Value::one(self.kind());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Integral over a plain (non-localized, non-field) domain? Fields are
    /// handled too (always true); localized domains are decided at the ideal
    /// layer, which owns colon computations.
    pub fn is_integral_plain(&self, domain: &Domain) -> bool {
        match domain {
            Domain::Int => matches!(self, Value::Rat(q) if q.is_integer()),
            Domain::Rat => true,
            Domain::Quad { .. } => {
                matches!(self, Value::Quad { x, y, .. } if x.is_integer() && y.is_integer())
            }
            Domain::QuadField { .. } | Domain::RatFunc => true,
            Domain::IntPoly => matches!(self, Value::Fun { den, .. } if den.is_one()),
            Domain::RatPoly => {
                matches!(self, Value::Fun { den, .. } if den.degree() == Some(0))
            }
            Domain::Localized(_) => panic!("localized integrality is decided at the ideal layer"),
        }
    }

    /// Write self = n / s with n, s integral over the plain base domain and
    /// s a "positive" denominator (rational integer for ℤ and ℤ[√d];
    /// positive-leading-coefficient polynomial for the Y-backends).
    pub fn split_fraction(&self, base: &Domain) -> (Value, Value) {
        match (base, self) {
            (Domain::Int, Value::Rat(q)) => (
                Value::Rat(BigRational::from(q.numer().clone())),
                Value::Rat(BigRational::from(q.denom().clone())),
            ),
            (Domain::Quad { d }, Value::Quad { x, y, .. }) => {
                let m = ints::lcm(x.denom(), y.denom());
                let mq = BigRational::from(m);
                (
                    Value::Quad {
                        d: *d,
                        x: x * &mq,
                        y: y * &mq,
                    },
                    Value::Quad {
                        d: *d,
                        x: mq,
                        y: BigRational::zero(),
                    },
                )
            }
            (Domain::IntPoly | Domain::RatPoly, Value::Fun { num, den }) => (
                Value::Fun {
                    num: num.clone(),
                    den: UPoly::one(),
                },
                Value::Fun {
                    num: den.clone(),
                    den: UPoly::one(),
                },
            ),
            (d, v) if d.is_field() => (v.clone(), Value::one(v.kind())),
            _ => panic!("split_fraction: unsupported pairing"),
        }
    }
}

/// Canonical rational-function constructor: integral coprime numerator and
/// denominator, denominator with positive leading coefficient.
pub fn fun_make(num: UPoly, den: UPoly) -> Value {
    assert!(!den.is_zero(), "rational function with zero denominator");
    if num.is_zero() {
        return Value::Fun {
            num: UPoly::zero(),
            den: UPoly::one(),
        };
    }
    let l = ints::lcm(&num.denominator_lcm(), &den.denominator_lcm());
    let lq = BigRational::from(l);
    let num = num.scale(&lq);
    let den = den.scale(&lq);
    let g = num.gcd_zy(&den);
    let mut num = num.exact_div(&g).expect("gcd divides");
    let mut den = den.exact_div(&g).expect("gcd divides");
    if den.leading().unwrap().is_negative() {
        num = num.neg();
        den = den.neg();
    }
    Value::Fun { num, den }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

fn fmt_rat(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

fn rat_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Polynomial in one display variable, descending degree, `*` and `^`
/// spelled out, unit coefficients suppressed.
pub fn poly_to_string(p: &UPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let deg = p.degree().unwrap();
    for k in (0..=deg).rev() {
        let c = p.coeff(k);
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push('-');
        } else {
            out.push('+');
        }
        let coeff_part = if k > 0 && mag.is_one() {
            String::new()
        } else {
            rat_to_string(&mag)
        };
        let var_part = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        match (coeff_part.is_empty(), var_part.is_empty()) {
            (false, false) => {
                out.push_str(&coeff_part);
                out.push('*');
                out.push_str(&var_part);
            }
            (true, false) => out.push_str(&var_part),
            (false, true) => out.push_str(&coeff_part),
            (true, true) => unreachable!(),
        }
    }
    out
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Rat(q) => fmt_rat(q, f),
            Value::Quad { x, y, .. } => {
                if y.is_zero() {
                    return fmt_rat(x, f);
                }
                let wterm = |mag: &BigRational| -> String {
                    if mag.is_one() {
                        "w".to_string()
                    } else {
                        format!("{}*w", rat_to_string(mag))
                    }
                };
                if x.is_zero() {
                    if y.is_negative() {
                        return write!(f, "-{}", wterm(&y.abs()));
                    }
                    return write!(f, "{}", wterm(y));
                }
                fmt_rat(x, f)?;
                if y.is_negative() {
                    write!(f, "-{}", wterm(&y.abs()))
                } else {
                    write!(f, "+{}", wterm(y))
                }
            }
            Value::Fun { num, den } => {
                if den.degree() == Some(0) {
                    let q = den.coeff(0);
                    let scaled = num.scale(&q.recip());
                    write!(f, "{}", poly_to_string(&scaled, "Y"))
                } else {
                    write!(
                        f,
                        "({})/({})",
                        poly_to_string(num, "Y"),
                        poly_to_string(den, "Y")
                    )
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing: a shared expression grammar covering plain elements and
// polynomials in X over them.
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := ('-'|'+')* primary ('^' uint)?
//   primary := INT | 'w' | 'Y' | 'X' | '(' expr ')'
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    kind: FieldKind,
    allow_x: bool,
}

/// Polynomial in X with Value coefficients, ascending, trimmed.
type XVec = Vec<Value>;

fn xv_trim(mut v: XVec) -> XVec {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn xv_const(v: Value) -> XVec {
    xv_trim(vec![v])
}

fn xv_add(kind: FieldKind, a: &XVec, b: &XVec) -> XVec {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| Value::zero(kind));
        let y = b.get(i).cloned().unwrap_or_else(|| Value::zero(kind));
        out.push(x.add(&y));
    }
    xv_trim(out)
}

fn xv_neg(a: &XVec) -> XVec {
    a.iter().map(|c| c.neg()).collect()
}

fn xv_mul(kind: FieldKind, a: &XVec, b: &XVec) -> XVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Value::zero(kind); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    xv_trim(out)
}

impl<'a> Parser<'a> {
    fn new(s: &'a str, kind: FieldKind, allow_x: bool) -> Self {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
            kind,
            allow_x,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expr(&mut self) -> Result<XVec> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = xv_add(self.kind, &acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = xv_add(self.kind, &acc, &xv_neg(&t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<XVec> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.factor()?;
                    acc = xv_mul(self.kind, &acc, &t);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let t = self.factor()?;
                    if t.len() > 1 {
                        return Err(self.err("cannot divide by a polynomial in X"));
                    }
                    let d = t
                        .first()
                        .cloned()
                        .ok_or_else(|| self.err("division by zero"))?;
                    let inv = d.inverse().map_err(|e| self.err(&e.to_string()))?;
                    acc = xv_mul(self.kind, &acc, &xv_const(inv));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<XVec> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(xv_neg(&self.factor()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            _ => {
                let base = self.primary()?;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.uint()?;
                    let mut acc = xv_const(Value::one(self.kind));
                    for _ in 0..e {
                        acc = xv_mul(self.kind, &acc, &base);
                    }
                    Ok(acc)
                } else {
                    Ok(base)
                }
            }
        }
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected exponent"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| self.err("exponent too large"))
    }

    fn primary(&mut self) -> Result<XVec> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'w') => {
                if !matches!(self.kind, FieldKind::Quad(_)) {
                    return Err(self.err("'w' is only an element of the quadratic backends"));
                }
                self.pos += 1;
                let FieldKind::Quad(d) = self.kind else {
                    unreachable!()
                };
                Ok(xv_const(Value::gen_w(d)))
            }
            Some(b'Y') => {
                if self.kind != FieldKind::Fun {
                    return Err(self.err("'Y' is only an element of the polynomial backends"));
                }
                self.pos += 1;
                Ok(xv_const(Value::var_y()))
            }
            Some(b'X') => {
                if !self.allow_x {
                    return Err(self.err("'X' is not allowed in plain element syntax"));
                }
                self.pos += 1;
                Ok(vec![Value::zero(self.kind), Value::one(self.kind)])
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.bytes[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| self.err("bad integer"))?;
                Ok(xv_const(Value::from_rational(
                    self.kind,
                    BigRational::from(n),
                )))
            }
            _ => Err(self.err("expected a value")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

/// Parse a polynomial in X over the domain's quotient field; ascending
/// coefficients, trimmed (empty = zero).
pub fn parse_poly_x(input: &str, domain: &Domain) -> Result<Vec<Value>> {
    let mut p = Parser::new(input, field_kind(domain), true);
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

/// Parse a plain element of the domain's quotient field.
pub fn parse_value(input: &str, domain: &Domain) -> Result<Value> {
    let mut p = Parser::new(input, field_kind(domain), false);
    let v = p.expr()?;
    p.finish()?;
    Ok(v.into_iter().next().unwrap_or(Value::zero(field_kind(domain))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zw() -> Domain {
        Domain::quadratic(-5).unwrap()
    }

    #[test]
    fn rational_arithmetic_and_printing() {
        let d = Domain::Int;
        let a = parse_value("3/4", &d).unwrap();
        let b = parse_value("-2", &d).unwrap();
        assert_eq!(a.mul(&b).to_string(), "-3/2");
        assert_eq!(a.add(&b).to_string(), "-5/4");
        assert_eq!(parse_value("6/4", &d).unwrap().to_string(), "3/2");
    }

    #[test]
    fn quadratic_arithmetic() {
        let d = zw();
        let a = parse_value("1+w", &d).unwrap();
        let b = parse_value("1-w", &d).unwrap();
        // (1+w)(1-w) = 1 - w² = 6
        assert_eq!(a.mul(&b), parse_value("6", &d).unwrap());
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_one());
        assert_eq!(inv.to_string(), "1/6-1/6*w");
        assert_eq!(parse_value("2*w", &d).unwrap().to_string(), "2*w");
        assert_eq!(parse_value("-w", &d).unwrap().to_string(), "-w");
        assert_eq!(parse_value("0+0*w", &d).unwrap().to_string(), "0");
    }

    #[test]
    fn polynomial_values() {
        let d = Domain::IntPoly;
        let f = parse_value("2*Y^2-3", &d).unwrap();
        assert_eq!(f.to_string(), "2*Y^2-3");
        let g = parse_value("(Y+1)/(2*Y)", &d).unwrap();
        assert_eq!(g.to_string(), "(Y+1)/(2*Y)");
        let prod = f.mul(&g);
        let back = prod.div(&g).unwrap();
        assert_eq!(back, f);
        // canonical reduction
        let h = parse_value("(2*Y+2)/(4*Y)", &d).unwrap();
        assert_eq!(h.to_string(), "(Y+1)/(2*Y)");
        // constant denominator displays as a rational-coefficient polynomial
        let c = parse_value("(Y+1)/2", &d).unwrap();
        assert_eq!(c.to_string(), "1/2*Y+1/2");
    }

    #[test]
    fn roundtrip_canonical_printing() {
        let zw = zw();
        for (dom, s) in [
            (&Domain::Int, "5"),
            (&Domain::Int, "-7/3"),
            (&zw, "1+2*w"),
            (&zw, "-1/2+w"),
            (&zw, "3"),
            (&Domain::IntPoly, "Y^3-Y+1"),
            (&Domain::IntPoly, "(Y^2+1)/(3*Y-1)"),
            (&Domain::RatPoly, "1/2*Y+1"),
        ] {
            let v = parse_value(s, dom).unwrap();
            assert_eq!(v.to_string(), s, "canonical print of {s}");
            let v2 = parse_value(&v.to_string(), dom).unwrap();
            assert_eq!(v, v2);
        }
    }

    #[test]
    fn poly_x_parsing() {
        let d = zw();
        let f = parse_poly_x("(1+w) + (1-w)*X", &d).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], parse_value("1+w", &d).unwrap());
        assert_eq!(f[1], parse_value("1-w", &d).unwrap());
        let g = parse_poly_x("Y*X+3", &Domain::IntPoly).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1], Value::var_y());
        // X not allowed in plain values
        assert!(parse_value("X+1", &Domain::Int).is_err());
        // w not allowed over Z
        assert!(parse_value("1+w", &Domain::Int).is_err());
    }

    #[test]
    fn integrality() {
        assert!(parse_value("4", &Domain::Int).unwrap().is_integral_plain(&Domain::Int));
        assert!(!parse_value("1/2", &Domain::Int).unwrap().is_integral_plain(&Domain::Int));
        let zw = zw();
        assert!(parse_value("1+w", &zw).unwrap().is_integral_plain(&zw));
        assert!(!parse_value("w/2", &zw).unwrap().is_integral_plain(&zw));
        assert!(parse_value("Y^2", &Domain::IntPoly)
            .unwrap()
            .is_integral_plain(&Domain::IntPoly));
        assert!(!parse_value("Y/2", &Domain::IntPoly)
            .unwrap()
            .is_integral_plain(&Domain::IntPoly));
        assert!(parse_value("Y/2", &Domain::RatPoly)
            .unwrap()
            .is_integral_plain(&Domain::RatPoly));
        assert!(!parse_value("1/Y", &Domain::RatPoly)
            .unwrap()
            .is_integral_plain(&Domain::RatPoly));
    }

    #[test]
    fn split_fractions() {
        let (n, s) = parse_value("3/4", &Domain::Int)
            .unwrap()
            .split_fraction(&Domain::Int);
        assert_eq!((n.to_string(), s.to_string()), ("3".into(), "4".into()));
        let zw = zw();
        let (n, s) = parse_value("1/2+1/3*w", &zw).unwrap().split_fraction(&zw);
        assert_eq!((n.to_string(), s.to_string()), ("3+2*w".into(), "6".into()));
        let (n, s) = parse_value("(Y+1)/(2*Y)", &Domain::IntPoly)
            .unwrap()
            .split_fraction(&Domain::IntPoly);
        assert_eq!((n.to_string(), s.to_string()), ("Y+1".into(), "2*Y".into()));
    }
}
