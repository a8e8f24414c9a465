//! Polynomials in `q` with exact rational coefficients, plus a small
//! expression parser for the notation used in the data files.
//!
//! The parser understands `+ - * / ^`, parentheses, implicit multiplication
//! (`2q`, `q(q-1)`, `[112]phi_2`), the variable `q` (with `p` as an alias),
//! the bracket shorthand `[abc] = (q-1)^a q^b (q+1)^c`, the size shorthand
//! `s(a,b,c,d) = (q-1)^a q^b (q+1)^c (q^2+q+1)^(d/2)` and any extra named
//! polynomials supplied through an [`Env`].

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactla::{int, BigRational};

/// Polynomial in `q`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn q() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    /// `q - a`
    pub fn linear(a: i64) -> Self {
        Self::from_coeffs(vec![int(-a), BigRational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, q: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_int(&self, q: i64) -> BigRational {
        self.eval(&int(q))
    }

    /// Evaluates at `q` and requires an integer result.
    pub fn eval_integer(&self, q: i64) -> Result<BigInt> {
        let v = self.eval_int(q);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::Inconsistent(format!("{self} is not integral at q = {q}")))
        }
    }

    /// Quotient and remainder by a nonzero polynomial.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            let shift = top - dd;
            for (k, dc) in d.coeffs.iter().enumerate() {
                rem[shift + k] -= &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        match self.div_rem(d) {
            Ok((quot, rem)) if rem.is_zero() => Some(quot),
            _ => None,
        }
    }

    /// Lagrange interpolation through `(x_k, y_k)`.
    pub fn interpolate(points: &[(BigRational, BigRational)]) -> Self {
        let mut acc = Self::zero();
        for (k, (xk, yk)) in points.iter().enumerate() {
            if yk.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = BigRational::one();
            for (m, (xm, _)) in points.iter().enumerate() {
                if m != k {
                    basis = &basis * &Self::from_coeffs(vec![-xm.clone(), BigRational::one()]);
                    denom *= xk - xm;
                }
            }
            acc = &acc + &basis.scale(&(yk / denom));
        }
        acc
    }

    /// `(q-1)^a q^b (q+1)^c`
    pub fn bracket(a: u32, b: u32, c: u32) -> Self {
        &(&Self::linear(1).pow(a) * &Self::q().pow(b)) * &Self::linear(-1).pow(c)
    }

    pub fn phi2() -> Self {
        Self::from_i64(&[1, 1, 1])
    }

    /// `(q-1)^a q^b (q+1)^c (q^2+q+1)^(d/2)` for even `d`.
    pub fn s(a: u32, b: u32, c: u32, d: u32) -> Result<Self> {
        if !d.is_multiple_of(2) {
            return Err(Error::Parse(format!("s(..., {d}) needs an even last argument")));
        }
        Ok(&Self::bracket(a, b, c) * &Self::phi2().pow(d / 2))
    }

    /// Rendering with `*` and `^` that [`parse`] reads back.
    pub fn to_expr(&self) -> String {
        self.render(true)
    }

    fn render(&self, explicit_star: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if k == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else if explicit_star {
                out.push_str(&format!("{a}*{mono}"));
            } else {
                out.push_str(&format!("{a}{mono}"));
            }
        }
        out
    }
}

impl serde::Serialize for QPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for QPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPolynomial::from_coeffs(out)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPolynomial {
            type Output = QPolynomial;
            fn $m(self, rhs: QPolynomial) -> QPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Named polynomials available to the parser besides `q`/`p`. Braced
/// subscripts are looked up without braces: `b_{-2}` reads the key `b_-2`.
pub type Env = HashMap<String, QPolynomial>;

/// Parses an expression with no extra names.
pub fn parse(src: &str) -> Result<QPolynomial> {
    parse_with(src, &Env::new())
}

pub fn parse_with(src: &str, env: &Env) -> Result<QPolynomial> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        env,
        src,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Bracket(u32, u32, u32),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let mut name: String = chars[start..i].iter().collect();
            if i < chars.len() && chars[i] == '_' {
                name.push('_');
                i += 1;
                if i < chars.len() && chars[i] == '{' {
                    i += 1;
                    while i < chars.len() && chars[i] != '}' {
                        name.push(chars[i]);
                        i += 1;
                    }
                    if i == chars.len() {
                        return Err(Error::Parse(format!("unclosed subscript in '{src}'")));
                    }
                    i += 1;
                } else {
                    let s = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if s == i {
                        return Err(Error::Parse(format!("empty subscript in '{src}'")));
                    }
                    name.extend(&chars[s..i]);
                }
            }
            out.push(Tok::Ident(name));
        } else if c == '[' {
            let close = chars[i..]
                .iter()
                .position(|&ch| ch == ']')
                .ok_or_else(|| Error::Parse(format!("unclosed bracket in '{src}'")))?;
            let digits: Vec<u32> = chars[i + 1..i + close]
                .iter()
                .filter(|ch| !ch.is_whitespace())
                .map(|ch| ch.to_digit(10))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad bracket in '{src}'")))?;
            if digits.len() != 3 {
                return Err(Error::Parse(format!("bracket needs three digits in '{src}'")));
            }
            out.push(Tok::Bracket(digits[0], digits[1], digits[2]));
            i += close + 1;
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected '{c}' in '{src}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    env: &'a Env,
    src: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in '{}'", self.pos, self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QPolynomial> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QPolynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                acc = match d.as_constant() {
                    Some(c) if c.is_zero() => return Err(Error::DivisionByZero),
                    Some(c) => acc.scale(&c.recip()),
                    None => acc
                        .div_exact(&d)
                        .ok_or_else(|| self.error("inexact polynomial division"))?,
                };
            } else if matches!(
                self.peek(),
                Some(Tok::Num(_) | Tok::Ident(_) | Tok::Bracket(..) | Tok::Op('('))
            ) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<QPolynomial> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = n.to_u32().ok_or_else(|| self.error("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.error("exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<QPolynomial> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(n)) => Ok(QPolynomial::constant(BigRational::from_integer(n))),
            Some(Tok::Bracket(a, b, c)) => Ok(QPolynomial::bracket(a, b, c)),
            Some(Tok::Op('(')) => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => Ok(-&self.power()?),
            Some(Tok::Ident(name)) => self.ident(&name),
            _ => {
                self.pos -= 1;
                Err(self.error("expected a value"))
            }
        }
    }

    fn ident(&mut self, name: &str) -> Result<QPolynomial> {
        match name {
            "q" | "p" => Ok(QPolynomial::q()),
            "s" if self.peek() == Some(&Tok::Op('(')) => {
                self.pos += 1;
                let mut args = Vec::new();
                loop {
                    match self.tokens.get(self.pos).cloned() {
                        Some(Tok::Num(n)) => {
                            self.pos += 1;
                            args.push(n.to_u32().ok_or_else(|| self.error("bad argument"))?);
                        }
                        _ => return Err(self.error("s() takes integer arguments")),
                    }
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.error("expected ',' or ')'"));
                    }
                }
                if args.len() != 4 {
                    return Err(self.error("s() takes four arguments"));
                }
                QPolynomial::s(args[0], args[1], args[2], args[3])
            }
            _ => self
                .env
                .get(name)
                .cloned()
                .ok_or_else(|| self.error(&format!("unknown name '{name}'"))),
        }
    }
}

/// Integer gcd of the numerators after clearing denominators; used by
/// rendering to pull out a rational content.
pub fn content(p: &QPolynomial) -> BigRational {
    if p.is_zero() {
        return BigRational::one();
    }
    let den = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = p
        .coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den / c.denom()))));
    let mut c = BigRational::new(num, den);
    if p.leading().is_negative() {
        c = -c;
    }
    c
}
