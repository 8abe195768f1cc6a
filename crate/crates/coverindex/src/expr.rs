//! Closed-form expression grammar for fields and form coefficients.
//!
//! The grammar is deliberately small: `+`, `-`, `*`, `sin`, `cos`, `exp`,
//! numeric constants, the named constant `pi`, and the coordinates `x`, `y`.
//! Expressions this simple admit exact symbolic differentiation, which the
//! Stokes checks rely on (finite differences cannot reach 1e-10 residuals).

use crate::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Pi,
    /// Coordinate by axis index: 0 = x, 1 = y.
    Coord(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Pi => std::f64::consts::PI,
            Expr::Coord(i) => point[*i],
            Expr::Add(a, b) => a.eval(point) + b.eval(point),
            Expr::Sub(a, b) => a.eval(point) - b.eval(point),
            Expr::Mul(a, b) => a.eval(point) * b.eval(point),
            Expr::Neg(a) => -a.eval(point),
            Expr::Sin(a) => a.eval(point).sin(),
            Expr::Cos(a) => a.eval(point).cos(),
            Expr::Exp(a) => a.eval(point).exp(),
        }
    }

    /// Exact partial derivative with respect to coordinate `axis`.
    pub fn diff(&self, axis: usize) -> Expr {
        match self {
            Expr::Const(_) | Expr::Pi => Expr::Const(0.0),
            Expr::Coord(i) => Expr::Const(if *i == axis { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => add(a.diff(axis), b.diff(axis)),
            Expr::Sub(a, b) => sub(a.diff(axis), b.diff(axis)),
            Expr::Mul(a, b) => add(
                mul(a.diff(axis), (**b).clone()),
                mul((**a).clone(), b.diff(axis)),
            ),
            Expr::Neg(a) => neg(a.diff(axis)),
            Expr::Sin(a) => mul(Expr::Cos(a.clone()), a.diff(axis)),
            Expr::Cos(a) => neg(mul(Expr::Sin(a.clone()), a.diff(axis))),
            Expr::Exp(a) => mul(Expr::Exp(a.clone()), a.diff(axis)),
        }
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn coord(i: usize) -> Expr {
        Expr::Coord(i)
    }

    fn is_const(&self, v: f64) -> bool {
        matches!(self, Expr::Const(c) if *c == v)
    }

    /// Highest coordinate index used, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            Expr::Const(_) | Expr::Pi => None,
            Expr::Coord(i) => Some(*i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(i), Some(j)) => Some(i.max(j)),
                    (x, y) => x.or(y),
                }
            }
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.max_coord(),
        }
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    if a.is_const(0.0) {
        return b;
    }
    if b.is_const(0.0) {
        return a;
    }
    Expr::Add(Box::new(a), Box::new(b))
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    if b.is_const(0.0) {
        return a;
    }
    if a.is_const(0.0) {
        return neg(b);
    }
    Expr::Sub(Box::new(a), Box::new(b))
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    if a.is_const(0.0) || b.is_const(0.0) {
        return Expr::Const(0.0);
    }
    if a.is_const(1.0) {
        return b;
    }
    if b.is_const(1.0) {
        return a;
    }
    Expr::Mul(Box::new(a), Box::new(b))
}

pub fn neg(a: Expr) -> Expr {
    if a.is_const(0.0) {
        return a;
    }
    Expr::Neg(Box::new(a))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{}", c),
            Expr::Pi => write!(f, "pi"),
            Expr::Coord(0) => write!(f, "x"),
            Expr::Coord(1) => write!(f, "y"),
            Expr::Coord(i) => write!(f, "x{}", i),
            Expr::Add(a, b) => write!(f, "({} + {})", a, b),
            Expr::Sub(a, b) => write!(f, "({} - {})", a, b),
            Expr::Mul(a, b) => write!(f, "({} * {})", a, b),
            Expr::Neg(a) => write!(f, "(-{})", a),
            Expr::Sin(a) => write!(f, "sin({})", a),
            Expr::Cos(a) => write!(f, "cos({})", a),
            Expr::Exp(a) => write!(f, "exp({})", a),
        }
    }
}

/// Parses the expression grammar. Usual precedence: unary minus binds
/// tighter than `*`, which binds tighter than `+`/`-`.
pub fn parse(src: &str) -> Result<Expr> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {} in '{}'",
            p.pos, src
        )));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == '.'
                        || ((bytes[i] == 'e' || bytes[i] == 'E')
                            && i + 1 < bytes.len()
                            && (bytes[i + 1].is_ascii_digit()
                                || bytes[i + 1] == '-'
                                || bytes[i + 1] == '+'))
                        || ((bytes[i] == '-' || bytes[i] == '+')
                            && i > start
                            && (bytes[i - 1] == 'e' || bytes[i - 1] == 'E')))
                {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number '{}'", text)))?;
                out.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character '{}'", other)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Expr::Const(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::Coord(0)),
                "y" => Ok(Expr::Coord(1)),
                "pi" => Ok(Expr::Pi),
                "sin" | "cos" | "exp" => {
                    if self.next() != Some(Tok::LParen) {
                        return Err(Error::Parse(format!("expected '(' after {}", name)));
                    }
                    let arg = self.expr()?;
                    if self.next() != Some(Tok::RParen) {
                        return Err(Error::Parse("expected ')'".into()));
                    }
                    let arg = Box::new(arg);
                    Ok(match name.as_str() {
                        "sin" => Expr::Sin(arg),
                        "cos" => Expr::Cos(arg),
                        _ => Expr::Exp(arg),
                    })
                }
                other => Err(Error::Parse(format!("unknown identifier '{}'", other))),
            },
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parses_and_evaluates() {
        let e = parse("0.1*sin(2*pi*x) + x - 3").unwrap();
        let x = 0.3;
        assert_relative_eq!(
            e.eval(&[x]),
            0.1 * (2.0 * std::f64::consts::PI * x).sin() + x - 3.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn unary_minus_and_nesting() {
        let e = parse("-x*y + exp(-x)").unwrap();
        assert_relative_eq!(e.eval(&[2.0, 3.0]), -6.0 + (-2.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn rejects_unknown_symbols() {
        assert!(parse("foo(x)").is_err());
        assert!(parse("x $ y").is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let e = parse("sin(2*pi*x)*cos(y) + exp(x*y)").unwrap();
        let dx = e.diff(0);
        let dy = e.diff(1);
        let p = [0.37, -0.81];
        let h = 1e-6;
        let fd_x = (e.eval(&[p[0] + h, p[1]]) - e.eval(&[p[0] - h, p[1]])) / (2.0 * h);
        let fd_y = (e.eval(&[p[0], p[1] + h]) - e.eval(&[p[0], p[1] - h])) / (2.0 * h);
        assert_relative_eq!(dx.eval(&p), fd_x, epsilon = 1e-8);
        assert_relative_eq!(dy.eval(&p), fd_y, epsilon = 1e-8);
    }

    #[test]
    fn display_round_trips() {
        let e = parse("1 - 2*cos(pi*x)").unwrap();
        let again = parse(&e.to_string()).unwrap();
        assert_relative_eq!(e.eval(&[0.4]), again.eval(&[0.4]), epsilon = 1e-15);
    }
}
