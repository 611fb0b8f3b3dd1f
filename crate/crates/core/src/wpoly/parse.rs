//! Text grammar for polynomials:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ['^' integer]
//! atom   := integer ['/' integer] | 'x' integer | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. A number followed by `/` and another number
//! is a single rational literal, so `3/4*x0` means `(3/4)*x0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{WPolynomial, WeightedRing};
use crate::error::{Error, Result};

pub fn parse_polynomial(ring: &WeightedRing, text: &str) -> Result<WPolynomial> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        ring,
        tokens,
        pos: 0,
        end: text.len(),
    };
    let out = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(p.error_at(t.at, format!("unexpected {}", t.kind.describe())));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Num(n) => format!("number {n}"),
            Kind::Var(i) => format!("variable x{i}"),
            Kind::Plus => "'+'".into(),
            Kind::Minus => "'-'".into(),
            Kind::Star => "'*'".into(),
            Kind::Slash => "'/'".into(),
            Kind::Caret => "'^'".into(),
            Kind::LParen => "'('".into(),
            Kind::RParen => "')'".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    at: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let at = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Kind::Plus,
            b'-' => Kind::Minus,
            b'*' => Kind::Star,
            b'/' => Kind::Slash,
            b'^' => Kind::Caret,
            b'(' => Kind::LParen,
            b')' => Kind::RParen,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push(Token {
                    kind: Kind::Num(n),
                    at,
                });
                continue;
            }
            b'x' => {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(Error::Parse {
                        position: at,
                        message: "expected a variable index after 'x'".into(),
                    });
                }
                let idx: usize = text[start..i].parse().map_err(|_| Error::Parse {
                    position: at,
                    message: "variable index out of range".into(),
                })?;
                out.push(Token {
                    kind: Kind::Var(idx),
                    at,
                });
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    position: at,
                    message: format!("unexpected character {:?}", text[at..].chars().next().unwrap()),
                })
            }
        };
        out.push(Token { kind, at });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a WeightedRing,
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn error_at(&self, position: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Kind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.at).unwrap_or(self.end)
    }

    fn eat(&mut self, k: &Kind) -> bool {
        if self.peek() == Some(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<WPolynomial> {
        let mut acc = if self.eat(&Kind::Minus) {
            -&self.term()?
        } else {
            self.eat(&Kind::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Kind::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Kind::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<WPolynomial> {
        let mut acc = self.factor()?;
        while self.eat(&Kind::Star) {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WPolynomial> {
        if self.eat(&Kind::Minus) {
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if self.eat(&Kind::Caret) {
            let at = self.here();
            match self.peek().cloned() {
                Some(Kind::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.error_at(at, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(self.error_at(at, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<WPolynomial> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Kind::Num(n)) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(n);
                if self.eat(&Kind::Slash) {
                    let at = self.here();
                    match self.peek().cloned() {
                        Some(Kind::Num(d)) if !d.is_zero() => {
                            self.pos += 1;
                            value /= BigRational::from_integer(d);
                        }
                        Some(Kind::Num(_)) => return Err(self.error_at(at, "division by zero")),
                        _ => return Err(self.error_at(at, "expected a denominator")),
                    }
                }
                Ok(WPolynomial::constant(self.ring, value))
            }
            Some(Kind::Var(i)) => {
                if i >= self.ring.num_vars() {
                    return Err(self.error_at(
                        at,
                        format!("variable x{i} outside x0..x{}", self.ring.num_vars() - 1),
                    ));
                }
                self.pos += 1;
                Ok(WPolynomial::var(self.ring, i))
            }
            Some(Kind::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Kind::RParen) {
                    return Err(self.error_at(self.here(), "expected ')'"));
                }
                Ok(inner)
            }
            Some(k) => Err(self.error_at(at, format!("unexpected {}", k.describe()))),
            None => Err(self.error_at(at, "unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_the_documented_example() {
        let r = WeightedRing::new(&[1, 1, 1, 2, 3]).unwrap();
        let f = parse_polynomial(&r, "x4^3 + x0^6 + x1^6 + x2^6 + x3^2*x4^2").unwrap();
        assert_eq!(f.num_terms(), 5);
        assert!(!f.is_homogeneous());
    }

    #[test]
    fn rationals_and_signs() {
        let r = WeightedRing::standard(2);
        let a = parse_polynomial(&r, " -3/4*x0 - -x1 ").unwrap();
        let b = parse_polynomial(&r, "x1-(3/4)*x0").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_polynomial(&r, "(x0+x1)^2").unwrap().num_terms(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let r = WeightedRing::standard(3);
        let pos = |s: &str| match parse_polynomial(&r, s) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(pos("x0 + x7"), 5);
        assert_eq!(pos("x0 + "), 5);
        assert_eq!(pos("x0 ? x1"), 3);
        assert_eq!(pos("x0^x1"), 3);
        assert_eq!(pos("1/0*x0"), 2);
        assert_eq!(pos("(x0 + x1"), 8);
        assert_eq!(pos("x0 x1"), 3);
    }
}
