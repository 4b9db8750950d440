//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (("+" | "-") term)* ;
//! term   := factor (("*" | "/") factor)* ;
//! factor := "-" factor | base ("^" nat)? ;
//! base   := rational | "eps" | var | "(" expr ")" ;
//! var    := "x" nat ;   rational := nat ("/" nat)? ;
//! ```
//!
//! Whitespace between tokens is ignored. Variables are numbered from 1.

use num_bigint::BigInt;
use num_traits::Zero;

use super::func::{Point, RatFunc};
use crate::error::{Error, Result};
use crate::ovf::{KElem, Rat};

const MAX_EXPONENT: u32 = 10_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Nat(BigInt),
    Eps,
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Nat(text[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = if word == "eps" {
                    Tok::Eps
                } else if let Some(digits) = word
                    .strip_prefix('x')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                {
                    let idx: usize = digits.parse().map_err(|_| syntax(start, "variable index too large"))?;
                    if idx == 0 {
                        return Err(syntax(start, "variables are numbered from x1"));
                    }
                    Tok::Var(idx - 1)
                } else {
                    return Err(syntax(start, format!("unknown identifier `{word}`")));
                };
                out.push((tok, start));
                continue;
            }
            _ => return Err(syntax(start, format!("unexpected character `{}`", c as char))),
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            let e = match self.bump() {
                Tok::Nat(n) => n,
                _ => return Err(syntax(pos, "expected exponent")),
            };
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| syntax(pos, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatFunc> {
        let pos = self.pos();
        match self.bump() {
            Tok::Nat(n) => {
                if *self.peek() == Tok::Slash {
                    if let Tok::Nat(d) = self.peek_at(1).clone() {
                        self.bump();
                        self.bump();
                        if d.is_zero() {
                            return Err(Error::DivisionByZero);
                        }
                        return Ok(RatFunc::constant(KElem::from_rat(Rat::new(n, d))));
                    }
                }
                Ok(RatFunc::constant(KElem::from_rat(Rat::from_integer(n))))
            }
            Tok::Eps => Ok(RatFunc::eps()),
            Tok::Var(i) => Ok(RatFunc::var(i)),
            Tok::LParen => {
                let e = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(e),
                    _ => Err(syntax(close, "expected `)`")),
                }
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            t => Err(syntax(pos, format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses an expression into an exact rational function.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// Parses a variable-free expression into an element of `K`.
pub fn parse_kelem(text: &str) -> Result<KElem> {
    parse_ratfunc(text)?
        .as_constant()
        .ok_or_else(|| syntax(0, "expected a constant (no variables)"))
}

/// Splits on `sep` outside parentheses, dropping empty pieces.
pub fn parse_list(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Parses `"expr,expr,..."` into a point of `K^n`.
pub fn parse_point(text: &str) -> Result<Point> {
    parse_list(text, ',')
        .into_iter()
        .map(parse_kelem)
        .collect::<Result<Vec<_>>>()
        .map(Point::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::MPoly;

    #[test]
    fn parses_example() {
        let f = parse_ratfunc("(1 - x1^2) / (1 + eps)").unwrap();
        let one = RatFunc::one();
        let expect = one.sub(&RatFunc::var(0).pow(2)).div(&one.add(&RatFunc::eps())).unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_ratfunc("x1 + * 2") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_ratfunc("x0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ratfunc("(x1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ratfunc("x1 x2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ratfunc("y1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ratfunc("x1^99999"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ratfunc(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn zero_denominators() {
        assert_eq!(parse_ratfunc("3/0").unwrap_err(), Error::DivisionByZero);
        assert_eq!(parse_ratfunc("x1/(x2 - x2)").unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn precedence_and_unary_minus() {
        let f = parse_ratfunc("-x1^2 + 2*x1 - 1/2").unwrap();
        let x = MPoly::var(0);
        let expect = x
            .pow(2)
            .neg()
            .add(&x.scale(&KElem::from_int(2)))
            .sub(&MPoly::constant(KElem::from_ratio(1, 2).unwrap()));
        assert_eq!(f, RatFunc::from_poly(expect));
        assert_eq!(parse_ratfunc("2^3").unwrap(), RatFunc::constant(KElem::from_int(8)));
        assert_eq!(
            parse_ratfunc("1/2^2").unwrap(),
            RatFunc::constant(KElem::from_ratio(1, 4).unwrap())
        );
    }

    #[test]
    fn points() {
        let p = parse_point("eps, 1/2, (1+eps)/eps").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coords()[0], KElem::eps());
        assert!(parse_point("x1").is_err());
        assert_eq!(parse_list("a; (b; c) ;", ';'), vec!["a", "(b; c)"]);
    }
}
