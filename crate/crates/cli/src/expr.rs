//! Polynomial expressions in `x` with exact rational coefficients.
//!
//! Grammar, whitespace-insensitive:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | power)*     juxtaposition before x or (
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | 'x' | '(' expr ')'
//! number := digits ('.' digits)?
//! ```
//!
//! Division is only by nonzero constants, so the result stays a polynomial.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

use garden_core::hb::Mu;
use garden_core::poly::{RealPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    let (line, column) = position(src, offset);
    ParseError { line, column, message: message.into() }
}

impl Lexer {
    fn run(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer { toks: Vec::new() };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = src[i..].chars().next().unwrap();
            let tok = match c {
                c if c.is_whitespace() => {
                    i += c.len_utf8();
                    continue;
                }
                '0'..='9' | '.' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let int = &src[start..i];
                    let mut frac = "";
                    if i < bytes.len() && bytes[i] == b'.' {
                        i += 1;
                        let fs = i;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                        frac = &src[fs..i];
                        if frac.is_empty() {
                            return Err(error_at(src, start, "malformed number"));
                        }
                    }
                    if int.is_empty() && frac.is_empty() {
                        return Err(error_at(src, start, "malformed number"));
                    }
                    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                        return Err(error_at(src, start, "exponent notation is not an exact rational literal"));
                    }
                    let digits = format!("{int}{frac}");
                    let num: BigInt = digits.parse().map_err(|_| error_at(src, start, "malformed number"))?;
                    let den = Pow::pow(BigInt::from(10), frac.len());
                    lx.toks.push((Tok::Num(Rational::new(num, den)), start));
                    continue;
                }
                'x' | 'X' => Tok::X,
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' | '·' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                c => return Err(error_at(src, i, format!("unexpected character `{c}`"))),
            };
            lx.toks.push((tok, i));
            i += c.len_utf8();
        }
        Ok(lx.toks)
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src.len(), |&(_, o)| o)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        error_at(self.src, self.offset(), msg)
    }

    fn expr(&mut self) -> Result<RealPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RealPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(error_at(self.src, at, "division only by a nonzero constant"));
                    }
                    acc = acc.scale(&(Rational::from_integer(1.into()) / d.coeff(0)));
                }
                Some(Tok::X | Tok::LParen) => acc = &acc * &self.power()?,
                Some(Tok::Num(_)) => return Err(self.err("missing operator before number")),
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RealPoly, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RealPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(k)) if k.is_integer() => {
                self.pos += 1;
                let e: u32 = k
                    .to_integer()
                    .try_into()
                    .map_err(|_| error_at(self.src, at, "exponent too large"))?;
                Ok(base.pow(e))
            }
            _ => Err(error_at(self.src, at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<RealPoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(c)) => {
                self.pos += 1;
                Ok(RealPoly::constant(c))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(RealPoly::x())
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => Err(self.err("expected a number, `x` or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

pub fn parse_poly_expr(text: &str) -> Result<RealPoly, ParseError> {
    if text.trim().is_empty() {
        return Err(error_at(text, 0, "empty expression"));
    }
    let toks = Lexer::run(text)?;
    let mut p = Parser { src: text, toks, pos: 0 };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(out)
}

/// A comma-separated coefficient list, constant term first.
pub fn parse_coeffs(text: &str) -> Result<RealPoly, ParseError> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let p = parse_poly_expr(part).map_err(|e| error_at(text, offset + e.column - 1, e.message))?;
        if !p.is_constant() {
            return Err(error_at(text, offset, "coefficients must be constants"));
        }
        coeffs.push(p.coeff(0));
        offset += part.len() + 1;
    }
    Ok(RealPoly::new(coeffs))
}

/// A complex number `a + b·i` with rational parts: `i`, `-2i`, `1/2 - 3i`.
pub fn parse_complex(text: &str) -> Result<Mu, ParseError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let constant = |t: &str, at: usize| -> Result<Rational, ParseError> {
        match t {
            "" | "+" => Ok(Rational::from_integer(1.into())),
            "-" => Ok(Rational::from_integer((-1).into())),
            _ => {
                let p = parse_poly_expr(t).map_err(|e| error_at(&s, at + e.column - 1, e.message))?;
                if p.is_constant() {
                    Ok(p.coeff(0))
                } else {
                    Err(error_at(&s, at, "expected a rational number"))
                }
            }
        }
    };
    if s.is_empty() {
        return Err(error_at(&s, 0, "empty complex number"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Mu::new(constant(&s, 0)?, Rational::zero()));
    };
    // split before the last sign that is not leading
    let split = body.char_indices().filter(|&(k, c)| k > 0 && (c == '+' || c == '-')).map(|(k, _)| k).last();
    let (re, im) = match split {
        Some(k) => (constant(&body[..k], 0)?, constant(&body[k..], k)?),
        None => (Rational::zero(), constant(body, 0)?),
    };
    Ok(Mu::new(re, im))
}
