//! Expression reader for polynomial and class inputs.
//!
//! Grammar (whitespace is insignificant, `−` is accepted as `-`):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = factor { "*" factor | "/" integer } ;
//! factor  = ("+" | "-") factor | power ;
//! power   = primary [ "^" integer ] ;
//! primary = integer | ident | "(" expr ")" ;
//! integer = digit { digit } ;
//! ident   = (letter | "_") { letter | digit | "_" } ;
//! ```
//!
//! Division is only by integer literals, so `3/4*x` and `(L - 1)/2` are
//! fine while `x/y` is not. The canonical output of
//! [`MultiPoly`](super::poly::MultiPoly)'s `Display` always parses back to
//! the same polynomial.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::MultiPoly;
use super::{Error, Rational, Result};

const MAX_EXPONENT: u32 = 4096;

/// Which identifiers an expression may use.
#[derive(Clone, Debug, Default)]
pub struct Grammar {
    allowed: Option<BTreeSet<String>>,
    constants: BTreeMap<String, MultiPoly>,
}

impl Grammar {
    /// Every identifier is a polynomial variable.
    pub fn any() -> Self {
        Self::default()
    }

    /// Only the listed identifiers are accepted.
    pub fn with_vars<S: AsRef<str>>(vars: &[S]) -> Self {
        Grammar {
            allowed: Some(vars.iter().map(|s| s.as_ref().to_string()).collect()),
            constants: BTreeMap::new(),
        }
    }

    /// Identifier that expands to a fixed polynomial (e.g. `pt` → 1).
    pub fn define(mut self, name: &str, value: MultiPoly) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }
}

pub fn parse_expr(text: &str, grammar: &Grammar) -> Result<MultiPoly> {
    let mut p = Parser { src: text, pos: 0, grammar };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error(format!("unexpected `{}`", p.peek_char().unwrap())));
    }
    Ok(value)
}

/// Parse with every identifier treated as a variable.
pub fn parse_poly(text: &str) -> Result<MultiPoly> {
    parse_expr(text, &Grammar::any())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    grammar: &'a Grammar,
}

impl Parser<'_> {
    fn error(&self, message: String) -> Error {
        Error::Parse { offset: self.pos, message }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Next significant character, with `−` folded to `-`.
    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_char().map(|c| if c == '\u{2212}' { '-' } else { c })
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek_char() {
            self.pos += c.len_utf8();
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.bump();
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(Error::Parse { offset: at, message: "zero denominator".into() });
                    }
                    acc = acc.scale(&Rational::new(1.into(), d));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(-self.factor()?)
            }
            Some('+') => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.bump();
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|e| *e <= MAX_EXPONENT)
                .ok_or_else(|| Error::Parse { offset: at, message: "exponent out of range".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`".into()));
                }
                self.bump();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(MultiPoly::constant(Rational::from_integer(self.integer()?))),
            Some(c) if c.is_alphabetic() || c == '_' => self.ident(),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected an integer".into()));
        }
        Ok(self.src[start..self.pos].parse().expect("digits"))
    }

    fn ident(&mut self) -> Result<MultiPoly> {
        let start = self.pos;
        while self.peek_char().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            self.bump();
        }
        let name = &self.src[start..self.pos];
        if let Some(v) = self.grammar.constants.get(name) {
            return Ok(v.clone());
        }
        if let Some(allowed) = &self.grammar.allowed {
            if !allowed.contains(name) {
                return Err(Error::UnknownVariable { name: name.to_string(), offset: start });
            }
        }
        Ok(MultiPoly::var(name))
    }
}
