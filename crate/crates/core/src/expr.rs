//! Tokenizer and precedence parser for the text syntax shared by scalars,
//! Fun(U)_q elements and U_q sl₂ elements.
//!
//! Grammar (`^` binds tighter than `*` `/`, which bind tighter than `+` `-`):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' exponent)?
//! exponent := int | '-' int | '(' '-'? int ('/' int)? ')'
//! atom  := int | ident | '(' expr ')'
//! ```
//!
//! Juxtaposition (`2q`, `z z'`) is rejected. Division is only defined by scalars.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let offset = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, offset });
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[offset..i].parse().expect("digits");
            out.push(Token { tok: Tok::Int(n), offset });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[offset..i].to_string()), offset });
        } else {
            let ch = src[offset..].chars().next().unwrap();
            return Err(Error::UnknownToken { offset, token: ch.to_string() });
        }
    }
    Ok(out)
}

/// Parsed expression tree; identifiers are resolved later by the target algebra.
#[derive(Clone, Debug)]
pub enum Node {
    Int(BigInt),
    Ident {
        name: String,
        offset: usize,
    },
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>, usize),
    /// Exponent `num/den` with `den ∈ {1, 2}`.
    Pow(Box<Node>, i64, i64, usize),
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { offset: self.offset(), msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.pos += 1;
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?), at);
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.err("juxtaposition is not allowed; use `*`");
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        self.pos += 1;
        let (num, den) = self.exponent()?;
        Ok(Node::Pow(Box::new(base), num, den, at))
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = i64::try_from(n).or_else(|_| self.err("exponent out of range"))?;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn exponent(&mut self) -> Result<(i64, i64)> {
        match self.peek() {
            Some(Tok::Int(_)) => Ok((self.int()?, 1)),
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok((-self.int()?, 1))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let sign = if self.peek() == Some(&Tok::Minus) {
                    self.pos += 1;
                    -1
                } else {
                    1
                };
                let num = sign * self.int()?;
                let den = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let d = self.int()?;
                    if d != 1 && d != 2 {
                        return self.err("only exponents n or n/2 are supported");
                    }
                    d
                } else {
                    1
                };
                self.expect(Tok::RParen, "`)` closing the exponent")?;
                Ok((num, den))
            }
            _ => self.err("expected an exponent"),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Node::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Node::Ident { name, offset })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(_) => self.err("expected a number, a generator or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Node> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks: &toks, pos: 0, end: src.len() };
    let node = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(node)
}

/// Every identifier the grammar knows, across all expression kinds.
pub const KNOWN_IDENTS: &[&str] = &["q", "z", "z'", "y", "f0", "E", "F", "K", "Kinv", "Omega"];

/// An algebra that parsed expressions can be evaluated into.
pub trait ExprTarget: Sized {
    /// Name used in `MixedKind` diagnostics.
    const KIND: &'static str;

    fn from_scalar(c: ExactScalar) -> Self;
    /// Resolves a non-`q` identifier; `None` means it is not part of this kind.
    fn generator(name: &str) -> Option<Self>;
    fn as_scalar(&self) -> Option<ExactScalar>;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &ExactScalar) -> Self;
    /// Negative powers; the default only inverts scalars.
    fn inverse(&self) -> Option<Self> {
        self.as_scalar().and_then(|c| c.inv().ok()).map(Self::from_scalar)
    }

    fn pow(&self, n: u64) -> Self {
        let mut acc = Self::from_scalar(ExactScalar::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Evaluates an expression tree in the target algebra.
pub fn eval<T: ExprTarget>(node: &Node) -> Result<T> {
    match node {
        Node::Int(n) => Ok(T::from_scalar(ExactScalar::from_bigint(n.clone()))),
        Node::Ident { name, offset } => {
            if name == "q" {
                return Ok(T::from_scalar(ExactScalar::q()));
            }
            match T::generator(name) {
                Some(g) => Ok(g),
                None if KNOWN_IDENTS.contains(&name.as_str()) => {
                    Err(Error::MixedKind { offset: *offset, token: name.clone(), kind: T::KIND })
                }
                None => Err(Error::UnknownToken { offset: *offset, token: name.clone() }),
            }
        }
        Node::Neg(a) => Ok(eval::<T>(a)?.scale(&ExactScalar::from_int(-1))),
        Node::Add(a, b) => Ok(eval::<T>(a)?.add(&eval::<T>(b)?)),
        Node::Sub(a, b) => Ok(eval::<T>(a)?.sub(&eval::<T>(b)?)),
        Node::Mul(a, b) => Ok(eval::<T>(a)?.mul(&eval::<T>(b)?)),
        Node::Div(a, b, at) => {
            let lhs = eval::<T>(a)?;
            let rhs = eval::<T>(b)?;
            let c = rhs
                .as_scalar()
                .ok_or_else(|| Error::Syntax { offset: *at, msg: "only division by a scalar is defined".into() })?;
            Ok(lhs.scale(&c.inv()?))
        }
        Node::Pow(base, num, den, at) => {
            if *den == 2 {
                return match base.as_ref() {
                    Node::Ident { name, .. } if name == "q" => Ok(T::from_scalar(ExactScalar::q_half_pow(*num))),
                    _ => Err(Error::Syntax { offset: *at, msg: "half-integer exponents apply only to `q`".into() }),
                };
            }
            let b = eval::<T>(base)?;
            if *num >= 0 {
                Ok(b.pow(*num as u64))
            } else {
                let inv = b.inverse().ok_or_else(|| Error::Syntax {
                    offset: *at,
                    msg: "negative power of a non-invertible element".into(),
                })?;
                Ok(inv.pow(num.unsigned_abs()))
            }
        }
    }
}

impl ExprTarget for ExactScalar {
    const KIND: &'static str = "scalar";

    fn from_scalar(c: ExactScalar) -> Self {
        c
    }

    fn generator(_: &str) -> Option<Self> {
        None
    }

    fn as_scalar(&self) -> Option<ExactScalar> {
        Some(self.clone())
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn scale(&self, c: &ExactScalar) -> Self {
        self * c
    }

    fn pow(&self, n: u64) -> Self {
        ExactScalar::pow(self, n as i64).expect("nonnegative power")
    }
}

pub fn parse_scalar(src: &str) -> Result<ExactScalar> {
    eval(&parse(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_grammar() {
        let a = parse_scalar("(1-q^2)/(q^(-1)-q)").unwrap();
        assert_eq!(a, ExactScalar::q());
        assert_eq!(parse_scalar("q^(1/2)*q^(1/2)").unwrap(), ExactScalar::q());
        assert_eq!(parse_scalar("-q^2").unwrap(), -ExactScalar::q_pow(2));
        assert_eq!(parse_scalar("q^-1").unwrap(), ExactScalar::q_pow(-1));
        assert_eq!(parse_scalar("2*3-4/2").unwrap(), ExactScalar::from_int(4));
    }

    #[test]
    fn diagnostics_carry_offsets() {
        match parse_scalar("1 + 2q") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        match parse_scalar("1 + w") {
            Err(Error::UnknownToken { offset, token }) => {
                assert_eq!((offset, token.as_str()), (4, "w"))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_scalar("q + z"), Err(Error::MixedKind { offset: 4, .. })));
        assert!(matches!(parse_scalar("1 $ 2"), Err(Error::UnknownToken { offset: 2, .. })));
        assert!(matches!(parse_scalar("(1 + q"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_scalar("1/(q-q)"), Err(Error::DivisionByZero)));
        assert!(matches!(parse_scalar("2^(1/2)"), Err(Error::Syntax { .. })));
    }
}
