//! Shared recursive-descent machinery for the textual group-word grammars.
//!
//! A product is a whitespace-separated sequence of factors; a factor is an
//! atom, a parenthesised product, or a commutator `[u, v]`, optionally raised
//! to an integer power with `^`. Lie expressions are signed integer
//! combinations of atoms, brackets `[a, b]` and parenthesised sums.

use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    /// Parses an unsigned decimal integer with no leading whitespace skip.
    pub(crate) fn digits(&mut self) -> Result<usize> {
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error("integer out of range"))
    }

    /// Optionally signed integer; whitespace is allowed before the sign.
    pub(crate) fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let negative = if self.peek_raw() == Some('-') {
            self.pos += 1;
            true
        } else {
            if self.peek_raw() == Some('+') {
                self.pos += 1;
            }
            false
        };
        self.skip_ws();
        let magnitude = self.digits()? as i64;
        Ok(if negative { -magnitude } else { magnitude })
    }
}

/// The group operations an expression evaluates into.
pub(crate) trait GroupAlgebra {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Parses one atom at the cursor, or returns `None` if none starts here.
    fn atom(&self, cur: &mut Cursor<'_>) -> Result<Option<Self::Elem>>;

    fn pow(&self, a: &Self::Elem, e: i64) -> Result<Self::Elem> {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let ab = self.mul(a, b)?;
        let ab_ai = self.mul(&ab, &self.inv(a))?;
        self.mul(&ab_ai, &self.inv(b))
    }
}

pub(crate) fn parse_product<G: GroupAlgebra>(g: &G, src: &str) -> Result<G::Elem> {
    let mut cur = Cursor::new(src);
    let value = product(g, &mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(value)
}

fn product<G: GroupAlgebra>(g: &G, cur: &mut Cursor<'_>) -> Result<G::Elem> {
    let mut acc = g.identity();
    loop {
        match cur.peek() {
            None | Some(')') | Some(',') | Some(']') | Some(';') => return Ok(acc),
            Some('*') | Some('.') => {
                let _ = cur.eat('*') || cur.eat('.');
            }
            _ => {
                let f = factor(g, cur)?;
                acc = g.mul(&acc, &f)?;
            }
        }
    }
}

fn factor<G: GroupAlgebra>(g: &G, cur: &mut Cursor<'_>) -> Result<G::Elem> {
    let base = if cur.eat('(') {
        let inner = product(g, cur)?;
        cur.expect(')')?;
        inner
    } else if cur.eat('[') {
        let a = product(g, cur)?;
        cur.expect(',')?;
        let b = product(g, cur)?;
        cur.expect(']')?;
        g.commutator(&a, &b)?
    } else if cur.peek() == Some('1') {
        cur.eat('1');
        g.identity()
    } else {
        match g.atom(cur)? {
            Some(a) => a,
            None => return Err(cur.error("unexpected token")),
        }
    };
    if cur.eat('^') {
        let e = cur.integer()?;
        g.pow(&base, e)
    } else {
        Ok(base)
    }
}

/// The operations a Lie-ring expression evaluates into.
pub(crate) trait LieSyntax {
    type Elem;
    fn zero(&self) -> Self::Elem;
    fn add_scaled(&self, acc: &mut Self::Elem, x: &Self::Elem, c: i64);
    fn bracket(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Parses one generator at the cursor, or returns `None`.
    fn generator(&self, cur: &mut Cursor<'_>) -> Result<Option<Self::Elem>>;
}

pub(crate) fn parse_lie<L: LieSyntax>(l: &L, src: &str) -> Result<L::Elem> {
    let mut cur = Cursor::new(src);
    let value = lie_sum(l, &mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(value)
}

fn lie_sum<L: LieSyntax>(l: &L, cur: &mut Cursor<'_>) -> Result<L::Elem> {
    let mut acc = l.zero();
    let mut first = true;
    loop {
        let sign: i64 = if cur.eat('+') {
            1
        } else if cur.eat('-') {
            -1
        } else if first {
            1
        } else {
            return Ok(acc);
        };
        first = false;
        let coeff = if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            let c = cur.digits()? as i64;
            if !cur.eat('*') {
                // A bare integer term is only meaningful as zero.
                if c == 0 {
                    continue;
                }
                return Err(cur.error("expected '*' after coefficient"));
            }
            c
        } else {
            1
        };
        let atom = lie_atom(l, cur)?;
        l.add_scaled(&mut acc, &atom, sign * coeff);
    }
}

fn lie_atom<L: LieSyntax>(l: &L, cur: &mut Cursor<'_>) -> Result<L::Elem> {
    if cur.eat('[') {
        let a = lie_sum(l, cur)?;
        cur.expect(',')?;
        let b = lie_sum(l, cur)?;
        cur.expect(']')?;
        l.bracket(&a, &b)
    } else if cur.eat('(') {
        let a = lie_sum(l, cur)?;
        cur.expect(')')?;
        Ok(a)
    } else {
        match l.generator(cur)? {
            Some(g) => Ok(g),
            None => Err(cur.error("expected generator, bracket or parenthesis")),
        }
    }
}
