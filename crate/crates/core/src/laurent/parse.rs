//! Recursive-descent parser for polynomial text such as `3*x1^2*x2^-1 - 2`.
//!
//! Grammar:
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' ['-'] int)?
//! atom   := int | 'x' int | '(' expr ')'
//! ```
//! Negative exponents are only accepted on unit monomials.

use num_bigint::BigInt;

use super::{LaurentPoly, Monomial};
use crate::error::{parse, Result};

/// Parses `text` as an element of `Z[x1^±1..xn^±1]`.
pub fn parse_poly(n: usize, text: &str) -> Result<LaurentPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n };
    p.skip_ws();
    if p.at_end() {
        return Err(parse(0, "empty polynomial"));
    }
    let value = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(parse(p.pos, format!("unexpected character '{}'", p.peek_char())));
    }
    Ok(value)
}

/// Parses with `n` taken as the largest variable index mentioned (at least 1).
pub(crate) fn parse_poly_infer(text: &str) -> Result<LaurentPoly> {
    parse_poly(max_var_index(text).max(1), text)
}

/// Largest `k` appearing as `xk` in `text`; 0 if none.
pub fn max_var_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > start {
                if let Ok(k) = text[start..j].parse::<usize>() {
                    best = best.max(k);
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        self.peek().map(char::from).unwrap_or('?')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = if self.eat(b'-') {
            -self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc += &self.term()?;
            } else if self.eat(b'-') {
                acc -= &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let atom_pos = {
            self.skip_ws();
            self.pos
        };
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let neg = self.eat(b'-');
        self.skip_ws();
        let exp_pos = self.pos;
        let k = self.integer()?;
        let k: i64 = i64::try_from(k)
            .map_err(|_| parse(exp_pos, "exponent too large"))?;
        if k.unsigned_abs() > i32::MAX as u64 {
            return Err(parse(exp_pos, "exponent too large"));
        }
        if !neg {
            return Ok(base.pow(k as u32));
        }
        match base.as_unit_monomial() {
            Some((sign, mono)) => {
                let inv = mono.inv();
                let powered = Monomial::from_exponents(
                    &inv.exponents().iter().map(|e| e * k as i32).collect::<Vec<_>>(),
                );
                let sign = if sign < 0 && k % 2 == 1 { -1 } else { 1 };
                Ok(LaurentPoly::term(self.n, powered, sign))
            }
            None => Err(parse(atom_pos, "negative exponent of a non-unit")),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(parse(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            Some(b'x') => {
                let start = self.pos;
                self.pos += 1;
                let digits_at = self.pos;
                let idx = self.integer().map_err(|_| parse(digits_at, "expected variable index"))?;
                let idx: usize = usize::try_from(idx)
                    .map_err(|_| parse(start, "variable index too large"))?;
                if idx == 0 || idx > self.n {
                    return Err(parse(
                        start,
                        format!("variable x{idx} out of range for n = {}", self.n),
                    ));
                }
                Ok(LaurentPoly::var(self.n, idx))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(LaurentPoly::constant(self.n, v))
            }
            Some(c) => Err(parse(self.pos, format!("unexpected character '{}'", c as char))),
            None => Err(parse(self.pos, "unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse(start, "expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|e| parse(start, e.to_string()))
    }
}
