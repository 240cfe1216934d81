//! Group words over `x1..xn` and their text grammar.
//!
//! ```text
//! word  := item*                      (juxtaposition, whitespace optional)
//! item  := atom ('^' ['-'] int)?
//! atom  := 'x' int | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//! Brackets expand as `[a,b] = a b a^-1 b^-1` and powers are expanded at parse
//! time, so a word is a flat letter sequence.

use std::fmt;

use crate::error::{parse, Error, Result};

/// Hard cap on the expanded length of a parsed word.
pub const MAX_WORD_LEN: usize = 1 << 22;

/// A finite sequence of letters `x_i^{±1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupWord {
    n: usize,
    letters: Vec<(usize, i8)>,
}

impl GroupWord {
    pub fn empty(n: usize) -> Self {
        GroupWord { n, letters: Vec::new() }
    }

    pub fn from_letters(n: usize, letters: Vec<(usize, i8)>) -> Result<Self> {
        for &(i, s) in &letters {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument(format!("letter sign must be ±1, got {s}")));
            }
        }
        Ok(GroupWord { n, letters })
    }

    pub fn generator(n: usize, i: usize) -> Self {
        GroupWord { n, letters: vec![(i, 1)] }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GroupWord { n: self.n, letters }
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { n: self.n, letters: self.letters.iter().rev().map(|&(i, s)| (i, -s)).collect() }
    }

    pub fn commutator(&self, other: &GroupWord) -> GroupWord {
        self.concat(other).concat(&self.inverse()).concat(&other.inverse())
    }

    pub fn pow(&self, k: i64) -> GroupWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        GroupWord { n: self.n, letters }
    }

    /// Exponent sum of each generator.
    pub fn abelianization(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.n];
        for &(i, s) in &self.letters {
            v[i - 1] += s as i64;
        }
        v
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, &(i, s)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if s > 0 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^-1")?;
            }
        }
        Ok(())
    }
}

/// Parses `text` into a word over `x1..xn`.
pub fn parse_word(n: usize, text: &str) -> Result<GroupWord> {
    let mut p = WordParser { s: text.as_bytes(), pos: 0, n };
    let w = p.word()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(parse(p.pos, format!("unexpected character '{}'", p.s[p.pos] as char)));
    }
    Ok(w)
}

struct WordParser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

impl WordParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse(start, "expected integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| parse(start, "integer too large"))
    }

    fn word(&mut self) -> Result<GroupWord> {
        let mut acc = GroupWord::empty(self.n);
        while matches!(self.peek(), Some(b'x' | b'(' | b'[' | b'1')) {
            let item = self.item()?;
            acc = acc.concat(&item);
            if acc.len() > MAX_WORD_LEN {
                return Err(parse(self.pos, "word too long after expansion"));
            }
        }
        Ok(acc)
    }

    fn item(&mut self) -> Result<GroupWord> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.ws();
        let neg = if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.ws();
        let at = self.pos;
        let k = self.int()?;
        if (base.len() as u128) * (k as u128) > MAX_WORD_LEN as u128 {
            return Err(parse(at, "word too long after expansion"));
        }
        let k = k as i64;
        Ok(base.pow(if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<GroupWord> {
        let at = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let digits = self.pos;
                let i = self.int().map_err(|_| parse(digits, "expected generator index"))? as usize;
                if i == 0 || i > self.n {
                    return Err(parse(at, format!("generator x{i} out of range for n = {}", self.n)));
                }
                Ok(GroupWord::generator(self.n, i))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(GroupWord::empty(self.n))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(a.commutator(&b))
            }
            _ => Err(parse(self.pos, "expected a generator, '(' or '['")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_word(4, "x1 x2^-1").unwrap().letters(), &[(1, 1), (2, -1)]);
        assert_eq!(
            parse_word(4, "[x1,x2]").unwrap().letters(),
            &[(1, 1), (2, 1), (1, -1), (2, -1)]
        );
        assert_eq!(
            parse_word(4, "(x1 x2)^2").unwrap().letters(),
            &[(1, 1), (2, 1), (1, 1), (2, 1)]
        );
        assert!(parse_word(4, "").unwrap().is_empty());
        assert!(parse_word(4, "1").unwrap().is_empty());
        assert_eq!(parse_word(2, "x1x2").unwrap().len(), 2);
        assert_eq!(parse_word(2, "(x1 x2)^-1").unwrap().letters(), &[(2, -1), (1, -1)]);
    }

    #[test]
    fn errors_report_positions() {
        match parse_word(4, "x1 x5") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_word(4, "[x1 x2]") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_word(4, "x1 )").is_err());
        assert!(parse_word(4, "x1^").is_err());
        assert!(parse_word(2, "x1^99999999999").is_err());
    }

    #[test]
    fn display_round_trip() {
        let w = parse_word(3, "[x1,x3^-1] x2").unwrap();
        assert_eq!(parse_word(3, &w.to_string()).unwrap(), w);
        assert_eq!(w.abelianization(), vec![0, 1, 0]);
    }
}
