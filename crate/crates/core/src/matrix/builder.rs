//! Builder expressions for matrices.
//!
//! ```text
//! expr := 'id'
//!       | 'elem(' i ',' j ')' | 'dil(' i ',' j ')'     I + sigma_j E_ii - sigma_i E_ij
//!       | 'row(' u ',' i ',' j [',' poly] ')'         row u = poly * (sigma_i e_j - sigma_j e_i)
//!       | 'pow(' expr ',' int ')'                     int may be negative
//!       | 'mul(' expr (',' expr)* ')'
//!       | 'inv(' expr ')'
//!       | 'conj(' expr ',' expr ')'                   conj(a, b) = b a b^-1
//!       | 'comm(' expr ',' expr ')'                   a b a^-1 b^-1
//! ```

use super::IAMatrix;
use crate::error::{parse, Error, Result};
use crate::laurent::{parse_poly, LaurentPoly};

/// Evaluates a builder expression over `R_n`.
pub fn build_matrix(n: usize, text: &str) -> Result<IAMatrix> {
    let mut b = Builder { s: text.as_bytes(), pos: 0, n };
    let m = b.expr()?;
    b.ws();
    if b.pos != b.s.len() {
        return Err(parse(b.pos, "trailing input"));
    }
    Ok(m)
}

struct Builder<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

impl Builder<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn peek_is(&mut self, c: u8) -> bool {
        self.ws();
        self.s.get(self.pos) == Some(&c)
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse(start, "expected a builder name"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| parse(start, "expected integer"))
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let i = self.int()?;
        if i < 1 || i as usize > self.n {
            return Err(parse(at, format!("index {i} out of range 1..={}", self.n)));
        }
        Ok(i as usize)
    }

    /// Raw text up to the `)` closing the current call.
    fn poly_arg(&mut self) -> Result<LaurentPoly> {
        self.ws();
        let start = self.pos;
        let mut depth = 0usize;
        while self.pos < self.s.len() {
            match self.s[self.pos] {
                b'(' => depth += 1,
                b')' if depth == 0 => break,
                b')' => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| parse(start, "invalid utf-8"))?;
        parse_poly(self.n, text).map_err(|e| match e {
            Error::Parse { pos, msg } => parse(start + pos, msg),
            other => other,
        })
    }

    fn at_err(&self, at: usize, e: Error) -> Error {
        match e {
            Error::Parse { .. } => e,
            other => parse(at, other.to_string()),
        }
    }

    fn expr(&mut self) -> Result<IAMatrix> {
        self.ws();
        let at = self.pos;
        let name = self.ident()?;
        let n = self.n;
        if name == "id" {
            return Ok(IAMatrix::identity(n));
        }
        self.eat(b'(')?;
        let out = match name.as_str() {
            "elem" | "dil" => {
                let i = self.index()?;
                self.eat(b',')?;
                let j = self.index()?;
                if i == j {
                    return Err(parse(at, "elem needs distinct indices"));
                }
                IAMatrix::elementary(n, i, j)
            }
            "row" => {
                let u = self.index()?;
                self.eat(b',')?;
                let i = self.index()?;
                self.eat(b',')?;
                let j = self.index()?;
                if i == j || i == u || j == u {
                    return Err(parse(at, "row needs distinct indices u, i, j"));
                }
                let f = if self.peek_is(b',') {
                    self.pos += 1;
                    self.poly_arg()?
                } else {
                    LaurentPoly::one(n)
                };
                let mut a = vec![LaurentPoly::zero(n); n];
                a[j - 1] = &f * &LaurentPoly::sigma(n, i);
                a[i - 1] = -&(&f * &LaurentPoly::sigma(n, j));
                IAMatrix::with_row_deviation(u, &a)
            }
            "pow" => {
                let m = self.expr()?;
                self.eat(b',')?;
                let k = self.int()?;
                m.pow(k).map_err(|e| self.at_err(at, e))?
            }
            "mul" => {
                let mut acc = self.expr()?;
                while self.peek_is(b',') {
                    self.pos += 1;
                    acc = acc.mul(&self.expr()?);
                }
                acc
            }
            "inv" => self.expr()?.inverse().map_err(|e| self.at_err(at, e))?,
            "conj" | "comm" => {
                let a = self.expr()?;
                self.eat(b',')?;
                let b = self.expr()?;
                if name == "conj" {
                    b.mul(&a).mul(&b.inverse().map_err(|e| self.at_err(at, e))?)
                } else {
                    a.commutator(&b).map_err(|e| self.at_err(at, e))?
                }
            }
            other => return Err(parse(at, format!("unknown builder '{other}'"))),
        };
        self.eat(b')')?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{check_ia, det_monomial, in_ig};

    #[test]
    fn builds_power_of_elementary() {
        let m = build_matrix(4, "pow(elem(1,2),4)").unwrap();
        // The (1,2) entry is -sigma_1 mu_{2,4}, which survives modulo H_4.
        assert!(in_ig(&m, 2) && !in_ig(&m, 4));
        assert!(in_ig(&build_matrix(4, "pow(elem(1,2),16)").unwrap(), 4));
        assert_eq!(det_monomial(&m).unwrap().exponents, vec![0, 4, 0, 0]);
        assert_eq!(build_matrix(4, "id").unwrap(), IAMatrix::identity(4));
    }

    #[test]
    fn builds_composites() {
        let m = build_matrix(4, "mul(row(1,2,3,2*x4), conj(elem(2,3), row(4,1,2)), inv(dil(3,1)))").unwrap();
        assert!(check_ia(&m));
        let c = build_matrix(4, "comm(elem(1,2), elem(3,4))").unwrap();
        assert!(det_monomial(&c).unwrap().is_one());
        assert!(build_matrix(4, "pow(elem(1,2),-2)").unwrap().mul(&build_matrix(4, "pow(elem(1,2),2)").unwrap()).is_identity());
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(build_matrix(4, "elem(1,5)"), Err(Error::Parse { pos: 7, .. })));
        assert!(build_matrix(4, "row(1,1,2)").is_err());
        assert!(build_matrix(4, "frob(1)").is_err());
        assert!(build_matrix(4, "row(1,2,3,x1+)").is_err());
        assert!(build_matrix(4, "id id").is_err());
    }
}
