//! The finite group ring `Z_m[Z_m^n]`, image of the ring map killing `H_{n,m}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{LaurentPoly, Monomial};

/// Canonical element of `Z_m[Z_m^n]`: exponents in `[0,m)`, coefficients in `[1,m)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuotientPoly {
    m: u64,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

fn reduce_exp(e: i64, m: u64) -> i32 {
    e.rem_euclid(m as i64) as i32
}

impl QuotientPoly {
    pub fn zero(n: usize, m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        QuotientPoly { m, nvars: n, terms: BTreeMap::new() }
    }

    pub fn from_laurent(f: &LaurentPoly, m: u64) -> Self {
        assert!(m >= 1, "modulus must be positive");
        let mbig = BigInt::from(m);
        let mut out = QuotientPoly::zero(f.nvars(), m);
        for (mono, c) in f.terms() {
            let r = c.mod_floor(&mbig).to_u64().expect("residue fits");
            out.add_term(reduce_mono(mono, m), r);
        }
        out
    }

    fn add_term(&mut self, mono: Monomial, c: u64) {
        let c = c % self.m;
        if c == 0 {
            return;
        }
        let m = self.m;
        let slot = self.terms.entry(mono.clone()).or_insert(0);
        *slot = ((*slot as u128 + c as u128) % m as u128) as u64;
        if *slot == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &u64)> {
        self.terms.iter()
    }

    fn check(&self, other: &QuotientPoly) {
        assert_eq!(self.m, other.m, "quotient modulus mismatch");
        assert_eq!(self.nvars, other.nvars, "ring context mismatch");
    }

    pub fn add(&self, other: &QuotientPoly) -> QuotientPoly {
        self.check(other);
        let mut out = self.clone();
        for (mono, &c) in &other.terms {
            out.add_term(mono.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> QuotientPoly {
        let mut out = QuotientPoly::zero(self.nvars, self.m);
        for (mono, &c) in &self.terms {
            out.add_term(mono.clone(), self.m - c);
        }
        out
    }

    pub fn sub(&self, other: &QuotientPoly) -> QuotientPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QuotientPoly) -> QuotientPoly {
        self.check(other);
        let mut out = QuotientPoly::zero(self.nvars, self.m);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let prod = ((ca as u128 * cb as u128) % self.m as u128) as u64;
                out.add_term(reduce_mono(&ma.mul(mb), self.m), prod);
            }
        }
        out
    }

    /// The lift with exponents in `[0,m)` and coefficients in `[0,m)`.
    pub fn lift(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(mono, &c)| (mono.clone(), BigInt::from(c))),
        )
    }
}

/// Exponent vector reduced coordinate-wise into `[0,m)`.
pub(crate) fn reduce_mono(mono: &Monomial, m: u64) -> Monomial {
    let exps: Vec<i32> = mono.exponents().iter().map(|&e| reduce_exp(e as i64, m)).collect();
    Monomial::from_exponents(&exps)
}

impl fmt::Display for QuotientPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.lift(), self.m)
    }
}

impl fmt::Debug for QuotientPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    #[test]
    fn generators_of_h_vanish() {
        for m in 1..5u64 {
            let g = parse_poly(2, &format!("x1^{m} - 1")).unwrap();
            assert!(g.reduce_mod(m).is_zero());
            let h = parse_poly(2, "x1*x2^-3 + 7").unwrap().scale_i64(m as i64);
            assert!(h.reduce_mod(m).is_zero());
        }
    }

    #[test]
    fn sigma_survives_for_m_at_least_two() {
        let s = LaurentPoly::sigma(3, 1);
        for m in 2..6 {
            let q = s.reduce_mod(m);
            assert!(!q.is_zero());
            assert_eq!(q.lift(), parse_poly(3, &format!("x1 + {}", m - 1)).unwrap());
        }
        assert!(s.reduce_mod(1).is_zero());
    }

    #[test]
    fn negative_exponents_wrap() {
        let f = parse_poly(1, "x1^-1").unwrap();
        assert_eq!(f.reduce_mod(3).lift(), parse_poly(1, "x1^2").unwrap());
    }
}
