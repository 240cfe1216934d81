//! The free metabelian group through the Magnus embedding.
//!
//! An element is a pair `(g, a)` with `g` in `Z^n` and `a` in `R_n^n`, standing for
//! the matrix `(x^g, sum a_i t_i; 0, 1)`. The pair is a normal form, so equality of
//! pairs decides the word problem.

mod word;

pub use word::{parse_word, GroupWord};

use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Monomial, QuotientPoly};

/// Image of a group element under the Magnus embedding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MagnusElement {
    g: Monomial,
    a: Vec<LaurentPoly>,
}

impl MagnusElement {
    pub fn identity(n: usize) -> Self {
        MagnusElement { g: Monomial::one(n), a: vec![LaurentPoly::zero(n); n] }
    }

    /// The generator `x_i`, i.e. `(e_i, t_i)`.
    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = Self::identity(n);
        e.a[i - 1] = LaurentPoly::one(n);
        e.g = Monomial::var_power(n, i, 1);
        e
    }

    /// Builds a pair, checking the defining identity `x^g - 1 = sum a_i sigma_i`.
    pub fn from_parts(g: Monomial, a: Vec<LaurentPoly>) -> Result<Self> {
        let n = g.nvars();
        if a.len() != n || a.iter().any(|p| p.nvars() != n) {
            return Err(Error::ContextMismatch { left: n, right: a.len() });
        }
        let e = MagnusElement { g, a };
        if !e.invariant_holds() {
            return Err(Error::InvalidArgument("pair violates x^g - 1 = sum a_i sigma_i".into()));
        }
        Ok(e)
    }

    pub fn nvars(&self) -> usize {
        self.g.nvars()
    }

    pub fn exponent(&self) -> &Monomial {
        &self.g
    }

    pub fn coordinates(&self) -> &[LaurentPoly] {
        &self.a
    }

    /// `x^g - 1 = sum a_i sigma_i`, checked exactly.
    pub fn invariant_holds(&self) -> bool {
        let n = self.nvars();
        let lhs = &LaurentPoly::term(n, self.g.clone(), 1) - &LaurentPoly::one(n);
        let rhs = self
            .a
            .iter()
            .enumerate()
            .fold(LaurentPoly::zero(n), |acc, (i, ai)| &acc + &(ai * &LaurentPoly::sigma(n, i + 1)));
        lhs == rhs
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_one() && self.a.iter().all(LaurentPoly::is_zero)
    }

    /// `(g, a)(h, b) = (g + h, a + x^g b)`.
    pub fn mul(&self, other: &MagnusElement) -> MagnusElement {
        let a = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| x + &y.mul_monomial(&self.g))
            .collect();
        let out = MagnusElement { g: self.g.mul(&other.g), a };
        debug_assert!(out.invariant_holds());
        out
    }

    /// `(g, a)^{-1} = (-g, -x^{-g} a)`.
    pub fn inverse(&self) -> MagnusElement {
        let ginv = self.g.inv();
        let a = self.a.iter().map(|x| -&x.mul_monomial(&ginv)).collect();
        MagnusElement { g: ginv, a }
    }

    pub fn pow(&self, k: i64) -> MagnusElement {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = MagnusElement::identity(self.nvars());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, other: &MagnusElement) -> MagnusElement {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Image in the finite quotient over `Z_m[Z_m^n]`.
    pub fn project(&self, m: u64) -> QuotientElement {
        let exps: Vec<i32> = self.g.exponents().iter().map(|&e| e.rem_euclid(m as i32)).collect();
        QuotientElement {
            m,
            g: Monomial::from_exponents(&exps),
            a: self.a.iter().map(|x| x.reduce_mod(m)).collect(),
        }
    }
}

impl fmt::Display for MagnusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.g.exponents().iter().map(|e| e.to_string()).collect();
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", g.join(","), a.join(", "))
    }
}

impl fmt::Debug for MagnusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MagnusElement{self}")
    }
}

/// Embeds a word letter by letter.
pub fn embed(w: &GroupWord) -> MagnusElement {
    let n = w.nvars();
    let mut g: Vec<i32> = vec![0; n];
    let mut a = vec![LaurentPoly::zero(n); n];
    for &(i, sign) in w.letters() {
        if sign > 0 {
            a[i - 1] = &a[i - 1] + &LaurentPoly::term(n, Monomial::from_exponents(&g), 1);
            g[i - 1] += 1;
        } else {
            g[i - 1] -= 1;
            a[i - 1] = &a[i - 1] - &LaurentPoly::term(n, Monomial::from_exponents(&g), 1);
        }
    }
    let out = MagnusElement { g: Monomial::from_exponents(&g), a };
    debug_assert!(out.invariant_holds());
    out
}

/// Word problem in the free metabelian group.
pub fn is_identity(w: &GroupWord) -> bool {
    embed(w).is_identity()
}

/// Element of the finite quotient: exponent vector mod m and coordinates in `Z_m[Z_m^n]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuotientElement {
    m: u64,
    g: Monomial,
    a: Vec<QuotientPoly>,
}

impl QuotientElement {
    pub fn identity(n: usize, m: u64) -> Self {
        QuotientElement { m, g: Monomial::one(n), a: vec![QuotientPoly::zero(n, m); n] }
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_one() && self.a.iter().all(QuotientPoly::is_zero)
    }

    pub fn exponent(&self) -> &Monomial {
        &self.g
    }

    pub fn coordinates(&self) -> &[QuotientPoly] {
        &self.a
    }

    pub fn mul(&self, other: &QuotientElement) -> QuotientElement {
        let n = self.g.nvars();
        let shift = QuotientPoly::from_laurent(&LaurentPoly::term(n, self.g.clone(), 1), self.m);
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x.add(&shift.mul(y))).collect();
        let exps: Vec<i32> = self
            .g
            .mul(&other.g)
            .exponents()
            .iter()
            .map(|&e| e.rem_euclid(self.m as i32))
            .collect();
        QuotientElement { m: self.m, g: Monomial::from_exponents(&exps), a }
    }

    /// The defining identity inside `Z_m[Z_m^n]`.
    pub fn invariant_holds(&self) -> bool {
        let n = self.g.nvars();
        let lhs = (&LaurentPoly::term(n, self.g.clone(), 1) - &LaurentPoly::one(n)).reduce_mod(self.m);
        let mut rhs = QuotientPoly::zero(n, self.m);
        for (i, ai) in self.a.iter().enumerate() {
            rhs = rhs.add(&ai.mul(&LaurentPoly::sigma(n, i + 1).reduce_mod(self.m)));
        }
        lhs == rhs
    }
}
