//! Sparse exact arithmetic in the Laurent polynomial ring `Z[x1^±1, ..., xn^±1]`.
//!
//! Every value carries its variable count; mixing values of different counts is a
//! context mismatch. Terms are kept in a `BTreeMap` keyed by exponent vector, with
//! zero coefficients removed on every exit path, so structural equality is ring
//! equality.

mod parse;
mod quotient;

pub use parse::parse_poly;
pub use quotient::QuotientPoly;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial `x1^e1 * ... * xn^en`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(SmallVec<[i32; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exponents(exps: &[i32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// `x_i^k` with a 1-based variable index.
    pub fn var_power(n: usize, i: usize, k: i32) -> Self {
        let mut m = Self::one(n);
        m.0[i - 1] = k;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    /// Exponent of the 1-based variable `i`.
    pub fn exp(&self, i: usize) -> i32 {
        self.0[i - 1]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    fn with_exp(&self, i: usize, k: i32) -> Monomial {
        let mut m = self.clone();
        m.0[i - 1] = k;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", idx + 1)?;
            } else {
                write!(f, "x{}^{}", idx + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Shared variable count for one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    n: usize,
}

impl RingContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("variable count must be at least 1".into()));
        }
        Ok(RingContext { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(self.n)
    }

    pub fn one(&self) -> LaurentPoly {
        LaurentPoly::one(self.n)
    }

    pub fn constant(&self, c: impl Into<BigInt>) -> LaurentPoly {
        LaurentPoly::constant(self.n, c)
    }

    pub fn var(&self, i: usize) -> Result<LaurentPoly> {
        self.check_index(i)?;
        Ok(LaurentPoly::var(self.n, i))
    }

    /// `sigma_i = x_i - 1`.
    pub fn sigma(&self, i: usize) -> Result<LaurentPoly> {
        self.check_index(i)?;
        Ok(LaurentPoly::sigma(self.n, i))
    }

    /// `mu_{r,m} = 1 + x_r + ... + x_r^{m-1}`.
    pub fn mu(&self, r: usize, m: u64) -> Result<LaurentPoly> {
        self.check_index(r)?;
        if m == 0 {
            return Err(Error::InvalidArgument("mu needs m >= 1".into()));
        }
        Ok(LaurentPoly::mu(self.n, r, m))
    }

    pub fn parse(&self, text: &str) -> Result<LaurentPoly> {
        parse_poly(self.n, text)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn check(&self, p: &LaurentPoly) -> Result<()> {
        if p.nvars != self.n {
            Err(Error::ContextMismatch { left: self.n, right: p.nvars })
        } else {
            Ok(())
        }
    }
}

/// An element of `Z[x1^±1, ..., xn^±1]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly { nvars: n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, 1)
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        Self::term(n, Monomial::one(n), c)
    }

    pub fn term(n: usize, mono: Monomial, c: impl Into<BigInt>) -> Self {
        debug_assert_eq!(mono.nvars(), n);
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        LaurentPoly { nvars: n, terms }
    }

    /// Builds from (exponents, coefficient) pairs, merging repeats.
    pub fn from_terms<I, C>(n: usize, items: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (mono, c) in items {
            debug_assert_eq!(mono.nvars(), n);
            *terms.entry(mono).or_insert_with(BigInt::zero) += c.into();
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { nvars: n, terms }
    }

    /// `x_i` (1-based, unchecked).
    pub fn var(n: usize, i: usize) -> Self {
        Self::term(n, Monomial::var_power(n, i, 1), 1)
    }

    pub fn var_power(n: usize, i: usize, k: i32) -> Self {
        Self::term(n, Monomial::var_power(n, i, k), 1)
    }

    pub fn sigma(n: usize, i: usize) -> Self {
        Self::from_terms(n, [(Monomial::var_power(n, i, 1), 1), (Monomial::one(n), -1)])
    }

    pub fn mu(n: usize, r: usize, m: u64) -> Self {
        Self::from_terms(n, (0..m as i32).map(|k| (Monomial::var_power(n, r, k), 1)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> BigInt {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn constant_coeff(&self) -> BigInt {
        self.coeff(&Monomial::one(self.nvars))
    }

    fn check_same(&self, other: &LaurentPoly) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::ContextMismatch { left: self.nvars, right: other.nvars })
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            add_term(&mut terms, m, c);
        }
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m, &-c);
        }
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(LaurentPoly::zero(self.nvars));
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (m, c) = small.terms.iter().next().unwrap();
            return Ok(large.mul_term(m, c));
        }
        if let Some(terms) = packed_mul(self.nvars, &small.terms, &large.terms) {
            return Ok(LaurentPoly { nvars: self.nvars, terms });
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(small.terms.len() * large.terms.len());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let prod = ca * cb;
                acc.entry(ma.mul(mb))
                    .and_modify(|c| *c += &prod)
                    .or_insert(prod);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(LaurentPoly { nvars: self.nvars, terms })
    }

    /// Multiplies by a single term `c * x^mono`.
    pub fn mul_term(&self, mono: &Monomial, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.mul(mono), a * c)).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> LaurentPoly {
        let terms = self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        self.mul_term(&Monomial::one(self.nvars), c)
    }

    pub fn scale_i64(&self, c: i64) -> LaurentPoly {
        self.scale(&BigInt::from(c))
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// True iff every coefficient is divisible by `d`.
    pub fn is_divisible_by_int(&self, d: &BigInt) -> bool {
        self.terms.values().all(|c| c.is_multiple_of(d))
    }

    /// Exact integer division; `None` if some coefficient is not a multiple of `d`.
    pub fn div_exact_int(&self, d: &BigInt) -> Option<LaurentPoly> {
        if d.is_zero() || !self.is_divisible_by_int(d) {
            return None;
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c / d)).collect();
        Some(LaurentPoly { nvars: self.nvars, terms })
    }

    /// Image under the ring map `x_i -> 1` for every 1-based `i` in `vars`.
    pub fn substitute_ones(&self, vars: &[usize]) -> LaurentPoly {
        if vars.is_empty() {
            return self.clone();
        }
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut mm = m.clone();
            for &i in vars {
                mm.0[i - 1] = 0;
            }
            add_term(&mut terms, &mm, c);
        }
        LaurentPoly { nvars: self.nvars, terms }
    }

    /// Projection onto `Z[x1^±1..xu^±1]` sending `x_{u+1}, ..., x_n` to 1.
    pub fn project_to_first(&self, u: usize) -> LaurentPoly {
        let tail: Vec<usize> = (u + 1..=self.nvars).collect();
        self.substitute_ones(&tail)
    }

    /// Division with residue by `sigma_i`: returns `(q, r)` with `f = sigma_i*q + r`
    /// and `r = f|_{x_i=1}`. The quotient telescopes each power of `x_i`.
    pub fn divide_by_sigma(&self, i: usize) -> (LaurentPoly, LaurentPoly) {
        let n = self.nvars;
        let mut q: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        let mut r: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exp(i);
            let base = m.with_exp(i, 0);
            add_term(&mut r, &base, c);
            if k > 0 {
                for t in 0..k {
                    add_term(&mut q, &base.with_exp(i, t), c);
                }
            } else if k < 0 {
                let neg = -c;
                for t in 1..=(-k) {
                    add_term(&mut q, &base.with_exp(i, -t), &neg);
                }
            }
        }
        (LaurentPoly { nvars: n, terms: q }, LaurentPoly { nvars: n, terms: r })
    }

    /// Exact quotient by `sigma_i`, or `None` if `f` does not vanish at `x_i = 1`.
    pub fn exact_div_sigma(&self, i: usize) -> Option<LaurentPoly> {
        let (q, r) = self.divide_by_sigma(i);
        r.is_zero().then_some(q)
    }

    /// Sum of all coefficients (the image under every `x_i -> 1`).
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Image in `Z_m[Z_m^n]`.
    pub fn reduce_mod(&self, m: u64) -> QuotientPoly {
        QuotientPoly::from_laurent(self, m)
    }

    /// `Some((c, x^s))` if this is `c * x^s` with `c = ±1`.
    pub fn as_unit_monomial(&self) -> Option<(i32, Monomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((1, m.clone()))
        } else if (-c).is_one() {
            Some((-1, m.clone()))
        } else {
            None
        }
    }

    /// 1-based indices of variables appearing with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (1..=self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.exp(i) != 0))
            .collect()
    }

    /// True iff no variable outside `1..=u` appears.
    pub fn lies_in_first(&self, u: usize) -> bool {
        self.terms.keys().all(|m| m.0[u..].iter().all(|&e| e == 0))
    }

    /// Per-variable (min, max) exponents, or `None` for the zero polynomial.
    pub fn exponent_box(&self) -> Option<Vec<(i32, i32)>> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut bx: Vec<(i32, i32)> = first.0.iter().map(|&e| (e, e)).collect();
        for m in it {
            for (b, &e) in bx.iter_mut().zip(m.0.iter()) {
                b.0 = b.0.min(e);
                b.1 = b.1.max(e);
            }
        }
        Some(bx)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Total number of stored coefficient bits, a rough size measure.
    pub fn weight(&self) -> usize {
        self.terms.values().map(|c| c.bits() as usize + 1).sum()
    }

    pub fn to_i64_constant(&self) -> Option<i64> {
        if self.terms.keys().all(Monomial::is_one) {
            self.constant_coeff().to_i64()
        } else {
            None
        }
    }
}

const PACK_BITS: usize = 16;
const PACK_OFFSET: i32 = 1 << (PACK_BITS - 2);

/// Packs exponents into 16-bit fields, each shifted by `PACK_OFFSET`.
fn pack(m: &Monomial) -> Option<u128> {
    let mut key = 0u128;
    for (k, &e) in m.0.iter().enumerate() {
        if e.abs() >= PACK_OFFSET / 2 {
            return None;
        }
        key |= ((e + PACK_OFFSET) as u128) << (PACK_BITS * k);
    }
    Some(key)
}

fn unpack(n: usize, key: u128) -> Monomial {
    let mask = (1u128 << PACK_BITS) - 1;
    Monomial((0..n).map(|k| ((key >> (PACK_BITS * k)) & mask) as i32 - 2 * PACK_OFFSET).collect())
}

fn packed_terms(terms: &BTreeMap<Monomial, BigInt>) -> Option<Vec<(u128, i64)>> {
    terms.iter().map(|(m, c)| Some((pack(m)?, c.to_i64()?))).collect()
}

/// Multiplication with exponents packed into one integer and machine-sized
/// coefficients; `None` when the operands do not fit or a sum overflows.
fn packed_mul(
    n: usize,
    a: &BTreeMap<Monomial, BigInt>,
    b: &BTreeMap<Monomial, BigInt>,
) -> Option<BTreeMap<Monomial, BigInt>> {
    if n * PACK_BITS > 128 {
        return None;
    }
    let (pa, pb) = (packed_terms(a)?, packed_terms(b)?);
    let mut acc: rustc_hash::FxHashMap<u128, i128> = Default::default();
    acc.reserve((pa.len() * pb.len()).min(1 << 16));
    for &(ka, ca) in &pa {
        for &(kb, cb) in &pb {
            let slot = acc.entry(ka + kb).or_insert(0);
            *slot = slot.checked_add(ca as i128 * cb as i128)?;
        }
    }
    Some(acc.into_iter().filter(|&(_, c)| c != 0).map(|(k, c)| (unpack(n, k), BigInt::from(c))).collect())
}

fn add_term(terms: &mut BTreeMap<Monomial, BigInt>, m: &Monomial, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                terms.remove(m);
            }
        }
        None => {
            terms.insert(m.clone(), c.clone());
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical form: terms in descending lexicographic exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = Error;

    /// Parses with the variable count inferred from the largest index used.
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_poly_infer(s)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("ring context mismatch")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$checked(&rhs).expect("ring context mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.check_same(rhs).expect("ring context mismatch");
        for (m, c) in &rhs.terms {
            add_term(&mut self.terms, m, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.check_same(rhs).expect("ring context mismatch");
        for (m, c) in &rhs.terms {
            add_term(&mut self.terms, m, &-c);
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
