//! IA-automorphisms of the free metabelian group as matrices over `R_n`.
//!
//! A matrix `M = I + A` represents the automorphism sending `x_i` to the element
//! whose Magnus coordinates form row `i`. The IA condition is `A sigma = 0`
//! together with a unit determinant.

mod builder;

pub use builder::build_matrix;

use std::collections::HashMap;
use std::fmt;

use crate::error::{parse, Error, Result};
use crate::ideal::{in_h, in_tail_span};
use crate::laurent::{parse_poly, LaurentPoly, Monomial};
use crate::magnus::{embed, GroupWord};

/// Determinant `prod x_r^{s_r}` of an IA matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DetMonomial {
    pub exponents: Vec<i32>,
}

impl DetMonomial {
    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::from_exponents(&self.exponents)
    }

    pub fn mul(&self, other: &DetMonomial) -> DetMonomial {
        DetMonomial { exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| a + b).collect() }
    }

    pub fn inv(&self) -> DetMonomial {
        DetMonomial { exponents: self.exponents.iter().map(|e| -e).collect() }
    }

    /// True iff every exponent is divisible by `d`.
    pub fn divisible_by(&self, d: i64) -> bool {
        self.exponents.iter().all(|&e| (e as i64) % d == 0)
    }
}

impl fmt::Display for DetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", LaurentPoly::term(self.exponents.len(), self.monomial(), 1))
    }
}

/// Dense square matrix over `R_n`, `n` rows and `n` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IAMatrix {
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl IAMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![LaurentPoly::zero(n); n * n];
        for i in 0..n {
            entries[i * n + i] = LaurentPoly::one(n);
        }
        IAMatrix { n, entries }
    }

    /// Builds a matrix from rows without checking the IA conditions.
    pub fn from_rows_unchecked(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            for p in row {
                if p.nvars() != n {
                    return Err(Error::ContextMismatch { left: n, right: p.nvars() });
                }
                entries.push(p);
            }
        }
        Ok(IAMatrix { n, entries })
    }

    /// Builds a matrix from rows and validates the IA conditions.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let m = Self::from_rows_unchecked(rows)?;
        m.validate()?;
        Ok(m)
    }

    /// `I + (row u replaced by e_u + a)`; `a` is the deviation row with `a_u` allowed.
    pub fn with_row_deviation(u: usize, a: &[LaurentPoly]) -> Self {
        let n = a.len();
        let mut m = Self::identity(n);
        for (v, p) in a.iter().enumerate() {
            let e = &m.entries[(u - 1) * n + v] + p;
            m.entries[(u - 1) * n + v] = e;
        }
        m
    }

    /// `I + sigma_j E_ii - sigma_i E_ij`, with determinant `x_j`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut a = vec![LaurentPoly::zero(n); n];
        a[i - 1] = LaurentPoly::sigma(n, j);
        a[j - 1] = -&LaurentPoly::sigma(n, i);
        Self::with_row_deviation(i, &a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        assert_eq!(p.nvars(), self.n);
        self.entries[(i - 1) * self.n + (j - 1)] = p;
    }

    /// Entry `(i, j)` of `A = M - I`.
    pub fn deviation(&self, i: usize, j: usize) -> LaurentPoly {
        if i == j {
            self.get(i, j) - &LaurentPoly::one(self.n)
        } else {
            self.get(i, j).clone()
        }
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[(i - 1) * self.n..i * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<LaurentPoly>> {
        self.entries.chunks(self.n).map(<[LaurentPoly]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Maps every entry through `f`.
    pub fn map_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> IAMatrix {
        IAMatrix { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &IAMatrix) -> IAMatrix {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        match other.sigma_rank_one() {
            // A (I + sigma w) = A + (A sigma) w.
            Some(w) => {
                let n = self.n;
                let mut out = self.clone();
                for i in 1..=n {
                    let mut s = LaurentPoly::zero(n);
                    for k in 1..=n {
                        s += &(self.get(i, k) * &LaurentPoly::sigma(n, k));
                    }
                    for (j, wj) in w.iter().enumerate() {
                        if !wj.is_zero() {
                            out.entries[(i - 1) * n + j] += &(&s * wj);
                        }
                    }
                }
                out
            }
            None => self.mul_dense(other),
        }
    }

    /// `self + sigma w`, which equals `self * (I + sigma w)` whenever `self`
    /// fixes `sigma`. The caller is responsible for that condition.
    pub fn add_sigma_outer(&self, w: &[LaurentPoly]) -> IAMatrix {
        let n = self.n;
        let mut out = self.clone();
        for k in 1..=n {
            let sk = LaurentPoly::sigma(n, k);
            for (l, wl) in w.iter().enumerate() {
                if !wl.is_zero() {
                    out.entries[(k - 1) * n + l] += &(&sk * wl);
                }
            }
        }
        out
    }

    /// `w` with `self = I + sigma w` (`sigma` the column of all `sigma_k`), if
    /// the deviation has that rank-one shape.
    pub fn sigma_rank_one(&self) -> Option<Vec<LaurentPoly>> {
        let n = self.n;
        let k0 = (1..=n).find(|&k| (1..=n).any(|l| !self.deviation(k, l).is_zero()))?;
        let w: Vec<LaurentPoly> = (1..=n).map(|l| self.deviation(k0, l).exact_div_sigma(k0)).collect::<Option<_>>()?;
        for k in (1..=n).filter(|&k| k != k0) {
            let sk = LaurentPoly::sigma(n, k);
            if (1..=n).any(|l| self.deviation(k, l) != &sk * &w[l - 1]) {
                return None;
            }
        }
        Some(w)
    }

    fn mul_dense(&self, other: &IAMatrix) -> IAMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero(n);
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    let b = &other.entries[k * n + j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    if a.is_one() {
                        acc += b;
                    } else if b.is_one() {
                        acc += a;
                    } else {
                        acc += &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        IAMatrix { n, entries }
    }

    /// Determinant by Laplace expansion with memoised minors; for
    /// `I + sigma w` it is `1 + w . sigma` by the matrix determinant lemma.
    pub fn det(&self) -> LaurentPoly {
        let n = self.n;
        if let Some(w) = self.sigma_rank_one() {
            let mut d = LaurentPoly::one(n);
            for (l, wl) in w.iter().enumerate() {
                d += &(wl * &LaurentPoly::sigma(n, l + 1));
            }
            return d;
        }
        let idx: Vec<usize> = (0..n).collect();
        self.minor_det(&idx, &idx)
    }

    /// Laplace expansion without shortcuts.
    pub fn det_expanded(&self) -> LaurentPoly {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor_det(&idx, &idx)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        let k = rows.len();
        let mut memo: HashMap<u64, LaurentPoly> = HashMap::new();
        memo.insert(0, LaurentPoly::one(self.n));
        // memo[mask] = det of the submatrix on the last |mask| rows and the columns in mask.
        for size in 1..=k {
            let r = rows[k - size];
            let mut next = HashMap::new();
            for (mask, sub) in &memo {
                if mask.count_ones() as usize != size - 1 {
                    continue;
                }
                for (ci, &c) in cols.iter().enumerate() {
                    if mask & (1 << ci) != 0 {
                        continue;
                    }
                    let a = &self.entries[r * self.n + c];
                    if a.is_zero() || sub.is_zero() {
                        continue;
                    }
                    // Sign: number of chosen columns to the left of ci.
                    let left = (mask & ((1u64 << ci) - 1)).count_ones();
                    let term = a * sub;
                    let e = next.entry(mask | (1 << ci)).or_insert_with(|| LaurentPoly::zero(self.n));
                    *e = if left % 2 == 0 { &*e + &term } else { &*e - &term };
                }
            }
            memo = next;
        }
        memo.remove(&((1u64 << k) - 1)).unwrap_or_else(|| LaurentPoly::zero(self.n))
    }

    /// Determinant as `± x^s`, or `None` if it is not a unit of `R_n`.
    pub fn det_unit(&self) -> Option<(i32, Monomial)> {
        self.det().as_unit_monomial()
    }

    /// Adjugate divided by the unit determinant.
    pub fn inverse(&self) -> Result<IAMatrix> {
        let n = self.n;
        let (sign, mono) = self
            .det_unit()
            .ok_or_else(|| Error::NotInvertible(format!("determinant {} is not a unit", self.det())))?;
        let dinv = mono.inv();
        let mut entries = vec![LaurentPoly::zero(n); n * n];
        for i in 0..n {
            for j in 0..n {
                // inverse[j][i] = (-1)^{i+j} det(minor_{ij}) / det
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = self.minor_det(&rows, &cols).mul_monomial(&dinv);
                let s = if (i + j) % 2 == 0 { sign } else { -sign };
                entries[j * n + i] = if s > 0 { minor } else { -&minor };
            }
        }
        Ok(IAMatrix { n, entries })
    }

    pub fn pow(&self, k: i64) -> Result<IAMatrix> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        Ok(base.pow_u(k.unsigned_abs()))
    }

    fn pow_u(&self, mut k: u64) -> IAMatrix {
        let mut acc = Self::identity(self.n);
        let mut sq = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, other: &IAMatrix) -> Result<IAMatrix> {
        Ok(self.mul(other).mul(&self.inverse()?).mul(&other.inverse()?))
    }

    /// `A sigma = 0`, checked exactly.
    pub fn fixes_sigma(&self) -> bool {
        let n = self.n;
        (1..=n).all(|i| {
            let mut acc = LaurentPoly::zero(n);
            for j in 1..=n {
                let a = self.deviation(i, j);
                if !a.is_zero() {
                    acc = &acc + &(&a * &LaurentPoly::sigma(n, j));
                }
            }
            acc.is_zero()
        })
    }

    /// Full IA check with a diagnostic on failure.
    pub fn validate(&self) -> Result<DetMonomial> {
        if !self.fixes_sigma() {
            return Err(Error::NotIa("A*sigma != 0".into()));
        }
        det_monomial(self)
    }

    /// Serialises rows as polynomial strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.chunks(self.n).map(|r| r.iter().map(|p| p.to_string()).collect()).collect()
    }

    pub fn from_strings(rows: &[Vec<String>]) -> Result<IAMatrix> {
        let n = rows.len();
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_poly(n, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows_unchecked(parsed)
    }

    /// Total coefficient weight, a size measure for reporting.
    pub fn weight(&self) -> usize {
        self.entries.iter().map(LaurentPoly::weight).sum()
    }
}

impl fmt::Display for IAMatrix {
    /// The text format: one row per line, comma-separated entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "{}", row.join(", "))?;
        }
        Ok(())
    }
}

impl serde::Serialize for IAMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for IAMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        IAMatrix::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for IAMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IAMatrix[{}]", self.to_strings().iter().map(|r| r.join(", ")).collect::<Vec<_>>().join("; "))
    }
}

/// Parses the matrix text format. Lines starting with `#` and blank lines are
/// skipped; `n` is the number of rows. The IA conditions are not checked.
pub fn parse_matrix(text: &str) -> Result<IAMatrix> {
    let mut lines = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.split('#').next().unwrap_or("");
        if !body.trim().is_empty() {
            lines.push((offset, body));
        }
        offset += line.len();
    }
    let n = lines.len();
    if n == 0 {
        return Err(parse(0, "no matrix rows"));
    }
    let mut rows = Vec::with_capacity(n);
    for (start, body) in lines {
        let mut row = Vec::with_capacity(n);
        let mut col_start = 0;
        for cell in body.split(',') {
            let p = parse_poly(n, cell).map_err(|e| match e {
                Error::Parse { pos, msg } => parse(start + col_start + pos, msg),
                other => other,
            })?;
            row.push(p);
            col_start += cell.len() + 1;
        }
        if row.len() != n {
            return Err(parse(start, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(row);
    }
    IAMatrix::from_rows_unchecked(rows)
}

/// The automorphism given by generator images; word `i` is the image of `x_i`.
pub fn from_images(words: &[GroupWord]) -> Result<IAMatrix> {
    let n = words.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no generator images".into()));
    }
    for (i, w) in words.iter().enumerate() {
        if w.nvars() != n {
            return Err(Error::ContextMismatch { left: n, right: w.nvars() });
        }
        let ab = w.abelianization();
        if ab.iter().enumerate().any(|(k, &e)| e != if k == i { 1 } else { 0 }) {
            return Err(Error::NotIa(format!("image of x{} has abelianization {:?}", i + 1, ab)));
        }
    }
    let rows = words.iter().map(|w| embed(w).coordinates().to_vec()).collect();
    let m = IAMatrix::from_rows_unchecked(rows)?;
    m.validate()?;
    Ok(m)
}

/// True iff `A sigma = 0` and the determinant is a monomial with coefficient 1.
pub fn check_ia(m: &IAMatrix) -> bool {
    m.validate().is_ok()
}

pub fn det_monomial(m: &IAMatrix) -> Result<DetMonomial> {
    let d = m.det();
    match d.as_unit_monomial() {
        Some((1, mono)) => Ok(DetMonomial { exponents: mono.exponents().to_vec() }),
        Some((_, mono)) => Err(Error::NotIa(format!(
            "determinant is -{}; a sign flip cannot occur for IA automorphisms",
            LaurentPoly::term(m.n(), mono, 1)
        ))),
        None => Err(Error::NotInvertible(format!("determinant {d} is not a unit"))),
    }
}

/// Every entry of `A` lies in `H_{n,m}`.
pub fn in_ig(m: &IAMatrix, modulus: u64) -> bool {
    let n = m.n();
    (1..=n).all(|i| (1..=n).all(|j| in_h(&m.deviation(i, j), modulus)))
}

/// Row `i` of `A` is zero and the entries of `A` off row and column `i` lie in `sigma_i R`.
pub fn in_igl_slice(m: &IAMatrix, i: usize) -> bool {
    let n = m.n();
    if (1..=n).any(|j| !m.deviation(i, j).is_zero()) {
        return false;
    }
    (1..=n)
        .filter(|&k| k != i)
        .all(|k| (1..=n).filter(|&l| l != i).all(|l| in_tail_span(&m.deviation(k, l), &[i])))
}

/// `in_igl_slice` plus determinant 1 and minor entries in `sigma_i H_{n,modulus}`.
pub fn in_isl(m: &IAMatrix, i: usize, modulus: u64) -> bool {
    in_isl_shape(m, i, modulus) && matches!(det_monomial(m), Ok(d) if d.is_one())
}

/// [`in_isl`] without the determinant condition, for callers that know the
/// determinant by other means.
pub fn in_isl_shape(m: &IAMatrix, i: usize, modulus: u64) -> bool {
    if !in_igl_slice(m, i) {
        return false;
    }
    let n = m.n();
    (1..=n).filter(|&k| k != i).all(|k| {
        (1..=n).filter(|&l| l != i).all(|l| match m.deviation(k, l).exact_div_sigma(i) {
            Some(q) => in_h(&q, modulus),
            None => false,
        })
    })
}
