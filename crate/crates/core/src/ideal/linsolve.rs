//! Echelon-form linear solvers over `Z` and `Z/mZ`.
//!
//! Both solvers keep one basis column per leading row. Inserting a column
//! runs a Euclid step against the resident column of its leading row, so the
//! basis is a column echelon form of the lattice spanned so far. Over `Z/mZ`
//! the annihilator multiple `(m/g)*v` of every new pivot column `v` is also
//! inserted, which makes the basis Howell-complete and triangular solving exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

type SparseVec = BTreeMap<usize, BigInt>;

fn leading(v: &SparseVec) -> Option<usize> {
    v.keys().next().copied()
}

fn axpy(y: &mut SparseVec, a: &BigInt, x: &SparseVec) {
    if a.is_zero() {
        return;
    }
    for (k, xv) in x {
        let e = y.entry(*k).or_insert_with(BigInt::zero);
        *e += a * xv;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

fn negate(v: &mut SparseVec) {
    for x in v.values_mut() {
        *x = -&*x;
    }
}

/// Integer lattice solver: columns are sparse integer vectors, each tagged with
/// its expression in terms of the original column indices.
pub struct IntegerSolver {
    basis: BTreeMap<usize, (SparseVec, SparseVec)>,
}

impl Default for IntegerSolver {
    fn default() -> Self {
        Self::new()
    }
}

impl IntegerSolver {
    pub fn new() -> Self {
        IntegerSolver { basis: BTreeMap::new() }
    }

    /// Adds original column `index` with entries `col`.
    pub fn insert(&mut self, index: usize, col: SparseVec) {
        let mut combo = SparseVec::new();
        combo.insert(index, BigInt::one());
        self.insert_combo(col, combo);
    }

    fn insert_combo(&mut self, mut col: SparseVec, mut combo: SparseVec) {
        loop {
            let Some(r) = leading(&col) else { return };
            if col[&r].is_negative() {
                negate(&mut col);
                negate(&mut combo);
            }
            let Some((mut bcol, mut bcombo)) = self.basis.remove(&r) else {
                self.basis.insert(r, (col, combo));
                return;
            };
            // Euclid on the row-r entries of the two columns.
            // Invariant: both columns are nonzero at row r.
            loop {
                let q = bcol[&r].div_floor(&col[&r]);
                axpy(&mut bcol, &-&q, &col);
                axpy(&mut bcombo, &-&q, &combo);
                std::mem::swap(&mut bcol, &mut col);
                std::mem::swap(&mut bcombo, &mut combo);
                if !col.contains_key(&r) {
                    break;
                }
            }
            if bcol[&r].is_negative() {
                negate(&mut bcol);
                negate(&mut bcombo);
            }
            self.basis.insert(r, (bcol, bcombo));
        }
    }

    /// Integer coefficients `y` (keyed by original column) with `sum y_k col_k = target`.
    pub fn solve(&self, target: &SparseVec) -> Option<SparseVec> {
        let mut residual = target.clone();
        let mut solution = SparseVec::new();
        while let Some(r) = leading(&residual) {
            let (bcol, bcombo) = self.basis.get(&r)?;
            let (q, rem) = residual[&r].div_rem(&bcol[&r]);
            if !rem.is_zero() {
                return None;
            }
            axpy(&mut residual, &-&q, bcol);
            axpy(&mut solution, &q, bcombo);
        }
        Some(solution)
    }
}

/// Solver over `Z/mZ` with dense columns of a fixed row count and sparse
/// bookkeeping of each basis column's expression in the inserted columns.
pub struct ModSolver {
    m: u64,
    nrows: usize,
    ncols: usize,
    basis: Vec<Option<(Vec<u64>, Combo)>>,
    unit_pivots: usize,
}

/// Sparse combination: sorted (column index, coefficient mod m) pairs.
type Combo = Vec<(usize, u64)>;

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m` for coprime `a`, `m`.
fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl ModSolver {
    pub fn new(m: u64, nrows: usize, ncols: usize) -> Self {
        assert!(m >= 1);
        ModSolver { m, nrows, ncols, basis: vec![None; nrows], unit_pivots: 0 }
    }

    /// True once every row has a unit pivot, so every target is solvable.
    pub fn is_full(&self) -> bool {
        self.unit_pivots == self.nrows
    }

    fn scale(&self, v: &mut [u64], s: u64) {
        for x in v.iter_mut() {
            *x = mulmod(*x, s, self.m);
        }
    }

    fn scale_combo(&self, c: &mut Combo, s: u64) {
        for (_, x) in c.iter_mut() {
            *x = mulmod(*x, s, self.m);
        }
        c.retain(|&(_, x)| x != 0);
    }

    /// `y -= q * x` modulo m.
    fn sub_mul(&self, y: &mut [u64], q: u64, x: &[u64]) {
        if q % self.m == 0 {
            return;
        }
        let m = self.m as u128;
        let qn = (m - (q as u128 % m)) % m;
        for (a, b) in y.iter_mut().zip(x) {
            if *b != 0 {
                *a = ((*a as u128 + qn * *b as u128) % m) as u64;
            }
        }
    }

    fn sub_mul_combo(&self, y: &Combo, q: u64, x: &Combo) -> Combo {
        let m = self.m;
        let qn = (m - q % m) % m;
        let mut out = Vec::with_capacity(y.len() + x.len());
        let (mut i, mut j) = (0, 0);
        while i < y.len() || j < x.len() {
            let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
            let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
            let (k, v) = if take_y {
                i += 1;
                (y[i - 1].0, y[i - 1].1)
            } else if take_x {
                j += 1;
                (x[j - 1].0, mulmod(qn, x[j - 1].1, m))
            } else {
                i += 1;
                j += 1;
                (y[i - 1].0, (y[i - 1].1 + mulmod(qn, x[j - 1].1, m)) % m)
            };
            if v != 0 {
                out.push((k, v));
            }
        }
        out
    }

    fn first_nonzero(v: &[u64]) -> Option<usize> {
        v.iter().position(|&x| x != 0)
    }

    /// Multiplies by a unit so the row-r entry becomes `gcd(entry, m)`.
    fn normalize(&self, col: &mut [u64], combo: &mut Combo, r: usize) -> u64 {
        let e = col[r];
        let g = gcd(e, self.m);
        if e == g {
            return g;
        }
        let m1 = self.m / g;
        let mut s = inv_mod(e / g, m1);
        while gcd(s, self.m) != 1 {
            s += m1;
        }
        self.scale(col, s);
        self.scale_combo(combo, s);
        debug_assert_eq!(col[r], g);
        g
    }

    /// Adds original column `index`; entries are reduced modulo m.
    pub fn insert(&mut self, index: usize, col: Vec<u64>) {
        assert_eq!(col.len(), self.nrows);
        assert!(index < self.ncols);
        if self.is_full() {
            return;
        }
        let col: Vec<u64> = col.into_iter().map(|x| x % self.m).collect();
        let combo = if self.m == 1 { vec![] } else { vec![(index, 1)] };
        let mut stack = vec![(col, combo)];
        while let Some((col, combo)) = stack.pop() {
            self.insert_one(col, combo, &mut stack);
        }
    }

    fn annihilator(&self, col: &[u64], combo: &Combo, g: u64) -> (Vec<u64>, Combo) {
        let mut a = col.to_vec();
        let mut c = combo.clone();
        self.scale(&mut a, self.m / g);
        self.scale_combo(&mut c, self.m / g);
        (a, c)
    }

    fn insert_one(&mut self, mut col: Vec<u64>, mut combo: Combo, pending: &mut Vec<(Vec<u64>, Combo)>) {
        loop {
            let Some(r) = Self::first_nonzero(&col) else { return };
            let g = self.normalize(&mut col, &mut combo, r);
            match self.basis[r].take() {
                None => {
                    if g == 1 {
                        self.unit_pivots += 1;
                    } else {
                        pending.push(self.annihilator(&col, &combo, g));
                    }
                    self.basis[r] = Some((col, combo));
                    return;
                }
                Some((mut bcol, mut bcombo)) => {
                    let was_unit = bcol[r] == 1;
                    while col[r] != 0 {
                        let q = bcol[r] / col[r];
                        self.sub_mul(&mut bcol, q, &col);
                        bcombo = self.sub_mul_combo(&bcombo, q, &combo);
                        std::mem::swap(&mut bcol, &mut col);
                        std::mem::swap(&mut bcombo, &mut combo);
                    }
                    let g2 = self.normalize(&mut bcol, &mut bcombo, r);
                    if g2 == 1 && !was_unit {
                        self.unit_pivots += 1;
                    } else if g2 != 1 {
                        pending.push(self.annihilator(&bcol, &bcombo, g2));
                    }
                    self.basis[r] = Some((bcol, bcombo));
                }
            }
        }
    }

    /// Coefficients `y` in `[0,m)` with `sum y_k col_k = target (mod m)`.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(target.len(), self.nrows);
        let mut residual: Vec<u64> = target.iter().map(|x| x % self.m).collect();
        let mut solution = vec![0u64; self.ncols];
        for r in 0..self.nrows {
            if residual[r] == 0 {
                continue;
            }
            let (bcol, bcombo) = self.basis[r].as_ref()?;
            let g = bcol[r];
            if residual[r] % g != 0 {
                return None;
            }
            let q = residual[r] / g;
            self.sub_mul(&mut residual, q, bcol);
            for &(k, c) in bcombo {
                solution[k] = (solution[k] + mulmod(q, c, self.m)) % self.m;
            }
        }
        Some(solution)
    }
}
