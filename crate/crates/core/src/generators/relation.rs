//! Row relations: writing a vector `b` with `sum sigma_v b_v = 0` as a combination
//! of the type-1 family vectors.
//!
//! The vector is first written over the Koszul vectors `kappa_ij` by descending
//! division. The coefficients are unique up to second syzygies
//! `sigma_c kappa_ab - sigma_b kappa_ac + sigma_a kappa_bc`, so they are
//! adjusted by syzygies and by `sigma_k mu_i`, `sigma_k mu_j` multiples until
//! what remains lies in `H_{n,m}`. That adjustment is a linear system modulo
//! `H_{n,m}`, solved in the finite ring.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ideal::finite::solve_mod_h;
use crate::ideal::{in_h, split_h, tail_span_cofactors};
use crate::laurent::LaurentPoly;

/// One summand of a row combination; `c` is the polynomial coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowTerm {
    /// `m c kappa_ij`.
    Basic { i: usize, j: usize, c: LaurentPoly },
    /// `sigma_k mu_{k,m} c kappa_ij`.
    CommK { i: usize, j: usize, k: usize, c: LaurentPoly },
    /// `sigma_k mu_{i,m} c kappa_ij`.
    CommIK { i: usize, j: usize, k: usize, c: LaurentPoly },
}

impl RowTerm {
    /// The scalar multiplying `kappa_ij`.
    pub fn scalar(&self, m: u64) -> LaurentPoly {
        match self {
            RowTerm::Basic { c, .. } => c.scale_i64(m as i64),
            RowTerm::CommK { k, c, .. } => {
                let n = c.nvars();
                &(&LaurentPoly::sigma(n, *k) * &LaurentPoly::mu(n, *k, m)) * c
            }
            RowTerm::CommIK { i, k, c, .. } => {
                let n = c.nvars();
                &(&LaurentPoly::sigma(n, *k) * &LaurentPoly::mu(n, *i, m)) * c
            }
        }
    }

    pub fn pair(&self) -> (usize, usize) {
        match self {
            RowTerm::Basic { i, j, .. } | RowTerm::CommK { i, j, .. } | RowTerm::CommIK { i, j, .. } => (*i, *j),
        }
    }
}

/// `sum_t scalar_t kappa_{i_t j_t}` as a length-`n` vector.
pub fn expand_row_terms(n: usize, m: u64, terms: &[RowTerm]) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(n); n];
    for t in terms {
        let (i, j) = t.pair();
        let s = t.scalar(m);
        out[j - 1] = &out[j - 1] + &(&s * &LaurentPoly::sigma(n, i));
        out[i - 1] = &out[i - 1] - &(&s * &LaurentPoly::sigma(n, j));
    }
    out
}

fn row_relation(b: &[LaurentPoly]) -> LaurentPoly {
    let n = b.len();
    b.iter()
        .enumerate()
        .fold(LaurentPoly::zero(n), |acc, (v, p)| &acc + &(p * &LaurentPoly::sigma(n, v + 1)))
}

/// Writes `b` (length `n`, supported on indices `< u`, polynomials in
/// `x_1..x_{u-1}`, `sum sigma_v b_v = 0`) as a combination of family vectors
/// with all indices `< u`.
pub fn solve_row_relation(u: usize, b: &[LaurentPoly], m: u64) -> Result<Vec<RowTerm>> {
    let n = b.len();
    if u == 0 || u > n {
        return Err(Error::IndexOutOfRange { index: u, n });
    }
    if m == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    let w = u - 1;
    if b[w..].iter().any(|p| !p.is_zero()) {
        return Err(Error::Precondition(format!("row vector must vanish at indices >= {u}")));
    }
    if b.iter().any(|p| !p.lies_in_first(w)) {
        return Err(Error::Precondition(format!("row vector must only involve x1..x{w}")));
    }
    if !row_relation(b).is_zero() {
        return Err(Error::Precondition("sum sigma_v b_v != 0".into()));
    }

    // Koszul coefficients by descending division.
    let mut work = b.to_vec();
    let mut coeff: BTreeMap<(usize, usize), LaurentPoly> = BTreeMap::new();
    for j in (2..=w).rev() {
        let lower: Vec<usize> = (1..j).collect();
        let cof = tail_span_cofactors(&work[j - 1], &lower)
            .ok_or_else(|| Error::Precondition(format!("Koszul division failed at index {j}")))?;
        for (i, t) in cof {
            if t.is_zero() {
                continue;
            }
            work[j - 1] = &work[j - 1] - &(&t * &LaurentPoly::sigma(n, i));
            work[i - 1] = &work[i - 1] + &(&t * &LaurentPoly::sigma(n, j));
            coeff.insert((i, j), t);
        }
    }
    if work.iter().any(|p| !p.is_zero()) {
        return Err(Error::Precondition("Koszul division left a remainder".into()));
    }

    let pairs: Vec<(usize, usize)> = (1..=w).flat_map(|i| (i + 1..=w).map(move |j| (i, j))).collect();
    let row_of = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
    let zero_col = || vec![LaurentPoly::zero(n); pairs.len()];

    enum Unknown {
        Syzygy,
        Alpha { i: usize, j: usize, k: usize },
        Beta { i: usize, j: usize, k: usize },
    }
    let mut unknowns = Vec::new();
    let mut cols = Vec::new();
    for a in 1..=w {
        for bb in a + 1..=w {
            for c in bb + 1..=w {
                let mut col = zero_col();
                col[row_of(a, bb)] = LaurentPoly::sigma(n, c);
                col[row_of(a, c)] = -&LaurentPoly::sigma(n, bb);
                col[row_of(bb, c)] = LaurentPoly::sigma(n, a);
                cols.push(col);
                unknowns.push(Unknown::Syzygy);
            }
        }
    }
    for &(i, j) in &pairs {
        for k in 1..=w {
            if k != i {
                let mut col = zero_col();
                col[row_of(i, j)] = &LaurentPoly::sigma(n, k) * &LaurentPoly::mu(n, i, m);
                cols.push(col);
                unknowns.push(Unknown::Alpha { i, j, k });
            }
            if k != j {
                let mut col = zero_col();
                col[row_of(i, j)] = &LaurentPoly::sigma(n, k) * &LaurentPoly::mu(n, j, m);
                cols.push(col);
                unknowns.push(Unknown::Beta { i, j, k });
            }
        }
    }
    let target: Vec<LaurentPoly> = pairs
        .iter()
        .map(|p| coeff.get(p).cloned().unwrap_or_else(|| LaurentPoly::zero(n)))
        .collect();
    let y = solve_mod_h(n, m, w, &cols, &target).ok_or_else(|| {
        Error::NotMember("row vector is not a combination of the type-1 family modulo H".into())
    })?;

    let mut residual = target;
    let mut terms = Vec::new();
    for ((unk, col), yk) in unknowns.iter().zip(&cols).zip(y) {
        if yk.is_zero() {
            continue;
        }
        for (r, entry) in col.iter().enumerate() {
            if !entry.is_zero() {
                residual[r] = &residual[r] - &(entry * &yk);
            }
        }
        match *unk {
            Unknown::Syzygy => {}
            Unknown::Alpha { i, j, k } => terms.push(RowTerm::CommIK { i, j, k, c: yk }),
            Unknown::Beta { i, j, k } => terms.push(RowTerm::CommIK { i: j, j: i, k, c: -&yk }),
        }
    }
    for (&(i, j), r) in pairs.iter().zip(&residual) {
        if r.is_zero() {
            continue;
        }
        let split = split_h(r, m).map_err(|e| Error::Verification(format!("adjusted coefficient not in H: {e}")))?;
        if !split.constant.is_zero() {
            terms.push(RowTerm::Basic { i, j, c: split.constant.clone() });
        }
        for (k, g) in split.power_parts() {
            terms.push(RowTerm::CommK { i, j, k, c: g.clone() });
        }
    }
    if expand_row_terms(n, m, &terms) != b {
        return Err(Error::Verification("row combination does not replay".into()));
    }
    Ok(terms)
}

/// Polynomials `f_1..f_w` in `H_{n,m}` with `sum_{i<=w} sigma_i f_i = e`.
pub fn solve_sigma_h(e: &LaurentPoly, w: usize, m: u64) -> Result<Vec<LaurentPoly>> {
    let n = e.nvars();
    if w == 0 {
        return if e.is_zero() {
            Ok(Vec::new())
        } else {
            Err(Error::NotMember(format!("{e} is not in the empty span")))
        };
    }
    let idx: Vec<usize> = (1..=w).collect();
    let cof = tail_span_cofactors(e, &idx)
        .ok_or_else(|| Error::NotMember(format!("{e} is not in sigma_1 R + ... + sigma_{w} R")))?;
    let mut f0 = vec![LaurentPoly::zero(n); w];
    for (i, t) in cof {
        f0[i - 1] = t;
    }
    let mut cols = Vec::new();
    for i in 1..=w {
        for j in i + 1..=w {
            let mut col = vec![LaurentPoly::zero(n); w];
            col[i - 1] = LaurentPoly::sigma(n, j);
            col[j - 1] = -&LaurentPoly::sigma(n, i);
            cols.push(col);
        }
    }
    let target: Vec<LaurentPoly> = f0.iter().map(|p| -p).collect();
    let vars = e.support_vars().into_iter().max().unwrap_or(0).max(w);
    let y = solve_mod_h(n, m, vars, &cols, &target)
        .ok_or_else(|| Error::NotMember(format!("{e} is not in sigma_1 H + ... + sigma_{w} H")))?;
    let mut f = f0;
    for (col, yk) in cols.iter().zip(&y) {
        if yk.is_zero() {
            continue;
        }
        for (r, entry) in col.iter().enumerate() {
            if !entry.is_zero() {
                f[r] = &f[r] + &(entry * yk);
            }
        }
    }
    if !f.iter().all(|p| in_h(p, m)) {
        return Err(Error::Verification("sigma-H cofactors left H".into()));
    }
    Ok(f)
}
