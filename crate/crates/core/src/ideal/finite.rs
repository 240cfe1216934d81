//! Linear systems over `R_n` modulo `H_{n,m}`, solved in the finite ring `Z_m[Z_m^n]`.
//!
//! Membership in any ideal containing `H_{n,m}` only depends on the image in
//! `Z_m[Z_m^n]`, which is a free `Z_m`-module on the monomials with exponents in
//! `[0,m)`. Each unknown polynomial is expanded over that basis and the system
//! is solved over `Z/mZ`.

use std::collections::HashMap;

use super::linsolve::ModSolver;
use crate::laurent::{LaurentPoly, Monomial, QuotientPoly};

/// All exponent vectors of length `n` with the first `w` coordinates in `[0,m)` and the rest 0.
pub(crate) fn box_monomials(n: usize, w: usize, m: u64) -> Vec<Monomial> {
    let mut out = vec![vec![0i32; n]];
    for i in 0..w {
        let mut next = Vec::with_capacity(out.len() * m as usize);
        for e in &out {
            for k in 0..m as i32 {
                let mut e2 = e.clone();
                e2[i] = k;
                next.push(e2);
            }
        }
        out = next;
    }
    out.iter().map(|e| Monomial::from_exponents(e)).collect()
}

fn shifted(q: &QuotientPoly, g: &Monomial, m: u64) -> Vec<(Monomial, u64)> {
    q.terms()
        .map(|(mono, &c)| {
            let exps: Vec<i32> = mono
                .exponents()
                .iter()
                .zip(g.exponents())
                .map(|(a, b)| (a + b).rem_euclid(m as i32))
                .collect();
            (Monomial::from_exponents(&exps), c)
        })
        .collect()
}

/// Finds polynomials `y_k` in `x_1..x_w` with `sum_k cols[k][r] * y_k = target[r]`
/// modulo `H_{n,m}` for every row `r`. Returned `y_k` have exponents and
/// coefficients in `[0,m)`; `None` if the system has no solution.
pub fn solve_mod_h(
    n: usize,
    m: u64,
    w: usize,
    cols: &[Vec<LaurentPoly>],
    target: &[LaurentPoly],
) -> Option<Vec<LaurentPoly>> {
    let nrows_poly = target.len();
    debug_assert!(cols.iter().all(|c| c.len() == nrows_poly));
    if m == 1 {
        return Some(vec![LaurentPoly::zero(n); cols.len()]);
    }
    let shifts = box_monomials(n, w, m);
    let reduced_cols: Vec<Vec<QuotientPoly>> =
        cols.iter().map(|c| c.iter().map(|p| p.reduce_mod(m)).collect()).collect();
    let reduced_target: Vec<QuotientPoly> = target.iter().map(|p| p.reduce_mod(m)).collect();

    let mut row_index: HashMap<(usize, Monomial), usize> = HashMap::new();
    let mut intern = |key: (usize, Monomial)| -> usize {
        let next = row_index.len();
        *row_index.entry(key).or_insert(next)
    };

    let mut sparse_cols: Vec<Vec<(usize, u64)>> = Vec::new();
    for col in &reduced_cols {
        for g in &shifts {
            let mut entries = Vec::new();
            for (r, q) in col.iter().enumerate() {
                for (mono, c) in shifted(q, g, m) {
                    entries.push((intern((r, mono)), c));
                }
            }
            sparse_cols.push(entries);
        }
    }
    let mut sparse_target = Vec::new();
    for (r, q) in reduced_target.iter().enumerate() {
        for (mono, &c) in q.terms() {
            sparse_target.push((intern((r, mono.clone())), c));
        }
    }

    let nrows = row_index.len();
    let ncols = sparse_cols.len();
    let mut solver = ModSolver::new(m, nrows, ncols);
    for (k, entries) in sparse_cols.into_iter().enumerate() {
        let mut dense = vec![0u64; nrows];
        for (row, c) in entries {
            dense[row] = (dense[row] + c) % m;
        }
        solver.insert(k, dense);
    }
    let mut dense_target = vec![0u64; nrows];
    for (row, c) in sparse_target {
        dense_target[row] = (dense_target[row] + c) % m;
    }
    let sol = solver.solve(&dense_target)?;

    let per = shifts.len();
    Some(
        (0..cols.len())
            .map(|k| {
                LaurentPoly::from_terms(
                    n,
                    shifts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| sol[k * per + j] != 0)
                        .map(|(j, g)| (g.clone(), sol[k * per + j] as i64)),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse_poly;

    #[test]
    fn solves_single_row_modulo_h() {
        // sigma_1 * y = x1^2 - x1 (mod H_2) has the solution y = x1.
        let n = 2;
        let cols = vec![vec![LaurentPoly::sigma(n, 1)]];
        let target = vec![parse_poly(n, "x1^2 - x1").unwrap()];
        let y = solve_mod_h(n, 2, 1, &cols, &target).unwrap();
        let resid = &target[0] - &(&cols[0][0] * &y[0]);
        assert!(resid.reduce_mod(2).is_zero());
    }

    #[test]
    fn detects_unsolvable() {
        // sigma_1 * y = 1 has no solution modulo H_2 (augmentation 0 vs 1).
        let n = 2;
        let cols = vec![vec![LaurentPoly::sigma(n, 1)]];
        let target = vec![LaurentPoly::one(n)];
        assert!(solve_mod_h(n, 2, 2, &cols, &target).is_none());
    }
}
