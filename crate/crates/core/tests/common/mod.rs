#![allow(dead_code)]

use metacsp::magnus::GroupWord;
use metacsp::{LaurentPoly, Monomial};
use proptest::prelude::*;

/// Sparse Laurent polynomials with small exponents and coefficients.
pub fn poly(n: usize, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, n), -6i64..=6), 0..=max_terms).prop_map(move |terms| {
        LaurentPoly::from_terms(n, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)))
    })
}

/// Polynomials whose coefficients overflow 64 bits, to exercise the big-integer path.
pub fn big_poly(n: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..=2, n), any::<i64>()), 1..=4).prop_map(move |terms| {
        let big = num_bigint::BigInt::from(i64::MAX) * 3;
        LaurentPoly::from_terms(n, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), &big * c)))
    })
}

pub fn word(n: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((1..=n, prop::bool::ANY), 0..=max_len).prop_map(move |ls| {
        GroupWord::from_letters(n, ls.into_iter().map(|(i, s)| (i, if s { 1 } else { -1 })).collect()).unwrap()
    })
}

/// Schoolbook multiplication over explicit term lists, independent of the library's fast paths.
pub fn naive_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let n = a.nvars();
    let mut items = Vec::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            items.push((ma.mul(mb), ca * cb));
        }
    }
    LaurentPoly::from_terms(n, items)
}

/// Like [`poly`] but only in `x_1..x_k`.
pub fn poly_in(n: usize, k: usize, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..=2, k), -4i64..=4), 0..=max_terms).prop_map(move |terms| {
        LaurentPoly::from_terms(
            n,
            terms.into_iter().map(|(mut e, c)| {
                e.resize(n, 0);
                (Monomial::from_exponents(&e), c)
            }),
        )
    })
}
