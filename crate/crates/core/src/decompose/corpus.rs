//! Seeded corpora of explicit `IG_{n,m^2}` members: products of `m^4`-th powers
//! of elementary matrices and row elements with `m^2`-divisible coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{build_matrix, IAMatrix};

#[derive(Clone, Debug)]
pub struct CorpusElement {
    /// Builder expression that produced `matrix`.
    pub expr: String,
    pub matrix: IAMatrix,
}

/// Coefficient polynomials for row generators, in the builder syntax.
fn coefficient_pool(n: usize) -> Vec<String> {
    vec!["1".into(), "x1".into(), "x2^-1".into(), format!("x3 - x{n}"), "2*x1*x2 + 1".into(), format!("x{n}^2")]
}

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (1..=n).collect();
    for k in (1..n).rev() {
        idx.swap(k, rng.gen_range(0..=k));
    }
    idx
}

/// One random generator expression of `IG_{n,m^2}`.
pub fn random_generator(rng: &mut ChaCha8Rng, n: usize, m: u64) -> String {
    let m2 = m * m;
    let idx = shuffled(rng, n);
    if rng.gen_bool(0.5) {
        let e = (m2 * m2) as i64 * if rng.gen_bool(0.5) { 1 } else { -1 };
        format!("pow(elem({},{}),{e})", idx[0], idx[1])
    } else {
        let pool = coefficient_pool(n);
        let f = &pool[rng.gen_range(0..pool.len())];
        format!("row({},{},{},{m2}*({f}))", idx[0], idx[1], idx[2])
    }
}

/// `count` products of `factors` random generators each, reproducible from `seed`.
pub fn ig_corpus(n: usize, m: u64, count: usize, factors: usize, seed: u64) -> Result<Vec<CorpusElement>> {
    if n < 3 || m == 0 || factors == 0 {
        return Err(Error::InvalidArgument("corpus needs n >= 3, m >= 1 and at least one factor".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let parts: Vec<String> = (0..factors).map(|_| random_generator(&mut rng, n, m)).collect();
            let expr = format!("mul({})", parts.join(", "));
            let matrix = build_matrix(n, &expr)?;
            Ok(CorpusElement { expr, matrix })
        })
        .collect()
}
