//! Factorisation of `alpha` in `IG_{n,m^2}` into certified `IA^m` factors and
//! `ISL_{n-1,u}(sigma_u H_m)` factors, one stage per row.
//!
//! Stage `u` works under the projection `x_{u+1}, ..., x_n -> 1`. It clears the
//! left part of row `u`, then the right part, then row `u` entirely, and peels
//! off an ISL factor on the left. After stage `u` the current matrix is the
//! identity under the stage-`u` projection, so after stage `n` it is `I`.

mod certificate;
mod corpus;

pub use certificate::{
    check_certificate, matrix_hash, CheckFailure, DecompositionCertificate, Evidence, Factor, IslEntry, FORMAT,
};
pub use corpus::{ig_corpus, random_generator, CorpusElement};

use crate::error::{Error, Result};
use crate::generators::{
    kappa, solve_row_relation, solve_sigma_h, type1_basic, type1_comm_ik, type1_comm_k, type2_block, type2_mixed,
    type2_sq, Generated, PowerWitness, RowTerm,
};
use crate::ideal::{h_generator, in_h, j_certificate, split_h, MembershipCertificate};
use crate::laurent::LaurentPoly;
use crate::matrix::{check_ia, det_monomial, in_ig, in_isl, in_isl_shape, DetMonomial, IAMatrix};

/// Result of the entry gate: the determinant and one `J_m` certificate per nonzero entry of `A`.
#[derive(Clone, Debug)]
pub struct EntryReport {
    pub det: DetMonomial,
    pub certificates: Vec<((usize, usize), MembershipCertificate)>,
}

/// Checks that `alpha` is IA, lies in `IG_{n,m^2}`, has determinant exponents
/// divisible by `m^2`, and that every entry of `A` has a `J_m` certificate.
pub fn check_entry_j(alpha: &IAMatrix, m: u64) -> Result<EntryReport> {
    let det = alpha.validate()?;
    let m2 = m * m;
    let n = alpha.n();
    for i in 1..=n {
        for j in 1..=n {
            if !in_h(&alpha.deviation(i, j), m2) {
                return Err(Error::Precondition(format!("entry ({i},{j}) of A is not in H_{{{n},{m2}}}")));
            }
        }
    }
    if !det.divisible_by(m2 as i64) {
        return Err(Error::Precondition(format!("determinant {det} has exponents not divisible by {m2}")));
    }
    let mut certificates = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let a = alpha.deviation(i, j);
            if a.is_zero() {
                continue;
            }
            let cert = j_certificate(&a, m).map_err(|e| Error::Precondition(format!("entry ({i},{j}): {e}")))?;
            if !cert.verify() {
                return Err(Error::Verification(format!("entry ({i},{j}): J_{m} certificate does not verify")));
            }
            certificates.push(((i, j), cert));
        }
    }
    Ok(EntryReport { det, certificates })
}

/// Working state of a decomposition run.
///
/// The invariant is `input = L_1 ... L_p * current * R_q ... R_1`, where the
/// `L` are the recorded left factors and `R_1, R_2, ...` the right factors in
/// the order they were recorded.
#[derive(Clone, Debug)]
pub struct StageState {
    n: usize,
    m: u64,
    input: IAMatrix,
    current: IAMatrix,
    /// Determinant of `current`, tracked through the recorded factors.
    det: DetMonomial,
    left: Vec<Factor>,
    right: Vec<Factor>,
}

/// Largest number of terms of `b` handled by one finish-step factor.
const FINISH_CHUNK: usize = 256;

fn term_chunks(p: &LaurentPoly, size: usize) -> Vec<LaurentPoly> {
    let n = p.nvars();
    let terms: Vec<_> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.chunks(size).map(|c| LaurentPoly::from_terms(n, c.iter().cloned())).collect()
}

/// Splits `b` in `H_{n,m}` into summands that each lie in `H_{n,m}` and have
/// at most about `size` terms. A raw term chunk of `b` need not lie in `H`, so
/// the chunks are taken over the components of the H-splitting.
fn h_chunks(b: &LaurentPoly, m: u64, size: usize) -> Result<Vec<LaurentPoly>> {
    if b.terms().count() <= size {
        return Ok(vec![b.clone()]);
    }
    let n = b.nvars();
    let split = split_h(b, m)?;
    let mut out: Vec<LaurentPoly> =
        term_chunks(&split.constant, size).into_iter().map(|c| c.scale_i64(m as i64)).collect();
    for (r, g) in split.power_parts() {
        let gen = h_generator(n, r, m);
        out.extend(term_chunks(g, size).into_iter().map(|c| &gen * &c));
    }
    out.retain(|p| !p.is_zero());
    Ok(out)
}

fn proj(u: usize, p: &LaurentPoly) -> LaurentPoly {
    p.project_to_first(u)
}

fn sigma_power_quotient(p: &LaurentPoly, u: usize, k: usize) -> Option<LaurentPoly> {
    let mut q = p.clone();
    for _ in 0..k {
        q = q.exact_div_sigma(u)?;
    }
    Some(q)
}

impl StageState {
    pub fn new(alpha: &IAMatrix, m: u64) -> Result<Self> {
        let n = alpha.n();
        if n < 4 {
            return Err(Error::Precondition(format!(
                "n = {n}: decomposition needs n >= 4; the cases n = 2, 3 behave differently and are not covered"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let det = det_monomial(alpha)?;
        Ok(StageState { n, m, input: alpha.clone(), current: alpha.clone(), det, left: Vec::new(), right: Vec::new() })
    }

    pub fn current(&self) -> &IAMatrix {
        &self.current
    }

    /// Records factor `f` on the right: `current <- current * f^{-1}`.
    fn push_right(&mut self, f: Generated, f_inv: &IAMatrix, label: String) -> Result<()> {
        self.det = self.det.mul(&det_monomial(f_inv)?);
        // `current` is IA, so a rank-one right factor only adds `sigma w`.
        self.current = match f_inv.sigma_rank_one() {
            Some(w) => self.current.add_sigma_outer(&w),
            None => self.current.mul(f_inv),
        };
        self.right.push(Factor::iam(label, f.matrix, f.witness));
        Ok(())
    }

    /// Records the ISL factor `g` on the left: `current <- g^{-1} * current`.
    fn push_left(&mut self, g: IAMatrix, g_inv: &IAMatrix, u: usize) -> Result<()> {
        self.det = self.det.mul(&det_monomial(&g)?.inv());
        self.current = g_inv.mul(&self.current);
        self.left.push(Factor::isl(format!("stage {u} isl"), g, u, self.m)?);
        Ok(())
    }

    fn check_row_reduced(&self, u: usize, cols: impl Iterator<Item = usize>, what: &str) -> Result<()> {
        for v in cols {
            let a = proj(u, &self.current.deviation(u, v));
            match sigma_power_quotient(&a, u, 2) {
                Some(q) if in_h(&q, self.m) => {}
                _ => {
                    return Err(Error::Verification(format!(
                        "stage {u} {what}: entry ({u},{v}) is not in sigma_{u}^2 H after projection"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Clears the entries `(u, v)`, `v < u`, modulo `sigma_u^2 H` under the
    /// projection. Returns `delta` with `current <- current * delta^{-1}`.
    pub fn reduce_row_left(&mut self, u: usize) -> Result<Generated> {
        let (n, m) = (self.n, self.m);
        let mut b = vec![LaurentPoly::zero(n); n];
        for v in 1..u {
            let a = proj(u, &self.current.deviation(u, v));
            let bar = a.exact_div_sigma(u).ok_or_else(|| {
                Error::Precondition(format!("stage {u} left: entry ({u},{v}) is not divisible by sigma_{u}"))
            })?;
            b[v - 1] = bar.substitute_ones(&[u]);
        }
        if b.iter().all(LaurentPoly::is_zero) {
            return Ok(Generated::identity(n));
        }
        let terms = solve_row_relation(u, &b, m).map_err(|e| Error::Precondition(format!("stage {u} left: {e}")))?;
        let su = LaurentPoly::sigma(n, u);
        let mut parts = Vec::with_capacity(terms.len());
        for t in &terms {
            parts.push(match t {
                RowTerm::Basic { i, j, c } => type1_basic(u, *i, *j, &(&su * c), m)?,
                RowTerm::CommK { i, j, k, c } => type1_comm_k(u, *i, *j, *k, &(&su * c), m)?,
                RowTerm::CommIK { i, j, k, c } if k == j => type2_mixed(u, *i, *j, c, m)?,
                RowTerm::CommIK { i, j, k, c } => type1_comm_ik(u, *i, *j, *k, &(&su * c), m)?,
            });
        }
        let delta = Generated::product(parts, n);
        let row: Vec<LaurentPoly> = b.iter().map(|x| &su * x).collect();
        if delta.matrix != IAMatrix::with_row_deviation(u, &row) {
            return Err(Error::Verification(format!("stage {u} left: assembled factor has the wrong row")));
        }
        let neg: Vec<LaurentPoly> = row.iter().map(|x| -x).collect();
        self.push_right(delta.clone(), &IAMatrix::with_row_deviation(u, &neg), format!("stage {u} left"))?;
        self.check_row_reduced(u, 1..u, "left")?;
        Ok(delta)
    }

    /// Clears the entries `(u, v)`, `v > u`, modulo `sigma_u^2 H` under the
    /// projection. Returns `delta` with `current <- current * delta^{-1}`.
    pub fn reduce_row_right(&mut self, u: usize) -> Result<Generated> {
        let (n, m) = (self.n, self.m);
        let m2 = (m * m) as i64;
        let su = LaurentPoly::sigma(n, u);
        let mut applied = Vec::new();
        for v in u + 1..=n {
            let e = proj(u, &self.current.deviation(u, v)).exact_div_sigma(u).ok_or_else(|| {
                Error::Precondition(format!("stage {u} right: entry ({u},{v}) is not divisible by sigma_{u}"))
            })?;
            let aug = e.augmentation();
            let s = &aug / m2;
            if &s * m2 != aug {
                return Err(Error::Precondition(format!(
                    "stage {u} right: entry ({u},{v}) has integer part {aug}, not a multiple of {m2}"
                )));
            }
            let s: i64 = s.try_into().map_err(|_| Error::Precondition("integer part too large".into()))?;
            if s != 0 {
                // current <- current * D^{s m^2}; the recorded factor is D^{-s m^2}.
                let d = IAMatrix::elementary(n, u, v);
                let f = Generated { matrix: d.pow(-s * m2)?, witness: PowerWitness::pow(d.clone(), -s * m2) };
                let f_inv = d.pow(s * m2)?;
                self.push_right(f.clone(), &f_inv, format!("stage {u} right shift v={v}"))?;
                applied.push(f);
            }
            let e = proj(u, &self.current.deviation(u, v))
                .exact_div_sigma(u)
                .ok_or_else(|| Error::Verification(format!("stage {u} right: shift broke divisibility at ({u},{v})")))?;
            let (h, e2) = e.divide_by_sigma(u);
            if !in_h(&h, m) {
                return Err(Error::Precondition(format!(
                    "stage {u} right: entry ({u},{v}) has a sigma_{u}^2 part outside H"
                )));
            }
            if e2.is_zero() {
                continue;
            }
            let f = solve_sigma_h(&e2, u - 1, m).map_err(|err| Error::Precondition(format!("stage {u} right: {err}")))?;
            let mut parts = Vec::new();
            let mut row = vec![LaurentPoly::zero(n); n];
            for (idx, fi) in f.iter().enumerate() {
                let i = idx + 1;
                if fi.is_zero() {
                    continue;
                }
                let split = split_h(fi, m)?;
                if !split.constant.is_zero() {
                    parts.push(type1_basic(u, i, v, &(&su * &split.constant), m)?);
                }
                for (r, g) in split.power_parts() {
                    parts.push(type1_comm_k(u, i, v, r, &(&su * g), m)?);
                }
                for (slot, x) in row.iter_mut().zip(kappa(n, i, v, &(&su * fi))) {
                    *slot = &*slot + &x;
                }
            }
            let delta_v = Generated::product(parts, n);
            if delta_v.matrix != IAMatrix::with_row_deviation(u, &row) {
                return Err(Error::Verification(format!("stage {u} right: factor for v={v} has the wrong row")));
            }
            let neg: Vec<LaurentPoly> = row.iter().map(|x| -x).collect();
            self.push_right(delta_v.clone(), &IAMatrix::with_row_deviation(u, &neg), format!("stage {u} right v={v}"))?;
            applied.push(delta_v);
        }
        self.check_row_reduced(u, (1..=n).filter(|&v| v != u), "right")?;
        applied.reverse();
        Ok(Generated::product(applied, n))
    }

    /// Makes row `u` trivial under the projection and splits off the ISL factor.
    /// Returns the recorded ISL factor `g` and `beta` with `current <- g^{-1} * current * beta`.
    pub fn finish_row(&mut self, u: usize) -> Result<(IAMatrix, Generated)> {
        let (g, beta) = self.finish_row_parts(u)?;
        Ok((g, Generated::product(beta, self.n)))
    }

    /// [`Self::finish_row`] with `beta` left as its list of factors.
    fn finish_row_parts(&mut self, u: usize) -> Result<(IAMatrix, Vec<Generated>)> {
        let (n, m) = (self.n, self.m);
        let m2 = (m * m) as i64;
        let mut beta_parts = Vec::new();
        for v in (1..=n).filter(|&v| v != u) {
            let a = proj(u, &self.current.deviation(u, v));
            let b = sigma_power_quotient(&a, u, 2)
                .ok_or_else(|| Error::Precondition(format!("stage {u} finish: entry ({u},{v}) not in sigma_{u}^2 R")))?;
            if b.is_zero() {
                continue;
            }
            // Block elements are additive in b, so a long b is handled in pieces,
            // each with a witness whose replay stays small.
            let pieces = h_chunks(&b, m, FINISH_CHUNK)?;
            for (idx, b) in pieces.iter().enumerate() {
                let mut parts = vec![type2_block(u, v, b, m)?];
                let split = split_h(b, m)?;
                for k in (1..=n).filter(|&k| k != u && k != v) {
                    let sk = LaurentPoly::sigma(n, k);
                    if !split.constant.is_zero() {
                        parts.push(type1_basic(k, v, u, &(&sk * &split.constant), m)?);
                    }
                    for (r, g) in split.power_parts() {
                        parts.push(if r == k { type2_sq(k, v, u, g, m)? } else { type1_comm_k(k, v, u, r, &(&sk * g), m)? });
                    }
                }
                let delta_v = Generated::product(parts, n);
                // delta_v = I + sigma_vec * b * kappa_vu, a square-zero perturbation.
                let kap = kappa(n, v, u, b);
                let mut expected = IAMatrix::identity(n);
                let mut inverse = IAMatrix::identity(n);
                for k in 1..=n {
                    let sk = LaurentPoly::sigma(n, k);
                    for l in 1..=n {
                        let x = &sk * &kap[l - 1];
                        if x.is_zero() {
                            continue;
                        }
                        expected.set(k, l, expected.get(k, l) + &x);
                        inverse.set(k, l, inverse.get(k, l) - &x);
                    }
                }
                if delta_v.matrix != expected {
                    return Err(Error::Verification(format!("stage {u} finish: factor for v={v} is not the expected rank-one element")));
                }
                // current <- current * delta_v, recorded as delta_v^{-1}.
                let rec = Generated { matrix: inverse, witness: PowerWitness::inverse(delta_v.witness.clone()) };
                let label = match pieces.len() {
                    1 => format!("stage {u} finish v={v}"),
                    _ => format!("stage {u} finish v={v} part {}", idx + 1),
                };
                self.push_right(rec, &delta_v.matrix, label)?;
                beta_parts.push(delta_v);
            }
        }
        for v in (1..=n).filter(|&v| v != u) {
            if !proj(u, &self.current.deviation(u, v)).is_zero() {
                return Err(Error::Verification(format!("stage {u} finish: entry ({u},{v}) survives the projection")));
            }
        }
        let det = self.det.clone();
        let su_exp = det.exponents[u - 1] as i64;
        if su_exp % m2 != 0 {
            return Err(Error::Precondition(format!("stage {u} finish: determinant {det} has x{u}-exponent not divisible by {m2}")));
        }
        let s = su_exp / m2;
        if s != 0 {
            let i0 = if u == 1 { 2 } else { 1 };
            let z = IAMatrix::elementary(n, i0, u);
            // current <- current * Z^{-s m^2}, recorded as Z^{s m^2}.
            let rec = Generated { matrix: z.pow(s * m2)?, witness: PowerWitness::pow(z.clone(), s * m2) };
            let applied = z.pow(-s * m2)?;
            self.push_right(rec, &applied, format!("stage {u} det"))?;
            beta_parts.push(Generated { matrix: applied, witness: PowerWitness::pow(z, -s * m2) });
        }

        // gamma^{-1}: row u trivial, (i,j) = delta_ij + sigma_u d_ij, (i,u) = -sum_k sigma_k d_ik.
        let mut gamma_inv = IAMatrix::identity(n);
        let su = LaurentPoly::sigma(n, u);
        for i in (1..=n).filter(|&i| i != u) {
            let mut col_u = LaurentPoly::zero(n);
            for j in (1..=n).filter(|&j| j != u) {
                let c = proj(u, &self.current.deviation(i, j));
                let d = c.exact_div_sigma(u).ok_or_else(|| {
                    Error::Verification(format!("stage {u} finish: entry ({i},{j}) is not divisible by sigma_{u}"))
                })?;
                if !in_h(&d, m) {
                    return Err(Error::Verification(format!("stage {u} finish: entry ({i},{j}) is outside sigma_{u} H")));
                }
                col_u = &col_u - &(&LaurentPoly::sigma(n, j) * &d);
                gamma_inv.set(i, j, gamma_inv.get(i, j) + &(&su * &d));
            }
            gamma_inv.set(i, u, col_u);
        }
        if gamma_inv.map_entries(|p| proj(u, p)) != self.current.map_entries(|p| proj(u, p)) {
            return Err(Error::Verification(format!("stage {u} finish: residual does not match the ISL shape")));
        }
        // On the last stage the residual is `current`, whose determinant is tracked.
        let isl = if u == n {
            gamma_inv == self.current && self.det.is_one() && in_isl_shape(&gamma_inv, u, m)
        } else {
            in_isl(&gamma_inv, u, m)
        };
        if !isl {
            return Err(Error::Verification(format!("stage {u} finish: residual factor is not in ISL_{u}(sigma_{u} H)")));
        }
        if u == n {
            self.det = det_monomial(&IAMatrix::identity(n))?;
            self.current = IAMatrix::identity(n);
            if !gamma_inv.is_identity() {
                self.left.push(Factor::isl(format!("stage {u} isl"), gamma_inv.clone(), u, m)?);
            }
        } else if !gamma_inv.is_identity() {
            let gamma = gamma_inv.inverse()?;
            self.push_left(gamma_inv.clone(), &gamma, u)?;
        }
        if !self.current.map_entries(|p| proj(u, p)).is_identity() {
            return Err(Error::Verification(format!("stage {u}: current matrix is not trivial under the projection")));
        }
        Ok((gamma_inv, beta_parts))
    }

    /// Runs stage `u`.
    pub fn run_stage(&mut self, u: usize) -> Result<()> {
        self.reduce_row_left(u)?;
        self.reduce_row_right(u)?;
        self.finish_row_parts(u)?;
        let det = &self.det;
        if !det.divisible_by((self.m * self.m) as i64) {
            return Err(Error::Verification(format!("stage {u}: determinant {det} left the m^2 lattice")));
        }
        Ok(())
    }

    /// Packages the run; the current matrix must be the identity.
    pub fn into_certificate(self) -> Result<DecompositionCertificate> {
        if !self.current.is_identity() {
            return Err(Error::Verification("decomposition did not reach the identity".into()));
        }
        let mut factors = self.left;
        factors.extend(self.right.into_iter().rev());
        Ok(DecompositionCertificate::new(self.n, self.m, self.input, factors))
    }
}

/// Decomposes `alpha` in `IG_{n,m^2}`, `n >= 4`.
pub fn decompose(alpha: &IAMatrix, m: u64) -> Result<DecompositionCertificate> {
    let mut state = StageState::new(alpha, m)?;
    check_entry_j(alpha, m)?;
    debug_assert!(check_ia(alpha) && in_ig(alpha, m * m));
    for u in 1..=alpha.n() {
        state.run_stage(u)?;
    }
    state.into_certificate()
}

#[cfg(test)]
mod tests;
