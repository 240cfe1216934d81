//! Certified elementary elements of `IA^m`.
//!
//! Every constructor returns the matrix together with a [`PowerWitness`] whose
//! evaluation reproduces it exactly. The construction is replayed before
//! returning, so a wrong identity surfaces as an error instead of a bad witness.

mod relation;
mod witness;

pub use relation::{expand_row_terms, solve_row_relation, solve_sigma_h, RowTerm};
pub use witness::{verify_witness, Operand, PowerWitness};

use crate::error::{Error, Result};
use crate::ideal::split_h;
use crate::laurent::LaurentPoly;
use crate::matrix::IAMatrix;

/// A matrix with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub matrix: IAMatrix,
    pub witness: PowerWitness,
}

impl Generated {
    pub fn identity(n: usize) -> Self {
        Generated { matrix: IAMatrix::identity(n), witness: PowerWitness::Identity }
    }

    /// Checks the witness against the matrix.
    pub fn verify(&self, m: u64) -> Result<()> {
        verify_witness(&self.witness, &self.matrix, m)
    }

    pub fn product(parts: Vec<Generated>, n: usize) -> Generated {
        let mut matrix = IAMatrix::identity(n);
        let mut ws = Vec::with_capacity(parts.len());
        for p in parts {
            matrix = matrix.mul(&p.matrix);
            ws.push(p.witness);
        }
        Generated { matrix, witness: PowerWitness::product(ws) }
    }
}

/// Row `u` deviation of a row element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpec {
    pub u: usize,
    pub a: Vec<LaurentPoly>,
}

impl RowSpec {
    pub fn new(u: usize, a: Vec<LaurentPoly>) -> Result<Self> {
        let n = a.len();
        if u == 0 || u > n {
            return Err(Error::IndexOutOfRange { index: u, n });
        }
        if !a[u - 1].is_zero() {
            return Err(Error::InvalidArgument(format!("row entry a_{u} must vanish")));
        }
        let rel = a
            .iter()
            .enumerate()
            .fold(LaurentPoly::zero(n), |acc, (v, p)| &acc + &(p * &LaurentPoly::sigma(n, v + 1)));
        if !rel.is_zero() {
            return Err(Error::InvalidArgument("row relation sum a_v sigma_v != 0".into()));
        }
        Ok(RowSpec { u, a })
    }
}

pub fn row_elem(spec: &RowSpec) -> IAMatrix {
    IAMatrix::with_row_deviation(spec.u, &spec.a)
}

/// The vector `f * (sigma_i e_j - sigma_j e_i)`.
pub fn kappa(n: usize, i: usize, j: usize, f: &LaurentPoly) -> Vec<LaurentPoly> {
    let mut a = vec![LaurentPoly::zero(n); n];
    a[j - 1] = f * &LaurentPoly::sigma(n, i);
    a[i - 1] = -&(f * &LaurentPoly::sigma(n, j));
    a
}

fn kappa_row(u: usize, i: usize, j: usize, f: &LaurentPoly) -> IAMatrix {
    IAMatrix::with_row_deviation(u, &kappa(f.nvars(), i, j, f))
}

fn check_indices(n: usize, idx: &[usize]) -> Result<()> {
    for &i in idx {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    Ok(())
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.into()))
    }
}

fn check_modulus(m: u64) -> Result<()> {
    require(m >= 1, "modulus must be positive")
}

/// Checks a matrix assembled from already verified parts and packages it with
/// `witness`, whose value it is by construction.
fn assemble(expected: IAMatrix, got: &IAMatrix, witness: PowerWitness, what: &str) -> Result<Generated> {
    if got != &expected {
        return Err(Error::Verification(format!("{what}: assembled matrix differs from the closed form")));
    }
    Ok(Generated { matrix: expected, witness })
}

/// Inverse of a row element `I + e_w a` with `a_w = 0`, which is `I - e_w a`;
/// anything else goes through the adjugate.
fn row_inverse(a: &IAMatrix) -> Result<IAMatrix> {
    let n = a.n();
    let rows: Vec<usize> = (1..=n).filter(|&i| (1..=n).any(|j| !a.deviation(i, j).is_zero())).collect();
    match rows.as_slice() {
        [] => Ok(IAMatrix::identity(n)),
        [w] if a.deviation(*w, *w).is_zero() => {
            let neg: Vec<LaurentPoly> = (1..=n).map(|j| -&a.deviation(*w, j)).collect();
            Ok(IAMatrix::with_row_deviation(*w, &neg))
        }
        _ => a.inverse(),
    }
}

/// Replays the witness and packages the result.
fn finish(expected: IAMatrix, witness: PowerWitness, what: &str) -> Result<Generated> {
    let got = witness.eval(expected.n())?;
    if got != expected {
        return Err(Error::Verification(format!("{what}: witness replay does not reproduce the matrix")));
    }
    Ok(Generated { matrix: expected, witness })
}

/// Row `u` equal to `m f (sigma_i e_j - sigma_j e_i)`, the `m`-th power of the
/// row element with `f`.
pub fn type1_basic(u: usize, i: usize, j: usize, f: &LaurentPoly, m: u64) -> Result<Generated> {
    let n = f.nvars();
    check_indices(n, &[u, i, j])?;
    check_modulus(m)?;
    require(i != u && j != u && i != j, "type1_basic needs i, j != u and i != j")?;
    if f.is_zero() {
        return Ok(Generated::identity(n));
    }
    let base = kappa_row(u, i, j, f);
    let target = kappa_row(u, i, j, &f.scale_i64(m as i64));
    finish(target, PowerWitness::pow(base, m as i64), "type1_basic")
}

/// `I + sigma_k E_uu - sigma_u E_uk`.
fn dilation(n: usize, u: usize, k: usize) -> IAMatrix {
    IAMatrix::elementary(n, u, k)
}

/// Row `u` equal to `sigma_k mu_{k,m} f (sigma_i e_j - sigma_j e_i)`.
pub fn type1_comm_k(u: usize, i: usize, j: usize, k: usize, f: &LaurentPoly, m: u64) -> Result<Generated> {
    let n = f.nvars();
    check_indices(n, &[u, i, j, k])?;
    check_modulus(m)?;
    require(i != u && j != u && k != u && i != j, "type1_comm_k needs i, j, k != u and i != j")?;
    if f.is_zero() {
        return Ok(Generated::identity(n));
    }
    let coeff = &(&LaurentPoly::sigma(n, k) * &LaurentPoly::mu(n, k, m)) * f;
    let target = kappa_row(u, i, j, &coeff);
    let left = kappa_row(u, i, j, &-f);
    let witness = PowerWitness::commutator(
        Operand::plain(left),
        Operand::witness(PowerWitness::pow(dilation(n, u, k), m as i64)),
    );
    finish(target, witness, "type1_comm_k")
}

/// Row `u` equal to `sigma_k mu_{i,m} f (sigma_i e_j - sigma_j e_i)`, `k != j`.
/// For `k = i` this is [`type1_comm_k`].
pub fn type1_comm_ik(u: usize, i: usize, j: usize, k: usize, f: &LaurentPoly, m: u64) -> Result<Generated> {
    let n = f.nvars();
    check_indices(n, &[u, i, j, k])?;
    check_modulus(m)?;
    require(
        i != u && j != u && k != u && i != j && k != j,
        "type1_comm_ik needs i, j, k != u, i != j and k != j",
    )?;
    if k == i {
        return type1_comm_k(u, i, j, k, f, m);
    }
    if f.is_zero() {
        return Ok(Generated::identity(n));
    }
    let coeff = &(&LaurentPoly::sigma(n, k) * &LaurentPoly::mu(n, i, m)) * f;
    let target = kappa_row(u, i, j, &coeff);
    // Z = I + sigma_i E_jj - sigma_j E_ji acts on row j only.
    let z = dilation(n, j, i);
    let witness = PowerWitness::commutator(
        Operand::plain(kappa_row(u, j, k, f)),
        Operand::witness(PowerWitness::pow(z, -(m as i64))),
    );
    finish(target, witness, "type1_comm_ik")
}

/// Smallest index outside `avoid`.
fn spare_index(n: usize, avoid: &[usize]) -> Result<usize> {
    (1..=n)
        .find(|w| !avoid.contains(w))
        .ok_or_else(|| Error::Precondition("n >= 4 is required for this construction".into()))
}

fn require_n4(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "n = {n}: the construction needs a fourth index, so n >= 4 is required"
        )));
    }
    Ok(())
}

/// Row `u` equal to `sigma_u^2 mu_{u,m} f (sigma_i e_j - sigma_j e_i)`.
pub fn type2_sq(u: usize, i: usize, j: usize, f: &LaurentPoly, m: u64) -> Result<Generated> {
    let n = f.nvars();
    require_n4(n)?;
    check_indices(n, &[u, i, j])?;
    check_modulus(m)?;
    require(i != u && j != u && i != j, "type2_sq needs i, j != u and i != j")?;
    if f.is_zero() {
        return Ok(Generated::identity(n));
    }
    let w = spare_index(n, &[u, i, j])?;
    let inner = type1_comm_k(w, j, i, u, f, m)?;
    let su = LaurentPoly::sigma(n, u);
    let coeff = &(&(&su * &su) * &LaurentPoly::mu(n, u, m)) * f;
    let target = kappa_row(u, i, j, &coeff);
    let witness = PowerWitness::commutator(Operand::plain(dilation(n, u, w)), Operand::witness(inner.witness));
    finish(target, witness, "type2_sq")
}

/// Row `u` equal to `sigma_u sigma_j mu_{i,m} f (sigma_i e_j - sigma_j e_i)`.
pub fn type2_mixed(u: usize, i: usize, j: usize, f: &LaurentPoly, m: u64) -> Result<Generated> {
    let n = f.nvars();
    require_n4(n)?;
    check_indices(n, &[u, i, j])?;
    check_modulus(m)?;
    require(i != u && j != u && i != j, "type2_mixed needs i, j != u and i != j")?;
    if f.is_zero() {
        return Ok(Generated::identity(n));
    }
    let w = spare_index(n, &[u, i, j])?;
    let inner = type1_comm_ik(w, i, j, u, &-f, m)?;
    let coeff = &(&(&LaurentPoly::sigma(n, u) * &LaurentPoly::sigma(n, j)) * &LaurentPoly::mu(n, i, m)) * f;
    let target = kappa_row(u, i, j, &coeff);
    let p = kappa_row(u, w, j, &LaurentPoly::one(n));
    let witness = PowerWitness::commutator(Operand::plain(p), Operand::witness(inner.witness));
    finish(target, witness, "type2_mixed")
}

/// The block element: `(u,u) = 1 + sigma_u sigma_v f`, `(u,v) = -sigma_u^2 f`,
/// `(v,u) = sigma_v^2 f`, `(v,v) = 1 - sigma_u sigma_v f`.
pub fn block_matrix(u: usize, v: usize, f: &LaurentPoly) -> IAMatrix {
    let n = f.nvars();
    let (su, sv) = (LaurentPoly::sigma(n, u), LaurentPoly::sigma(n, v));
    let one = LaurentPoly::one(n);
    let cross = &(&su * &sv) * f;
    let mut m = IAMatrix::identity(n);
    m.set(u, u, &one + &cross);
    m.set(u, v, -&(&(&su * &su) * f));
    m.set(v, u, &(&sv * &sv) * f);
    m.set(v, v, &one - &cross);
    m
}

/// Block element for `f` in `H_{n,m}`, handled summand by summand over the
/// generators of `H_{n,m}` and multiplied together by additivity in `f`.
pub fn type2_block(u: usize, v: usize, f: &LaurentPoly, m: u64) -> Result<Generated> {
    let n = f.nvars();
    require_n4(n)?;
    check_indices(n, &[u, v])?;
    check_modulus(m)?;
    require(u != v, "type2_block needs u != v")?;
    if u > v {
        let g = type2_block(v, u, &-f, m)?;
        debug_assert_eq!(g.matrix, block_matrix(u, v, f));
        return Ok(g);
    }
    if f.is_zero() {
        return Ok(Generated::identity(n));
    }
    let split = split_h(f, m)?;
    let mut parts: Vec<Generated> = Vec::new();
    if !split.constant.is_zero() {
        let w = spare_index(n, &[u, v])?;
        let g = &split.constant;
        let x = type1_basic(w, u, v, g, m)?;
        let y = type1_basic(w, u, v, &(&LaurentPoly::sigma(n, w) * g), m)?;
        parts.push(block_part(n, u, v, w, &g.scale_i64(m as i64), x, y)?);
    }
    for (r, g) in split.power_parts() {
        let w = spare_index(n, &[u, v, r])?;
        let x = type1_comm_k(w, u, v, r, g, m)?;
        let y = type1_comm_k(w, u, v, r, &(&LaurentPoly::sigma(n, w) * g), m)?;
        let part = &(&LaurentPoly::sigma(n, r) * &LaurentPoly::mu(n, r, m)) * g;
        parts.push(block_part(n, u, v, w, &part, x, y)?);
    }
    let product = parts.iter().fold(IAMatrix::identity(n), |acc, p| acc.mul(&p.matrix));
    let witness = PowerWitness::product(parts.into_iter().map(|p| p.witness));
    assemble(block_matrix(u, v, f), &product, witness, "type2_block")
}

/// `[X, D^{-1}] Y` with `D = I + sigma_w (E_uu + E_vv) - sigma_u E_uw - sigma_v E_vw`,
/// where `X`, `Y` are row-`w` elements with `f_part kappa_uv` and `sigma_w f_part kappa_uv`.
fn block_part(
    n: usize,
    u: usize,
    v: usize,
    w: usize,
    f_part: &LaurentPoly,
    x: Generated,
    y: Generated,
) -> Result<Generated> {
    let sw = LaurentPoly::sigma(n, w);
    let mut d = IAMatrix::identity(n);
    d.set(u, u, &LaurentPoly::one(n) + &sw);
    d.set(v, v, &LaurentPoly::one(n) + &sw);
    d.set(u, w, -&LaurentPoly::sigma(n, u));
    d.set(v, w, -&LaurentPoly::sigma(n, v));
    let d_inv = d.inverse()?;
    // [X, D^{-1}] Y = X D^{-1} X^{-1} D Y.
    let got = x.matrix.mul(&d_inv).mul(&row_inverse(&x.matrix)?).mul(&d).mul(&y.matrix);
    let witness = PowerWitness::product([
        PowerWitness::commutator(Operand::witness(x.witness), Operand::plain(d_inv)),
        y.witness,
    ]);
    assemble(block_matrix(u, v, f_part), &got, witness, "type2_block part")
}
