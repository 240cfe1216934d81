//! Decomposition certificates: format, hashing and the independent checker.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::{verify_witness, PowerWitness};
use crate::ideal::{decompose_h, CertificateRecord, IdealExpr, MembershipCertificate};
use crate::laurent::LaurentPoly;
use crate::matrix::{det_monomial, in_isl_shape, DetMonomial, IAMatrix};

pub const FORMAT: &str = "metacsp-decomposition/1";

/// ISL evidence for one minor entry: `A[row][col] = sigma_u * q` with a certificate for `q` in `H_{n,m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IslEntry {
    pub row: usize,
    pub col: usize,
    pub quotient: CertificateRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Evidence {
    Iam { witness: PowerWitness },
    Isl { u: usize, entries: Vec<IslEntry> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub matrix: IAMatrix,
    pub evidence: Evidence,
}

impl Factor {
    pub fn iam(label: String, matrix: IAMatrix, witness: PowerWitness) -> Self {
        Factor { label, matrix, evidence: Evidence::Iam { witness } }
    }

    /// Builds the ISL evidence for `matrix` at index `u`.
    pub fn isl(label: String, matrix: IAMatrix, u: usize, m: u64) -> Result<Self> {
        let n = matrix.n();
        let mut entries = Vec::new();
        for row in (1..=n).filter(|&k| k != u) {
            for col in (1..=n).filter(|&l| l != u) {
                let a = matrix.deviation(row, col);
                if a.is_zero() {
                    continue;
                }
                let q = a
                    .exact_div_sigma(u)
                    .ok_or_else(|| Error::Verification(format!("ISL entry ({row},{col}) not divisible by sigma_{u}")))?;
                entries.push(IslEntry { row, col, quotient: decompose_h(&q, m)?.to_record() });
            }
        }
        Ok(Factor { label, matrix, evidence: Evidence::Isl { u, entries } })
    }

    pub fn is_iam(&self) -> bool {
        matches!(self.evidence, Evidence::Iam { .. })
    }
}

/// An ordered factorisation `input = factors[0] * factors[1] * ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    pub format: String,
    pub n: usize,
    pub m: u64,
    pub input: IAMatrix,
    pub input_sha256: String,
    pub factors: Vec<Factor>,
    /// Hash of `factors[0] * ... * factors[k]` for each `k`.
    pub prefix_sha256: Vec<String>,
}

pub fn matrix_hash(m: &IAMatrix) -> String {
    hex::encode(Sha256::digest(m.to_string().as_bytes()))
}

impl DecompositionCertificate {
    pub fn new(n: usize, m: u64, input: IAMatrix, factors: Vec<Factor>) -> Self {
        let mut acc = IAMatrix::identity(n);
        let prefix_sha256 = factors
            .iter()
            .map(|f| {
                acc = acc.mul(&f.matrix);
                matrix_hash(&acc)
            })
            .collect();
        DecompositionCertificate {
            format: FORMAT.into(),
            n,
            m,
            input_sha256: matrix_hash(&input),
            input,
            factors,
            prefix_sha256,
        }
    }

    pub fn iam_count(&self) -> usize {
        self.factors.iter().filter(|f| f.is_iam()).count()
    }

    pub fn isl_count(&self) -> usize {
        self.factors.len() - self.iam_count()
    }

    /// Exact product of the factors.
    pub fn product(&self) -> IAMatrix {
        self.factors.iter().fold(IAMatrix::identity(self.n), |acc, f| acc.mul(&f.matrix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Corrupt(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Why a certificate was rejected; `index` is the offending factor, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub index: Option<usize>,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "factor {i}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

fn fail(index: Option<usize>, reason: impl Into<String>) -> CheckFailure {
    CheckFailure { index, reason: reason.into() }
}

fn check_factor(f: &Factor, n: usize, m: u64) -> std::result::Result<(), String> {
    if f.matrix.n() != n {
        return Err(format!("matrix has size {}, expected {n}", f.matrix.n()));
    }
    match &f.evidence {
        Evidence::Iam { witness } => verify_witness(witness, &f.matrix, m).map_err(|e| e.to_string()),
        Evidence::Isl { u, entries } => {
            let u = *u;
            if u == 0 || u > n {
                return Err(format!("ISL index {u} out of range"));
            }
            if !f.matrix.fixes_sigma() {
                return Err("ISL factor is not an IA matrix".into());
            }
            // The determinant is checked separately, after the product identity.
            if !in_isl_shape(&f.matrix, u, m) {
                return Err(format!("factor is not in ISL_{u}(sigma_{u} H_{m})"));
            }
            let sigma = LaurentPoly::sigma(n, u);
            let mut covered = 0;
            for e in entries {
                if e.row == u || e.col == u || e.row == 0 || e.col == 0 || e.row > n || e.col > n {
                    return Err(format!("ISL evidence at invalid position ({},{})", e.row, e.col));
                }
                let cert = MembershipCertificate::from_record(n, &e.quotient).map_err(|e| e.to_string())?;
                if cert.ideal != IdealExpr::h(n, m) || !cert.verify() {
                    return Err(format!("H-certificate for entry ({},{}) does not verify", e.row, e.col));
                }
                if &sigma * &cert.target != f.matrix.deviation(e.row, e.col) {
                    return Err(format!("H-certificate for entry ({},{}) has the wrong target", e.row, e.col));
                }
                covered += 1;
            }
            let nonzero = (1..=n)
                .filter(|&k| k != u)
                .flat_map(|k| (1..=n).filter(move |&l| l != u).map(move |l| (k, l)))
                .filter(|&(k, l)| !f.matrix.deviation(k, l).is_zero())
                .count();
            if covered != nonzero {
                return Err("ISL evidence does not cover every minor entry".into());
            }
            Ok(())
        }
    }
}

/// Re-verifies a certificate from its contents alone: input hash, every
/// factor's evidence, every prefix hash, the final product and the determinants.
pub fn check_certificate(cert: &DecompositionCertificate) -> std::result::Result<(), CheckFailure> {
    if cert.format != FORMAT {
        return Err(fail(None, format!("unknown format '{}'", cert.format)));
    }
    if cert.m == 0 || cert.input.n() != cert.n {
        return Err(fail(None, "inconsistent header"));
    }
    if matrix_hash(&cert.input) != cert.input_sha256 {
        return Err(fail(None, "input hash mismatch"));
    }
    if cert.prefix_sha256.len() != cert.factors.len() {
        return Err(fail(None, "prefix hash count does not match factor count"));
    }
    let first_bad = cert
        .factors
        .par_iter()
        .enumerate()
        .filter_map(|(i, f)| check_factor(f, cert.n, cert.m).err().map(|e| (i, e)))
        .min_by_key(|(i, _)| *i);
    if let Some((i, reason)) = first_bad {
        return Err(fail(Some(i), reason));
    }
    let mut acc = IAMatrix::identity(cert.n);
    for (i, (f, h)) in cert.factors.iter().zip(&cert.prefix_sha256).enumerate() {
        acc = acc.mul(&f.matrix);
        if &matrix_hash(&acc) != h {
            return Err(fail(Some(i), "prefix product hash mismatch"));
        }
    }
    if acc != cert.input {
        return Err(fail(None, "product of factors differs from the input"));
    }
    check_determinants(cert)
}

/// Every factor needs a unit determinant, and ISL factors determinant 1. The
/// heaviest ISL factor's determinant follows from the verified product identity
/// and the others, so it is never expanded.
fn check_determinants(cert: &DecompositionCertificate) -> std::result::Result<(), CheckFailure> {
    let inferred = cert
        .factors
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_iam())
        .max_by_key(|(_, f)| f.matrix.weight())
        .map(|(i, _)| i);
    let dets: Vec<(usize, DetMonomial)> = cert
        .factors
        .par_iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != inferred)
        .map(|(i, f)| det_monomial(&f.matrix).map(|d| (i, d)).map_err(|e| fail(Some(i), e.to_string())))
        .collect::<std::result::Result<_, _>>()?;
    for (i, d) in &dets {
        if !cert.factors[*i].is_iam() && !d.is_one() {
            return Err(fail(Some(*i), format!("ISL factor has determinant {d}")));
        }
    }
    if let Some(i) = inferred {
        let input = det_monomial(&cert.input).map_err(|e| fail(None, format!("input: {e}")))?;
        let rest = dets.iter().fold(input, |acc, (_, d)| acc.mul(&d.inv()));
        if !rest.is_one() {
            return Err(fail(Some(i), format!("ISL factor has determinant {rest}")));
        }
    }
    Ok(())
}
