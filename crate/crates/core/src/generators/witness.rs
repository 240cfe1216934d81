//! Witness trees certifying membership in the subgroup generated by `m`-th powers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IAMatrix;

/// Operand of a commutator node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Operand {
    /// A certified subtree.
    Witness { node: Box<PowerWitness> },
    /// An arbitrary IA matrix, trusted only through normality.
    Plain { matrix: IAMatrix },
}

impl Operand {
    pub fn witness(w: PowerWitness) -> Self {
        Operand::Witness { node: Box::new(w) }
    }

    pub fn plain(m: IAMatrix) -> Self {
        Operand::Plain { matrix: m }
    }
}

/// Expression whose value lies in `<IA^m>` whenever [`PowerWitness::discipline`] holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PowerWitness {
    Identity,
    /// `base^exponent`; the exponent must be a nonzero multiple of `m`.
    Pow { base: IAMatrix, exponent: i64 },
    Product { factors: Vec<PowerWitness> },
    Inverse { inner: Box<PowerWitness> },
    /// `by * inner * by^{-1}`.
    Conjugate { inner: Box<PowerWitness>, by: IAMatrix },
    /// `left * right * left^{-1} * right^{-1}`.
    Commutator { left: Operand, right: Operand },
}

impl PowerWitness {
    pub fn pow(base: IAMatrix, exponent: i64) -> Self {
        PowerWitness::Pow { base, exponent }
    }

    pub fn inverse(inner: PowerWitness) -> Self {
        match inner {
            PowerWitness::Identity => PowerWitness::Identity,
            PowerWitness::Inverse { inner } => *inner,
            other => PowerWitness::Inverse { inner: Box::new(other) },
        }
    }

    pub fn conjugate(inner: PowerWitness, by: IAMatrix) -> Self {
        PowerWitness::Conjugate { inner: Box::new(inner), by }
    }

    pub fn commutator(left: Operand, right: Operand) -> Self {
        PowerWitness::Commutator { left, right }
    }

    /// Product that drops identity factors and flattens nested products.
    pub fn product(factors: impl IntoIterator<Item = PowerWitness>) -> Self {
        let mut out = Vec::new();
        for f in factors {
            match f {
                PowerWitness::Identity => {}
                PowerWitness::Product { factors } => out.extend(factors),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => PowerWitness::Identity,
            1 => out.pop().unwrap(),
            _ => PowerWitness::Product { factors: out },
        }
    }

    /// Evaluates to the matrix and its inverse.
    pub fn eval_pair(&self, n: usize) -> Result<(IAMatrix, IAMatrix)> {
        Ok((self.eval_side(n, false)?, self.eval_side(n, true)?))
    }

    pub fn eval(&self, n: usize) -> Result<IAMatrix> {
        self.eval_side(n, false)
    }

    /// The value (`inverse == false`) or its inverse, computing the other side
    /// only below commutators, where both are needed.
    fn eval_side(&self, n: usize, inverse: bool) -> Result<IAMatrix> {
        Ok(match self {
            PowerWitness::Identity => IAMatrix::identity(n),
            PowerWitness::Pow { base, exponent } => {
                check_size(base, n)?;
                let k = exponent.unsigned_abs() as i64;
                if (*exponent < 0) != inverse {
                    base.inverse()?.pow(k)?
                } else {
                    base.pow(k)?
                }
            }
            PowerWitness::Product { factors } => {
                let mut acc = IAMatrix::identity(n);
                if inverse {
                    for f in factors.iter().rev() {
                        acc = acc.mul(&f.eval_side(n, true)?);
                    }
                } else {
                    for f in factors {
                        acc = acc.mul(&f.eval_side(n, false)?);
                    }
                }
                acc
            }
            PowerWitness::Inverse { inner } => inner.eval_side(n, !inverse)?,
            PowerWitness::Conjugate { inner, by } => {
                check_size(by, n)?;
                by.mul(&inner.eval_side(n, inverse)?).mul(&by.inverse()?)
            }
            PowerWitness::Commutator { left, right } => {
                let (a, ai) = eval_operand(left, n)?;
                let (b, bi) = eval_operand(right, n)?;
                if inverse {
                    b.mul(&a).mul(&bi).mul(&ai)
                } else {
                    a.mul(&b).mul(&ai).mul(&bi)
                }
            }
        })
    }

    /// Leaf discipline: every power exponent is a nonzero multiple of `m`, and
    /// every commutator has at least one certified operand.
    pub fn discipline(&self, m: u64) -> Result<()> {
        match self {
            PowerWitness::Identity => Ok(()),
            PowerWitness::Pow { exponent, .. } => {
                if *exponent == 0 || exponent.unsigned_abs() % m != 0 {
                    Err(Error::MalformedWitness(format!("power exponent {exponent} is not a nonzero multiple of {m}")))
                } else {
                    Ok(())
                }
            }
            PowerWitness::Product { factors } => factors.iter().try_for_each(|f| f.discipline(m)),
            PowerWitness::Inverse { inner } | PowerWitness::Conjugate { inner, .. } => inner.discipline(m),
            PowerWitness::Commutator { left, right } => match (left, right) {
                (Operand::Plain { .. }, Operand::Plain { .. }) => {
                    Err(Error::MalformedWitness("commutator of two uncertified matrices".into()))
                }
                _ => {
                    for op in [left, right] {
                        if let Operand::Witness { node } = op {
                            node.discipline(m)?;
                        }
                    }
                    Ok(())
                }
            },
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            PowerWitness::Identity | PowerWitness::Pow { .. } => 1,
            PowerWitness::Product { factors } => 1 + factors.iter().map(PowerWitness::size).sum::<usize>(),
            PowerWitness::Inverse { inner } | PowerWitness::Conjugate { inner, .. } => 1 + inner.size(),
            PowerWitness::Commutator { left, right } => {
                let s = |o: &Operand| match o {
                    Operand::Witness { node } => node.size(),
                    Operand::Plain { .. } => 1,
                };
                1 + s(left) + s(right)
            }
        }
    }
}

fn check_size(m: &IAMatrix, n: usize) -> Result<()> {
    if m.n() != n {
        return Err(Error::MalformedWitness(format!("matrix of size {} in a size-{n} witness", m.n())));
    }
    Ok(())
}

fn eval_operand(op: &Operand, n: usize) -> Result<(IAMatrix, IAMatrix)> {
    match op {
        Operand::Witness { node } => node.eval_pair(n),
        Operand::Plain { matrix } => {
            check_size(matrix, n)?;
            Ok((matrix.clone(), matrix.inverse()?))
        }
    }
}

/// Evaluates `w` and checks both the value and the leaf discipline.
pub fn verify_witness(w: &PowerWitness, expected: &IAMatrix, m: u64) -> Result<()> {
    w.discipline(m)?;
    let got = w.eval(expected.n())?;
    if &got != expected {
        return Err(Error::Verification("witness evaluates to a different matrix".into()));
    }
    Ok(())
}
