//! Structured ideals as sums of products of atoms, with a small text syntax.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{parse, Result};
use crate::laurent::LaurentPoly;

/// Building block of a structured ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// The augmentation ideal, generated by all `sigma_i`.
    Aug,
    /// `sum_{r>u} sigma_r R`.
    AugTail(usize),
    /// `sigma_i^k R`.
    Principal { i: usize, k: u32 },
    /// `mR`.
    O(u64),
    /// `mu_{r,m} R`.
    U { r: usize, m: u64 },
    /// The whole ring.
    Full,
}

impl Atom {
    /// Generators over `R_n`.
    pub fn generators(&self, n: usize) -> Vec<LaurentPoly> {
        match *self {
            Atom::Aug => (1..=n).map(|i| LaurentPoly::sigma(n, i)).collect(),
            Atom::AugTail(u) => (u + 1..=n).map(|i| LaurentPoly::sigma(n, i)).collect(),
            Atom::Principal { i, k } => vec![LaurentPoly::sigma(n, i).pow(k)],
            Atom::O(m) => vec![LaurentPoly::constant(n, m)],
            Atom::U { r, m } => vec![LaurentPoly::mu(n, r, m)],
            Atom::Full => vec![LaurentPoly::one(n)],
        }
    }

    /// True if the atom lies inside the augmentation ideal.
    pub fn inside_augmentation(&self) -> bool {
        matches!(self, Atom::Aug | Atom::AugTail(_) | Atom::Principal { .. })
    }

    fn max_index(&self) -> usize {
        match *self {
            Atom::AugTail(u) => u,
            Atom::Principal { i, .. } => i,
            Atom::U { r, .. } => r,
            _ => 0,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Aug => write!(f, "A"),
            Atom::AugTail(u) => write!(f, "Atail({u})"),
            Atom::Principal { i, k: 1 } => write!(f, "sig({i})"),
            Atom::Principal { i, k } => write!(f, "sig({i})^{k}"),
            Atom::O(m) => write!(f, "O({m})"),
            Atom::U { r, m } => write!(f, "U({r},{m})"),
            Atom::Full => write!(f, "R"),
        }
    }
}

/// A finite sum of products of atoms, kept in normal form: each product is a
/// sorted atom list (powers of the same `sigma_i` merged, `R` dropped unless it
/// is the only factor) and the summands are sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealExpr {
    summands: Vec<Vec<Atom>>,
}

fn normalize_product(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.retain(|a| *a != Atom::Full);
    atoms.sort();
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        if let (Some(Atom::Principal { i: pi, k: pk }), Atom::Principal { i, k }) = (out.last_mut(), a) {
            if *pi == i {
                *pk += k;
                continue;
            }
        }
        out.push(a);
    }
    if out.is_empty() {
        out.push(Atom::Full);
    }
    out
}

impl IdealExpr {
    pub fn zero() -> Self {
        IdealExpr { summands: Vec::new() }
    }

    pub fn atom(a: Atom) -> Self {
        IdealExpr { summands: vec![normalize_product(vec![a])] }
    }

    pub fn full() -> Self {
        Self::atom(Atom::Full)
    }

    pub fn product(atoms: Vec<Atom>) -> Self {
        IdealExpr { summands: vec![normalize_product(atoms)] }
    }

    fn normalized(mut summands: Vec<Vec<Atom>>) -> Self {
        summands.sort();
        summands.dedup();
        IdealExpr { summands }
    }

    pub fn summands(&self) -> &[Vec<Atom>] {
        &self.summands
    }

    pub fn add(&self, other: &IdealExpr) -> IdealExpr {
        let mut s = self.summands.clone();
        s.extend(other.summands.iter().cloned());
        Self::normalized(s)
    }

    pub fn mul(&self, other: &IdealExpr) -> IdealExpr {
        let mut s = Vec::new();
        for a in &self.summands {
            for b in &other.summands {
                let mut p = a.clone();
                p.extend(b.iter().copied());
                s.push(normalize_product(p));
            }
        }
        Self::normalized(s)
    }

    pub fn sum<I: IntoIterator<Item = IdealExpr>>(items: I) -> IdealExpr {
        items.into_iter().fold(IdealExpr::zero(), |acc, x| acc.add(&x))
    }

    pub fn pow(&self, k: u32) -> IdealExpr {
        (0..k).fold(IdealExpr::full(), |acc, _| acc.mul(self))
    }

    /// Largest variable index mentioned by any atom.
    pub fn max_index(&self) -> usize {
        self.summands.iter().flatten().map(Atom::max_index).max().unwrap_or(0)
    }

    /// True when every summand lies inside the augmentation ideal.
    pub fn inside_augmentation(&self) -> bool {
        self.summands.iter().all(|p| p.iter().any(Atom::inside_augmentation))
    }

    /// Generators of summand `idx`: all products of one generator per atom, deduplicated.
    pub fn summand_generators(&self, idx: usize, n: usize) -> Vec<LaurentPoly> {
        let mut acc = vec![LaurentPoly::one(n)];
        for atom in &self.summands[idx] {
            let gens = atom.generators(n);
            let mut next = Vec::with_capacity(acc.len() * gens.len());
            for a in &acc {
                for g in &gens {
                    next.push(a * g);
                }
            }
            acc = next;
        }
        let mut seen = BTreeSet::new();
        acc.retain(|p| seen.insert(p.to_string()));
        acc
    }

    /// All generators, tagged with their summand index.
    pub fn generators(&self, n: usize) -> Vec<(usize, LaurentPoly)> {
        (0..self.summands.len())
            .flat_map(|i| self.summand_generators(i, n).into_iter().map(move |g| (i, g)))
            .collect()
    }

    /// True if `g` is (structurally) one of the listed generators.
    pub fn has_generator(&self, g: &LaurentPoly) -> bool {
        let n = g.nvars();
        (0..self.summands.len()).any(|i| self.summand_generators(i, n).iter().any(|h| h == g))
    }

    /// `H_{n,m} = sum_r sigma_r U_{r,m} + O_m`.
    pub fn h(n: usize, m: u64) -> IdealExpr {
        let mut parts: Vec<IdealExpr> = (1..=n)
            .map(|r| IdealExpr::product(vec![Atom::Principal { i: r, k: 1 }, Atom::U { r, m }]))
            .collect();
        parts.push(IdealExpr::atom(Atom::O(m)));
        IdealExpr::sum(parts)
    }

    /// `J_m = sum_r sigma_r^3 U_{r,m} + A^2 O_m + A O_m^2`.
    pub fn j(n: usize, m: u64) -> IdealExpr {
        let mut parts: Vec<IdealExpr> = (1..=n)
            .map(|r| IdealExpr::product(vec![Atom::Principal { i: r, k: 3 }, Atom::U { r, m }]))
            .collect();
        parts.push(IdealExpr::product(vec![Atom::Aug, Atom::Aug, Atom::O(m)]));
        parts.push(IdealExpr::product(vec![Atom::Aug, Atom::O(m), Atom::O(m)]));
        IdealExpr::sum(parts)
    }

    /// `sigma_i H_{n,m}`.
    pub fn sigma_h(n: usize, i: usize, m: u64) -> IdealExpr {
        IdealExpr::atom(Atom::Principal { i, k: 1 }).mul(&IdealExpr::h(n, m))
    }

    /// The inner bracket `sum_{r<=u} A sigma_r U_{r,m} + A O_m + O_m^2`.
    fn stage_core(u: usize, m: u64) -> IdealExpr {
        let mut parts: Vec<IdealExpr> = (1..=u)
            .map(|r| {
                IdealExpr::product(vec![Atom::Aug, Atom::Principal { i: r, k: 1 }, Atom::U { r, m }])
            })
            .collect();
        parts.push(IdealExpr::product(vec![Atom::Aug, Atom::O(m)]));
        parts.push(IdealExpr::product(vec![Atom::O(m), Atom::O(m)]));
        IdealExpr::sum(parts)
    }

    fn stage_ideal(n: usize, m: u64, u: usize, v: usize, outer: Atom) -> IdealExpr {
        let mut parts = vec![IdealExpr::atom(outer).mul(&Self::stage_core(u, m))];
        for r in u + 1..=n {
            if v > u && r == v {
                continue;
            }
            parts.push(IdealExpr::product(vec![Atom::Principal { i: r, k: 3 }, Atom::U { r, m }]));
        }
        if v > u {
            parts.push(IdealExpr::product(vec![
                Atom::Aug,
                Atom::Principal { i: v, k: 2 },
                Atom::U { r: v, m },
            ]));
        }
        IdealExpr::sum(parts)
    }

    /// The column ideal used while stage `u` is still open, intersected with the tail.
    pub fn j_tilde(n: usize, m: u64, u: usize, v: usize) -> IdealExpr {
        Self::stage_ideal(n, m, u, v, Atom::AugTail(u))
    }

    /// The column ideal used while stage `u` is still open.
    pub fn j_stage(n: usize, m: u64, u: usize, v: usize) -> IdealExpr {
        Self::stage_ideal(n, m, u, v, Atom::Aug)
    }
}

impl fmt::Display for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        for (i, p) in self.summands.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            for (j, a) in p.iter().enumerate() {
                if j > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

/// Parses the ideal syntax `H(m)`, `O(m)`, `U(r,m)`, `A`, `Atail(u)`, `sig(i)^k`,
/// `R`, parentheses, `+` and `*`. `H(m)` expands using the variable count `n`.
pub fn parse_ideal(n: usize, text: &str) -> Result<IdealExpr> {
    let mut p = IdealParser { s: text.as_bytes(), pos: 0, n };
    let e = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(parse(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

struct IdealParser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
}

impl IdealParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(parse(start, "expected number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| parse(start, "number too large"))
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let i = self.number()? as usize;
        if i == 0 || i > self.n {
            return Err(parse(at, format!("index {i} out of range 1..={}", self.n)));
        }
        Ok(i)
    }

    fn modulus(&mut self) -> Result<u64> {
        let at = self.pos;
        let m = self.number()?;
        if m == 0 {
            return Err(parse(at, "modulus must be positive"));
        }
        Ok(m)
    }

    fn expr(&mut self) -> Result<IdealExpr> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IdealExpr> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IdealExpr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let k = self.number()?;
            let k = u32::try_from(k).map_err(|_| parse(self.pos, "exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<IdealExpr> {
        self.ws();
        let at = self.pos;
        if self.eat(b'(') {
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if self.keyword("Atail") {
            self.expect(b'(')?;
            let u = self.number()? as usize;
            if u > self.n {
                return Err(parse(at, format!("tail index {u} exceeds n = {}", self.n)));
            }
            self.expect(b')')?;
            return Ok(IdealExpr::atom(Atom::AugTail(u)));
        }
        if self.keyword("sig") {
            self.expect(b'(')?;
            let i = self.index()?;
            self.expect(b')')?;
            return Ok(IdealExpr::atom(Atom::Principal { i, k: 1 }));
        }
        if self.keyword("H") {
            self.expect(b'(')?;
            let m = self.modulus()?;
            self.expect(b')')?;
            return Ok(IdealExpr::h(self.n, m));
        }
        if self.keyword("O") {
            self.expect(b'(')?;
            let m = self.modulus()?;
            self.expect(b')')?;
            return Ok(IdealExpr::atom(Atom::O(m)));
        }
        if self.keyword("U") {
            self.expect(b'(')?;
            let r = self.index()?;
            self.expect(b',')?;
            let m = self.modulus()?;
            self.expect(b')')?;
            return Ok(IdealExpr::atom(Atom::U { r, m }));
        }
        if self.keyword("A") {
            return Ok(IdealExpr::atom(Atom::Aug));
        }
        if self.keyword("R") {
            return Ok(IdealExpr::full());
        }
        Err(parse(at, "expected an ideal atom"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_normal_form() {
        let e = parse_ideal(4, "sig(1)*H(2)").unwrap();
        assert_eq!(e, IdealExpr::sigma_h(4, 1, 2));
        let p = parse_ideal(3, "sig(2)^2*U(2,3) + O(3)*A").unwrap();
        assert_eq!(p.to_string(), "A*O(3) + sig(2)^2*U(2,3)");
        assert_eq!(parse_ideal(3, &p.to_string()).unwrap(), p);
        assert!(parse_ideal(3, "sig(4)").is_err());
        assert!(parse_ideal(3, "H(0)").is_err());
        assert!(parse_ideal(3, "A +").is_err());
    }

    #[test]
    fn j_has_expected_generators() {
        let j = IdealExpr::j(2, 2);
        let gens = j.generators(2);
        let s1 = LaurentPoly::sigma(2, 1);
        let target = &s1.pow(3) * &LaurentPoly::mu(2, 1, 2);
        assert!(gens.iter().any(|(_, g)| *g == target));
        // sigma_1 sigma_2 * 2 appears once after deduplication.
        let mixed = (&s1 * &LaurentPoly::sigma(2, 2)).scale_i64(2);
        assert_eq!(gens.iter().filter(|(_, g)| *g == mixed).count(), 1);
        assert!(j.inside_augmentation());
        assert!(!IdealExpr::h(2, 2).inside_augmentation());
    }

    #[test]
    fn powers_of_principal_atoms_merge() {
        let e = IdealExpr::atom(Atom::Principal { i: 2, k: 1 }).pow(3);
        assert_eq!(e.to_string(), "sig(2)^3");
    }
}
