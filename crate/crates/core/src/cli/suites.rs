//! Named invariant suites run by `metacsp verify`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decompose::{check_certificate, decompose, ig_corpus};
use crate::error::{Error, Result};
use crate::generators::{
    block_matrix, type1_basic, type1_comm_ik, type1_comm_k, type2_block, type2_mixed, type2_sq, Generated,
};
use crate::ideal::{h_square_certificates, j_plus_o2, mu_square_congruence, power_congruence, IdealExpr};
use crate::laurent::{parse_poly, LaurentPoly};
use crate::magnus::{embed, GroupWord};
use crate::matrix::check_ia;

pub const SUITES: [&str; 5] = ["type1", "type2", "congruences", "magnus", "decompose-roundtrip"];

/// Outcome of one identity check.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
}

type Check = (String, Box<dyn Fn() -> Result<()> + Send + Sync>);

fn run_all(suite: &'static str, checks: Vec<Check>) -> Vec<CheckLine> {
    checks
        .into_par_iter()
        .map(|(name, f)| {
            let t = Instant::now();
            let r = f();
            CheckLine {
                suite,
                name,
                passed: r.is_ok(),
                detail: r.err().map(|e| e.to_string()).unwrap_or_default(),
                millis: t.elapsed().as_secs_f64() * 1e3,
            }
        })
        .collect()
}

/// The fixed six-element coefficient set used by the identity suites.
pub fn test_polys(n: usize) -> Vec<LaurentPoly> {
    ["1", "x1", "x2^-1", "x1 - 2", "x2*x3 + 1"]
        .iter()
        .map(|s| s.to_string())
        .chain([format!("3*x{n}^2 - x1*x2^-1")])
        .map(|s| parse_poly(n, &s).expect("fixed test polynomial parses"))
        .collect()
}

fn replayed(g: Result<Generated>, m: u64) -> Result<()> {
    let g = g?;
    g.verify(m)?;
    if !check_ia(&g.matrix) {
        return Err(Error::Verification("constructed matrix is not IA".into()));
    }
    Ok(())
}

fn others(n: usize, skip: &[usize]) -> Vec<usize> {
    (1..=n).filter(|k| !skip.contains(k)).collect()
}

/// Runs suite `name` at `(n, m)`; lines come back in check order.
pub fn run_suite(name: &str, n: usize, m: u64) -> Result<Vec<CheckLine>> {
    if n < 2 || m == 0 {
        return Err(Error::InvalidArgument("suites need n >= 2 and m >= 1".into()));
    }
    match name {
        "type1" => Ok(run_all("type1", type1_checks(n, m))),
        "type2" => {
            if n < 4 {
                return Err(Error::Precondition("type-2 constructions need n >= 4".into()));
            }
            Ok(run_all("type2", type2_checks(n, m)))
        }
        "congruences" => Ok(run_all("congruences", congruence_checks(n, m))),
        "magnus" => Ok(run_all("magnus", magnus_checks(n, m))),
        "decompose-roundtrip" => {
            if n < 4 {
                return Err(Error::Precondition("decomposition needs n >= 4".into()));
            }
            Ok(run_all("decompose-roundtrip", roundtrip_checks(n, m)?))
        }
        other => Err(Error::InvalidArgument(format!("unknown suite '{other}'; expected one of {}", SUITES.join(", ")))),
    }
}

fn type1_checks(n: usize, m: u64) -> Vec<Check> {
    let polys = test_polys(n);
    let mut out: Vec<Check> = Vec::new();
    for u in 1..=n {
        for (fi, f) in polys.iter().enumerate() {
            let rest = others(n, &[u]);
            for &i in &rest {
                for &j in rest.iter().filter(|&&j| j != i) {
                    let g = f.clone();
                    out.push((format!("basic u={u} i={i} j={j} f#{fi}"), Box::new(move || replayed(type1_basic(u, i, j, &g, m), m))));
                    for &k in &rest {
                        let g = f.clone();
                        out.push((
                            format!("comm_k u={u} i={i} j={j} k={k} f#{fi}"),
                            Box::new(move || replayed(type1_comm_k(u, i, j, k, &g, m), m)),
                        ));
                        if k != j {
                            let g = f.clone();
                            out.push((
                                format!("comm_ik u={u} i={i} j={j} k={k} f#{fi}"),
                                Box::new(move || replayed(type1_comm_ik(u, i, j, k, &g, m), m)),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

fn type2_checks(n: usize, m: u64) -> Vec<Check> {
    let polys = test_polys(n);
    let mut out: Vec<Check> = Vec::new();
    for u in 1..=n {
        let rest = others(n, &[u]);
        for (fi, f) in polys.iter().enumerate() {
            for &i in &rest {
                for &j in rest.iter().filter(|&&j| j != i) {
                    let g = f.clone();
                    out.push((format!("sq u={u} i={i} j={j} f#{fi}"), Box::new(move || replayed(type2_sq(u, i, j, &g, m), m))));
                    let g = f.clone();
                    out.push((format!("mixed u={u} i={i} j={j} f#{fi}"), Box::new(move || replayed(type2_mixed(u, i, j, &g, m), m))));
                }
            }
        }
    }
    // Block family over both branches of the H-splitting, with additivity.
    let mf = |f: &LaurentPoly| f.scale_i64(m as i64);
    let pf = |r: usize, f: &LaurentPoly| &(&LaurentPoly::sigma(n, r) * &LaurentPoly::mu(n, r, m)) * f;
    for u in 1..=n {
        for v in others(n, &[u]) {
            for (fi, f) in polys.iter().take(3).enumerate() {
                let g = mf(f);
                out.push((
                    format!("block m-branch u={u} v={v} f#{fi}"),
                    Box::new(move || {
                        let b = type2_block(u, v, &g, m)?;
                        replayed(Ok(b.clone()), m)?;
                        if b.matrix != block_matrix(u, v, &g) {
                            return Err(Error::Verification("block matrix differs from its closed form".into()));
                        }
                        Ok(())
                    }),
                ));
                for r in 1..=n {
                    let g = pf(r, f);
                    out.push((format!("block power-branch u={u} v={v} r={r} f#{fi}"), Box::new(move || replayed(type2_block(u, v, &g, m), m))));
                }
            }
            let (f, g) = (mf(&polys[1]), pf(u, &polys[2]));
            out.push((
                format!("block additivity u={u} v={v}"),
                Box::new(move || {
                    if block_matrix(u, v, &f).mul(&block_matrix(u, v, &g)) != block_matrix(u, v, &(&f + &g)) {
                        return Err(Error::Verification("block(f) block(g) != block(f + g)".into()));
                    }
                    Ok(())
                }),
            ));
        }
    }
    out
}

fn congruence_checks(n: usize, m: u64) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    for i in 1..=n {
        out.push((
            format!("power_congruence i={i}"),
            Box::new(move || {
                let c = power_congruence(n, i, m)?;
                if !c.verify() {
                    return Err(Error::Verification("power congruence does not replay".into()));
                }
                Ok(())
            }),
        ));
        out.push((
            format!("mu_square_congruence v={i}"),
            Box::new(move || {
                let c = mu_square_congruence(n, i, m)?;
                if !c.verify() {
                    return Err(Error::Verification("mu-square congruence does not replay".into()));
                }
                Ok(())
            }),
        ));
    }
    out.push((
        "H_{m^2} in J_m + O_m^2 (generators)".into(),
        Box::new(move || {
            let certs = h_square_certificates(n, m)?;
            let target = j_plus_o2(n, m);
            let gens = IdealExpr::h(n, m * m).generators(n);
            for (_, g) in gens {
                let c = certs.iter().find(|c| c.target == g).ok_or_else(|| Error::Verification(format!("no certificate for generator {g}")))?;
                if c.ideal != target || !c.verify() {
                    return Err(Error::Verification(format!("certificate for {g} does not replay")));
                }
            }
            Ok(())
        }),
    ));
    out
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> GroupWord {
    let letters = (0..len).map(|_| (rng.gen_range(1..=n), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    GroupWord::from_letters(n, letters).expect("letters are in range")
}

fn expect(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Verification(what.into()))
    }
}

fn magnus_checks(n: usize, m: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61676e);
    let mut out: Vec<Check> = Vec::new();
    for t in 0..24 {
        let (a, b, c, d) = (random_word(&mut rng, n, 6), random_word(&mut rng, n, 5), random_word(&mut rng, n, 4), random_word(&mut rng, n, 7));
        let (a1, b1) = (a.clone(), b.clone());
        out.push((
            format!("group law #{t}"),
            Box::new(move || {
                let (a, b) = (&a1, &b1);
                expect(embed(&a.concat(b)) == embed(a).mul(&embed(b)), "embed(ab) != embed(a) embed(b)")?;
                expect(embed(&a.inverse()) == embed(a).inverse(), "embed(a^-1) != embed(a)^-1")?;
                expect(embed(&a.concat(&a.inverse())).is_identity(), "a a^-1 is not trivial")
            }),
        ));
        out.push((
            format!("metabelian law #{t}"),
            Box::new(move || {
                let w = a.commutator(&b).commutator(&c.commutator(&d));
                expect(embed(&w).is_identity(), "[[a,b],[c,d]] is not trivial")?;
                expect(embed(&w).invariant_holds(), "Magnus invariant fails")
            }),
        ));
        let (a, b) = (random_word(&mut rng, n, 6), random_word(&mut rng, n, 6));
        out.push((
            format!("projection mod {m} #{t}"),
            Box::new(move || {
                let (ea, eb) = (embed(&a), embed(&b));
                expect(ea.mul(&eb).project(m) == ea.project(m).mul(&eb.project(m)), "projection is not multiplicative")?;
                let p = ea.pow((m * m) as i64).project(m);
                expect(p.is_identity(), "m^2-th power does not vanish in the quotient")
            }),
        ));
    }
    out
}

fn roundtrip_checks(n: usize, m: u64) -> Result<Vec<Check>> {
    let corpus = ig_corpus(n, m, 6, 2, 0x5eed)?;
    Ok(corpus
        .into_iter()
        .map(|el| -> Check {
            (
                el.expr.clone(),
                Box::new(move || {
                    let cert = decompose(&el.matrix, m)?;
                    check_certificate(&cert).map_err(|e| Error::Verification(e.to_string()))?;
                    expect(cert.product() == el.matrix, "certificate product differs from the input")
                }),
            )
        })
        .collect())
}
