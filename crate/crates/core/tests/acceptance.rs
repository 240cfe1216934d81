//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned time budget.

use std::time::{Duration, Instant};

use metacsp::cli::{self, run_suite, test_polys, EXIT_OK};
use metacsp::decompose::{decompose, ig_corpus, DecompositionCertificate, Evidence};
use metacsp::generators::{
    type1_basic, type1_comm_ik, type1_comm_k, type2_block, type2_mixed, type2_sq, verify_witness, Generated,
};
use metacsp::ideal::{decompose_h, h_generator, in_structured, in_tail_span, IdealExpr, StructuredResult, WindowSchedule};
use metacsp::magnus::{embed, GroupWord, MagnusElement};
use metacsp::matrix::{det_monomial, in_isl, IAMatrix};
use metacsp::{LaurentPoly, Monomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite_grid(suite: &str, grid: &[(usize, u64)]) -> Outcome {
    let mut total = 0;
    for &(n, m) in grid {
        let lines = run_suite(suite, n, m).map_err(|e| e.to_string())?;
        if let Some(bad) = lines.iter().find(|l| !l.passed) {
            return Err(format!("n={n} m={m}: {} failed: {}", bad.name, bad.detail));
        }
        total += lines.len();
    }
    Ok(format!("{total} identities replayed"))
}

const GRID: [(usize, u64); 4] = [(4, 2), (4, 3), (5, 2), (5, 3)];

fn c1() -> Outcome {
    suite_grid("type1", &GRID)
}

fn c2() -> Outcome {
    suite_grid("type2", &GRID)
}

fn c3() -> Outcome {
    suite_grid("congruences", &GRID)
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len).map(|_| (rng.gen_range(1..=n), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    GroupWord::from_letters(n, letters).unwrap()
}

fn c4() -> Outcome {
    let n = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let words: Vec<GroupWord> = (0..1000).map(|_| random_word(&mut rng, n, 30)).collect();
    let check = |e: &MagnusElement, what: &str, k: usize| ensure(e.invariant_holds(), || format!("invariant fails after {what} on word {k}"));
    for (k, w) in words.iter().enumerate() {
        let e = embed(w);
        let next = embed(&words[(k + 1) % words.len()]);
        check(&e, "embed", k)?;
        check(&e.mul(&next), "mul", k)?;
        check(&e.inverse(), "inverse", k)?;
        check(&e.pow(rng.gen_range(-3..=3)), "pow", k)?;
        check(&e.commutator(&next), "commutator", k)?;
        let q = e.project(3).mul(&next.project(3));
        ensure(q.invariant_holds(), || format!("invariant fails after projection on word {k}"))?;
    }
    for q in 0..200 {
        let [a, b, c, d] = [0, 1, 2, 3].map(|_| random_word(&mut rng, n, 10));
        let w = a.commutator(&b).commutator(&c.commutator(&d));
        ensure(embed(&w).is_identity(), || format!("metabelian law fails on quadruple {q}"))?;
    }
    for n in [4, 5] {
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let c = GroupWord::generator(n, i).commutator(&GroupWord::generator(n, j));
                ensure(!embed(&c).is_identity(), || format!("[x{i},x{j}] = 1 for n = {n}"))?;
            }
        }
    }
    Ok("1000 words, 200 quadruples, all [xi,xj] nontrivial".into())
}

/// One random type-1 or type-2 element at `n = 4`.
fn random_section4(rng: &mut ChaCha8Rng, m: u64) -> Generated {
    let n = 4;
    let polys = test_polys(n);
    let mut idx: Vec<usize> = (1..=n).collect();
    for k in (1..n).rev() {
        idx.swap(k, rng.gen_range(0..=k));
    }
    let (u, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
    let f = &polys[rng.gen_range(0..polys.len())];
    let g = match rng.gen_range(0..6) {
        0 => type1_basic(u, i, j, f, m),
        1 => type1_comm_k(u, i, j, k, f, m),
        2 => type1_comm_ik(u, i, j, k, f, m),
        3 => type2_sq(u, i, j, f, m),
        4 => type2_mixed(u, i, j, f, m),
        _ => type2_block(u, i, &(&h_generator(n, k, m) * f), m),
    };
    g.expect("section-4 constructors accept distinct indices")
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 4;
    for t in 0..200 {
        let m = if t % 2 == 0 { 2 } else { 3 };
        let parts: Vec<Generated> = (0..rng.gen_range(2..=3)).map(|_| random_section4(&mut rng, m)).collect();
        let a = Generated::product(parts, n).matrix;
        for k in 1..=n {
            for l in 1..=n {
                let others: Vec<usize> = (1..=n).filter(|&i| i != l).collect();
                ensure(in_tail_span(&a.deviation(k, l), &others), || format!("product {t}: entry ({k},{l}) outside the tail span"))?;
            }
        }
        det_monomial(&a).map_err(|e| format!("product {t}: {e}"))?;
        let inv = a.inverse().map_err(|e| format!("product {t}: {e}"))?;
        ensure(a.mul(&inv).is_identity() && inv.mul(&a).is_identity(), || format!("product {t}: adjugate inverse is wrong"))?;
    }
    Ok("200 products".into())
}

fn c6(certs: &mut Vec<DecompositionCertificate>) -> Outcome {
    let (n, m) = (4, 2);
    let corpus = ig_corpus(n, m, 24, 2, 0x1a44).map_err(|e| e.to_string())?;
    let mut factors = 0;
    for el in &corpus {
        let cert = decompose(&el.matrix, m).map_err(|e| format!("{}: {e}", el.expr))?;
        let product = cert.factors.iter().fold(IAMatrix::identity(n), |acc, f| acc.mul(&f.matrix));
        ensure(product == el.matrix, || format!("{}: certificate does not replay", el.expr))?;
        for (k, f) in cert.factors.iter().enumerate() {
            match &f.evidence {
                Evidence::Iam { witness } => {
                    verify_witness(witness, &f.matrix, m).map_err(|e| format!("{} factor {k}: {e}", el.expr))?
                }
                Evidence::Isl { u, .. } => {
                    ensure(in_isl(&f.matrix, *u, m), || format!("{} factor {k}: not in ISL_{u}", el.expr))?
                }
            }
        }
        // Terminal identity: peeling every factor off the input leaves I.
        let rest = cert.factors.iter().rev().try_fold(el.matrix.clone(), |acc, f| f.matrix.inverse().map(|inv| acc.mul(&inv)));
        ensure(rest.map(|r| r.is_identity()).unwrap_or(false), || format!("{}: terminal matrix is not I", el.expr))?;
        factors += cert.factors.len();
        certs.push(cert);
    }
    Ok(format!("{} elements of IG_{{4,4}}, {factors} factors", corpus.len()))
}

/// Adds 1 to the first coefficient of a nonzero cell, or sets a zero cell to 1.
fn perturb_cell(cell: &str) -> String {
    if cell.trim() == "0" {
        "1".into()
    } else {
        format!("{cell} + 1")
    }
}

fn c7(certs: &[DecompositionCertificate]) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sink = Vec::new();
    let mut perturbations = 0;
    for (c, cert) in certs.iter().enumerate() {
        let path = dir.path().join(format!("cert{c}.json"));
        cert.write(&path).map_err(|e| e.to_string())?;
        ensure(cli::cmd_check(&mut sink, &path, true) == EXIT_OK, || format!("certificate {c} rejected from file"))?;
        if cert.factors.is_empty() {
            continue;
        }
        for _ in 0..2 {
            let mut v: serde_json::Value = serde_json::from_str(&cert.to_json()).map_err(|e| e.to_string())?;
            let k = rng.gen_range(0..cert.factors.len());
            let (i, j) = (rng.gen_range(0..4), rng.gen_range(0..4));
            let cell = &mut v["factors"][k]["matrix"][i][j];
            *cell = perturb_cell(cell.as_str().unwrap()).into();
            let bad = dir.path().join(format!("bad{c}.json"));
            std::fs::write(&bad, v.to_string()).map_err(|e| e.to_string())?;
            sink.clear();
            ensure(cli::cmd_check(&mut sink, &bad, true) != EXIT_OK, || format!("perturbation of certificate {c} factor {k} missed"))?;
            let report: serde_json::Value = serde_json::from_slice(&sink).map_err(|e| e.to_string())?;
            ensure(report["index"] == k, || format!("certificate {c}: perturbation of factor {k} reported as {}", report["index"]))?;
            perturbations += 1;
        }
    }
    Ok(format!("{} certificates re-verified from file, {perturbations} perturbations located", certs.len()))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        (0..terms).map(|_| {
            let e: Vec<i32> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            (Monomial::from_exponents(&e), rng.gen_range(-5i64..=5))
        }),
    )
}

fn c8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 4;
    for t in 0..50 {
        let m = if t % 2 == 0 { 2 } else { 3 };
        let mut f = random_poly(&mut rng, n, 2).scale_i64(m as i64);
        for r in 1..=n {
            if rng.gen_bool(0.6) {
                f += &(&h_generator(n, r, m) * &random_poly(&mut rng, n, 2));
            }
        }
        let cert = decompose_h(&f, m).map_err(|e| format!("member {t}: {e}"))?;
        ensure(cert.verify(), || format!("member {t}: decompose_H certificate does not replay"))?;
        match in_structured(&f, &IdealExpr::h(n, m), WindowSchedule::default()) {
            StructuredResult::Member(c) => ensure(c.verify(), || format!("member {t}: window certificate does not replay"))?,
            StructuredResult::NotMember(why) => return Err(format!("member {t} refuted: {why}")),
            StructuredResult::Unknown => return Err(format!("member {t}: no certificate within the default windows")),
        }
    }
    Ok("50 random H members, both certificates replay".into())
}

fn main() {
    let mut certs = Vec::new();
    type Run<'a> = Box<dyn FnOnce() -> Outcome + 'a>;
    let mut failed = 0;
    {
        let criteria: Vec<(u32, &str, Duration, Run)> = vec![
            (1, "type-1 identity suite, n=4,5 m=2,3", Duration::from_secs(30), Box::new(c1)),
            (2, "type-2 and block identity suite, n=4,5 m=2,3", Duration::from_secs(30), Box::new(c2)),
            (3, "congruence certificates and H_{m^2} in J_m + O_m^2", Duration::from_secs(5), Box::new(c3)),
            (4, "Magnus invariant, metabelian law, [xi,xj] != 1", Duration::from_secs(20), Box::new(c4)),
            (5, "IA layer on 200 products of generators", Duration::from_secs(30), Box::new(c5)),
            (6, "IG_{4,4} corpus decomposes and replays", Duration::from_secs(300), Box::new(|| c6(&mut certs))),
        ];
        for (k, name, budget, run) in criteria {
            failed += report(k, name, budget, run);
        }
    }
    failed += report(7, "checker re-verifies from file and locates perturbations", Duration::from_secs(60), Box::new(|| c7(&certs)));
    failed += report(8, "decompose_H agrees with the window oracle on 50 H members", Duration::from_secs(60), Box::new(c8));
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn report(k: u32, name: &str, budget: Duration, run: Box<dyn FnOnce() -> Outcome + '_>) -> usize {
    let t = Instant::now();
    let result = run();
    let took = t.elapsed();
    let timing = format!("{:.2}s / {}s", took.as_secs_f64(), budget.as_secs());
    match result {
        Ok(detail) if took <= budget => {
            println!("PASS criterion {k}: {name} [{detail}] ({timing})");
            0
        }
        Ok(detail) => {
            println!("FAIL criterion {k}: {name} [{detail}] over budget ({timing})");
            1
        }
        Err(why) => {
            println!("FAIL criterion {k}: {name}: {why} ({timing})");
            1
        }
    }
}
