//! Subcommand implementations behind the `metacsp` binary. Each command writes
//! to the given sink and returns the process exit code.

mod suites;

pub use suites::{run_suite, test_polys, CheckLine, SUITES};

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::decompose::{check_certificate, decompose, DecompositionCertificate};
use crate::error::Error;
use crate::ideal::{in_structured, parse_ideal, StructuredResult, WindowSchedule};
use crate::laurent::parse_poly;
use crate::magnus::{embed, parse_word, GroupWord};
use crate::matrix::{build_matrix, det_monomial, from_images, parse_matrix, IAMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Verification failures exit with 1, everything else (bad input, gate
/// rejections, unreadable files) with 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::MalformedWitness(_) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}

fn emit_error(out: &mut dyn Write, report: bool, command: &str, e: &Error) -> i32 {
    let code = exit_code(e);
    if report {
        let _ = writeln!(out, "{}", json!({"command": command, "status": "error", "exit": code, "error": e.to_string()}));
    } else {
        let _ = writeln!(out, "error: {e}");
    }
    code
}

/// Matrix with aligned columns, one row per line.
pub fn format_matrix(m: &IAMatrix) -> String {
    let rows = m.to_strings();
    let width: Vec<usize> = (0..m.n()).map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().zip(&width).map(|(c, w)| format!("{c:>w$}")).collect();
            format!("[ {} ]", cells.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn cmd_word(out: &mut dyn Write, text: &str, n: usize, m: Option<u64>, report: bool) -> i32 {
    let w = match parse_word(n, text) {
        Ok(w) => w,
        Err(e) => return emit_error(out, report, "word", &e),
    };
    let e = embed(&w);
    let trivial = e.is_identity();
    let projected = m.map(|m| (m, e.project(m).is_identity()));
    if report {
        let mut v = json!({"command": "word", "status": "ok", "word": w.to_string(), "magnus": e.to_string(), "trivial": trivial});
        if let Some((m, p)) = projected {
            v["modulus"] = json!(m);
            v["projection_trivial"] = json!(p);
        }
        let _ = writeln!(out, "{v}");
    } else {
        let _ = writeln!(out, "word:    {w}");
        let _ = writeln!(out, "magnus:  {e}");
        let _ = writeln!(out, "verdict: {}", if trivial { "trivial" } else { "nontrivial" });
        if let Some((m, p)) = projected {
            let _ = writeln!(out, "mod {m}:   {}", if p { "trivial in the finite quotient" } else { "nontrivial in the finite quotient" });
        }
    }
    EXIT_OK
}

pub fn cmd_aut(out: &mut dyn Write, images: &[String], report: bool) -> i32 {
    let n = images.len();
    let words: Result<Vec<GroupWord>, Error> = images.iter().map(|t| parse_word(n, t)).collect();
    let a = match words.and_then(|w| from_images(&w)) {
        Ok(a) => a,
        Err(e) => return emit_error(out, report, "aut", &e),
    };
    let det = match det_monomial(&a) {
        Ok(d) => d,
        Err(e) => return emit_error(out, report, "aut", &e),
    };
    if report {
        let _ = writeln!(out, "{}", json!({"command": "aut", "status": "ok", "matrix": a.to_strings(), "det": det.to_string()}));
    } else {
        let _ = writeln!(out, "{}", format_matrix(&a));
        let _ = writeln!(out, "det = {det}");
    }
    EXIT_OK
}

/// Membership of a polynomial in a structured ideal. Exit 0 for a certified
/// member, 1 for a refuted or undecided query.
pub fn cmd_ideal(out: &mut dyn Write, poly: &str, ideal: &str, n: usize, report: bool) -> i32 {
    let parsed = parse_poly(n, poly).and_then(|f| Ok((f, parse_ideal(n, ideal)?)));
    let (f, ideal) = match parsed {
        Ok(x) => x,
        Err(e) => return emit_error(out, report, "ideal", &e),
    };
    let (verdict, detail, code) = match in_structured(&f, &ideal, WindowSchedule::default()) {
        StructuredResult::Member(c) => {
            let terms: Vec<String> = c.terms.iter().map(|t| format!("({}) * ({})", t.generator, t.cofactor)).collect();
            ("member", terms.join(" + "), EXIT_OK)
        }
        StructuredResult::NotMember(why) => ("not a member", why, EXIT_FAILURE),
        StructuredResult::Unknown => ("unknown", "no certificate inside the searched windows".to_string(), EXIT_FAILURE),
    };
    if report {
        let _ = writeln!(out, "{}", json!({"command": "ideal", "status": "ok", "verdict": verdict, "detail": detail}));
    } else {
        let _ = writeln!(out, "{verdict}");
        if !detail.is_empty() {
            let _ = writeln!(out, "  {detail}");
        }
    }
    code
}

pub fn cmd_verify(out: &mut dyn Write, suite: &str, n: usize, m: u64, report: bool) -> i32 {
    let lines = match run_suite(suite, n, m) {
        Ok(l) => l,
        Err(e) => return emit_error(out, report, "verify", &e),
    };
    let failed = lines.iter().filter(|l| !l.passed).count();
    for l in &lines {
        if report {
            let _ = writeln!(
                out,
                "{}",
                json!({"command": "verify", "suite": l.suite, "check": l.name, "passed": l.passed, "detail": l.detail, "ms": l.millis})
            );
        } else {
            let tag = if l.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag} {} ({:.1} ms)", l.name, l.millis);
            let _ = if l.passed { writeln!(out) } else { writeln!(out, ": {}", l.detail) };
        }
    }
    if report {
        let _ = writeln!(out, "{}", json!({"command": "verify", "suite": suite, "total": lines.len(), "failed": failed}));
    } else {
        let _ = writeln!(out, "{suite} n={n} m={m}: {} checks, {failed} failed", lines.len());
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

/// Where `decompose` reads its input from.
pub enum MatrixSource {
    File(PathBuf),
    Builder(String),
}

fn load_matrix(src: &MatrixSource, n: usize) -> Result<IAMatrix, Error> {
    match src {
        MatrixSource::File(p) => parse_matrix(&std::fs::read_to_string(p)?),
        MatrixSource::Builder(expr) => build_matrix(n, expr),
    }
}

pub fn cmd_decompose(out: &mut dyn Write, src: &MatrixSource, n: usize, m: u64, dest: Option<&Path>, report: bool) -> i32 {
    let alpha = match load_matrix(src, n) {
        Ok(a) => a,
        Err(e) => return emit_error(out, report, "decompose", &e),
    };
    let cert = match decompose(&alpha, m) {
        Ok(c) => c,
        Err(e) => return emit_error(out, report, "decompose", &e),
    };
    if let Err(f) = check_certificate(&cert) {
        return emit_error(out, report, "decompose", &Error::Verification(f.to_string()));
    }
    if let Some(p) = dest {
        if let Err(e) = cert.write(p) {
            return emit_error(out, report, "decompose", &e);
        }
    }
    if report {
        let _ = writeln!(
            out,
            "{}",
            json!({"command": "decompose", "status": "ok", "factors": cert.factors.len(), "iam": cert.iam_count(),
                   "isl": cert.isl_count(), "replay": "ok", "out": dest.map(|p| p.display().to_string())})
        );
    } else {
        let _ = writeln!(out, "{} factors ({} IA^m, {} ISL), replay OK", cert.factors.len(), cert.iam_count(), cert.isl_count());
        for (i, f) in cert.factors.iter().enumerate() {
            let _ = writeln!(out, "  {i:>3}  {}", f.label);
        }
        if let Some(p) = dest {
            let _ = writeln!(out, "certificate written to {}", p.display());
        }
    }
    EXIT_OK
}

pub fn cmd_check(out: &mut dyn Write, path: &Path, report: bool) -> i32 {
    let cert = match DecompositionCertificate::read(path) {
        Ok(c) => c,
        Err(e) => return emit_error(out, report, "check", &e),
    };
    let result = check_certificate(&cert);
    if report {
        let v = match &result {
            Ok(()) => json!({"command": "check", "status": "ok", "factors": cert.factors.len()}),
            Err(f) => json!({"command": "check", "status": "fail", "index": f.index, "reason": f.reason}),
        };
        let _ = writeln!(out, "{v}");
    } else {
        match &result {
            Ok(()) => {
                let _ = writeln!(out, "certificate OK: {} factors replay to the input", cert.factors.len());
            }
            Err(f) => {
                let _ = writeln!(out, "certificate REJECTED: {f}");
            }
        }
    }
    if result.is_ok() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
