use super::*;
use crate::generators::verify_witness;
use crate::matrix::build_matrix;

fn run(expr: &str) -> DecompositionCertificate {
    let alpha = build_matrix(4, expr).unwrap();
    let cert = decompose(&alpha, 2).unwrap_or_else(|e| panic!("{expr}: {e}"));
    check_certificate(&cert).unwrap_or_else(|e| panic!("{expr}: {e}"));
    assert_eq!(cert.product(), alpha);
    cert
}

#[test]
fn identity_has_empty_certificate() {
    let cert = run("id");
    assert!(cert.factors.is_empty());
}

#[test]
fn rejects_small_n_and_non_members() {
    let a3 = build_matrix(3, "pow(elem(1,2),16)").unwrap();
    assert!(matches!(decompose(&a3, 2), Err(Error::Precondition(_))));
    let a = build_matrix(4, "row(1,2,3,2)").unwrap();
    assert!(check_entry_j(&a, 2).is_err());
    assert!(check_entry_j(&IAMatrix::identity(4), 2).is_ok());
}

#[test]
fn elementary_power() {
    let cert = run("pow(elem(1,2),16)");
    for f in &cert.factors {
        if let Evidence::Iam { witness } = &f.evidence {
            verify_witness(witness, &f.matrix, 2).unwrap();
        }
    }
}

#[test]
fn scaled_row_elements() {
    run("row(2,1,3,4)");
    run("row(3,1,4,4*x2)");
    run("row(4,2,3,4*x1^-1)");
}

#[test]
fn products() {
    run("mul(pow(elem(2,3),16), row(1,2,4,4))");
    run("mul(pow(elem(3,1),-16), pow(elem(4,2),16))");
}

#[test]
fn perturbation_is_detected() {
    let mut cert = run("pow(elem(1,3),16)");
    let k = cert.factors.len() / 2;
    let mut mtx = cert.factors[k].matrix.clone();
    let (i, j) = (1..=4).flat_map(|i| (1..=4).map(move |j| (i, j))).find(|&(i, j)| !mtx.get(i, j).is_zero()).unwrap();
    mtx.set(i, j, mtx.get(i, j) + &LaurentPoly::one(4));
    cert.factors[k].matrix = mtx;
    let err = check_certificate(&cert).unwrap_err();
    assert_eq!(err.index, Some(k));
}

#[test]
fn h_chunks_stay_in_h() {
    // In H_{4,2} as a whole, but its single terms are not.
    let b = crate::laurent::parse_poly(4, "x1^4*x3 - x3 + 6*x2^-1 + x4^-2 - 1").unwrap();
    assert!(crate::ideal::in_h(&b, 2));
    assert!(super::term_chunks(&b, 1).iter().any(|p| !crate::ideal::in_h(p, 2)));
    let pieces = super::h_chunks(&b, 2, 1).unwrap();
    assert!(pieces.len() > 1);
    assert!(pieces.iter().all(|p| crate::ideal::in_h(p, 2)));
    let sum = pieces.iter().fold(LaurentPoly::zero(4), |acc, p| &acc + p);
    assert_eq!(sum, b);
}
