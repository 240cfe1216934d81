use metacsp::decompose::{
    check_certificate, decompose, ig_corpus, matrix_hash, DecompositionCertificate, Evidence, StageState,
};
use metacsp::matrix::{build_matrix, check_ia, det_monomial, in_ig, IAMatrix};
use metacsp::LaurentPoly;

const N: usize = 4;
const M: u64 = 2;

fn corpus() -> Vec<(String, IAMatrix)> {
    ig_corpus(N, M, 4, 2, 0xdec0).unwrap().into_iter().map(|e| (e.expr, e.matrix)).collect()
}

fn cert(expr: &str) -> DecompositionCertificate {
    decompose(&build_matrix(N, expr).unwrap(), M).unwrap()
}

#[test]
fn corpus_round_trips() {
    for (expr, a) in corpus() {
        assert!(check_ia(&a) && in_ig(&a, M * M), "{expr} is not in IG");
        let c = decompose(&a, M).unwrap_or_else(|e| panic!("{expr}: {e}"));
        check_certificate(&c).unwrap_or_else(|f| panic!("{expr}: {f}"));
        // Independent product, left to right.
        let p = c.factors.iter().fold(IAMatrix::identity(N), |acc, f| acc.mul(&f.matrix));
        assert_eq!(p, a, "{expr}");
        for f in &c.factors {
            match &f.evidence {
                Evidence::Iam { witness } => {
                    witness.discipline(M).unwrap();
                    assert_eq!(witness.eval(N).unwrap(), f.matrix, "{}", f.label);
                }
                Evidence::Isl { .. } => assert!(det_monomial(&f.matrix).unwrap().is_one(), "{}", f.label),
            }
        }
    }
}

#[test]
fn stages_clear_their_rows() {
    let (_, a) = corpus().remove(0);
    let mut state = StageState::new(&a, M).unwrap();
    for u in 1..=N {
        state.run_stage(u).unwrap();
        let projected = state.current().map_entries(|p| p.project_to_first(u));
        assert!(projected.is_identity(), "stage {u} left a nontrivial residue");
    }
    assert!(state.current().is_identity());
    let c = state.into_certificate().unwrap();
    assert_eq!(c.input, a);
    check_certificate(&c).unwrap();
}

#[test]
fn json_and_file_round_trip() {
    let c = cert("mul(pow(elem(2,3),16), row(1,2,4,4*x3))");
    let back = DecompositionCertificate::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    c.write(&path).unwrap();
    let read = DecompositionCertificate::read(&path).unwrap();
    assert_eq!(read, c);
    check_certificate(&read).unwrap();
}

#[test]
fn every_factor_perturbation_is_located() {
    let c = cert("mul(pow(elem(3,1),16), row(2,1,4,4))");
    for k in 0..c.factors.len() {
        let mut bad = c.clone();
        let mtx = &mut bad.factors[k].matrix;
        let (i, j) = (1..=N).flat_map(|i| (1..=N).map(move |j| (i, j))).find(|&(i, j)| i != j || !mtx.deviation(i, j).is_zero()).unwrap();
        mtx.set(i, j, mtx.get(i, j) + &LaurentPoly::var(N, 1));
        let err = check_certificate(&bad).unwrap_err();
        assert_eq!(err.index, Some(k), "perturbing factor {k}: {err}");
    }
}

#[test]
fn weakened_power_exponent_breaks_discipline() {
    let c = cert("pow(elem(1,2),16)");
    let mut json: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
    let (k, ok) = json["factors"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .enumerate()
        .find_map(|(k, f)| set_first_exponent(&mut f["evidence"]).then_some((k, true)))
        .expect("some factor has a power node");
    assert!(ok);
    let bad = DecompositionCertificate::from_json(&json.to_string()).unwrap();
    let err = check_certificate(&bad).unwrap_err();
    assert_eq!(err.index, Some(k));
}

/// Sets the first `exponent` field in `v` to 1.
fn set_first_exponent(v: &mut serde_json::Value) -> bool {
    match v {
        serde_json::Value::Object(map) => {
            if let Some(e) = map.get_mut("exponent") {
                *e = 1.into();
                return true;
            }
            map.values_mut().any(set_first_exponent)
        }
        serde_json::Value::Array(xs) => xs.iter_mut().any(set_first_exponent),
        _ => false,
    }
}

#[test]
fn header_tampering_is_rejected() {
    let c = cert("row(3,1,2,4)");
    let mut bad = c.clone();
    bad.input_sha256 = matrix_hash(&IAMatrix::identity(N));
    assert_eq!(check_certificate(&bad).unwrap_err().index, None);

    let mut bad = c.clone();
    bad.factors.pop();
    assert!(check_certificate(&bad).is_err());

    let mut bad = c.clone();
    bad.format = "something-else/9".into();
    assert!(check_certificate(&bad).is_err());
}

#[test]
fn gate_rejects_inputs_outside_ig() {
    for expr in ["pow(elem(1,2),4)", "elem(1,2)", "row(1,2,3,2)"] {
        assert!(decompose(&build_matrix(N, expr).unwrap(), M).is_err(), "{expr}");
    }
    assert!(decompose(&IAMatrix::identity(3), M).is_err());
}

#[test]
fn decomposition_is_deterministic() {
    let a = build_matrix(N, "mul(row(4,1,2,4*x3^-1), pow(elem(2,1),-16))").unwrap();
    assert_eq!(decompose(&a, M).unwrap().to_json(), decompose(&a, M).unwrap().to_json());
}
