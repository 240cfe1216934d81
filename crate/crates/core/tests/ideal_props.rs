mod common;

use common::poly;
use metacsp::ideal::{
    decompose_h, h_generator, in_h, in_structured, in_tail_span, j_certificate, parse_ideal, split_h, Atom, IdealExpr,
    StructuredResult, WindowSchedule,
};
use metacsp::LaurentPoly;
use proptest::prelude::*;

const N: usize = 3;

fn h_member(cofs: &[LaurentPoly], c: &LaurentPoly, m: u64) -> LaurentPoly {
    let mut f = c.scale_i64(m as i64);
    for (r, g) in cofs.iter().enumerate() {
        f += &(&h_generator(N, r + 1, m) * g);
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_certificates_replay(g1 in poly(N, 3), g2 in poly(N, 3), g3 in poly(N, 3), c in poly(N, 3), m in 2u64..=3) {
        let f = h_member(&[g1, g2, g3], &c, m);
        prop_assert!(in_h(&f, m));
        let cert = decompose_h(&f, m).unwrap();
        prop_assert!(cert.verify());
        prop_assert_eq!(cert.target, f.clone());
        prop_assert_eq!(split_h(&f, m).unwrap().recombine(), f);
    }

    #[test]
    fn non_members_of_h_are_rejected(f in poly(N, 4), m in 2u64..=3) {
        prop_assume!(!f.reduce_mod(m).is_zero());
        prop_assert!(!in_h(&f, m));
        prop_assert!(decompose_h(&f, m).is_err());
    }

    #[test]
    fn j_certificates_replay(g1 in poly(N, 2), g2 in poly(N, 2), c in poly(N, 2)) {
        // Elements of H_{n,4} inside the augmentation ideal.
        let m = 2;
        let mut f = h_member(&[g1, g2, LaurentPoly::zero(N)], &c, m * m);
        let aug = f.augmentation();
        f -= &LaurentPoly::constant(N, aug);
        prop_assume!(in_h(&f, m * m));
        let cert = j_certificate(&f, m).unwrap();
        prop_assert!(cert.verify());
    }

    #[test]
    fn tail_span_agrees_with_structured_search(a in poly(N, 3), b in poly(N, 3), u in 0usize..N) {
        // sum_{r>u} sigma_r g_r is always a member of Atail(u).
        let gens: Vec<LaurentPoly> = (u + 1..=N).map(|r| LaurentPoly::sigma(N, r)).collect();
        let f = gens.iter().zip([&a, &b, &a]).fold(LaurentPoly::zero(N), |acc, (s, g)| &acc + &(s * g));
        let tail: Vec<usize> = (u + 1..=N).collect();
        prop_assert!(in_tail_span(&f, &tail));
        let ideal = IdealExpr::atom(Atom::AugTail(u));
        match in_structured(&f, &ideal, WindowSchedule::default()) {
            StructuredResult::Member(c) => prop_assert!(c.verify()),
            StructuredResult::NotMember(why) => prop_assert!(false, "sound member refuted: {}", why),
            StructuredResult::Unknown => {}
        }
    }

    #[test]
    fn structured_certificates_respect_necessary_conditions(f in poly(N, 3), m in 2u64..=3) {
        let ideal = parse_ideal(N, &format!("A*O({m})")).unwrap();
        if let StructuredResult::Member(c) = in_structured(&f, &ideal, WindowSchedule { rounds: 1, max_columns: 4000 }) {
            prop_assert!(c.verify());
            prop_assert!(f.augmentation() == 0.into());
            prop_assert!(f.reduce_mod(m).is_zero());
        }
    }
}

#[test]
fn structured_search_refutes_by_augmentation() {
    let f = LaurentPoly::one(N);
    let ideal = IdealExpr::atom(Atom::Aug);
    assert!(matches!(in_structured(&f, &ideal, WindowSchedule::default()), StructuredResult::NotMember(_)));
}
