mod common;

use common::{naive_mul, poly, word};
use metacsp::magnus::GroupWord;
use metacsp::matrix::{check_ia, det_monomial, from_images, in_ig, parse_matrix, IAMatrix};
use metacsp::ideal::in_tail_span;
use metacsp::LaurentPoly;
use proptest::prelude::*;

const N: usize = 4;

/// Word in the generators other than `x_i`.
fn word_avoiding(i: usize, len: usize) -> impl Strategy<Value = GroupWord> {
    let others: Vec<usize> = (1..=N).filter(|&k| k != i).collect();
    prop::collection::vec((prop::sample::select(others), any::<bool>()), 0..=len).prop_map(|ls| {
        GroupWord::from_letters(N, ls.into_iter().map(|(k, s)| (k, if s { 1 } else { -1 })).collect()).unwrap()
    })
}

/// `x_i -> w x_i w^{-1}` or `x_i -> x_i [a, b]` with `w, a, b` free of `x_i`, others fixed.
fn basic_ia() -> impl Strategy<Value = IAMatrix> {
    (1usize..=N, any::<bool>())
        .prop_flat_map(|(i, conj)| (Just(i), Just(conj), word_avoiding(i, 3), word_avoiding(i, 2), word_avoiding(i, 2)))
        .prop_map(|(i, conj, w, a, b)| {
            let x = GroupWord::generator(N, i);
            let image = if conj { w.concat(&x).concat(&w.inverse()) } else { x.concat(&a.commutator(&b)) };
            let images: Vec<GroupWord> =
                (1..=N).map(|k| if k == i { image.clone() } else { GroupWord::generator(N, k) }).collect();
            from_images(&images).expect("basic automorphism")
        })
}

fn ia_matrix() -> impl Strategy<Value = IAMatrix> {
    prop::collection::vec(basic_ia(), 1..=3).prop_map(|fs| fs.iter().fold(IAMatrix::identity(N), |acc, f| acc.mul(f)))
}

fn naive_product(a: &IAMatrix, b: &IAMatrix) -> IAMatrix {
    let n = a.n();
    let rows = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| (1..=n).fold(LaurentPoly::zero(n), |acc, k| &acc + &naive_mul(a.get(i, k), b.get(k, j))))
                .collect()
        })
        .collect();
    IAMatrix::from_rows_unchecked(rows).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for at in 0..=p.len() {
            let mut q = p.clone();
            q.insert(at, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 { 1 } else { -1 }
}

/// Leibniz expansion.
fn naive_det(a: &IAMatrix) -> LaurentPoly {
    let n = a.n();
    permutations(n).iter().fold(LaurentPoly::zero(n), |acc, p| {
        let term = (0..n).fold(LaurentPoly::one(n), |t, i| naive_mul(&t, a.get(i + 1, p[i] + 1)));
        &acc + &term.scale_i64(sign(p))
    })
}

fn rank_one(w: &[LaurentPoly]) -> IAMatrix {
    let n = w.len();
    let mut out = IAMatrix::identity(n);
    for k in 1..=n {
        for l in 1..=n {
            let x = naive_mul(&LaurentPoly::sigma(n, k), &w[l - 1]);
            out.set(k, l, out.get(k, l) + &x);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn from_images_is_ia(a in ia_matrix()) {
        prop_assert!(a.fixes_sigma());
        prop_assert!(check_ia(&a));
        prop_assert!(in_ig(&a, 1));
    }

    #[test]
    fn product_matches_schoolbook_and_stays_ia(a in ia_matrix(), b in ia_matrix()) {
        let p = a.mul(&b);
        prop_assert_eq!(&p, &naive_product(&a, &b));
        prop_assert!(check_ia(&p));
        let d = det_monomial(&p).unwrap();
        prop_assert_eq!(d, det_monomial(&a).unwrap().mul(&det_monomial(&b).unwrap()));
    }

    #[test]
    fn det_matches_leibniz(a in ia_matrix()) {
        prop_assert_eq!(a.det(), naive_det(&a));
    }

    #[test]
    fn inverse_is_two_sided(a in ia_matrix()) {
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).is_identity());
        prop_assert!(inv.mul(&a).is_identity());
        prop_assert_eq!(det_monomial(&inv).unwrap(), det_monomial(&a).unwrap().inv());
    }

    #[test]
    fn entries_satisfy_the_sigma_constraint(a in ia_matrix(), i in 1usize..=N) {
        // sum_j A_ij sigma_j = sigma_i for every row.
        let s = (1..=N).fold(LaurentPoly::zero(N), |acc, j| &acc + &naive_mul(a.get(i, j), &LaurentPoly::sigma(N, j)));
        prop_assert_eq!(s, LaurentPoly::sigma(N, i));
    }

    #[test]
    fn entries_lie_in_the_tail_spans(a in ia_matrix()) {
        for k in 1..=N {
            for l in 1..=N {
                let others: Vec<usize> = (1..=N).filter(|&i| i != l).collect();
                prop_assert!(in_tail_span(&a.deviation(k, l), &others), "entry ({}, {})", k, l);
            }
        }
    }

    #[test]
    fn rank_one_path_matches_dense(a in ia_matrix(), f in poly(N, 3), g in poly(N, 3), i in 1usize..=N, j in 1usize..=N) {
        prop_assume!(i != j);
        // w = f kappa_ij + g e_i, arbitrary apart from w . sigma = 0 for the first summand.
        let mut w = vec![LaurentPoly::zero(N); N];
        w[j - 1] = &f * &LaurentPoly::sigma(N, i);
        w[i - 1] = &(-&(&f * &LaurentPoly::sigma(N, j))) + &g;
        let r = rank_one(&w);
        prop_assert_eq!(a.mul(&r), naive_product(&a, &r));
        prop_assert_eq!(r.det(), naive_det(&r));
    }

    #[test]
    fn text_round_trip(a in ia_matrix()) {
        let text: String = a.to_strings().iter().map(|r| format!("{}\n", r.join(", "))).collect();
        prop_assert_eq!(parse_matrix(&text).unwrap(), a.clone());
        prop_assert_eq!(IAMatrix::from_strings(&a.to_strings()).unwrap(), a);
    }

    #[test]
    fn powers_compose(i in 1usize..=N, j in 1usize..=N, k in -6i64..=6, l in -6i64..=6) {
        prop_assume!(i != j);
        let e = IAMatrix::elementary(N, i, j);
        prop_assert_eq!(e.pow(k).unwrap().mul(&e.pow(l).unwrap()), e.pow(k + l).unwrap());
    }
}

#[test]
fn ig_filtration_is_decreasing() {
    let e = IAMatrix::elementary(N, 1, 2);
    for m in [2u64, 3] {
        let p = e.pow((m * m) as i64).unwrap();
        assert!(in_ig(&p, m), "E12^(m^2) lies in IG_m for m = {m}");
        assert!(!in_ig(&e, m));
    }
    for k in 1i64..=8 {
        let p = e.pow(k).unwrap();
        for m in [2u64, 3, 4, 6] {
            if in_ig(&p, m) {
                for d in (1..m).filter(|d| m % d == 0) {
                    assert!(in_ig(&p, d), "IG_{m} is contained in IG_{d}");
                }
            }
        }
    }
}

#[test]
fn sign_flip_is_rejected() {
    let n = 2;
    let rows = vec![vec![LaurentPoly::zero(n), LaurentPoly::one(n)], vec![LaurentPoly::one(n), LaurentPoly::zero(n)]];
    let a = IAMatrix::from_rows_unchecked(rows).unwrap();
    assert!(!check_ia(&a));
}
