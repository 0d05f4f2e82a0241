mod common;

use chambrier::exact_geometry::linalg::{gram_dot, LinForm, Mat, RatVec};
use chambrier::exact_geometry::weyl::{word_matrix, WeylElement};
use chambrier::exact_geometry::*;
use chambrier::ChambrierError;
use num_traits::Signed;
use proptest::prelude::*;

fn det(m: &Mat) -> Q {
    let n = m.rows;
    let mut a = m.clone();
    let mut d = q(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !num_traits::Zero::is_zero(a.get(i, c))) else { return q(0) };
        if p != c {
            for j in 0..n {
                let t = a.get(p, j).clone();
                a.set(p, j, a.get(c, j).clone());
                a.set(c, j, t);
            }
            d = -d;
        }
        d *= a.get(c, c).clone();
        for i in c + 1..n {
            let f = a.get(i, c) / a.get(c, c);
            for j in 0..n {
                let v = a.get(i, j) - &f * a.get(c, j);
                a.set(i, j, v);
            }
        }
    }
    d
}

#[test]
fn positive_root_counts_match_closure_oracle() {
    for label in SUPPORTED_TYPES {
        let rs = build_root_system(label).unwrap();
        let oracle = common::roots_by_cartan(&rs.cartan);
        assert_eq!(rs.positive_roots.len() * 2, oracle.len(), "{label}");
    }
    assert_eq!(build_root_system("A1").unwrap().positive_roots.len(), 1);
    assert_eq!(build_root_system("A2").unwrap().positive_roots.len(), 3);
    assert_eq!(build_root_system("G2").unwrap().positive_roots.len(), 6);
}

#[test]
fn a1_gram_is_two() {
    let rs = build_root_system("A1").unwrap();
    assert_eq!(rs.gram, Mat::from_i64(&[vec![2]]));
}

#[test]
fn unsupported_label_is_rejected() {
    assert!(matches!(build_root_system("E8"), Err(ChambrierError::UnsupportedType(_))));
    assert!(matches!(build_root_system("A1xB3"), Err(ChambrierError::UnsupportedType(_))));
}

#[test]
fn root_system_invariants() {
    for label in SUPPORTED_TYPES {
        let rs = build_root_system(label).unwrap();
        let n = rs.rank;
        for s in &rs.simple_reflections {
            assert!(s.mul(s).is_identity(), "{label}: reflection is an involution");
            assert_eq!(s.transpose().mul(&rs.gram).mul(s), rs.gram, "{label}: gram preserved");
            let all = rs.all_roots();
            for r in &all {
                let img = LinForm::new(s.left_apply(&r.coeffs));
                assert!(all.contains(&img), "{label}: roots permuted");
            }
        }
        // Positive definiteness via leading principal minors.
        for k in 1..=n {
            let mut m = Mat::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    m.set(i, j, rs.gram.get(i, j).clone());
                }
            }
            assert!(det(&m).is_positive(), "{label}: leading minor {k} positive");
        }
        assert_eq!(rs.gram, rs.gram.transpose());
    }
}

#[test]
fn weyl_orders_match_permutation_oracle() {
    for label in SUPPORTED_TYPES {
        let rs = build_root_system(label).unwrap();
        let w = enumerate_weyl(&rs);
        assert_eq!(w.len(), common::weyl_order_by_permutations(&rs.cartan), "{label}");
    }
    let order = |l: &str| enumerate_weyl(&build_root_system(l).unwrap()).len();
    assert_eq!(order("A1"), 2);
    assert_eq!(order("A2"), 6);
    assert_eq!(order("B2"), 8);
}

#[test]
fn weyl_group_is_closed_and_words_are_reduced() {
    for label in ["A1", "A2", "A3", "B2", "C2", "G2", "A1xA1", "A1xA2"] {
        let rs = build_root_system(label).unwrap();
        let w = enumerate_weyl(&rs);
        assert!(w[0].matrix.is_identity());
        let mats: Vec<&Mat> = w.iter().map(|e| &e.matrix).collect();
        for a in &w {
            for b in &w {
                assert!(mats.contains(&&a.matrix.mul(&b.matrix)));
            }
            assert_eq!(word_matrix(&rs, &a.word), a.matrix, "{label}: word multiplies to element");
            let inversions = rs
                .positive_roots
                .iter()
                .filter(|r| !rs.is_positive_root(&act_form(a, r).unwrap()))
                .count();
            assert_eq!(a.length(), inversions, "{label}: length equals inversion count");
        }
    }
}

#[test]
fn act_examples() {
    let rs = build_root_system("A1").unwrap();
    let w = enumerate_weyl(&rs);
    let x = RatVec(vec![qf(3, 7)]);
    assert_eq!(act(&w[0], &x).unwrap(), x);
    let s = &w[1];
    assert_eq!(act(s, &rs.simple_coroots[0]).unwrap(), RatVec::from_i64(&[-1]));

    let rs = build_root_system("A2").unwrap();
    let w = enumerate_weyl(&rs);
    let ts: &WeylElement = w.iter().find(|e| e.word == vec![1, 0]).unwrap();
    let x = RatVec(vec![qf(2, 3), qf(-5, 4)]);
    let oracle = rs.simple_reflections[1].mul(&rs.simple_reflections[0]).apply(&x.0);
    assert_eq!(act(ts, &x).unwrap().0, oracle);
    assert!(matches!(act(ts, &RatVec::from_i64(&[1])), Err(ChambrierError::DimensionMismatch { .. })));
}

#[test]
fn weyl_facet_examples() {
    let rs = build_root_system("A2").unwrap();
    assert_eq!(rs.weyl_facet_of(&RatVec::zeros(2)).unwrap(), vec![Sign::Zero; 3]);
    assert_eq!(rs.weyl_facet_of(&rs.rho_point).unwrap(), vec![Sign::Pos; 3]);
    // A point with alpha_s = 0 and alpha_t = 1: coordinates solve 2x - y = 0, -x + 2y = 1.
    let x = RatVec(vec![qf(1, 3), qf(2, 3)]);
    assert_eq!(rs.simple_roots[0].eval(&x.0), q(0));
    assert_eq!(rs.weyl_facet_of(&x).unwrap(), vec![Sign::Zero, Sign::Pos, Sign::Pos]);
    // Ordering check: the third root is the sum of the two simple roots.
    let sum: Vec<Q> = rs.simple_roots[0].coeffs.iter().zip(&rs.simple_roots[1].coeffs).map(|(a, b)| a + b).collect();
    assert_eq!(rs.positive_roots[2].coeffs, sum);
}

#[test]
fn json_has_integer_roots() {
    let rs = build_root_system("G2").unwrap();
    let j = rs.to_json();
    assert_eq!(j["label"], "G2");
    assert_eq!(j["positive_roots"].as_array().unwrap().len(), 6);
    assert_eq!(j["cartan"][0][1], -3);
}

fn arb_label() -> impl Strategy<Value = &'static str> {
    prop::sample::select(SUPPORTED_TYPES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn action_preserves_pairing_and_gram(label in arb_label(), seed in 0u64..1000) {
        let rs = build_root_system(label).unwrap();
        let w = enumerate_weyl(&rs);
        let mut r = common::rng(seed);
        for e in &w {
            let x = common::rand_vec(&mut r, rs.rank, 5, 7);
            let y = common::rand_vec(&mut r, rs.rank, 5, 3);
            let wx = act(e, &RatVec(x.clone())).unwrap();
            let wy = act(e, &RatVec(y.clone())).unwrap();
            prop_assert_eq!(gram_dot(&rs.gram, &wx.0, &wy.0), gram_dot(&rs.gram, &x, &y));
            for a in &rs.positive_roots {
                prop_assert_eq!(act_form(e, a).unwrap().eval(&wx.0), a.eval(&x));
                let img = act_form(e, a).unwrap();
                prop_assert!(rs.positive_roots.contains(&img) || rs.positive_roots.contains(&img.neg()));
            }
        }
    }

    #[test]
    fn facet_sign_vectors_are_equivariant(label in arb_label(), seed in 0u64..1000) {
        let rs = build_root_system(label).unwrap();
        let w = enumerate_weyl(&rs);
        let mut r = common::rng(seed);
        let x = RatVec(common::rand_vec(&mut r, rs.rank, 3, 2));
        let sx = rs.weyl_facet_of(&x).unwrap();
        for e in &w {
            let wx = act(e, &x).unwrap();
            // Signs transform as a signed permutation of positive roots.
            let swx = rs.weyl_facet_of(&wx).unwrap();
            let zeros = |v: &[Sign]| v.iter().filter(|s| **s == Sign::Zero).count();
            prop_assert_eq!(zeros(&sx), zeros(&swx));
        }
    }
}
