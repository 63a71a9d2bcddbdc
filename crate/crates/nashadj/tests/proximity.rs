mod common;

use common::*;
use nashadj::proximity::*;
use nashadj::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn arb_tree(max: usize) -> impl Strategy<Value = ProximityTree> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| random_tree(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

#[test]
fn validate_examples() {
    assert!(ProximityTree::root_only().validate().is_ok());
    assert!(cusp_tree().validate().is_ok());
    // p2 child of p1 pointing at p3, a sibling branch that is not an ancestor.
    let bad = ProximityTree::from_vertices_unchecked(vec![
        Vertex {
            parent: None,
            extra: None,
            label: "p0".into(),
        },
        Vertex {
            parent: Some(0),
            extra: None,
            label: "p1".into(),
        },
        Vertex {
            parent: Some(1),
            extra: Some(3),
            label: "p2".into(),
        },
        Vertex {
            parent: Some(0),
            extra: None,
            label: "p3".into(),
        },
    ]);
    let err = bad.validate().unwrap_err();
    assert!(err.to_string().contains("illegal satellite target"), "{err}");
    let dup = ProximityTree::from_vertices_unchecked(vec![
        Vertex {
            parent: None,
            extra: None,
            label: "a".into(),
        },
        Vertex {
            parent: Some(0),
            extra: None,
            label: "b".into(),
        },
        Vertex {
            parent: Some(1),
            extra: Some(0),
            label: "c".into(),
        },
        Vertex {
            parent: Some(1),
            extra: Some(0),
            label: "d".into(),
        },
    ]);
    assert!(matches!(dup.validate(), Err(Violation::DuplicateSatellite { .. })));
}

/// Explicit curvettas of E0, E1, E2 in the cusp tree and their equations.
fn cusp_curvettas() -> Vec<(Vec<(u32, u32, i128)>, Series, Series)> {
    vec![
        (vec![(1, 0, 1), (0, 1, 1)], series(&[(1, 1)]), series(&[(1, -1)])),
        (vec![(0, 1, 1), (2, 0, -2)], series(&[(1, 1)]), series(&[(2, 2)])),
        (vec![(0, 2, 1), (3, 0, -1)], series(&[(2, 1)]), series(&[(3, 1)])),
    ]
}

/// A second generic curvetta per component, used for diagonal entries.
fn cusp_second_curvettas() -> Vec<(Series, Series)> {
    vec![
        (series(&[(1, 1)]), series(&[(1, 3)])),
        (series(&[(1, 1)]), series(&[(2, 5)])),
        (series(&[(2, 1)]), series(&[(3, 2)])),
    ]
}

#[test]
fn cusp_noether_matrix_matches_series_oracle() {
    let curves = cusp_curvettas();
    let seconds = cusp_second_curvettas();
    let mut oracle = vec![vec![0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (x, y) = if i == j {
                seconds[i].clone()
            } else {
                (curves[i].1.clone(), curves[i].2.clone())
            };
            oracle[i][j] = ord_subst(&curves[j].0, &x, &y, 40).unwrap() as i64;
        }
    }
    assert_eq!(oracle, vec![vec![1, 1, 2], vec![1, 2, 3], vec![2, 3, 6]]);
    let theta = cusp_tree().noether_matrix();
    let expected: Matrix = vec![ints(&[1, 1, 2]), ints(&[1, 2, 3]), ints(&[2, 3, 6])];
    assert_eq!(theta, expected);
}

#[test]
fn curvetta_examples() {
    let t = ProximityTree::root_only();
    assert_eq!(t.curvetta_multiplicities(0), ints(&[1]));
    assert_eq!(cusp_tree().curvetta_multiplicities(2), ints(&[2, 1, 1]));
    assert_eq!(tree_6_9_11().curvetta_multiplicities(5), ints(&[6, 3, 3, 2, 1, 1]));
    assert_eq!(tree_6_9_11().curvetta_multiplicities(3), ints(&[2, 1, 1, 1, 0, 0]));
}

#[test]
fn valuation_examples() {
    let t = ProximityTree::root_only();
    assert_eq!(t.valuation(&Divisor::prime(0), &ints(&[1])).unwrap(), big(1));
    let c = cusp_tree();
    assert_eq!(c.valuation_vector(&ints(&[2, 1, 1])).unwrap(), ints(&[2, 3, 6]));
    assert_eq!(c.valuation(&Divisor::prime(2), &ints(&[2, 1, 1])).unwrap(), big(6));
    // Oracle: ν_{E2}(y² − x³) equals I with a generic curvetta of E2.
    let cv = cusp_curvettas();
    let (x, y) = &cusp_second_curvettas()[2];
    assert_eq!(ord_subst(&cv[2].0, x, y, 40), Some(6));
    let t = tree_6_9_11();
    let m = t.curvetta_multiplicities(5);
    assert_eq!(t.valuation(&Divisor::prime(5), &m).unwrap(), big(60));
    assert!(c.valuation(&Divisor::prime(2), &ints(&[1, 0])).is_err());
}

#[test]
fn noether_examples() {
    assert_eq!(ProximityTree::root_only().noether_matrix(), vec![ints(&[1])]);
    let theta = tree_6_9_11().noether_matrix();
    assert_eq!(theta[5][5], big(60));
    assert_eq!(theta[0][5], big(6));
    let sum_sq: i64 = [6i64, 3, 3, 2, 1, 1].iter().map(|m| m * m).sum();
    assert_eq!(theta[5][5], big(sum_sq));
}

#[test]
fn intersection_examples() {
    assert_eq!(ProximityTree::root_only().intersection_matrix(), vec![ints(&[-1])]);
    let m = cusp_tree().intersection_matrix();
    assert_eq!(m, vec![ints(&[-3, 0, 1]), ints(&[0, -2, 1]), ints(&[1, 1, -1])]);
    assert!(is_minus_identity(&mat_mul(&m, &cusp_tree().noether_matrix())));
    assert_eq!(tree_6_9_11().dual_degrees(), vec![1, 1, 3, 1, 2, 2]);
}

#[test]
fn log_discrepancy_examples() {
    assert_eq!(ProximityTree::root_only().log_discrepancies(), ints(&[2]));
    assert_eq!(cusp_tree().log_discrepancies(), ints(&[2, 3, 5]));
    assert_eq!(tree_6_9_11().log_discrepancies()[5], big(17));
    assert_eq!(tree_10_11().log_discrepancies()[10], big(21));
}

#[test]
fn end_component_examples() {
    let mut chain = ProximityTree::root_only();
    for i in 0..4 {
        chain.push_free(i);
    }
    assert_eq!(chain.end_components(4).unwrap(), vec![0, 4]);
    assert_eq!(cusp_tree().end_components(2).unwrap(), vec![0, 1, 2]);
    assert_eq!(tree_6_9_11().end_components(5).unwrap(), vec![0, 1, 3, 5]);
    assert!(matches!(
        tree_6_9_11().end_components(3),
        Err(ProximityError::NotDeepest(3))
    ));
}

#[test]
fn contact_order_examples() {
    let t = tree_6_9_11();
    let cfg = PairConfig::new(t.clone(), Divisor::prime(5), Divisor::prime(5)).unwrap();
    assert_eq!(contact_order(&cfg).unwrap(), 6);
    let mut two = ProximityTree::root_only();
    let a = two.push_free(0);
    let b = two.push_free(0);
    let cfg = PairConfig::new(two, Divisor::prime(a), Divisor::prime(b)).unwrap();
    assert_eq!(contact_order(&cfg).unwrap(), 1);
    let bad = PairConfig::new(t, Divisor::from_pairs([(5, 2)]), Divisor::prime(1)).unwrap();
    assert!(contact_order(&bad).is_err());
}

#[test]
fn canonical_form_examples() {
    let mut a = ProximityTree::root_only();
    let a1 = a.push_free(0);
    a.push_free(a1);
    let a3 = a.push_free(0);
    let mut b = ProximityTree::root_only();
    let b1 = b.push_free(0);
    let b2 = b.push_free(0);
    b.push_free(b2);
    let da = Divisor::prime(a3);
    let db = Divisor::prime(b1);
    assert_eq!(a.canonical_form(&[&da]), b.canonical_form(&[&db]));
    let cusp = cusp_tree();
    let tac = ProximityTree::from_links(&[(None, None), (Some(0), None), (Some(1), None)]).unwrap();
    let d2 = Divisor::prime(2);
    assert_ne!(cusp.canonical_form(&[&d2]), tac.canonical_form(&[&d2]));
}

#[test]
fn json_and_dot() {
    let t = cusp_tree();
    let json = serde_json::to_string(&t.to_json()).unwrap();
    let back: TreeJson = serde_json::from_str(&json).unwrap();
    assert_eq!(back.to_tree().unwrap().0, t);
    let raw = r#"{"vertices":[{"id":10,"parent":null,"extra":null,"label":"O"},
        {"id":11,"parent":10,"extra":null,"label":"a"},
        {"id":12,"parent":11,"extra":10,"label":"b"}]}"#;
    let parsed: TreeJson = serde_json::from_str(raw).unwrap();
    let (tree, ids) = parsed.to_tree().unwrap();
    assert_eq!(tree.canonical_form(&[]), t.canonical_form(&[]));
    let d: DivisorJson = serde_json::from_str(r#"{"coeffs":{"12":1}}"#).unwrap();
    assert_eq!(d.to_divisor(&ids).unwrap(), Divisor::prime(2));
    let dot = t.to_dot(Some(&Divisor::prime(2)));
    assert!(dot.contains("E0 (-3)"));
    assert!(dot.contains("E2 (-1)\\n1"));
    assert!(dot.contains("v0 -- v2"));
    assert!(!dot.contains("v0 -- v1"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn noether_is_symmetric(t in arb_tree(14)) {
        let theta = t.noether_matrix();
        for i in 0..t.len() {
            for j in 0..t.len() {
                prop_assert_eq!(&theta[i][j], &theta[j][i]);
            }
        }
    }

    #[test]
    fn intersection_times_noether_is_minus_identity(t in arb_tree(12)) {
        let m = t.intersection_matrix_by_rule();
        prop_assert!(is_minus_identity(&mat_mul(&m, &t.noether_matrix())));
    }

    #[test]
    fn valuation_matches_noether(t in arb_tree(10)) {
        let theta = t.noether_matrix();
        for i in 0..t.len() {
            for j in 0..t.len() {
                let v = t.valuation(&Divisor::prime(i), &t.curvetta_multiplicities(j)).unwrap();
                prop_assert_eq!(&v, &theta[i][j]);
            }
        }
    }

    #[test]
    fn log_discrepancy_rules(t in arb_tree(14)) {
        let l = t.log_discrepancies();
        prop_assert_eq!(&l[0], &BigInt::from(2));
        for v in 1..t.len() {
            let p = t.parent(v).unwrap();
            match t.extra(v) {
                None => prop_assert_eq!(&l[v], &(&l[p] + 1)),
                Some(r) => prop_assert_eq!(&l[v], &(&l[p] + &l[r])),
            }
        }
    }

    #[test]
    fn proximity_equality(t in arb_tree(14)) {
        for v in 0..t.len() {
            let m = t.curvetta_multiplicities(v);
            let chain = t.chain(v);
            for &j in chain.iter().filter(|&&j| j != v) {
                let s: BigInt = chain.iter().filter(|&&k| t.is_proximate(k, j)).map(|&k| m[k].clone()).sum();
                prop_assert_eq!(&m[j], &s);
            }
            for k in 0..t.len() {
                if !chain.contains(&k) {
                    prop_assert_eq!(&m[k], &BigInt::from(0));
                }
            }
        }
    }

    #[test]
    fn canonical_form_is_relabel_invariant(t in arb_tree(12), seed in any::<u64>(), mark in any::<usize>()) {
        let v = mark % t.len();
        let d = Divisor::from_pairs([(v, 2), (0, 1)]);
        let perm = random_relabel(&t, seed);
        let (u, map) = t.permuted(&perm).unwrap();
        prop_assert_eq!(t.canonical_form(&[&d]), u.canonical_form(&[&d.remap(&map)]));
    }
}
