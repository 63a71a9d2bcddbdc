mod common;

use common::*;
use nashadj::branchinv::*;
use nashadj::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cs(b: &[u64]) -> CharSequence {
    CharSequence::new(b.to_vec()).unwrap()
}

fn ms(m: &[u64]) -> MultiplicitySequence {
    MultiplicitySequence(m.to_vec())
}

#[test]
fn char_validation() {
    assert!(CharSequence::new(vec![]).is_err());
    assert!(CharSequence::new(vec![2]).is_err());
    assert!(CharSequence::new(vec![4, 6]).is_err());
    assert!(CharSequence::new(vec![4, 6, 8, 9]).is_err());
    assert!(CharSequence::new(vec![3, 2]).is_err());
    assert_eq!(CharSequence::smooth(), cs(&[1]));
    assert_eq!(cs(&[6, 9, 11]).genus(), 2);
}

#[test]
fn multiplicity_sequence_examples() {
    assert_eq!(char_to_multseq(&cs(&[1])), ms(&[1]));
    assert_eq!(char_to_multseq(&cs(&[2, 3])), ms(&[2, 1, 1]));
    assert_eq!(char_to_multseq(&cs(&[6, 9, 11])), ms(&[6, 3, 3, 2, 1, 1]));
    assert_eq!(multseq_to_char(&ms(&[1])).unwrap(), cs(&[1]));
    assert_eq!(multseq_to_char(&ms(&[2, 1, 1])).unwrap(), cs(&[2, 3]));
    assert_eq!(multseq_to_char(&ms(&[6, 3, 3, 2, 1, 1])).unwrap(), cs(&[6, 9, 11]));
    assert_eq!(multseq_to_char(&ms(&[2, 1, 1, 1, 1])).unwrap(), cs(&[2, 3]));
    assert!(multseq_to_char(&ms(&[2, 1])).is_err());
    assert!(multseq_to_char(&ms(&[3, 3, 1])).is_err());
    assert!(multseq_to_char(&ms(&[2, 2])).is_err());
}

#[test]
fn cusp_chain_matches_blowup_simulation() {
    // y² − x³: blow up x = x, y = x y1 gives y1² − x (mult 1, tangent to E0).
    let t = tree_from_multseq(&ms(&[2, 1, 1])).unwrap();
    assert_eq!(t.canonical_form(&[]), cusp_tree().canonical_form(&[]));
    let t = tree_from_multseq(&ms(&[6, 3, 3, 2, 1, 1])).unwrap();
    assert_eq!(t.canonical_form(&[]), tree_6_9_11().canonical_form(&[]));
}

/// Orders of the approximate roots along a model branch `x = t^β0, y = Σ t^βi`.
fn contact_oracle(beta: &[u64], roots: &[Vec<(u32, u32, i128)>]) -> Vec<u32> {
    let x = series(&[(beta[0] as u32, 1)]);
    let y = series(&beta[1..].iter().map(|&b| (b as u32, 1)).collect::<Vec<_>>());
    roots.iter().map(|f| ord_subst(f, &x, &y, 200).unwrap()).collect()
}

#[test]
fn semigroup_examples() {
    let s = semigroup_data(&cs(&[2, 3]));
    assert_eq!((s.e, s.n, s.beta_bar), (vec![2, 1], vec![2], vec![2, 3]));
    let s = semigroup_data(&cs(&[4, 6, 7]));
    assert_eq!(
        (s.e, s.n, s.beta_bar.clone()),
        (vec![4, 2, 1], vec![2, 2], vec![4, 6, 13])
    );
    let roots = vec![vec![(1, 0, 1)], vec![(0, 1, 1)], vec![(0, 2, 1), (3, 0, -1)]];
    assert_eq!(contact_oracle(&[4, 6, 7], &roots), vec![4, 6, 13]);
    let s = semigroup_data(&cs(&[6, 9, 11]));
    assert_eq!(
        (s.e, s.n, s.beta_bar.clone()),
        (vec![6, 3, 1], vec![2, 3], vec![6, 9, 20])
    );
    assert_eq!(contact_oracle(&[6, 9, 11], &roots), vec![6, 9, 20]);
}

#[test]
fn approximate_root_examples() {
    use ContactValue::*;
    let flat = |c: &[u64]| {
        approx_root_profile(&cs(c))
            .into_iter()
            .map(|e| (e.k, e.degree, e.contact))
            .collect::<Vec<_>>()
    };
    assert_eq!(flat(&[1]), vec![(0, Some(1), Infinite)]);
    assert_eq!(
        flat(&[2, 3]),
        vec![(-1, None, Finite(2)), (0, Some(1), Finite(3)), (1, Some(2), Infinite)]
    );
    assert_eq!(
        flat(&[4, 6, 7]),
        vec![
            (-1, None, Finite(4)),
            (0, Some(1), Finite(6)),
            (1, Some(2), Finite(13)),
            (2, Some(4), Infinite)
        ]
    );
    assert_eq!(Infinite.to_string(), "inf");
}

#[test]
fn delta_and_milnor_examples() {
    assert_eq!(delta_and_milnor(&[ms(&[1])], &[vec![0]]).unwrap(), (0, 0));
    assert_eq!(delta_and_milnor(&[ms(&[2, 1, 1])], &[vec![0]]).unwrap(), (1, 2));
    let m = [6u64, 3, 3, 2, 1, 1];
    let oracle: u64 = m.iter().map(|x| x * (x - 1) / 2).sum();
    assert_eq!(oracle, 22);
    assert_eq!(delta_and_milnor(&[ms(&m)], &[vec![0]]).unwrap(), (22, 44));
    // A1: two smooth branches meeting once.
    assert_eq!(
        delta_and_milnor(&[ms(&[1]), ms(&[1])], &[vec![0, 1], vec![1, 0]]).unwrap(),
        (1, 1)
    );
    assert!(delta_and_milnor(&[ms(&[1]), ms(&[1])], &[vec![0, 1], vec![2, 0]]).is_err());
    assert!(delta_and_milnor(&[ms(&[1]), ms(&[1])], &[vec![0, 0], vec![0, 0]]).is_err());
    assert!(delta_and_milnor(&[], &[]).is_err());
}

#[test]
fn node_from_branches() {
    let bt = tree_from_branches(&[cs(&[1]), cs(&[1])], &[vec![0, 1], vec![1, 0]]).unwrap();
    assert_eq!(bt.tree.len(), 3);
    assert_eq!(bt.tree.children(0).len(), 2);
    assert!(bt.ends.iter().all(|&v| bt.tree.is_free(v)));
    assert_eq!(bt.divisor.iter().map(|(_, c)| c).collect::<Vec<_>>(), vec![1, 1]);
}

#[test]
fn cusp_with_tangent_line() {
    let bt = tree_from_branches(&[cs(&[2, 3]), cs(&[1])], &[vec![0, 2], vec![2, 0]]).unwrap();
    let theta = bt.tree.noether_matrix();
    let i = &theta[bt.ends[0]][bt.ends[1]];
    let oracle = ord_subst(&[(0, 1, 1)], &series(&[(2, 1)]), &series(&[(3, 1)]), 20).unwrap();
    assert_eq!(oracle, 3);
    assert_eq!(i, &BigInt::from(oracle));
}

#[test]
fn worked_pair_from_branches() {
    let bt = tree_from_branches(&[cs(&[6, 9, 11]), cs(&[10, 11])], &[vec![0, 1], vec![1, 0]]).unwrap();
    assert_eq!(bt.tree.len(), 16);
    let theta = bt.tree.noether_matrix();
    // Transversal branches (t^6, t^9 + t^11) and x^10 − y^11.
    let oracle = ord_subst(
        &[(10, 0, 1), (0, 11, -1)],
        &series(&[(6, 1)]),
        &series(&[(9, 1), (11, 1)]),
        200,
    )
    .unwrap();
    assert_eq!(oracle, 60);
    assert_eq!(theta[bt.ends[0]][bt.ends[1]], BigInt::from(oracle));
    let json = r#"{"branches":[{"char":[6,9,11]},{"char":[10,11]}],"shared":[[0,1],[1,0]]}"#;
    let parsed: BranchBundleJson = serde_json::from_str(json).unwrap();
    assert_eq!(parsed.build().unwrap(), bt);
}

#[test]
fn incompatible_prefixes() {
    let r = tree_from_branches(&[cs(&[2, 3]), cs(&[2, 5])], &[vec![0, 3], vec![3, 0]]);
    assert!(matches!(r, Err(BranchError::IncompatiblePrefixes(_))));
    let r = tree_from_branches(&[cs(&[2, 3]), cs(&[2, 3])], &[vec![0, 3], vec![3, 0]]).unwrap();
    assert_eq!(r.tree.len(), 5);
    let r = tree_from_branches(
        &[cs(&[1]), cs(&[1]), cs(&[1])],
        &[vec![0, 2, 1], vec![2, 0, 2], vec![1, 2, 0]],
    );
    assert!(matches!(r, Err(BranchError::InconsistentPairwise(_))));
}

fn random_char(rng: &mut ChaCha8Rng, max_beta0: u64) -> CharSequence {
    let b0 = rng.gen_range(1..=max_beta0);
    let mut beta = vec![b0];
    let mut e = b0;
    while e > 1 {
        let last = *beta.last().unwrap();
        let b = last + rng.gen_range(1..=2 * e);
        let g = e.gcd(&b);
        if g < e {
            beta.push(b);
            e = g;
        }
    }
    CharSequence::new(beta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn round_trip(seed in any::<u64>()) {
        let c = random_char(&mut ChaCha8Rng::seed_from_u64(seed), 64);
        let m = char_to_multseq(&c);
        prop_assert!(tree_from_multseq(&m).is_ok());
        prop_assert_eq!(multseq_to_char(&m).unwrap(), c);
    }

    #[test]
    fn noether_reproduces_semigroup(seed in any::<u64>()) {
        let c = random_char(&mut ChaCha8Rng::seed_from_u64(seed), 24);
        prop_assume!(c.genus() > 0);
        let t = tree_from_multseq(&char_to_multseq(&c)).unwrap();
        let deep = t.len() - 1;
        let theta = t.noether_matrix();
        let ends: Vec<usize> = t.end_components(deep).unwrap().into_iter().filter(|&v| v != deep).collect();
        let got: Vec<BigInt> = ends.iter().map(|&v| theta[deep][v].clone()).collect();
        let want: Vec<BigInt> = semigroup_data(&c).beta_bar.iter().map(|&b| BigInt::from(b)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn delta_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..10);
        let t = nashadj::proximity::random_tree(&mut rng, n);
        let r = rng.gen_range(1..4);
        let ends: Vec<usize> = (0..r).map(|_| rng.gen_range(0..t.len())).collect();
        let theta = t.noether_matrix();
        let branches: Vec<MultiplicitySequence> = ends.iter().map(|&v| multseq_of_vertex(&t, v)).collect();
        let pair = |a: &[usize]| -> Vec<Vec<u64>> {
            a.iter().map(|&i| a.iter().map(|&j| u64::try_from(&theta[i][j]).unwrap()).collect()).collect()
        };
        let (delta, mu) = delta_and_milnor(&branches, &pair(&ends)).unwrap();
        // Total multiplicity at every point.
        let mut total = vec![BigInt::from(0); t.len()];
        for &v in &ends {
            for (k, m) in t.curvetta_multiplicities(v).into_iter().enumerate() {
                total[k] += m;
            }
        }
        let oracle: BigInt = total.iter().map(|m| m * (m - 1) / 2).sum();
        prop_assert_eq!(BigInt::from(delta), oracle);
        prop_assert_eq!(mu, 2 * delta as i64 - r as i64 + 1);
        if r > 1 {
            let rest: Vec<usize> = ends[1..].to_vec();
            let sub: Vec<MultiplicitySequence> = branches[1..].to_vec();
            let (d_rest, _) = delta_and_milnor(&sub, &pair(&rest)).unwrap();
            let cross: u64 = rest.iter().map(|&j| u64::try_from(&theta[ends[0]][j]).unwrap()).sum();
            prop_assert_eq!(delta, d_rest + branches[0].delta() + cross);
        }
    }
}
