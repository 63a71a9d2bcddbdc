mod common;

use std::collections::BTreeSet;

use common::*;
use nashadj::branchinv::{tree_from_branches, CharSequence};
use nashadj::proximity::*;
use nashadj::valorder::*;
use nashadj::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cs(b: &[u64]) -> CharSequence {
    CharSequence::new(b.to_vec()).unwrap()
}

fn worked_pair() -> PairConfig {
    let bt = tree_from_branches(&[cs(&[6, 9, 11]), cs(&[10, 11])], &[vec![0, 1], vec![1, 0]]).unwrap();
    PairConfig::new(bt.tree, Divisor::prime(bt.ends[0]), Divisor::prime(bt.ends[1])).unwrap()
}

fn branch_type(chars: &[&[u64]], shared: &[Vec<usize>]) -> TopologicalType {
    let cs: Vec<CharSequence> = chars.iter().map(|c| cs(c)).collect();
    let bt = tree_from_branches(&cs, shared).unwrap();
    TopologicalType::of_divisor(&bt.tree, &bt.divisor).unwrap()
}

fn a_type(k: usize) -> TopologicalType {
    if k.is_multiple_of(2) {
        branch_type(&[&[2, k as u64 + 1]], &[vec![0]])
    } else {
        let s = k.div_ceil(2);
        branch_type(&[&[1], &[1]], &[vec![0, s], vec![s, 0]])
    }
}

fn values(v: &ValVerdict) -> (Vec<i64>, Vec<i64>) {
    let f = |x: &BigInt| i64::try_from(x).unwrap();
    (
        v.checks.iter().map(|c| f(&c.lhs)).collect(),
        v.checks.iter().map(|c| f(&c.rhs)).collect(),
    )
}

#[test]
fn reflexive() {
    let cfg = PairConfig::new(tree_6_9_11(), Divisor::prime(5), Divisor::prime(5)).unwrap();
    assert!(val_leq(&cfg).unwrap().holds);
    assert!(val_leq_prime(&cfg).unwrap().holds);
}

#[test]
fn worked_pair_holds() {
    let cfg = worked_pair();
    let e = cfg.left.prime_vertex().unwrap();
    let v = val_leq(&cfg).unwrap();
    assert!(v.holds);
    let at_e = v.checks.iter().find(|c| c.vertex == Some(e)).unwrap();
    assert_eq!(
        (at_e.lhs.clone(), at_e.rhs.clone()),
        (BigInt::from(60), BigInt::from(60))
    );
    // p3 of the (6,9,11) chain.
    let p3 = cfg.tree.chain(e)[3];
    let at_p3 = v.checks.iter().find(|c| c.vertex == Some(p3)).unwrap();
    assert_eq!(
        (at_p3.lhs.clone(), at_p3.rhs.clone()),
        (BigInt::from(20), BigInt::from(20))
    );
    for c in Criterion::ALL {
        assert!(val_leq_by(&cfg, c).unwrap().holds, "{c:?}");
    }
    let fast = val_leq_prime(&cfg).unwrap();
    assert!(fast.holds);
    assert_eq!(values(&fast), (vec![6, 9, 20, 60, 6], vec![10, 10, 20, 60, 10]));
    assert_eq!(fast.checks.last().unwrap().vertex, None);
    assert!(!val_leq(&cfg.swapped()).unwrap().holds);
}

#[test]
fn root_prime_single_check() {
    let t = tree_6_9_11();
    let cfg = PairConfig::new(t, Divisor::prime(0), Divisor::prime(5)).unwrap();
    let v = val_leq_prime(&cfg).unwrap();
    assert!(v.holds);
    assert_eq!(values(&v), (vec![1], vec![6]));
    assert!(val_leq_prime(
        &PairConfig::new(tree_6_9_11(), Divisor::from_pairs([(0, 1), (1, 1)]), Divisor::prime(5)).unwrap()
    )
    .is_err());
}

#[test]
fn domination() {
    let mut t = cusp_tree();
    let deep = t.push_free(2);
    let cfg = PairConfig::new(t, Divisor::prime(2), Divisor::prime(deep)).unwrap();
    assert!(val_leq(&cfg).unwrap().holds);
    let back = val_leq(&cfg.swapped()).unwrap();
    assert!(!back.holds);
    assert!(back.first_failure.is_some());
}

#[test]
fn complexity_examples() {
    assert_eq!(complexity(&branch_type(&[&[1]], &[vec![0]])), 1);
    assert_eq!(complexity(&branch_type(&[&[2, 3]], &[vec![0]])), 3);
    assert_eq!(complexity(&branch_type(&[&[6, 9, 11]], &[vec![0]])), 6);
    assert_eq!(complexity(&a_type(8)), 6);
}

#[test]
fn topological_type_milnor() {
    for k in 1..=8 {
        assert_eq!(a_type(k).milnor(), k as i64, "A{k}");
    }
    // A deeper cusp divisor has the same type as the cusp.
    let mut t = cusp_tree();
    let d = t.push_free(2);
    let d2 = t.push_free(d);
    let a = TopologicalType::of_divisor(&t, &Divisor::prime(d2)).unwrap();
    assert_eq!(a.canonical_key(), a_type(2).canonical_key());
    // E6: (3,4); D5: line + transversal cusp.
    assert_eq!(branch_type(&[&[3, 4]], &[vec![0]]).milnor(), 6);
    assert_eq!(branch_type(&[&[2, 3], &[1]], &[vec![0, 1], vec![1, 0]]).milnor(), 5);
}

#[test]
fn members_respect_bound() {
    let cusp = a_type(2);
    let ms = cusp.members(5);
    assert_eq!(ms.len(), 3);
    for (t, d) in &ms {
        let ty = TopologicalType::of_divisor(t, d).unwrap();
        assert_eq!(ty.canonical_key(), cusp.canonical_key());
        assert!(t.height() <= 5);
    }
    assert!(cusp.members(2).is_empty());
}

#[test]
fn ffp_examples() {
    let e6 = branch_type(&[&[3, 4]], &[vec![0]]);
    let same = decide_ffp_adjacency(&e6, &e6);
    assert!(same.adjacent);
    let w = same.witness.unwrap();
    assert_eq!(w.left, w.right);
    for k in 2..=8 {
        let v = decide_ffp_adjacency(&a_type(k - 1), &a_type(k));
        assert!(v.adjacent, "A{k} -> A{}", k - 1);
        assert!(val_leq(v.witness.as_ref().unwrap()).unwrap().holds);
        assert!(v.witness.unwrap().tree.height() <= v.search_bound);
    }
    assert!(!decide_ffp_adjacency(&a_type(4), &e6).adjacent);
}

#[test]
fn merges_of_two_free_points() {
    let mut a = ProximityTree::root_only();
    let x = a.push_free(0);
    let all = merges(&a, &Divisor::prime(x), &a, &Divisor::prime(x));
    assert_eq!(all.len(), 2);
    let cusp = cusp_tree();
    let all = merges(&cusp, &Divisor::prime(2), &cusp, &Divisor::prime(2));
    // Identified, or separated after the root.
    assert_eq!(all.len(), 2);
}

fn expanded(en: &Enumeration, ftree: &ProximityTree, f: &Divisor) -> BTreeSet<CanonicalKey> {
    let mut out = BTreeSet::new();
    for e in &en.entries {
        for c in e.contacts() {
            let cfg = place_chain(ftree, f, &e.kinds, &e.path[..c]).unwrap();
            out.insert(cfg.pruned().canonical_form());
        }
    }
    out
}

fn enumerator_matches_oracle(ftree: &ProximityTree, f: &Divisor) -> usize {
    let en = enumerate_dominated(ftree, f, EnumLimits::default()).unwrap();
    assert!(!en.partial);
    for e in &en.entries {
        assert!(val_leq(&e.config).unwrap().holds);
    }
    let oracle = brute_force_dominated(ftree, f);
    assert_eq!(expanded(&en, ftree, f), oracle);
    en.entries.len()
}

#[test]
fn enumerate_root() {
    let t = ProximityTree::root_only();
    let en = enumerate_dominated(&t, &Divisor::prime(0), EnumLimits::default()).unwrap();
    assert_eq!(en.bound, 1);
    assert_eq!(en.entries.len(), 1);
    assert_eq!(en.entries[0].config.left, en.entries[0].config.right);
    assert_eq!(enumerator_matches_oracle(&t, &Divisor::prime(0)), 1);
}

#[test]
fn enumerate_cusp() {
    let t = cusp_tree();
    let f = Divisor::prime(2);
    let en = enumerate_dominated(&t, &f, EnumLimits::default()).unwrap();
    assert_eq!(en.bound, 6);
    let keys: Vec<String> = en
        .entries
        .iter()
        .map(|e| e.config.tree.canonical_form(&[&e.config.left]).0)
        .collect();
    assert!(en.entries.iter().any(|e| e.kinds.len() == 1));
    assert!(en.entries.iter().any(|e| e.config.left == e.config.right));
    assert!(en
        .entries
        .iter()
        .any(|e| e.kinds.len() == 2 && e.kinds[1] == PointKind::Free));
    assert!(!keys.is_empty());
    enumerator_matches_oracle(&t, &f);
}

#[test]
fn enumerate_two_five() {
    let bt = tree_from_branches(&[cs(&[2, 5])], &[vec![0]]).unwrap();
    enumerator_matches_oracle(&bt.tree, &bt.divisor);
}

#[test]
fn enumerate_ten_eleven_contains_worked_pair() {
    let t = tree_10_11();
    let f = Divisor::prime(10);
    let en = enumerate_dominated(&t, &f, EnumLimits::default()).unwrap();
    let target = worked_pair().pruned().canonical_form();
    let found = en.entries.iter().find(|e| {
        e.contacts().iter().any(|&c| {
            place_chain(&t, &f, &e.kinds, &e.path[..c])
                .unwrap()
                .pruned()
                .canonical_form()
                == target
        })
    });
    let e = found.expect("the (6,9,11) divisor is dominated");
    assert_eq!(e.min_contact, 1);
}

#[test]
fn enumerate_cap_marks_partial() {
    let t = tree_10_11();
    let en = enumerate_dominated(&t, &Divisor::prime(10), EnumLimits { max_vertices: Some(3) }).unwrap();
    assert!(en.partial);
}

fn arb_pair(max: usize, prime: bool) -> impl Strategy<Value = PairConfig> {
    (1..=max, any::<u64>()).prop_map(move |(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, n);
        let div = |rng: &mut ChaCha8Rng| {
            if prime {
                Divisor::prime(rng.gen_range(0..n))
            } else {
                let k = rng.gen_range(1..=3);
                Divisor::from_pairs((0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(1..=3))))
            }
        };
        let e = div(&mut rng);
        let f = div(&mut rng);
        PairConfig::new(t, e, f).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn criteria_agree(cfg in arb_pair(10, false)) {
        let verdicts: Vec<bool> = Criterion::ALL.iter().map(|&c| val_leq_by(&cfg, c).unwrap().holds).collect();
        prop_assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{:?}", verdicts);
        prop_assert_eq!(val_holds(&cfg).unwrap(), verdicts[0]);
    }

    #[test]
    fn prime_fast_path_agrees(cfg in arb_pair(10, true)) {
        prop_assert_eq!(val_leq_prime(&cfg).unwrap().holds, val_leq(&cfg).unwrap().holds);
    }

    #[test]
    fn antisymmetric(cfg in arb_pair(10, false)) {
        let p = cfg.pruned();
        if val_leq(&p).unwrap().holds && val_leq(&p.swapped()).unwrap().holds {
            prop_assert_eq!(&p.left, &p.right);
        }
    }

    #[test]
    fn transitive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=9);
        let t = random_tree(&mut rng, n);
        let ds: Vec<Divisor> = (0..3).map(|_| Divisor::prime(rng.gen_range(0..n))).collect();
        let leq = |a: &Divisor, b: &Divisor| val_leq(&PairConfig::new(t.clone(), a.clone(), b.clone()).unwrap()).unwrap().holds;
        if leq(&ds[0], &ds[1]) && leq(&ds[1], &ds[2]) {
            prop_assert!(leq(&ds[0], &ds[2]));
        }
    }

    #[test]
    fn higher_contact_preserves_domination(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=7);
        let fchain = random_chain(&mut rng, n);
        let f = Divisor::prime(n - 1);
        let m = rng.gen_range(1..=7);
        let echain = random_chain(&mut rng, m);
        let kinds: Vec<PointKind> = (0..m).map(|v| echain.kind(v)).collect();
        let mut full = vec![0usize];
        while full.len() < m.min(n) && fchain.kind(full.len()) == kinds[full.len()] {
            full.push(full.len());
        }
        let mut holds_before = false;
        for c in 1..=full.len() {
            if c < full.len() && kinds[c] != PointKind::Free {
                continue;
            }
            let cfg = place_chain(&fchain, &f, &kinds, &full[..c]).unwrap();
            let h = val_leq(&cfg).unwrap().holds;
            prop_assert!(!holds_before || h, "contact {}", c);
            holds_before |= h;
        }
    }
}
