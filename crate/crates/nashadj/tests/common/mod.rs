//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nashadj::proximity::ProximityTree;

/// Truncated power series in `t` with integer coefficients.
pub type Series = BTreeMap<u32, i128>;

pub fn series(terms: &[(u32, i128)]) -> Series {
    let mut s = Series::new();
    for &(e, c) in terms {
        *s.entry(e).or_insert(0) += c;
    }
    s.retain(|_, c| *c != 0);
    s
}

fn mul(a: &Series, b: &Series, cap: u32) -> Series {
    let mut out = Series::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            if ea + eb <= cap {
                *out.entry(ea + eb).or_insert(0) += ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn pow(a: &Series, k: u32, cap: u32) -> Series {
    let mut out = series(&[(0, 1)]);
    for _ in 0..k {
        out = mul(&out, a, cap);
    }
    out
}

/// `ord_t f(x(t), y(t))` for `f = Σ c x^i y^j`, or `None` if it vanishes
/// up to order `cap`.
pub fn ord_subst(f: &[(u32, u32, i128)], x: &Series, y: &Series, cap: u32) -> Option<u32> {
    let mut total = Series::new();
    for &(i, j, c) in f {
        let term = mul(&pow(x, i, cap), &pow(y, j, cap), cap);
        for (e, v) in term {
            *total.entry(e).or_insert(0) += c * v;
        }
    }
    total.retain(|_, c| *c != 0);
    total.keys().next().copied()
}

/// The cusp tree: p0, p1 free on E0, p2 = E1 ∩ E0.
pub fn cusp_tree() -> ProximityTree {
    ProximityTree::from_links(&[(None, None), (Some(0), None), (Some(1), Some(0))]).unwrap()
}

/// Minimal model of the last divisor of a (6,9,11) branch.
pub fn tree_6_9_11() -> ProximityTree {
    ProximityTree::from_links(&[
        (None, None),
        (Some(0), None),
        (Some(1), Some(0)),
        (Some(2), None),
        (Some(3), Some(2)),
        (Some(4), Some(3)),
    ])
    .unwrap()
}

/// Minimal model of the last divisor of a (10,11) branch.
pub fn tree_10_11() -> ProximityTree {
    let mut links = vec![(None, None), (Some(0), None)];
    for i in 2..11 {
        links.push((Some(i - 1), Some(0)));
    }
    ProximityTree::from_links(&links).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<nashadj::BigInt> {
    v.iter().map(|&x| nashadj::BigInt::from(x)).collect()
}

use std::collections::BTreeSet;

use nashadj::proximity::{CanonicalKey, Divisor, PairConfig, PointKind};
use nashadj::BigInt;

/// Every prime divisor placed against `F` at every possible contact, kept
/// when `ν_E(h_H) ≤ ν_F(h_H)` for all `H` in the merged tree.  Chains are
/// limited by `Σ m(h_E)² ≤ ν_F(h_F)` only.
pub fn brute_force_dominated(ftree: &ProximityTree, f: &Divisor) -> BTreeSet<CanonicalKey> {
    let theta = ftree.noether_matrix();
    let bound: BigInt = f
        .iter()
        .flat_map(|(i, a)| f.iter().map(move |(j, b)| (i, a, j, b)))
        .map(|(i, a, j, b)| &theta[i][j] * BigInt::from(a * b))
        .sum();
    let mut out = BTreeSet::new();
    let mut stack: Vec<Vec<(Option<usize>, Option<usize>)>> = vec![vec![(None, None)]];
    while let Some(links) = stack.pop() {
        let chain = ProximityTree::from_links(&links).unwrap();
        let last = links.len() - 1;
        let m = chain.curvetta_multiplicities(last);
        let sq: BigInt = m.iter().map(|x| x * x).sum();
        if sq > bound {
            continue;
        }
        let kinds: Vec<PointKind> = (0..chain.len()).map(|v| chain.kind(v)).collect();
        for path in paths(ftree, &kinds) {
            if let Some(cfg) = build_placement(ftree, f, &kinds, &path) {
                let th = cfg.tree.noether_matrix();
                let e = cfg.left.prime_vertex().unwrap();
                let ok = (0..cfg.tree.len()).all(|h| {
                    let rhs: BigInt = cfg.right.iter().map(|(v, a)| &th[v][h] * BigInt::from(a)).sum();
                    th[e][h] <= rhs
                });
                if ok {
                    out.insert(cfg.pruned().canonical_form());
                }
            }
        }
        let mut grow = vec![(Some(last), None)];
        if let Some(p) = links[last].0 {
            grow.push((Some(last), Some(p)));
        }
        if let Some(r) = links[last].1 {
            grow.push((Some(last), Some(r)));
        }
        for g in grow {
            let mut next = links.clone();
            next.push(g);
            stack.push(next);
        }
    }
    out
}

fn paths(ftree: &ProximityTree, kinds: &[PointKind]) -> Vec<Vec<usize>> {
    let mut all = vec![vec![0usize]];
    let mut frontier = vec![vec![0usize]];
    for &k in &kinds[1..] {
        let mut next = Vec::new();
        for p in &frontier {
            for c in ftree.children(*p.last().unwrap()) {
                if ftree.kind(c) == k {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

fn build_placement(ftree: &ProximityTree, f: &Divisor, kinds: &[PointKind], path: &[usize]) -> Option<PairConfig> {
    let mut links: Vec<(Option<usize>, Option<usize>)> =
        (0..ftree.len()).map(|v| (ftree.parent(v), ftree.extra(v))).collect();
    let mut cur = *path.last().unwrap();
    for (i, &k) in kinds.iter().enumerate().skip(path.len()) {
        let extra = match k {
            PointKind::Free => None,
            PointKind::SatelliteGrand => Some(links[cur].0?),
            PointKind::SatelliteExtra => Some(links[cur].1?),
            PointKind::Root => unreachable!(),
        };
        if i == path.len() && extra.is_some() && links.contains(&(Some(cur), extra)) {
            return None;
        }
        links.push((Some(cur), extra));
        cur = links.len() - 1;
    }
    let tree = ProximityTree::from_links(&links).ok()?;
    Some(PairConfig::new(tree, Divisor::prime(cur), f.clone()).unwrap())
}

/// Random relabelling compatible with the proximity order.
pub fn random_relabel(t: &ProximityTree, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = t.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let mut ready: Vec<usize> = (0..n)
            .filter(|&v| !placed[v])
            .filter(|&v| t.proximate_targets(v).all(|p| placed[p]))
            .collect();
        ready.shuffle(&mut rng);
        placed[ready[0]] = true;
        order.push(ready[0]);
    }
    let mut perm = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    perm
}
