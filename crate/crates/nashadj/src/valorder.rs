//! The valuative partial order `ν_E ≤ ν_F` between divisors on a common
//! tree, its prime fast path, the enumerator of dominated types and the
//! decision of adjacency fixing free points between topological types.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::proximity::{CanonicalKey, Divisor, PairConfig, PointKind, ProximityError, ProximityTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValError {
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error("empty divisor")]
    EmptyDivisor,
    #[error("prime divisors required")]
    NotPrime,
}

/// Which family of test curves decides the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    /// `ν_H(h_E) ≤ ν_H(h_F)` for every vertex `H` of the tree.
    AllCurves,
    /// `ν_E(h_H) ≤ ν_F(h_H)` for every vertex `H` of the tree.
    AllValuations,
    /// `ν_E(h_H) ≤ ν_F(h_H)` for `H` in the minimal model of `E`.
    MinimalModelValuations,
    /// `ν_H(h_E) ≤ ν_H(h_F)` for `H` in the minimal model of `E`.
    MinimalModelCurves,
}

impl Criterion {
    pub const ALL: [Criterion; 4] = [
        Criterion::AllCurves,
        Criterion::AllValuations,
        Criterion::MinimalModelValuations,
        Criterion::MinimalModelCurves,
    ];
}

/// One inequality `lhs ≤ rhs`; `vertex` is `None` for the generic line probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValCheck {
    pub vertex: Option<usize>,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl ValCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValVerdict {
    pub holds: bool,
    pub checks: Vec<ValCheck>,
    /// Index in `checks` of the first failed inequality.
    pub first_failure: Option<usize>,
}

impl ValVerdict {
    fn from_checks(checks: Vec<ValCheck>) -> Self {
        let first_failure = checks.iter().position(|c| !c.holds());
        ValVerdict {
            holds: first_failure.is_none(),
            checks,
            first_failure,
        }
    }

    pub fn failed_vertex(&self) -> Option<Option<usize>> {
        self.first_failure.map(|i| self.checks[i].vertex)
    }
}

fn check_pair(cfg: &PairConfig) -> Result<(), ValError> {
    if cfg.left.is_empty() || cfg.right.is_empty() {
        return Err(ValError::EmptyDivisor);
    }
    for v in cfg.left.support().chain(cfg.right.support()) {
        cfg.tree.check_vertex(v)?;
    }
    Ok(())
}

/// Decides `ν_E ≤ ν_F` (`E` = `cfg.left`, `F` = `cfg.right`) with test
/// curves in the minimal model of `E`.
pub fn val_leq(cfg: &PairConfig) -> Result<ValVerdict, ValError> {
    val_leq_by(cfg, Criterion::MinimalModelCurves)
}

/// Decides `ν_E ≤ ν_F` with the chosen family of test curves.
pub fn val_leq_by(cfg: &PairConfig, criterion: Criterion) -> Result<ValVerdict, ValError> {
    check_pair(cfg)?;
    let t = &cfg.tree;
    let range: Vec<usize> = match criterion {
        Criterion::AllCurves | Criterion::AllValuations => (0..t.len()).collect(),
        _ => t.support_closure(cfg.left.support()),
    };
    let checks = match criterion {
        Criterion::AllCurves | Criterion::MinimalModelCurves => {
            let de = t.valuation_vector(&t.associated_multiplicities(&cfg.left))?;
            let df = t.valuation_vector(&t.associated_multiplicities(&cfg.right))?;
            range
                .into_iter()
                .map(|h| ValCheck {
                    vertex: Some(h),
                    lhs: de[h].clone(),
                    rhs: df[h].clone(),
                })
                .collect()
        }
        Criterion::AllValuations | Criterion::MinimalModelValuations => {
            let theta = t.noether_matrix();
            let pair =
                |d: &Divisor, h: usize| -> BigInt { d.iter().map(|(v, a)| &theta[v][h] * BigInt::from(a)).sum() };
            range
                .into_iter()
                .map(|h| ValCheck {
                    vertex: Some(h),
                    lhs: pair(&cfg.left, h),
                    rhs: pair(&cfg.right, h),
                })
                .collect()
        }
    };
    Ok(ValVerdict::from_checks(checks))
}

/// Boolean form of [`val_leq`] that stops at the first failure.
pub fn val_holds(cfg: &PairConfig) -> Result<bool, ValError> {
    check_pair(cfg)?;
    let t = &cfg.tree;
    let de = t.valuation_vector(&t.associated_multiplicities(&cfg.left))?;
    let df = t.valuation_vector(&t.associated_multiplicities(&cfg.right))?;
    Ok(t.support_closure(cfg.left.support())
        .into_iter()
        .all(|h| de[h] <= df[h]))
}

/// Prime fast path: end components of the minimal model of `E`, then `E`
/// itself, then a generic transversal line (omitted when `E` is the root).
pub fn val_leq_prime(cfg: &PairConfig) -> Result<ValVerdict, ValError> {
    check_pair(cfg)?;
    let e = cfg.left.prime_vertex().map_err(|_| ValError::NotPrime)?;
    let f = cfg.right.prime_vertex().map_err(|_| ValError::NotPrime)?;
    let t = &cfg.tree;
    let chain = t.chain(e);
    let (model, map) = t.subtree(&chain);
    let ends = model.end_components(map[e].expect("chain contains e"))?;
    let back: Vec<usize> = ends.iter().map(|&w| chain[w]).collect();
    let ce = t.curvetta_multiplicities(e);
    let cf = t.curvetta_multiplicities(f);
    let mut checks: Vec<ValCheck> = back
        .into_iter()
        .map(|h| {
            let ch = t.curvetta_multiplicities(h);
            let dot = |c: &[BigInt]| -> BigInt { c.iter().zip(&ch).map(|(a, b)| a * b).sum() };
            ValCheck {
                vertex: Some(h),
                lhs: dot(&ce),
                rhs: dot(&cf),
            }
        })
        .collect();
    if e != 0 {
        checks.push(ValCheck {
            vertex: None,
            lhs: ce[0].clone(),
            rhs: cf[0].clone(),
        });
    }
    Ok(ValVerdict::from_checks(checks))
}

/// Every way of placing two marked trees in a common model, up to
/// isomorphism.  Satellite points over identified parents coincide; free
/// points may or may not be identified.  `left` comes from `a`.
pub fn merges(a: &ProximityTree, da: &Divisor, b: &ProximityTree, db: &Divisor) -> Vec<PairConfig> {
    fn rec(
        a: &ProximityTree,
        da: &Divisor,
        db: &Divisor,
        nb: usize,
        i: usize,
        merged: &ProximityTree,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut BTreeMap<CanonicalKey, PairConfig>,
    ) {
        if i == a.len() {
            let left = Divisor::from_pairs(da.iter().map(|(v, c)| (map[v], c)));
            let cfg = PairConfig {
                tree: merged.clone(),
                left,
                right: db.clone(),
            };
            out.entry(cfg.canonical_form()).or_insert(cfg);
            return;
        }
        let p = map[a.parent(i).expect("non-root")];
        let kind = a.kind(i);
        if kind == PointKind::Free {
            for c in merged.children(p) {
                if c < nb && merged.kind(c) == PointKind::Free && !used[c] {
                    used[c] = true;
                    map.push(c);
                    rec(a, da, db, nb, i + 1, merged, map, used, out);
                    map.pop();
                    used[c] = false;
                }
            }
        } else if let Some(c) = merged.satellite_child(p, kind) {
            map.push(c);
            rec(a, da, db, nb, i + 1, merged, map, used, out);
            map.pop();
            return;
        }
        let mut next = merged.clone();
        let v = next
            .push_kind(p, kind)
            .expect("kind is legal over an identified parent");
        map.push(v);
        used.push(true);
        rec(a, da, db, nb, i + 1, &next, map, used, out);
        used.pop();
        map.pop();
    }
    let mut out = BTreeMap::new();
    let mut map = vec![0usize];
    let mut used = vec![false; b.len()];
    used[0] = true;
    rec(a, da, db, b.len(), 1, b, &mut map, &mut used, &mut out);
    out.into_values().collect()
}

/// Equisingularity class of the generic curve of a divisor: the minimal
/// normal-crossing cluster with branch counts at the last cluster point of
/// every branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalType {
    tree: ProximityTree,
    marks: Divisor,
}

impl TopologicalType {
    /// Type of the curve `Σ a_v · (curvetta of E_v)`.
    pub fn of_divisor(tree: &ProximityTree, d: &Divisor) -> Result<Self, ValError> {
        if d.is_empty() {
            return Err(ValError::EmptyDivisor);
        }
        for v in d.support() {
            tree.check_vertex(v)?;
        }
        let m = tree.associated_multiplicities(d);
        let closure = tree.support_closure(d.support());
        let one = BigInt::from(1);
        let non_nc = closure.iter().copied().filter(|&p| {
            if m[p] > one {
                return true;
            }
            if tree.is_satellite(p) {
                return true;
            }
            tree.children(p)
                .into_iter()
                .any(|c| !m[c].is_zero() && tree.is_satellite(c))
        });
        let keep = tree.support_closure(std::iter::once(0).chain(non_nc));
        let (cluster, map) = tree.subtree(&keep);
        let mut marks = Divisor::new();
        for (v, a) in d.iter() {
            let last = tree
                .chain(v)
                .into_iter()
                .rev()
                .find(|&p| map[p].is_some())
                .expect("root is kept");
            marks.add(map[last].unwrap(), a);
        }
        Ok(TopologicalType { tree: cluster, marks })
    }

    /// Builds a type from cluster data, normalising it through
    /// [`Self::of_divisor`].
    pub fn new(tree: ProximityTree, marks: Divisor) -> Result<Self, ValError> {
        Self::of_divisor(&tree, &marks)
    }

    pub fn tree(&self) -> &ProximityTree {
        &self.tree
    }

    pub fn marks(&self) -> &Divisor {
        &self.marks
    }

    pub fn branch_count(&self) -> u64 {
        self.marks.degree()
    }

    pub fn is_branch(&self) -> bool {
        self.branch_count() == 1
    }

    /// Length of the longest chain of infinitely near points.
    pub fn complexity(&self) -> usize {
        self.tree.height()
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        self.tree.canonical_form(&[&self.marks])
    }

    /// `δ = Σ m(m−1)/2` over the points of the cluster.
    pub fn delta(&self) -> u64 {
        self.tree
            .associated_multiplicities(&self.marks)
            .iter()
            .map(|m| {
                let m = m.to_u64().expect("small multiplicity");
                m * (m - 1) / 2
            })
            .sum()
    }

    pub fn milnor(&self) -> i64 {
        2 * self.delta() as i64 - self.branch_count() as i64 + 1
    }

    /// Divisors of the type with complexity at most `max_complexity`:
    /// every branch continues through `ℓ ≥ 0` fresh free points.
    pub fn members(&self, max_complexity: usize) -> Vec<(ProximityTree, Divisor)> {
        let mut branches: Vec<usize> = Vec::new();
        for (v, a) in self.marks.iter() {
            for _ in 0..a {
                branches.push(v);
            }
        }
        let caps: Vec<Option<usize>> = branches
            .iter()
            .map(|&q| max_complexity.checked_sub(self.tree.depth(q)))
            .collect();
        if caps.iter().any(|c| c.is_none()) {
            return Vec::new();
        }
        let caps: Vec<usize> = caps.into_iter().map(|c| c.unwrap()).collect();
        let mut out: BTreeMap<CanonicalKey, (ProximityTree, Divisor)> = BTreeMap::new();
        let mut ell = vec![0usize; branches.len()];
        loop {
            let sorted_within_groups =
                (1..branches.len()).all(|i| branches[i] != branches[i - 1] || ell[i] >= ell[i - 1]);
            if sorted_within_groups {
                let mut t = self.tree.clone();
                let mut d = Divisor::new();
                for (b, &q) in branches.iter().enumerate() {
                    let mut cur = q;
                    for _ in 0..ell[b] {
                        cur = t.push_free(cur);
                    }
                    d.add(cur, 1);
                }
                out.entry(t.canonical_form(&[&d])).or_insert((t, d));
            }
            let mut i = 0;
            loop {
                if i == ell.len() {
                    return out.into_values().collect();
                }
                if ell[i] < caps[i] {
                    ell[i] += 1;
                    break;
                }
                ell[i] = 0;
                i += 1;
            }
        }
    }

    /// The member with no extra free points.
    pub fn minimal_member(&self) -> (ProximityTree, Divisor) {
        (self.tree.clone(), self.marks.clone())
    }
}

/// Verdict of the adjacency-fixing-free-points search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfpVerdict {
    pub adjacent: bool,
    /// Lexicographically least canonical pair `(E′, F′)` with `ν_{E′} ≤ ν_{F′}`.
    pub witness: Option<PairConfig>,
    pub search_bound: usize,
    pub candidates: usize,
}

/// Decides whether the type of `F` deforms to the type of `E` fixing free
/// points, by searching pairs of members of complexity at most
/// `M = max(complexity)` on common models.
pub fn decide_ffp_adjacency(top_e: &TopologicalType, top_f: &TopologicalType) -> FfpVerdict {
    decide_ffp_adjacency_within(top_e, top_f, top_e.complexity().max(top_f.complexity()))
}

/// [`decide_ffp_adjacency`] with an explicit complexity bound.
pub fn decide_ffp_adjacency_within(top_e: &TopologicalType, top_f: &TopologicalType, bound: usize) -> FfpVerdict {
    let es = top_e.members(bound);
    let fs = if top_f.is_branch() {
        vec![top_f.minimal_member()]
    } else {
        top_f.members(bound)
    };
    let mut best: Option<(CanonicalKey, PairConfig)> = None;
    let mut candidates = 0usize;
    for (te, de) in &es {
        for (tf, df) in &fs {
            for cfg in merges(te, de, tf, df) {
                candidates += 1;
                if !val_holds(&cfg).expect("merged configuration is well formed") {
                    continue;
                }
                let key = cfg.canonical_form();
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, cfg));
                }
            }
        }
    }
    FfpVerdict {
        adjacent: best.is_some(),
        witness: best.map(|(_, c)| c),
        search_bound: bound,
        candidates,
    }
}

/// Optional safety caps for [`enumerate_dominated`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumLimits {
    pub max_vertices: Option<usize>,
}

/// A dominated prime divisor `E` placed against `F` with maximal contact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatedEntry {
    pub config: PairConfig,
    pub key: CanonicalKey,
    /// Kinds of the points of the chain of `E`.
    pub kinds: Vec<PointKind>,
    /// Vertices of the tree of `F` shared with the chain of `E`.
    pub path: Vec<usize>,
    /// Smallest contact at which `ν_E ≤ ν_F` already holds.
    pub min_contact: usize,
}

impl DominatedEntry {
    pub fn contact(&self) -> usize {
        self.path.len()
    }

    /// Contacts at which the chain can be placed and domination holds.
    pub fn contacts(&self) -> Vec<usize> {
        (self.min_contact..=self.contact())
            .filter(|&c| c == self.contact() || self.kinds[c] == PointKind::Free)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub entries: Vec<DominatedEntry>,
    /// `N_F = Σ_p m_p(h_F)²`, bounding both the length and `Σ m²` of `E`.
    pub bound: u64,
    pub partial: bool,
}

/// `Σ_p m_p²` for the multiplicities of the generic curve of `d`.
pub fn self_intersection_bound(tree: &ProximityTree, d: &Divisor) -> BigInt {
    tree.associated_multiplicities(d).iter().map(|m| m * m).sum()
}

/// Places a chain of kinds against `F`, sharing the points `path` of the
/// tree of `F` and continuing with new points.
pub fn place_chain(
    ftree: &ProximityTree,
    f: &Divisor,
    kinds: &[PointKind],
    path: &[usize],
) -> Result<PairConfig, ValError> {
    if path.is_empty() || path[0] != 0 || path.len() > kinds.len() {
        return Err(ProximityError::Malformed("path must start at the root".into()).into());
    }
    for (i, w) in path.iter().enumerate().skip(1) {
        if ftree.parent(*w) != Some(path[i - 1]) || ftree.kind(*w) != kinds[i] {
            return Err(ProximityError::Malformed("path does not follow the chain".into()).into());
        }
    }
    let mut tree = ftree.clone();
    let mut cur = *path.last().unwrap();
    if let Some(&k) = kinds.get(path.len()) {
        if k != PointKind::Free && tree.satellite_child(cur, k).is_some() {
            return Err(ProximityError::Malformed("satellite point already present".into()).into());
        }
    }
    for &k in &kinds[path.len()..] {
        cur = tree.push_kind(cur, k)?;
    }
    PairConfig::new(tree, Divisor::prime(cur), f.clone()).map_err(Into::into)
}

/// All combinatorial types of prime divisors `E` with `ν_E ≤ ν_F`, each at
/// maximal contact with the tree of `F`.
///
/// The search is a depth-first walk over chains, pruned when `Σ m(h_E)²`
/// exceeds `N_F` (from `ν_E(h_E) ≤ ν_F(h_E)` and Cauchy–Schwarz) or when an
/// inequality fails, since deeper points only increase `ν_E`.
pub fn enumerate_dominated(tree: &ProximityTree, f: &Divisor, limits: EnumLimits) -> Result<Enumeration, ValError> {
    if f.is_empty() {
        return Err(ValError::EmptyDivisor);
    }
    for v in f.support() {
        tree.check_vertex(v)?;
    }
    let base = PairConfig::new(tree.clone(), f.clone(), f.clone())?.pruned();
    let ftree = base.tree;
    let f = base.right;
    let bound = self_intersection_bound(&ftree, &f).to_u64().expect("bound fits in u64");
    let mut state = Search {
        ftree: &ftree,
        f: &f,
        bound,
        limits,
        partial: false,
        found: BTreeMap::new(),
    };
    state.dfs(&mut vec![PointKind::Root], &mut vec![0], true)?;
    Ok(Enumeration {
        entries: state.found.into_values().collect(),
        bound,
        partial: state.partial,
    })
}

struct Search<'a> {
    ftree: &'a ProximityTree,
    f: &'a Divisor,
    bound: u64,
    limits: EnumLimits,
    partial: bool,
    found: BTreeMap<CanonicalKey, DominatedEntry>,
}

impl Search<'_> {
    fn dfs(&mut self, kinds: &mut Vec<PointKind>, path: &mut Vec<usize>, on_f: bool) -> Result<(), ValError> {
        let chain = chain_tree(kinds);
        let sumsq = self_intersection_bound(&chain, &Divisor::prime(kinds.len() - 1));
        if sumsq > BigInt::from(self.bound) {
            return Ok(());
        }
        let cfg = place_chain(self.ftree, self.f, kinds, path)?;
        if !val_holds(&cfg)? {
            return Ok(());
        }
        let key = cfg.canonical_form();
        if !self.found.contains_key(&key) {
            let mut min_contact = path.len();
            for c in 1..path.len() {
                if kinds[c] == PointKind::Free && val_holds(&place_chain(self.ftree, self.f, kinds, &path[..c])?)? {
                    min_contact = c;
                    break;
                }
            }
            self.found.insert(
                key.clone(),
                DominatedEntry {
                    config: cfg.pruned(),
                    key,
                    kinds: kinds.clone(),
                    path: path.clone(),
                    min_contact,
                },
            );
        }
        if self.limits.max_vertices.is_some_and(|m| kinds.len() >= m) {
            self.partial = true;
            return Ok(());
        }
        let last = kinds.len() - 1;
        let mut next = vec![PointKind::Free];
        if chain.parent(last).is_some() {
            next.push(PointKind::SatelliteGrand);
        }
        if chain.extra(last).is_some() {
            next.push(PointKind::SatelliteExtra);
        }
        for k in next {
            kinds.push(k);
            let mut follow: Vec<usize> = Vec::new();
            if on_f && path.len() == kinds.len() - 1 {
                let u = *path.last().unwrap();
                follow = self
                    .ftree
                    .children(u)
                    .into_iter()
                    .filter(|&c| self.ftree.kind(c) == k)
                    .collect();
            }
            if follow.is_empty() {
                self.dfs(kinds, path, false)?;
            } else {
                for c in follow {
                    path.push(c);
                    self.dfs(kinds, path, true)?;
                    path.pop();
                }
            }
            kinds.pop();
        }
        Ok(())
    }
}

/// The chain tree realising a sequence of point kinds.
pub fn chain_tree(kinds: &[PointKind]) -> ProximityTree {
    let mut t = ProximityTree::root_only();
    for (i, &k) in kinds.iter().enumerate().skip(1) {
        t.push_kind(i - 1, k).expect("legal chain");
    }
    t
}

/// Complexity of a topological type.
pub fn complexity(top: &TopologicalType) -> usize {
    top.complexity()
}
