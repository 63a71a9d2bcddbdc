//! Proximity trees of infinitely near points.
//!
//! A [`ProximityTree`] lists the points blown up above the origin `O` in a
//! linear extension of the "infinitely near" order. Each point records the
//! point it was created on (its parent) and, when it is satellite, the second
//! exceptional component passing through it. Everything else (dual graph,
//! self-intersections, valuations, log-discrepancies) is derived.
//!
//! All integer matrices use arbitrary precision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense square matrix of arbitrary-precision integers.
pub type Matrix = Vec<Vec<BigInt>>;

/// One infinitely near point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub parent: Option<usize>,
    pub extra: Option<usize>,
    pub label: String,
}

/// First invariant violated by a candidate tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("empty tree")]
    Empty,
    #[error("vertex {0}: only the first vertex may be the root")]
    ExtraRoot(usize),
    #[error("vertex 0 must be the root")]
    RootHasParent,
    #[error("vertex {vertex}: parent {parent} is not an earlier vertex")]
    ParentOrder { vertex: usize, parent: usize },
    #[error("vertex 0: the root cannot be satellite")]
    SatelliteRoot,
    #[error("vertex {vertex}: illegal satellite target {target}")]
    IllegalSatelliteTarget { vertex: usize, target: usize },
    #[error("vertices {first} and {second}: duplicate satellite point")]
    DuplicateSatellite { first: usize, second: usize },
}

/// Errors raised by operations on trees and divisors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProximityError {
    #[error("invalid tree: {0}")]
    Invalid(#[from] Violation),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("divisor is not prime")]
    NotPrime,
    #[error("vertex {0} is not the deepest point of its minimal model")]
    NotDeepest(usize),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// Rooted tree of infinitely near points with the proximity relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityTree {
    vertices: Vec<Vertex>,
}

/// Nonnegative integer combination of tree vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Divisor {
    coeffs: BTreeMap<usize, u64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn prime(v: usize) -> Self {
        let mut d = Self::new();
        d.add(v, 1);
        d
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, u64)>>(pairs: I) -> Self {
        let mut d = Self::new();
        for (v, a) in pairs {
            d.add(v, a);
        }
        d
    }

    pub fn add(&mut self, v: usize, a: u64) {
        if a == 0 {
            return;
        }
        *self.coeffs.entry(v).or_insert(0) += a;
    }

    pub fn coeff(&self, v: usize) -> u64 {
        self.coeffs.get(&v).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().map(|(&v, &a)| (v, a))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total number of branches of an associated curve.
    pub fn degree(&self) -> u64 {
        self.coeffs.values().sum()
    }

    pub fn is_prime(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().all(|&a| a == 1)
    }

    /// The vertex of a prime divisor.
    pub fn prime_vertex(&self) -> Result<usize, ProximityError> {
        if self.is_prime() {
            Ok(*self.coeffs.keys().next().unwrap())
        } else {
            Err(ProximityError::NotPrime)
        }
    }

    /// Renames support vertices through `map`, dropping unmapped ones.
    pub fn remap(&self, map: &[Option<usize>]) -> Divisor {
        Divisor::from_pairs(
            self.iter()
                .filter_map(|(v, a)| map.get(v).copied().flatten().map(|w| (w, a))),
        )
    }
}

/// Two divisors on a common tree, the tree being (a model containing) the
/// minimal model of their sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairConfig {
    pub tree: ProximityTree,
    pub left: Divisor,
    pub right: Divisor,
}

impl PairConfig {
    pub fn new(tree: ProximityTree, left: Divisor, right: Divisor) -> Result<Self, ProximityError> {
        for v in left.support().chain(right.support()) {
            tree.check_vertex(v)?;
        }
        Ok(Self { tree, left, right })
    }

    /// Restricts the tree to the chains of the two supports.
    pub fn pruned(&self) -> PairConfig {
        let keep = self
            .tree
            .support_closure(self.left.support().chain(self.right.support()));
        let (tree, map) = self.tree.subtree(&keep);
        PairConfig {
            tree,
            left: self.left.remap(&map),
            right: self.right.remap(&map),
        }
    }

    /// True when every leaf lies on the chain of a support vertex.
    pub fn is_minimal(&self) -> bool {
        let keep = self
            .tree
            .support_closure(self.left.support().chain(self.right.support()));
        keep.len() == self.tree.len()
    }

    pub fn swapped(&self) -> PairConfig {
        PairConfig {
            tree: self.tree.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn canonical_form(&self) -> CanonicalKey {
        self.tree.canonical_form(&[&self.left, &self.right])
    }
}

/// Isomorphism-invariant key of a marked tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey(pub String);

impl std::fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// How a vertex sits relative to its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKind {
    Root,
    Free,
    /// Satellite on the component of the grandparent.
    SatelliteGrand,
    /// Satellite on the extra component of the parent.
    SatelliteExtra,
}

impl PointKind {
    fn tag(self) -> &'static str {
        match self {
            PointKind::Root => "R",
            PointKind::Free => "F",
            PointKind::SatelliteGrand => "S",
            PointKind::SatelliteExtra => "T",
        }
    }
}

impl ProximityTree {
    /// A tree with the origin only.
    pub fn root_only() -> Self {
        Self {
            vertices: vec![Vertex {
                parent: None,
                extra: None,
                label: "p0".into(),
            }],
        }
    }

    /// Builds and validates a tree.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, ProximityError> {
        let t = Self { vertices };
        t.validate()?;
        Ok(t)
    }

    /// Builds a tree without checking invariants; pair with [`Self::validate`].
    pub fn from_vertices_unchecked(vertices: Vec<Vertex>) -> Self {
        Self { vertices }
    }

    /// Builds a tree from `(parent, extra)` pairs, labelling vertices `p<i>`.
    pub fn from_links(links: &[(Option<usize>, Option<usize>)]) -> Result<Self, ProximityError> {
        Self::new(
            links
                .iter()
                .enumerate()
                .map(|(i, &(parent, extra))| Vertex {
                    parent,
                    extra,
                    label: format!("p{i}"),
                })
                .collect(),
        )
    }

    /// Confirms every invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        let vs = &self.vertices;
        if vs.is_empty() {
            return Err(Violation::Empty);
        }
        if vs[0].parent.is_some() {
            return Err(Violation::RootHasParent);
        }
        if vs[0].extra.is_some() {
            return Err(Violation::SatelliteRoot);
        }
        for (i, v) in vs.iter().enumerate().skip(1) {
            let p = match v.parent {
                None => return Err(Violation::ExtraRoot(i)),
                Some(p) => p,
            };
            if p >= i {
                return Err(Violation::ParentOrder { vertex: i, parent: p });
            }
            if let Some(r) = v.extra {
                let legal = vs[p].parent == Some(r) || vs[p].extra == Some(r);
                if !legal {
                    return Err(Violation::IllegalSatelliteTarget { vertex: i, target: r });
                }
            }
        }
        for i in 1..vs.len() {
            for j in (i + 1)..vs.len() {
                if vs[i].extra.is_some() && vs[i].parent == vs[j].parent && vs[i].extra == vs[j].extra {
                    return Err(Violation::DuplicateSatellite { first: i, second: j });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.vertices[v].parent
    }

    pub fn extra(&self, v: usize) -> Option<usize> {
        self.vertices[v].extra
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vertices[v].label
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.vertices[v].label = label.into();
    }

    pub fn is_satellite(&self, v: usize) -> bool {
        self.vertices[v].extra.is_some()
    }

    /// Free in the sense of the tree encoding (the root counts as free).
    pub fn is_free(&self, v: usize) -> bool {
        !self.is_satellite(v)
    }

    pub fn kind(&self, v: usize) -> PointKind {
        match (self.parent(v), self.extra(v)) {
            (None, _) => PointKind::Root,
            (Some(_), None) => PointKind::Free,
            (Some(p), Some(r)) => {
                if self.parent(p) == Some(r) {
                    PointKind::SatelliteGrand
                } else {
                    PointKind::SatelliteExtra
                }
            }
        }
    }

    /// Appends a free point on the last component created at `parent`.
    pub fn push_free(&mut self, parent: usize) -> usize {
        assert!(parent < self.len());
        let i = self.len();
        self.vertices.push(Vertex {
            parent: Some(parent),
            extra: None,
            label: format!("p{i}"),
        });
        i
    }

    /// Appends the satellite point `E_parent ∩ E_extra`.
    pub fn push_satellite(&mut self, parent: usize, extra: usize) -> Result<usize, ProximityError> {
        self.check_vertex(parent)?;
        let i = self.len();
        self.vertices.push(Vertex {
            parent: Some(parent),
            extra: Some(extra),
            label: format!("p{i}"),
        });
        if let Err(e) = self.validate() {
            self.vertices.pop();
            return Err(e.into());
        }
        Ok(i)
    }

    /// Appends a child of `parent` of the given kind.
    pub fn push_kind(&mut self, parent: usize, kind: PointKind) -> Result<usize, ProximityError> {
        match kind {
            PointKind::Root => Err(ProximityError::Malformed("second root".into())),
            PointKind::Free => Ok(self.push_free(parent)),
            PointKind::SatelliteGrand => {
                let r = self
                    .parent(parent)
                    .ok_or_else(|| ProximityError::Malformed("no grandparent".into()))?;
                self.push_satellite(parent, r)
            }
            PointKind::SatelliteExtra => {
                let r = self
                    .extra(parent)
                    .ok_or_else(|| ProximityError::Malformed("parent is free".into()))?;
                self.push_satellite(parent, r)
            }
        }
    }

    /// The satellite child of `parent` with the given kind, if present.
    pub fn satellite_child(&self, parent: usize, kind: PointKind) -> Option<usize> {
        self.children(parent).into_iter().find(|&c| self.kind(c) == kind)
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), ProximityError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(ProximityError::VertexOutOfRange(v))
        }
    }

    /// Points to which `v` is proximate.
    pub fn proximate_targets(&self, v: usize) -> impl Iterator<Item = usize> {
        let vx = &self.vertices[v];
        vx.parent.into_iter().chain(vx.extra)
    }

    /// True when `k` is proximate to `j`.
    pub fn is_proximate(&self, k: usize, j: usize) -> bool {
        self.vertices[k].parent == Some(j) || self.vertices[k].extra == Some(j)
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent(c) == Some(v)).collect()
    }

    /// Root-first list of the points blown up to create `E_v`.
    pub fn chain(&self, v: usize) -> Vec<usize> {
        let mut c = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            c.push(p);
            cur = p;
        }
        c.reverse();
        c
    }

    pub fn depth(&self, v: usize) -> usize {
        self.chain(v).len()
    }

    pub fn is_ancestor_or_equal(&self, a: usize, b: usize) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    /// Length of the common chain prefix of two vertices.
    pub fn shared_prefix(&self, a: usize, b: usize) -> usize {
        self.chain(a)
            .iter()
            .zip(self.chain(b).iter())
            .take_while(|(x, y)| x == y)
            .count()
    }

    /// Longest root-to-leaf chain.
    pub fn height(&self) -> usize {
        (0..self.len()).map(|v| self.depth(v)).max().unwrap_or(0)
    }

    /// Sorted union of the chains of the given vertices.
    pub fn support_closure<I: IntoIterator<Item = usize>>(&self, vs: I) -> Vec<usize> {
        let mut keep = vec![false; self.len()];
        for v in vs {
            for c in self.chain(v) {
                keep[c] = true;
            }
        }
        (0..self.len()).filter(|&i| keep[i]).collect()
    }

    /// Restriction to a root-closed vertex set, with the old-to-new map.
    pub fn subtree(&self, keep: &[usize]) -> (ProximityTree, Vec<Option<usize>>) {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut map = vec![None; self.len()];
        for (new, &old) in sorted.iter().enumerate() {
            map[old] = Some(new);
        }
        let vertices = sorted
            .iter()
            .map(|&old| {
                let v = &self.vertices[old];
                Vertex {
                    parent: v.parent.map(|p| map[p].expect("subset not root-closed")),
                    extra: v.extra.map(|r| map[r].expect("subset not root-closed")),
                    label: v.label.clone(),
                }
            })
            .collect();
        (ProximityTree { vertices }, map)
    }

    /// Multiplicities of a curvetta of `E_v` at every tree point.
    pub fn curvetta_multiplicities(&self, v: usize) -> Vec<BigInt> {
        let mut m = vec![BigInt::zero(); self.len()];
        m[v] = BigInt::one();
        for k in self.chain(v).into_iter().rev() {
            let mk = m[k].clone();
            for t in self.proximate_targets(k) {
                m[t] += &mk;
            }
        }
        m
    }

    /// Total-transform multiplicities `d_i = m_i + Σ_{i proximate to j} d_j`.
    pub fn valuation_vector(&self, m: &[BigInt]) -> Result<Vec<BigInt>, ProximityError> {
        if m.len() != self.len() {
            return Err(ProximityError::LengthMismatch {
                expected: self.len(),
                got: m.len(),
            });
        }
        let mut d: Vec<BigInt> = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let mut di = m[i].clone();
            for t in self.proximate_targets(i) {
                di += &d[t];
            }
            d.push(di);
        }
        Ok(d)
    }

    /// `ν_E(h)` for a curve with strict-transform multiplicities `m`.
    pub fn valuation(&self, e: &Divisor, m: &[BigInt]) -> Result<BigInt, ProximityError> {
        let d = self.valuation_vector(m)?;
        let mut total = BigInt::zero();
        for (v, a) in e.iter() {
            self.check_vertex(v)?;
            total += &d[v] * BigInt::from(a);
        }
        Ok(total)
    }

    /// Multiplicities of a generic curve associated with `d`.
    pub fn associated_multiplicities(&self, d: &Divisor) -> Vec<BigInt> {
        let mut m = vec![BigInt::zero(); self.len()];
        for (v, a) in d.iter() {
            let a = BigInt::from(a);
            for (acc, x) in m.iter_mut().zip(self.curvetta_multiplicities(v)) {
                *acc += &a * x;
            }
        }
        m
    }

    /// `Θ_ij = Σ_k m^i_k m^j_k`, which equals `ν_{E_i}(h_{E_j})`.
    pub fn noether_matrix(&self) -> Matrix {
        let curv: Vec<Vec<BigInt>> = (0..self.len()).map(|v| self.curvetta_multiplicities(v)).collect();
        let n = self.len();
        let mut theta = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let s: BigInt = curv[i].iter().zip(&curv[j]).map(|(a, b)| a * b).sum();
                theta[i][j] = s.clone();
                theta[j][i] = s;
            }
        }
        theta
    }

    /// Intersection matrix from the proximity rule, without verification.
    pub fn intersection_matrix_by_rule(&self) -> Matrix {
        let n = self.len();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            let count = (0..n).filter(|&k| self.is_proximate(k, i)).count();
            m[i][i] = BigInt::from(-1 - count as i64);
        }
        for j in 0..n {
            for i in self.proximate_targets(j).collect::<Vec<_>>() {
                let common = (0..n).any(|k| self.is_proximate(k, i) && self.is_proximate(k, j));
                if !common {
                    m[i][j] = BigInt::one();
                    m[j][i] = BigInt::one();
                }
            }
        }
        m
    }

    /// Intersection matrix of the exceptional components, checked against
    /// `M·Θ = −I`; falls back to `−Θ⁻¹` if the proximity rule disagrees.
    pub fn intersection_matrix(&self) -> Matrix {
        let m = self.intersection_matrix_by_rule();
        let theta = self.noether_matrix();
        if is_minus_identity(&mat_mul(&m, &theta)) {
            return m;
        }
        negated_inverse(&theta).expect("Noether matrix is unimodular")
    }

    /// Log-discrepancies `λ_i = k_i + 1` with `k_i = 1 + Σ_{i prox j} k_j`.
    pub fn log_discrepancies(&self) -> Vec<BigInt> {
        let mut k: Vec<BigInt> = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let mut ki = BigInt::one();
            for t in self.proximate_targets(i) {
                ki += &k[t];
            }
            k.push(ki);
        }
        k.into_iter().map(|x| x + 1).collect()
    }

    /// Components meeting exactly one other component in the minimal model
    /// of the prime divisor at `v`, followed by `v` itself.
    pub fn end_components(&self, v: usize) -> Result<Vec<usize>, ProximityError> {
        self.check_vertex(v)?;
        if self.chain(v).len() != self.len() {
            return Err(ProximityError::NotDeepest(v));
        }
        let m = self.intersection_matrix();
        let mut ends: Vec<usize> = (0..self.len())
            .filter(|&i| i != v)
            .filter(|&i| (0..self.len()).filter(|&j| j != i && !m[i][j].is_zero()).count() == 1)
            .collect();
        ends.push(v);
        Ok(ends)
    }

    /// Dual-graph degree of every component.
    pub fn dual_degrees(&self) -> Vec<usize> {
        let m = self.intersection_matrix();
        (0..self.len())
            .map(|i| (0..self.len()).filter(|&j| j != i && !m[i][j].is_zero()).count())
            .collect()
    }

    /// Isomorphism-invariant key of the tree with the given marks.
    pub fn canonical_form(&self, marks: &[&Divisor]) -> CanonicalKey {
        let children: Vec<Vec<usize>> = {
            let mut ch = vec![Vec::new(); self.len()];
            for v in 1..self.len() {
                if let Some(p) = self.parent(v) {
                    ch[p].push(v);
                }
            }
            ch
        };
        fn key(t: &ProximityTree, ch: &[Vec<usize>], marks: &[&Divisor], v: usize) -> String {
            let mut s = String::from(t.kind(v).tag());
            if marks.iter().any(|d| d.coeff(v) > 0) {
                s.push('[');
                for (i, d) in marks.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{}", d.coeff(v));
                }
                s.push(']');
            }
            let mut subs: Vec<String> = ch[v].iter().map(|&c| key(t, ch, marks, c)).collect();
            subs.sort();
            if !subs.is_empty() {
                s.push('(');
                s.push_str(&subs.join(""));
                s.push(')');
            }
            s
        }
        if self.is_empty() {
            return CanonicalKey(String::new());
        }
        CanonicalKey(key(self, &children, marks, 0))
    }

    /// Equality of marked trees up to isomorphism.
    pub fn combinatorial_equal(a: &ProximityTree, amarks: &[&Divisor], b: &ProximityTree, bmarks: &[&Divisor]) -> bool {
        a.canonical_form(amarks) == b.canonical_form(bmarks)
    }

    /// Relabels vertices by `perm` (new index of old vertex `i` is `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<(ProximityTree, Vec<Option<usize>>), ProximityError> {
        if perm.len() != self.len() {
            return Err(ProximityError::LengthMismatch {
                expected: self.len(),
                got: perm.len(),
            });
        }
        let mut vertices = vec![
            Vertex {
                parent: None,
                extra: None,
                label: String::new()
            };
            self.len()
        ];
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[perm[old]] = Vertex {
                parent: v.parent.map(|p| perm[p]),
                extra: v.extra.map(|r| perm[r]),
                label: v.label.clone(),
            };
        }
        let t = ProximityTree::new(vertices)?;
        Ok((t, perm.iter().map(|&p| Some(p)).collect()))
    }

    /// DOT rendering of the dual graph.
    pub fn to_dot(&self, divisor: Option<&Divisor>) -> String {
        let m = self.intersection_matrix();
        let mut out = String::from("graph dual {\n  node [shape=circle];\n");
        for i in 0..self.len() {
            let mut label = format!("E{} ({})", i, m[i][i]);
            if let Some(d) = divisor {
                if d.coeff(i) > 0 {
                    let _ = write!(label, "\\n{}", d.coeff(i));
                }
            }
            let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
        }
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if !m[i][j].is_zero() {
                    let _ = writeln!(out, "  v{i} -- v{j};");
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| VertexJson {
                    id: i as i64,
                    parent: v.parent.map(|p| p as i64),
                    extra: v.extra.map(|r| r as i64),
                    label: v.label.clone(),
                })
                .collect(),
        }
    }
}

/// Number of shared chain points of two prime divisors.
pub fn contact_order(cfg: &PairConfig) -> Result<usize, ProximityError> {
    let a = cfg.left.prime_vertex()?;
    let b = cfg.right.prime_vertex()?;
    Ok(cfg.tree.shared_prefix(a, b))
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut c = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                c[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    c
}

pub fn is_minus_identity(m: &Matrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { *x == BigInt::from(-1) } else { x.is_zero() })
    })
}

/// `−A⁻¹` for an integer matrix with integral inverse.
pub fn negated_inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = a[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &aug[col][c];
                    aug[r][c] -= sub;
                }
            }
        }
    }
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = &aug[i][n + j];
            if !x.is_integer() {
                return None;
            }
            out[i][j] = -x.to_integer();
        }
    }
    Some(out)
}

/// Wire format of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<VertexJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: i64,
    pub parent: Option<i64>,
    pub extra: Option<i64>,
    #[serde(default)]
    pub label: String,
}

/// Wire format of a divisor, keyed by vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub coeffs: BTreeMap<String, u64>,
}

impl TreeJson {
    /// Converts to a tree, returning also the id-to-position map.
    pub fn to_tree(&self) -> Result<(ProximityTree, BTreeMap<i64, usize>), ProximityError> {
        let mut pos = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if pos.insert(v.id, i).is_some() {
                return Err(ProximityError::Malformed(format!("duplicate id {}", v.id)));
            }
        }
        let look = |id: i64| {
            pos.get(&id)
                .copied()
                .ok_or_else(|| ProximityError::Malformed(format!("unknown id {id}")))
        };
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            vertices.push(Vertex {
                parent: v.parent.map(look).transpose()?,
                extra: v.extra.map(look).transpose()?,
                label: if v.label.is_empty() {
                    format!("p{}", v.id)
                } else {
                    v.label.clone()
                },
            });
        }
        Ok((ProximityTree::new(vertices)?, pos))
    }
}

impl DivisorJson {
    pub fn from_divisor(d: &Divisor) -> Self {
        DivisorJson {
            coeffs: d.iter().map(|(v, a)| (v.to_string(), a)).collect(),
        }
    }

    pub fn to_divisor(&self, ids: &BTreeMap<i64, usize>) -> Result<Divisor, ProximityError> {
        let mut d = Divisor::new();
        for (k, &a) in &self.coeffs {
            let id: i64 = k
                .parse()
                .map_err(|_| ProximityError::Malformed(format!("bad vertex id {k:?}")))?;
            let v = ids
                .get(&id)
                .copied()
                .ok_or_else(|| ProximityError::Malformed(format!("unknown id {id}")))?;
            d.add(v, a);
        }
        Ok(d)
    }
}

/// Wire format of a pair `(E, F)` on a common tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub tree: TreeJson,
    pub left: DivisorJson,
    pub right: DivisorJson,
}

impl PairJson {
    pub fn from_config(cfg: &PairConfig) -> Self {
        PairJson {
            tree: cfg.tree.to_json(),
            left: DivisorJson::from_divisor(&cfg.left),
            right: DivisorJson::from_divisor(&cfg.right),
        }
    }

    pub fn to_config(&self) -> Result<PairConfig, ProximityError> {
        let (tree, ids) = self.tree.to_tree()?;
        let left = self.left.to_divisor(&ids)?;
        let right = self.right.to_divisor(&ids)?;
        PairConfig::new(tree, left, right)
    }
}

/// Random valid tree with `n` vertices.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> ProximityTree {
    let mut t = ProximityTree::root_only();
    while t.len() < n {
        let p = rng.gen_range(0..t.len());
        let options: Vec<PointKind> = [PointKind::SatelliteGrand, PointKind::SatelliteExtra]
            .into_iter()
            .filter(|&k| match k {
                PointKind::SatelliteGrand => t.parent(p).is_some(),
                _ => t.extra(p).is_some(),
            })
            .filter(|&k| t.satellite_child(p, k).is_none())
            .collect();
        if options.is_empty() || rng.gen_bool(0.4) {
            t.push_free(p);
        } else {
            let k = options[rng.gen_range(0..options.len())];
            t.push_kind(p, k).expect("legal satellite");
        }
    }
    t
}

/// Random chain (tree of a prime divisor at its deepest point) of length `n`.
pub fn random_chain<R: Rng>(rng: &mut R, n: usize) -> ProximityTree {
    let mut t = ProximityTree::root_only();
    while t.len() < n {
        let p = t.len() - 1;
        let mut options = vec![PointKind::Free];
        if t.parent(p).is_some() {
            options.push(PointKind::SatelliteGrand);
        }
        if t.extra(p).is_some() {
            options.push(PointKind::SatelliteExtra);
        }
        let k = options[rng.gen_range(0..options.len())];
        t.push_kind(p, k).expect("legal point");
    }
    t
}
