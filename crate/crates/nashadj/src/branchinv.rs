//! Branch invariants: characteristic and multiplicity sequences, semigroup
//! generators, approximate-root profiles and the δ / Milnor numbers.

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::proximity::{Divisor, PointKind, ProximityError, ProximityTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("invalid characteristic sequence {0:?}: {1}")]
    InvalidChar(Vec<u64>, &'static str),
    #[error("multiplicity sequence {0:?} is not realizable by a branch")]
    NotRealizable(Vec<u64>),
    #[error("inconsistent pairwise data: {0}")]
    InconsistentPairwise(String),
    #[error("incompatible prefixes: {0}")]
    IncompatiblePrefixes(String),
    #[error(transparent)]
    Proximity(#[from] ProximityError),
}

/// Characteristic sequence `(β₀, …, β_g)`; `(1)` is a smooth branch.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharSequence(Vec<u64>);

impl CharSequence {
    pub fn new(beta: Vec<u64>) -> Result<Self, BranchError> {
        if beta.is_empty() {
            return Err(BranchError::InvalidChar(beta, "empty"));
        }
        if beta[0] == 0 {
            return Err(BranchError::InvalidChar(beta, "β₀ must be positive"));
        }
        if beta.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BranchError::InvalidChar(beta, "not strictly increasing"));
        }
        let mut e = beta[0];
        for &b in &beta[1..] {
            let next = e.gcd(&b);
            if next == e {
                return Err(BranchError::InvalidChar(beta, "gcd does not drop strictly"));
            }
            e = next;
        }
        if e != 1 {
            return Err(BranchError::InvalidChar(beta, "final gcd is not 1"));
        }
        Ok(Self(beta))
    }

    pub fn smooth() -> Self {
        Self(vec![1])
    }

    pub fn beta(&self) -> &[u64] {
        &self.0
    }

    /// Number of characteristic exponents `g`.
    pub fn genus(&self) -> usize {
        self.0.len() - 1
    }

    pub fn multiplicity(&self) -> u64 {
        self.0[0]
    }
}

/// Multiplicities of a branch at the successive blown-up points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiplicitySequence(pub Vec<u64>);

impl MultiplicitySequence {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ m(m−1)/2`.
    pub fn delta(&self) -> u64 {
        self.0.iter().map(|&m| m * m.saturating_sub(1) / 2).sum()
    }
}

/// Value of an approximate-root contact; `β̄_{g+1}` is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContactValue {
    Finite(u64),
    Infinite,
}

impl std::fmt::Display for ContactValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ContactValue::Finite(v) => write!(f, "{v}"),
            ContactValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupData {
    pub e: Vec<u64>,
    pub n: Vec<u64>,
    pub beta_bar: Vec<u64>,
}

/// One approximate root `f_k`: `degree` is `None` for `f_{−1} = x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxRootEntry {
    pub k: i64,
    pub degree: Option<u64>,
    pub contact: ContactValue,
}

fn euclid_run(mut x: u64, mut y: u64, out: &mut Vec<u64>) -> u64 {
    loop {
        let q = x / y;
        let r = x % y;
        out.extend(std::iter::repeat_n(y, q as usize));
        if r == 0 {
            return y;
        }
        x = y;
        y = r;
    }
}

/// Multiplicity sequence of the minimal embedded resolution.
pub fn char_to_multseq(c: &CharSequence) -> MultiplicitySequence {
    let beta = c.beta();
    if beta.len() == 1 {
        return MultiplicitySequence(vec![1]);
    }
    let mut m = Vec::new();
    let mut e = euclid_run(beta[1], beta[0], &mut m);
    for i in 2..beta.len() {
        e = euclid_run(beta[i] - beta[i - 1], e, &mut m);
    }
    debug_assert_eq!(e, 1);
    MultiplicitySequence(m)
}

/// Proximity chain realizing a multiplicity sequence.
pub fn tree_from_multseq(m: &MultiplicitySequence) -> Result<ProximityTree, BranchError> {
    let seq = m.as_slice();
    let bad = || BranchError::NotRealizable(seq.to_vec());
    if seq.is_empty() || seq.contains(&0) || *seq.last().unwrap() != 1 {
        return Err(bad());
    }
    let len = seq.len();
    let mut extra: Vec<Option<usize>> = vec![None; len];
    for j in 0..len - 1 {
        let mut sum = 0;
        let mut k = j + 1;
        while sum < seq[j] && k < len {
            sum += seq[k];
            if k >= j + 2 {
                if extra[k].is_some() {
                    return Err(bad());
                }
                extra[k] = Some(j);
            }
            k += 1;
        }
        if sum != seq[j] {
            return Err(bad());
        }
    }
    let links: Vec<(Option<usize>, Option<usize>)> = (0..len)
        .map(|i| (if i == 0 { None } else { Some(i - 1) }, extra[i]))
        .collect();
    let tree = ProximityTree::from_links(&links).map_err(|_| bad())?;
    let check = tree.curvetta_multiplicities(len - 1);
    if check.iter().zip(seq).any(|(a, &b)| a.to_u64() != Some(b)) {
        return Err(bad());
    }
    Ok(tree)
}

/// Inverse of [`char_to_multseq`]; trailing free points are ignored.
pub fn multseq_to_char(m: &MultiplicitySequence) -> Result<CharSequence, BranchError> {
    tree_from_multseq(m)?;
    let seq = m.as_slice();
    let bad = || BranchError::NotRealizable(seq.to_vec());
    let mut beta = vec![seq[0]];
    let mut e = seq[0];
    let mut pos = 0usize;
    while e > 1 {
        let c0 = seq[pos..].iter().take_while(|&&x| x == e).count() as u64;
        pos += c0 as usize;
        if pos >= seq.len() {
            return Err(bad());
        }
        let v1 = seq[pos];
        if v1 >= e {
            return Err(bad());
        }
        let (mut prev, mut cur) = (e, v1);
        let new_e = loop {
            let c = seq[pos..].iter().take_while(|&&x| x == cur).count() as u64;
            if prev % cur == 0 {
                let forced = prev / cur;
                if c < forced {
                    return Err(bad());
                }
                pos += forced as usize;
                break cur;
            }
            if c == 0 || c * cur >= prev {
                return Err(bad());
            }
            pos += c as usize;
            let r = prev - c * cur;
            if r >= cur || pos >= seq.len() || seq[pos] != r {
                return Err(bad());
            }
            prev = cur;
            cur = r;
        };
        let a = c0 * e + v1;
        let next = if beta.len() == 1 { a } else { beta[beta.len() - 1] + a };
        beta.push(next);
        e = new_e;
    }
    if seq[pos..].iter().any(|&x| x != 1) {
        return Err(bad());
    }
    CharSequence::new(beta)
}

/// `e_i`, `n_i` and the semigroup generators `β̄_i`.
pub fn semigroup_data(c: &CharSequence) -> SemigroupData {
    let beta = c.beta();
    let mut e = vec![beta[0]];
    for &b in &beta[1..] {
        let last = *e.last().unwrap();
        e.push(last.gcd(&b));
    }
    let n: Vec<u64> = (1..beta.len()).map(|i| e[i - 1] / e[i]).collect();
    let mut bb = vec![beta[0]];
    if beta.len() > 1 {
        bb.push(beta[1]);
    }
    for i in 1..beta.len().saturating_sub(1) {
        let next = n[i - 1] * bb[i] + beta[i + 1] - beta[i];
        bb.push(next);
    }
    SemigroupData { e, n, beta_bar: bb }
}

/// Degrees and contacts of the approximate roots `f_{−1}, …, f_g`.
pub fn approx_root_profile(c: &CharSequence) -> Vec<ApproxRootEntry> {
    let sg = semigroup_data(c);
    let g = c.genus();
    let beta0 = c.multiplicity();
    let mut out = Vec::with_capacity(g + 2);
    if g == 0 {
        out.push(ApproxRootEntry {
            k: 0,
            degree: Some(1),
            contact: ContactValue::Infinite,
        });
        return out;
    }
    out.push(ApproxRootEntry {
        k: -1,
        degree: None,
        contact: ContactValue::Finite(sg.beta_bar[0]),
    });
    for k in 0..=g {
        let contact = if k < g {
            ContactValue::Finite(sg.beta_bar[k + 1])
        } else {
            ContactValue::Infinite
        };
        out.push(ApproxRootEntry {
            k: k as i64,
            degree: Some(beta0 / sg.e[k]),
            contact,
        });
    }
    out
}

/// `δ = Σ m(m−1)/2 + Σ_{pairs} I` and `μ = 2δ − r + 1`.
pub fn delta_and_milnor(branches: &[MultiplicitySequence], pairwise: &[Vec<u64>]) -> Result<(u64, i64), BranchError> {
    let r = branches.len();
    if r == 0 {
        return Err(BranchError::InconsistentPairwise("no branches".into()));
    }
    if pairwise.len() != r || pairwise.iter().any(|row| row.len() != r) {
        return Err(BranchError::InconsistentPairwise(format!("expected a {r}x{r} table")));
    }
    let mut delta: u64 = branches.iter().map(|b| b.delta()).sum();
    for i in 0..r {
        for j in (i + 1)..r {
            if pairwise[i][j] != pairwise[j][i] {
                return Err(BranchError::InconsistentPairwise(format!("asymmetric entry ({i},{j})")));
            }
            if pairwise[i][j] == 0 {
                return Err(BranchError::InconsistentPairwise(format!(
                    "branches {i} and {j} do not meet"
                )));
            }
            delta += pairwise[i][j];
        }
    }
    let mu = 2 * delta as i64 - r as i64 + 1;
    Ok((delta, mu))
}

/// Multiplicity sequence of a curvetta of `E_v` along its chain.
pub fn multseq_of_vertex(tree: &ProximityTree, v: usize) -> MultiplicitySequence {
    let m = tree.curvetta_multiplicities(v);
    MultiplicitySequence(
        tree.chain(v)
            .into_iter()
            .map(|i| m[i].to_u64().expect("multiplicity fits in u64"))
            .collect(),
    )
}

/// Characteristic sequence of a curvetta of `E_v`.
pub fn char_of_vertex(tree: &ProximityTree, v: usize) -> CharSequence {
    multseq_to_char(&multseq_of_vertex(tree, v)).expect("curvettas are branches")
}

/// Merged tree of several branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchTree {
    pub tree: ProximityTree,
    pub divisor: Divisor,
    /// Deepest vertex of every branch chain.
    pub ends: Vec<usize>,
}

/// Builds the tree of a multi-branch curve from per-branch characteristic
/// sequences and pairwise shared-point counts.
///
/// Branch chains are prolonged by free points so that every branch passes
/// through at least one point beyond the ones it shares with the others.
pub fn tree_from_branches(branches: &[CharSequence], shared: &[Vec<usize>]) -> Result<BranchTree, BranchError> {
    let r = branches.len();
    if r == 0 {
        return Err(BranchError::InconsistentPairwise("no branches".into()));
    }
    if shared.len() != r || shared.iter().any(|row| row.len() != r) {
        return Err(BranchError::InconsistentPairwise(format!("expected a {r}x{r} table")));
    }
    for i in 0..r {
        for j in 0..r {
            if i != j && (shared[i][j] != shared[j][i] || shared[i][j] == 0) {
                return Err(BranchError::InconsistentPairwise(format!(
                    "entry ({i},{j}) must be symmetric and positive"
                )));
            }
        }
    }
    let kinds: Vec<Vec<PointKind>> = branches
        .iter()
        .enumerate()
        .map(|(b, c)| {
            let chain = tree_from_multseq(&char_to_multseq(c)).expect("valid branch");
            let mut k: Vec<PointKind> = (0..chain.len()).map(|v| chain.kind(v)).collect();
            let need = (0..r).filter(|&j| j != b).map(|j| shared[b][j] + 1).max().unwrap_or(0);
            while k.len() < need {
                k.push(PointKind::Free);
            }
            k
        })
        .collect();
    let mut tree = ProximityTree::root_only();
    let mut paths: Vec<Vec<usize>> = Vec::with_capacity(r);
    for b in 0..r {
        let (anchor, s) = (0..b)
            .map(|i| (i, shared[b][i]))
            .max_by_key(|&(i, s)| (s, std::cmp::Reverse(i)))
            .unwrap_or((usize::MAX, 1));
        let mut path = Vec::with_capacity(kinds[b].len());
        if anchor == usize::MAX {
            path.push(0);
        } else {
            for pos in 0..s {
                if kinds[b][pos] != kinds[anchor][pos] {
                    return Err(BranchError::IncompatiblePrefixes(format!(
                        "branches {anchor} and {b} differ at shared position {pos}"
                    )));
                }
                path.push(paths[anchor][pos]);
            }
        }
        for pos in path.len()..kinds[b].len() {
            let parent = *path.last().unwrap();
            let kind = kinds[b][pos];
            if kind != PointKind::Free && tree.satellite_child(parent, kind).is_some() {
                return Err(BranchError::IncompatiblePrefixes(format!(
                    "branch {b} would pass through an existing satellite point at position {pos}"
                )));
            }
            let v = tree.push_kind(parent, kind)?;
            path.push(v);
        }
        paths.push(path);
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let actual = paths[i].iter().zip(&paths[j]).take_while(|(a, b)| a == b).count();
            if actual != shared[i][j] {
                return Err(BranchError::InconsistentPairwise(format!(
                    "branches {i} and {j} share {actual} points, {} requested",
                    shared[i][j]
                )));
            }
        }
    }
    let ends: Vec<usize> = paths.iter().map(|p| *p.last().unwrap()).collect();
    let divisor = Divisor::from_pairs(ends.iter().map(|&v| (v, 1)));
    Ok(BranchTree { tree, divisor, ends })
}

/// Wire format of a branch bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchBundleJson {
    pub branches: Vec<BranchJson>,
    pub shared: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    #[serde(rename = "char")]
    pub char_seq: Vec<u64>,
}

impl BranchBundleJson {
    pub fn build(&self) -> Result<BranchTree, BranchError> {
        let chars = self
            .branches
            .iter()
            .map(|b| CharSequence::new(b.char_seq.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        tree_from_branches(&chars, &self.shared)
    }
}
