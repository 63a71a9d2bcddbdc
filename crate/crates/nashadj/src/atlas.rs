//! Singularity catalog and adjacency graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::resolver::{parse_curve, resolve_with, ResolutionResult, ResolveOptions};
use crate::valorder::{decide_ffp_adjacency, TopologicalType};

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.txt");
const BUILTIN_REFERENCE: &str = include_str!("../data/classical.txt");

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingClass {
    Simple,
    Parabolic,
    Hyperbolic,
    Exceptional,
    Bimodal,
}

impl std::str::FromStr for SingClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simple" => Ok(SingClass::Simple),
            "parabolic" => Ok(SingClass::Parabolic),
            "hyperbolic" => Ok(SingClass::Hyperbolic),
            "exceptional" => Ok(SingClass::Exceptional),
            "bimodal" => Ok(SingClass::Bimodal),
            _ => Err(format!("unknown class '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub expr: String,
    pub mu: i64,
    pub class: SingClass,
    /// The normal form at a second modulus value.
    pub alt: Option<String>,
}

impl CatalogEntry {
    /// `μ` read off the name when the subscript is the Milnor number
    /// (`A7`, `Z11`, ...).
    pub fn subscript_mu(&self) -> Option<i64> {
        let letters = self.name.chars().take_while(|c| c.is_ascii_uppercase()).count();
        let rest = &self.name[letters..];
        (letters == 1 && !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
            .then(|| rest.parse().ok())
            .flatten()
    }

    /// `(p, q, r)` for members of the `T_{p,q,r}` family.
    pub fn t_triple(&self) -> Option<(u32, u32, u32)> {
        let two = |s: &str| -> Option<(u32, u32)> {
            let (a, b) = s.strip_prefix('{')?.strip_suffix('}')?.split_once(',')?;
            Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
        };
        match self.name.as_str() {
            "X9" => Some((2, 4, 4)),
            "J10" => Some((2, 3, 6)),
            n => {
                if let Some(r) = n.strip_prefix("J_").and_then(two) {
                    (r.0 == 2).then_some((2, 3, 6 + r.1))
                } else if let Some(r) = n.strip_prefix("X_").and_then(two) {
                    (r.0 == 1).then_some((2, 4, 4 + r.1))
                } else {
                    n.strip_prefix("Y_").and_then(two).map(|r| (2, 4 + r.0, 4 + r.1))
                }
            }
        }
    }
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split('|').map(str::trim).collect()))
    })
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, AtlasError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, f) in records(text) {
        let err = |msg: String| AtlasError::Format { line, msg };
        if !(4..=5).contains(&f.len()) {
            return Err(err(format!("expected 4 or 5 fields, found {}", f.len())));
        }
        if !seen.insert(f[0].to_string()) {
            return Err(err(format!("duplicate entry {}", f[0])));
        }
        let mu = f[2].parse().map_err(|_| err(format!("bad Milnor number '{}'", f[2])))?;
        let class = f[3].parse().map_err(err)?;
        for expr in f[1..].iter().step_by(3) {
            parse_curve(expr).map_err(|e| err(e.to_string()))?;
        }
        out.push(CatalogEntry {
            name: f[0].to_string(),
            expr: f[1].to_string(),
            mu,
            class,
            alt: f.get(4).map(|s| s.to_string()),
        });
    }
    Ok(out)
}

pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>, AtlasError> {
    parse_catalog(&std::fs::read_to_string(path)?)
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN_CATALOG).expect("shipped catalog is well formed")
}

/// A classical adjacency `from → to` (`from` deforms to `to`) taken from the
/// literature.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassicalEdge {
    pub from: String,
    pub to: String,
    pub source: String,
}

pub fn parse_reference(text: &str) -> Result<Vec<ClassicalEdge>, AtlasError> {
    records(text)
        .map(|(line, f)| {
            if f.len() != 3 {
                return Err(AtlasError::Format {
                    line,
                    msg: format!("expected 3 fields, found {}", f.len()),
                });
            }
            Ok(ClassicalEdge {
                from: f[0].to_string(),
                to: f[1].to_string(),
                source: f[2].to_string(),
            })
        })
        .collect()
}

pub fn builtin_reference() -> Vec<ClassicalEdge> {
    parse_reference(BUILTIN_REFERENCE).expect("shipped reference is well formed")
}

#[derive(Debug, Clone)]
pub struct ResolvedEntry {
    pub entry: CatalogEntry,
    pub result: ResolutionResult,
    pub ty: TopologicalType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryIssue {
    pub name: String,
    pub problem: String,
}

#[derive(Debug, Clone, Default)]
pub struct CatalogReport {
    pub resolved: Vec<ResolvedEntry>,
    pub issues: Vec<EntryIssue>,
}

impl CatalogReport {
    pub fn get(&self, name: &str) -> Option<&ResolvedEntry> {
        self.resolved.iter().find(|r| r.entry.name == name)
    }
}

/// Resolves every entry, checking `μ` against the record and the subscript
/// and the type against the second normal form.  Failing entries are
/// reported and left out.
pub fn validate_catalog(entries: &[CatalogEntry], opts: &ResolveOptions) -> CatalogReport {
    let mut report = CatalogReport::default();
    for e in entries {
        let issue = |problem: String| EntryIssue {
            name: e.name.clone(),
            problem,
        };
        let result = match parse_curve(&e.expr)
            .map_err(Into::into)
            .and_then(|f| resolve_with(&f, opts))
        {
            Ok(r) => r,
            Err(err) => {
                report.issues.push(issue(format!("does not resolve: {err}")));
                continue;
            }
        };
        if result.mu != e.mu {
            report
                .issues
                .push(issue(format!("μ = {} but the record says {}", result.mu, e.mu)));
            continue;
        }
        if let Some(s) = e.subscript_mu().filter(|&s| s != e.mu) {
            report
                .issues
                .push(issue(format!("μ = {} differs from the subscript {s}", e.mu)));
            continue;
        }
        let ty = result.topological_type();
        if let Some(alt) = &e.alt {
            let other = parse_curve(alt)
                .map_err(Into::into)
                .and_then(|f| resolve_with(&f, opts));
            match other {
                Ok(o) if o.canonical_key() == ty.canonical_key() => {}
                Ok(_) => {
                    report
                        .issues
                        .push(issue("second modulus value gives another type".into()));
                    continue;
                }
                Err(err) => {
                    report
                        .issues
                        .push(issue(format!("second normal form does not resolve: {err}")));
                    continue;
                }
            }
        }
        report.resolved.push(ResolvedEntry {
            entry: e.clone(),
            result,
            ty,
        });
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Realizable by a deformation fixing the free points.
    Ffp,
    /// Classical adjacency not realizable fixing the free points.
    ClassicalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Classical edge decided by the valuative search.
    Decided,
    /// Edge between `T_{p,q,r}` members by the arithmetic rule.
    TRule,
    /// Adjacency found by the search that is absent from the reference.
    New,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    pub provenance: Provenance,
    /// Literature source of classical edges.
    pub source: Option<String>,
    /// Canonical form of the witness pair.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    pub mu: i64,
    pub class: SingClass,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Entries and reference edges left out, with the reason.
    pub excluded: Vec<EntryIssue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphOptions {
    pub max_mu: i64,
    /// Also test every pair `μ(to) < μ(from)` missing from the reference.
    pub discover: bool,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            max_mu: 16,
            discover: false,
        }
    }
}

fn decide(from: &ResolvedEntry, to: &ResolvedEntry) -> (bool, Option<String>) {
    let v = decide_ffp_adjacency(&to.ty, &from.ty);
    (v.adjacent, v.witness.map(|w| w.canonical_form().0))
}

/// `T_{a,b,c} → T_{α,β,γ}` iff the sorted triples compare entrywise.
fn t_rule(a: (u32, u32, u32), b: (u32, u32, u32)) -> bool {
    a != b && b.0 <= a.0 && b.1 <= a.1 && b.2 <= a.2
}

/// Decides every classical adjacency between resolved entries with
/// `μ ≤ max_mu` and adds the `T_{p,q,r}` edges.
pub fn build_ffp_graph(report: &CatalogReport, reference: &[ClassicalEdge], opts: &GraphOptions) -> AdjacencyGraph {
    let inside: BTreeMap<&str, &ResolvedEntry> = report
        .resolved
        .iter()
        .filter(|r| r.entry.mu <= opts.max_mu)
        .map(|r| (r.entry.name.as_str(), r))
        .collect();
    let mut g = AdjacencyGraph {
        excluded: report.issues.clone(),
        ..Default::default()
    };
    let mut nodes: Vec<Node> = inside
        .values()
        .map(|r| Node {
            name: r.entry.name.clone(),
            mu: r.entry.mu,
            class: r.entry.class,
        })
        .collect();
    nodes.sort_by(|a, b| (a.mu, &a.name).cmp(&(b.mu, &b.name)));
    g.nodes = nodes;
    let known_names: BTreeSet<&str> = report.resolved.iter().map(|r| r.entry.name.as_str()).collect();
    let mut covered: BTreeSet<(String, String)> = BTreeSet::new();
    for c in reference {
        let (Some(f), Some(t)) = (inside.get(c.from.as_str()), inside.get(c.to.as_str())) else {
            let missing = [&c.from, &c.to].into_iter().find(|n| !known_names.contains(n.as_str()));
            if let Some(m) = missing {
                g.excluded.push(EntryIssue {
                    name: format!("{} -> {}", c.from, c.to),
                    problem: format!("{m} is not a resolved catalog entry"),
                });
            }
            continue;
        };
        let (adjacent, witness) = decide(f, t);
        covered.insert((c.from.clone(), c.to.clone()));
        g.edges.push(Edge {
            from: c.from.clone(),
            to: c.to.clone(),
            kind: if adjacent {
                EdgeKind::Ffp
            } else {
                EdgeKind::ClassicalOnly
            },
            provenance: Provenance::Decided,
            source: Some(c.source.clone()),
            witness,
        });
    }
    let ts: Vec<(&ResolvedEntry, (u32, u32, u32))> = inside
        .values()
        .filter_map(|r| r.entry.t_triple().map(|t| (*r, t)))
        .collect();
    for &(f, tf) in &ts {
        for &(t, tt) in &ts {
            if t_rule(tf, tt) && covered.insert((f.entry.name.clone(), t.entry.name.clone())) {
                g.edges.push(Edge {
                    from: f.entry.name.clone(),
                    to: t.entry.name.clone(),
                    kind: EdgeKind::Ffp,
                    provenance: Provenance::TRule,
                    source: None,
                    witness: None,
                });
            }
        }
    }
    if opts.discover {
        for f in inside.values() {
            for t in inside.values() {
                if t.entry.mu >= f.entry.mu || covered.contains(&(f.entry.name.clone(), t.entry.name.clone())) {
                    continue;
                }
                let (adjacent, witness) = decide(f, t);
                if adjacent {
                    g.edges.push(Edge {
                        from: f.entry.name.clone(),
                        to: t.entry.name.clone(),
                        kind: EdgeKind::Ffp,
                        provenance: Provenance::New,
                        source: None,
                        witness,
                    });
                }
            }
        }
    }
    g.edges.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
    g
}

impl AdjacencyGraph {
    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    fn reachable(&self, from: &str, to: &str, allow: impl Fn(&Edge) -> bool, skip: &Edge) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::from([from]);
        while let Some(v) = stack.pop() {
            for e in self
                .edges
                .iter()
                .filter(|e| e.from == v && allow(e) && !std::ptr::eq(*e, skip))
            {
                if e.to == to {
                    return true;
                }
                if seen.insert(e.to.as_str()) {
                    stack.push(e.to.as_str());
                }
            }
        }
        false
    }

    /// Drops edges implied by longer paths: solid edges by solid paths,
    /// dotted edges by any path.
    pub fn transitive_reduction(&self) -> AdjacencyGraph {
        let keep: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| {
                let solid_only = e.kind == EdgeKind::Ffp;
                !self.reachable(&e.from, &e.to, |x| !solid_only || x.kind == EdgeKind::Ffp, e)
            })
            .cloned()
            .collect();
        AdjacencyGraph {
            nodes: self.nodes.clone(),
            edges: keep,
            excluded: self.excluded.clone(),
        }
    }

    /// Dotted edges whose endpoints are joined by a path of solid edges.
    pub fn coherence_violations(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .filter(|e| e.kind == EdgeKind::ClassicalOnly)
            .filter(|e| self.reachable(&e.from, &e.to, |x| x.kind == EdgeKind::Ffp, e))
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph adjacencies {\n");
        if !self.nodes.is_empty() {
            s.push_str("  rankdir=LR;\n  node [shape=plaintext];\n");
        }
        for n in &self.nodes {
            let _ = writeln!(s, "  \"{}\" [label=\"{}\\nμ={}\"];", n.name, n.name, n.mu);
        }
        for e in &self.edges {
            let style = match (e.kind, e.provenance) {
                (EdgeKind::ClassicalOnly, _) => "style=dashed",
                (EdgeKind::Ffp, Provenance::New) => "style=solid, color=red",
                (EdgeKind::Ffp, _) => "style=solid",
            };
            let _ = writeln!(s, "  \"{}\" -> \"{}\" [{}];", e.from, e.to, style);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}
