//! JSON records and text reports.

use std::fmt::Write as _;

use nashadj::atlas::{AdjacencyGraph, EdgeKind, Provenance};
use nashadj::nashcrit::{Beta1Check, NashVerdict};
use nashadj::proximity::{Divisor, PairConfig, PairJson, PointKind, ProximityTree};
use nashadj::resolver::{FamilyReport, ResolutionResult};
use nashadj::valorder::{DominatedEntry, Enumeration, FfpVerdict, ValVerdict};
use nashadj::BigInt;
use serde_json::{json, Value};

/// Integers as JSON numbers when they fit, as strings otherwise.
pub fn big(n: &BigInt) -> Value {
    i64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

fn bigs(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big).collect())
}

fn kind_name(k: PointKind) -> &'static str {
    match k {
        PointKind::Root => "root",
        PointKind::Free => "free",
        PointKind::SatelliteGrand => "satellite_grand",
        PointKind::SatelliteExtra => "satellite_extra",
    }
}

fn vertex_name(tree: &ProximityTree, v: Option<usize>) -> String {
    v.map_or_else(|| "line".to_string(), |v| format!("E{v} ({})", tree.label(v)))
}

pub fn tree_json(tree: &ProximityTree, d: Option<&Divisor>) -> Value {
    let m = tree.intersection_matrix();
    json!({
        "tree": tree.to_json(),
        "divisor": d.map(nashadj::proximity::DivisorJson::from_divisor),
        "kinds": (0..tree.len()).map(|v| kind_name(tree.kind(v))).collect::<Vec<_>>(),
        "self_intersections": (0..tree.len()).map(|i| big(&m[i][i])).collect::<Vec<_>>(),
        "log_discrepancies": bigs(&tree.log_discrepancies()),
        "intersection_matrix": m.iter().map(|r| bigs(r)).collect::<Vec<_>>(),
        "noether_matrix": tree.noether_matrix().iter().map(|r| bigs(r)).collect::<Vec<_>>(),
    })
}

pub fn tree_text(tree: &ProximityTree, d: Option<&Divisor>) -> String {
    let m = tree.intersection_matrix();
    let lambda = tree.log_discrepancies();
    let mut s = format!("{} points, height {}\n", tree.len(), tree.height());
    let _ = writeln!(
        s,
        "{:<8}{:<8}{:<8}{:<16}{:>6}{:>6}{:>7}",
        "vertex", "parent", "extra", "kind", "E²", "λ", "coeff"
    );
    for v in 0..tree.len() {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |x| format!("E{x}"));
        let _ = writeln!(
            s,
            "{:<8}{:<8}{:<8}{:<16}{:>6}{:>6}{:>7}",
            format!("E{v}"),
            opt(tree.parent(v)),
            opt(tree.extra(v)),
            kind_name(tree.kind(v)),
            m[v][v].to_string(),
            lambda[v].to_string(),
            d.map_or(String::new(), |d| d.coeff(v).to_string())
        );
    }
    s
}

pub fn resolution_text(r: &ResolutionResult) -> String {
    let mut s = format!("branches: {}\n", r.branch_count());
    for (i, b) in r.branches.iter().enumerate() {
        let _ = writeln!(
            s,
            "  branch {i}: char {:?}, multiplicities {:?}, orbit {}",
            b.char_seq.beta(),
            b.multseq.as_slice(),
            b.orbit
        );
    }
    for i in 0..r.branch_count() {
        for j in (i + 1)..r.branch_count() {
            let _ = writeln!(
                s,
                "  branches {i},{j}: {} shared points, intersection {}",
                r.shared[i][j], r.intersections[i][j]
            );
        }
    }
    let _ = writeln!(s, "delta: {}\nmu: {}", r.delta, r.mu);
    let _ = writeln!(
        s,
        "resolution: {} points, depth {}, field degree {}",
        r.resolution_tree.len(),
        r.resolution_depth(),
        r.max_field_degree
    );
    let _ = writeln!(s, "type: {}", r.canonical_key());
    s
}

pub fn family_text(f: &FamilyReport) -> String {
    let mut s = format!("status: {}\n", f.status());
    let line = |r: &ResolutionResult| {
        let chars: Vec<_> = r.branches.iter().map(|b| b.char_seq.beta().to_vec()).collect();
        format!("mu {} chars {:?} type {}", r.mu, chars, r.canonical_key())
    };
    let _ = writeln!(s, "special: {}", line(&f.special));
    match &f.generic {
        Some(g) => {
            let _ = writeln!(s, "generic: {}", line(g));
        }
        None => s.push_str("generic: none\n"),
    }
    for smp in &f.samples {
        match &smp.result {
            Ok(r) => {
                let _ = writeln!(s, "  s = {}: mu {}", smp.s, r.mu);
            }
            Err(e) => {
                let _ = writeln!(s, "  s = {}: error: {e}", smp.s);
            }
        }
    }
    for w in &f.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

pub fn val_json(tree: &ProximityTree, v: &ValVerdict) -> Value {
    json!({
        "holds": v.holds,
        "first_failure": v.first_failure,
        "checks": v.checks.iter().map(|c| json!({
            "vertex": c.vertex,
            "label": c.vertex.map(|x| tree.label(x).to_string()),
            "nu_e": big(&c.lhs),
            "nu_f": big(&c.rhs),
            "holds": c.holds(),
        })).collect::<Vec<_>>(),
    })
}

pub fn val_table(tree: &ProximityTree, v: &ValVerdict) -> String {
    let mut s = format!("{:<16}{:>10}{:>10}\n", "test curve", "ν_E", "ν_F");
    for c in &v.checks {
        let _ = writeln!(
            s,
            "{:<16}{:>10}{:>10}  {}",
            vertex_name(tree, c.vertex),
            c.lhs.to_string(),
            c.rhs.to_string(),
            if c.holds() { "≤" } else { ">" }
        );
    }
    s
}

pub fn pair_json(cfg: &PairConfig) -> Value {
    json!({
        "pair": PairJson::from_config(cfg),
        "key": cfg.canonical_form().0,
    })
}

pub fn nash_json(v: &NashVerdict, cfg: &PairConfig) -> Value {
    let d = &v.data;
    json!({
        "status": v.status,
        "summary": v.summary(),
        "reasons": v.reasons.iter().map(|r| json!({
            "tag": r.tag(),
            "obstruction": r.is_obstruction(),
            "message": r.to_string(),
        })).collect::<Vec<_>>(),
        "contact": d.contact,
        "char_e": d.char_e,
        "valuative": val_json(&cfg.tree, &d.valuative),
        "elm_codim": d.elm.as_ref().map(|e| json!({
            "lambda_e": big(&e.lambda_e),
            "lambda_f": big(&e.lambda_f),
            "obstructed": e.obstructed,
        })),
        "improved_codim": {
            "i": d.improved.i,
            "k": d.improved.k,
            "h": d.improved.h,
            "lambda_e": big(&d.improved.lambda_e),
            "lambda_f": big(&d.improved.lambda_f),
            "obstructed": d.improved.obstructed,
        },
        "beta1": match &d.beta1 {
            Beta1Check::NotApplicable { contact, genus } => json!({
                "applicable": false, "contact": contact, "genus": genus,
            }),
            Beta1Check::Checked { m0_f, beta1, fires } => json!({
                "applicable": true, "m0_f": m0_f, "beta1": beta1, "fires": fires,
            }),
        },
    })
}

pub fn nash_text(v: &NashVerdict, cfg: &PairConfig) -> String {
    let d = &v.data;
    let mut s = format!("{}\n", v.summary());
    let _ = writeln!(s, "contact: {}", d.contact);
    let _ = writeln!(s, "char(E): {:?}", d.char_e);
    let _ = writeln!(
        s,
        "valuative inequality: {}",
        if d.valuative.holds { "holds" } else { "fails" }
    );
    if let Some(e) = &d.elm {
        let _ = writeln!(s, "λ(E) = {}, λ(F) = {}", e.lambda_e, e.lambda_f);
    }
    let i = &d.improved;
    let _ = writeln!(
        s,
        "improved codimension: i={} k={} h={}: {} < {} {}",
        i.i,
        i.k,
        i.h,
        i.lambda_e,
        &i.lambda_f - BigInt::from(i.k) - BigInt::from(i.h),
        if i.obstructed { "fails" } else { "passes" }
    );
    match &d.beta1 {
        Beta1Check::NotApplicable { contact, genus } => {
            let _ = writeln!(s, "beta1: not applicable (contact {contact}, genus {genus})");
        }
        Beta1Check::Checked { m0_f, beta1, fires } => {
            let _ = writeln!(
                s,
                "beta1: m0(F)={m0_f}, β1={beta1}, {}",
                if *fires { "fires" } else { "silent" }
            );
        }
    }
    for r in &v.reasons {
        let _ = writeln!(s, "- {} {r}", r.tag());
    }
    s.push_str(&val_table(&cfg.tree, &d.valuative));
    s
}

fn entry_json(e: &DominatedEntry) -> Value {
    json!({
        "key": e.key.0,
        "kinds": e.kinds.iter().map(|k| kind_name(*k)).collect::<Vec<_>>(),
        "contact": e.contact(),
        "contacts": e.contacts(),
        "min_contact": e.min_contact,
        "pair": PairJson::from_config(&e.config),
    })
}

pub fn enum_json(en: &Enumeration) -> Value {
    json!({
        "bound": en.bound,
        "partial": en.partial,
        "count": en.entries.len(),
        "entries": en.entries.iter().map(entry_json).collect::<Vec<_>>(),
    })
}

pub fn enum_text(en: &Enumeration) -> String {
    let mut s = format!(
        "{} dominated types (bound N_F = {}){}\n",
        en.entries.len(),
        en.bound,
        if en.partial {
            ", partial: vertex cap reached"
        } else {
            ""
        }
    );
    for e in &en.entries {
        let kinds: String = e.kinds.iter().map(|k| kind_name(*k).chars().next().unwrap()).collect();
        let _ = writeln!(
            s,
            "  {:<12} contacts {:<10} {}",
            kinds,
            format!("{:?}", e.contacts()),
            e.key
        );
    }
    s
}

pub fn ffp_json(v: &FfpVerdict) -> Value {
    json!({
        "adjacent": v.adjacent,
        "search_bound": v.search_bound,
        "candidates": v.candidates,
        "witness": v.witness.as_ref().map(pair_json),
    })
}

pub fn ffp_text(v: &FfpVerdict, witness_table: Option<String>) -> String {
    let mut s = format!(
        "{}\nsearch bound: {}, candidates: {}\n",
        if v.adjacent { "ADJACENT" } else { "NOT ADJACENT" },
        v.search_bound,
        v.candidates
    );
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "witness: {}", w.canonical_form());
    }
    if let Some(t) = witness_table {
        s.push_str(&t);
    }
    s
}

pub fn atlas_text(g: &AdjacencyGraph) -> String {
    let mut s = format!(
        "nodes: {}\nedges: {} ({} fixing free points, {} classical only)\n",
        g.nodes.len(),
        g.edges.len(),
        g.count(EdgeKind::Ffp),
        g.count(EdgeKind::ClassicalOnly)
    );
    let list = |s: &mut String, title: &str, keep: &dyn Fn(&nashadj::atlas::Edge) -> bool| {
        let es: Vec<_> = g.edges.iter().filter(|e| keep(e)).collect();
        let _ = writeln!(s, "{title}: {}", es.len());
        for e in es {
            let _ = writeln!(s, "  {} -> {}", e.from, e.to);
        }
    };
    list(&mut s, "not realizable fixing free points", &|e| {
        e.kind == EdgeKind::ClassicalOnly
    });
    list(&mut s, "new", &|e| e.provenance == Provenance::New);
    let cv = g.coherence_violations();
    let _ = writeln!(s, "coherence violations: {}", cv.len());
    for (a, b) in cv {
        let _ = writeln!(s, "  {a} -> {b}");
    }
    let _ = writeln!(s, "excluded: {}", g.excluded.len());
    for x in &g.excluded {
        let _ = writeln!(s, "  {}: {}", x.name, x.problem);
    }
    s
}
