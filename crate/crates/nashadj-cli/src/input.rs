//! Reading expressions and JSON documents from arguments, files or stdin.

use std::io::Read;

use nashadj::branchinv::{tree_from_branches, BranchBundleJson, CharSequence};
use nashadj::proximity::{Divisor, DivisorJson, PairConfig, PairJson, ProximityTree, TreeJson};
use nashadj::resolver::{parse_curve, ParseError, PlanePoly};
use serde_json::Value;

pub fn read_stdin() -> Result<String, String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| format!("cannot read stdin: {e}"))?;
    Ok(s)
}

/// The argument itself, or stdin when it is absent or `-`.
pub fn expression(arg: Option<&str>) -> Result<String, String> {
    match arg {
        Some(s) if s != "-" => Ok(s.to_string()),
        _ => Ok(read_stdin()?.trim().to_string()),
    }
}

/// Error message with a caret under the offending column.
pub fn positioned(expr: &str, e: &ParseError) -> String {
    let pad = " ".repeat(e.column.saturating_sub(1));
    format!("{e}\n  {expr}\n  {pad}^")
}

pub fn curve(expr: &str) -> Result<PlanePoly, String> {
    parse_curve(expr).map_err(|e| positioned(expr, &e))
}

/// Contents of a file, or stdin for `-`.
pub fn document(path: Option<&str>) -> Result<Value, String> {
    let text = match path {
        Some(p) if p != "-" => std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}"))?,
        _ => read_stdin()?,
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
}

fn decode<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, String> {
    T::deserialize(v).map_err(|e| format!("not a {what} document: {e}"))
}

fn bundle(v: &Value) -> Result<(ProximityTree, Divisor, Vec<usize>), String> {
    let b: BranchBundleJson = decode(v, "branch bundle")?;
    let bt = b.build().map_err(|e| e.to_string())?;
    Ok((bt.tree, bt.divisor, bt.ends))
}

/// A pair `(E, F)`: either `{"tree", "left", "right"}` or a bundle of two
/// branches, `E` being the first.
pub fn pair(v: &Value) -> Result<PairConfig, String> {
    if v.get("tree").is_some() {
        let p: PairJson = decode(v, "pair")?;
        return p.to_config().map_err(|e| e.to_string());
    }
    let (tree, _, ends) = bundle(v)?;
    if ends.len() != 2 {
        return Err(format!("a pair needs exactly two branches, found {}", ends.len()));
    }
    PairConfig::new(tree, Divisor::prime(ends[0]), Divisor::prime(ends[1])).map_err(|e| e.to_string())
}

/// A tree with an optional divisor: a tree, `{"tree", "divisor"}`, a pair
/// (the divisor is `F`) or a branch bundle (the divisor marks the branches).
pub fn marked_tree(v: &Value) -> Result<(ProximityTree, Option<Divisor>), String> {
    if v.get("vertices").is_some() {
        let t: TreeJson = decode(v, "tree")?;
        return Ok((t.to_tree().map_err(|e| e.to_string())?.0, None));
    }
    if v.get("left").is_some() {
        let cfg = pair(v)?;
        return Ok((cfg.tree, Some(cfg.right)));
    }
    if let Some(t) = v.get("tree") {
        let (tree, ids) = decode::<TreeJson>(t, "tree")?.to_tree().map_err(|e| e.to_string())?;
        let d = match v.get("divisor") {
            Some(d) => Some(
                decode::<DivisorJson>(d, "divisor")?
                    .to_divisor(&ids)
                    .map_err(|e| e.to_string())?,
            ),
            None => None,
        };
        return Ok((tree, d));
    }
    let (tree, d, _) = bundle(v)?;
    Ok((tree, Some(d)))
}

/// Tree and divisor of a single branch with the given characteristic
/// sequence.
pub fn branch(beta: &[u64]) -> Result<(ProximityTree, Divisor), String> {
    let c = CharSequence::new(beta.to_vec()).map_err(|e| e.to_string())?;
    let bt = tree_from_branches(&[c], &[vec![0]]).map_err(|e| e.to_string())?;
    Ok((bt.tree, bt.divisor))
}
