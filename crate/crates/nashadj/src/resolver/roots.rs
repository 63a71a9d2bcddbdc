//! Approximate roots of a branch in Weierstrass form.

use num_traits::{One, Zero};

use super::bivar::{self, YPoly};
use super::plane::PlanePoly;
use super::qpoly::{QPoly, Q};
use super::{resolve_with, ResolveError, ResolveOptions};
use crate::branchinv::{semigroup_data, CharSequence};

/// `f_k`, the `e_k`-th approximate root, in the prepared coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximateRoot {
    pub k: usize,
    pub e: u64,
    pub root: PlanePoly,
    /// `deg_y f_k = β₀ / e_k`.
    pub degree: usize,
    /// `deg_y(P − f_k^{e_k})`, `None` when the difference vanishes.
    pub defect_degree: Option<usize>,
    /// `I(f, f_k)`, absent for `f_g = P`.
    pub intersection: Option<u64>,
    pub char_seq: CharSequence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximateRoots {
    pub char_seq: CharSequence,
    /// Rows give the images of `x` and `y`: `x ↦ a x + b y`, `y ↦ c x + d y`.
    pub change: [[Q; 2]; 2],
    /// Every series is computed modulo `x^truncation`.
    pub truncation: usize,
    pub weierstrass: PlanePoly,
    pub roots: Vec<ApproximateRoot>,
}

/// The `e`-th approximate root of a polynomial monic in `y`, computed exactly.
pub fn approximate_root(p: &PlanePoly, e: u32) -> Result<PlanePoly, ResolveError> {
    if p.has_parameter() {
        return Err(ResolveError::HasParameter);
    }
    let y = p.to_ypoly();
    if y.last().is_none_or(|c| *c != QPoly::one()) {
        return Err(ResolveError::RootCheck("polynomial is not monic in y".into()));
    }
    bivar::approximate_root(&y, e as usize, usize::MAX)
        .map(|r| PlanePoly::from_ypoly(&r))
        .ok_or_else(|| ResolveError::RootCheck(format!("{e} does not divide deg_y = {}", y.len() - 1)))
}

fn identity() -> [[Q; 2]; 2] {
    [[Q::one(), Q::zero()], [Q::zero(), Q::one()]]
}

/// A rational linear change after which `f(0, y)` has order equal to the
/// multiplicity `m`.
fn regular_coordinates(f: &PlanePoly, m: u32) -> Result<([[Q; 2]; 2], PlanePoly), ResolveError> {
    let (o, z) = (Q::one(), Q::zero());
    let mut candidates = vec![identity(), [[z.clone(), o.clone()], [o.clone(), z.clone()]]];
    for c in 1..=(m as i64 + 1) {
        candidates.push([[o.clone(), Q::from_integer(c.into())], [z.clone(), o.clone()]]);
    }
    candidates
        .into_iter()
        .map(|ch| {
            let g = f.linear_change(&ch);
            (ch, g)
        })
        .find(|(_, g)| !g.coeff(0, m).is_zero())
        .ok_or(ResolveError::NoRegularCoordinates)
}

fn degree_y(p: &YPoly) -> Option<usize> {
    (!p.is_empty()).then(|| p.len() - 1)
}

fn roots_at(
    g: &PlanePoly,
    ch: &CharSequence,
    n: usize,
    opts: &ResolveOptions,
) -> Result<(YPoly, Vec<ApproximateRoot>), ResolveError> {
    let beta = ch.beta();
    let d = beta[0] as usize;
    let sg = semigroup_data(ch);
    let p = bivar::weierstrass(&g.to_ypoly(), n).ok_or(ResolveError::NoRegularCoordinates)?;
    if p.len() != d + 1 {
        return Err(ResolveError::NoRegularCoordinates);
    }
    let genus = ch.genus();
    let mut out = Vec::with_capacity(genus + 1);
    for k in 0..=genus {
        let e = sg.e[k] as usize;
        let q = bivar::approximate_root(&p, e, n)
            .ok_or_else(|| ResolveError::RootCheck(format!("no approximate root of degree {}", d / e)))?;
        let defect = bivar::ytruncate(&bivar::ysub(&p, &bivar::ypow(&q, e, n)), n);
        let defect_degree = degree_y(&defect);
        if defect_degree.is_some_and(|dd| dd + d / e >= d) {
            return Err(ResolveError::RootCheck(format!(
                "deg_y(P − f_{k}^{e}) = {} is not below {}",
                defect_degree.unwrap(),
                d - d / e
            )));
        }
        let intersection = if k < genus {
            let r = bivar::resultant_y(&p, &q);
            let i = r
                .ord()
                .ok_or_else(|| ResolveError::RootCheck(format!("f_{k} shares a component with f")))?;
            let expected = sg.beta_bar[k + 1];
            if i as u64 != expected {
                return Err(ResolveError::RootCheck(format!(
                    "I(f, f_{k}) = {i}, expected {expected}"
                )));
            }
            Some(i as u64)
        } else {
            None
        };
        let root = PlanePoly::from_ypoly(&q);
        let res = resolve_with(&root, opts)?;
        if res.branch_count() != 1 {
            return Err(ResolveError::RootCheck(format!(
                "f_{k} has {} branches",
                res.branch_count()
            )));
        }
        let expected: Vec<u64> = beta[..=k].iter().map(|b| b / e as u64).collect();
        let got = res.branches[0].char_seq.clone();
        if got.beta() != expected.as_slice() {
            return Err(ResolveError::RootCheck(format!(
                "f_{k} has characteristic sequence {:?}, expected {expected:?}",
                got.beta()
            )));
        }
        out.push(ApproximateRoot {
            k,
            e: e as u64,
            root,
            degree: d / e,
            defect_degree,
            intersection,
            char_seq: got,
        });
    }
    Ok((p, out))
}

/// Approximate roots `f_0, …, f_g` of a branch, after a linear change making
/// it `y`-regular and Weierstrass preparation modulo a power of `x`.
///
/// Every root is checked against the degree inequality, its intersection
/// with the branch and its characteristic sequence, then recomputed at twice
/// the truncation order.
pub fn approximate_roots(f: &PlanePoly, opts: &ResolveOptions) -> Result<ApproximateRoots, ResolveError> {
    let res = resolve_with(f, opts)?;
    if res.branch_count() != 1 {
        return Err(ResolveError::NotABranch(res.branch_count()));
    }
    let ch = res.branches[0].char_seq.clone();
    let m = ch.beta()[0] as u32;
    let (change, g) = regular_coordinates(f, m)?;
    let bb = *semigroup_data(&ch).beta_bar.last().unwrap();
    let n = bb.max(res.mu.max(0) as u64) as usize + 2;
    let (p, roots) = roots_at(&g, &ch, n, opts)?;
    let (_, again) = roots_at(&g, &ch, 2 * n, opts)?;
    for (a, b) in roots.iter().zip(&again) {
        let b_trunc = PlanePoly::from_ypoly(&bivar::ytruncate(&b.root.to_ypoly(), n));
        if a.root != b_trunc || a.intersection != b.intersection || a.char_seq != b.char_seq {
            return Err(ResolveError::RootCheck(format!(
                "f_{} is not stable under doubling the truncation",
                a.k
            )));
        }
    }
    Ok(ApproximateRoots {
        char_seq: ch,
        change,
        truncation: n,
        weierstrass: PlanePoly::from_ypoly(&p),
        roots,
    })
}
