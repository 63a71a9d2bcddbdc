//! From explicit equations to resolution combinatorics.
//!
//! [`resolve`] blows up the origin and its infinitely near points until the
//! strict transform is a union of smooth branches crossing the last
//! exceptional divisors transversally.  Tangent directions with irrational
//! slope are followed over simple algebraic extensions of `Q` whose degree is
//! capped by [`ResolveOptions::max_ext_degree`].

mod bivar;
mod blowup;
mod factor;
mod field;
mod parse;
mod plane;
mod qpoly;
mod roots;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::branchinv::{
    char_of_vertex, char_to_multseq, delta_and_milnor, tree_from_branches, BranchError, CharSequence,
    MultiplicitySequence,
};
use crate::proximity::{CanonicalKey, Divisor, DivisorJson, ProximityTree};
use crate::valorder::{TopologicalType, ValError};

pub use parse::{ParseError, ParseErrorKind};
pub use plane::{parse_curve, PlanePoly};
pub use qpoly::{QPoly, Q};
pub use roots::{approximate_root, approximate_roots, ApproximateRoot, ApproximateRoots};

use blowup::{BiPoly, BlowupError, Engine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the polynomial depends on the parameter s")]
    HasParameter,
    #[error("the curve does not pass through the origin")]
    NotThroughOrigin,
    #[error("the zero polynomial does not define a curve")]
    ZeroPolynomial,
    #[error("non-reduced germ: repeated factor {factor}")]
    NonReduced { factor: String },
    #[error(
        "algebraic degree {needed} exceeds the bound {bound} \
         (partial data: {vertices} points blown up, {branches} branches separated)"
    )]
    AlgebraicDegreeExceeded {
        needed: usize,
        bound: usize,
        vertices: usize,
        branches: usize,
    },
    #[error("more than {0} infinitely near points")]
    TooManyPoints(usize),
    #[error("expected a branch, found {0} branches")]
    NotABranch(usize),
    #[error("no coordinates make the curve y-regular")]
    NoRegularCoordinates,
    #[error("approximate root check failed: {0}")]
    RootCheck(String),
    #[error("not a deformation of a curve through the origin: F(s,0,0) ≠ 0")]
    NotADeformation,
    #[error(transparent)]
    Branch(#[from] BranchError),
    #[error(transparent)]
    Val(#[from] ValError),
}

impl From<BlowupError> for ResolveError {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::DegreeExceeded {
                needed,
                bound,
                vertices,
                branches,
            } => ResolveError::AlgebraicDegreeExceeded {
                needed,
                bound,
                vertices,
                branches,
            },
            BlowupError::TooManyPoints(n) => ResolveError::TooManyPoints(n),
            BlowupError::NotThroughOrigin => ResolveError::NotThroughOrigin,
            BlowupError::Zero => ResolveError::ZeroPolynomial,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolveOptions {
    /// Largest degree over `Q` of the number fields used.
    pub max_ext_degree: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { max_ext_degree: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchData {
    pub char_seq: CharSequence,
    pub multseq: MultiplicitySequence,
    /// Size of the Galois orbit the branch was found in.
    pub orbit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionResult {
    /// Tree rebuilt from the branch data by `tree_from_branches`.
    pub tree: ProximityTree,
    /// One unit per branch at the end of its chain in `tree`.
    pub marked: Divisor,
    pub branches: Vec<BranchData>,
    /// Pairwise shared-point counts (diagonal is zero).
    pub shared: Vec<Vec<usize>>,
    /// Pairwise intersection multiplicities (diagonal is zero).
    pub intersections: Vec<Vec<u64>>,
    pub delta: u64,
    pub mu: i64,
    /// Points blown up by the minimal embedded resolution.
    pub resolution_tree: ProximityTree,
    /// Vertex of `resolution_tree` each branch crosses transversally.
    pub resolution_ends: Vec<usize>,
    pub max_field_degree: usize,
}

impl ResolutionResult {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn topological_type(&self) -> TopologicalType {
        TopologicalType::of_divisor(&self.tree, &self.marked).expect("marked divisor lives on the tree")
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        self.topological_type().canonical_key()
    }

    /// Depth of the resolution counting the origin.
    pub fn resolution_depth(&self) -> usize {
        self.resolution_tree.height()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "branches": self.branches.iter().map(|b| json!({
                "char": b.char_seq.beta(),
                "multseq": b.multseq.as_slice(),
                "orbit": b.orbit,
            })).collect::<Vec<_>>(),
            "shared": self.shared,
            "intersections": self.intersections,
            "delta": self.delta,
            "mu": self.mu,
            "tree": self.tree.to_json(),
            "marked": DivisorJson::from_divisor(&self.marked),
            "resolution": {
                "points": self.resolution_tree.len(),
                "depth": self.resolution_depth(),
                "max_field_degree": self.max_field_degree,
            },
        })
    }

    /// Dual graph of the rebuilt tree with the branch marks.
    pub fn to_dot(&self) -> String {
        self.tree.to_dot(Some(&self.marked))
    }
}

pub fn resolve(f: &PlanePoly) -> Result<ResolutionResult, ResolveError> {
    resolve_with(f, &ResolveOptions::default())
}

pub fn resolve_with(f: &PlanePoly, opts: &ResolveOptions) -> Result<ResolutionResult, ResolveError> {
    if f.has_parameter() {
        return Err(ResolveError::HasParameter);
    }
    match f.order() {
        None => return Err(ResolveError::ZeroPolynomial),
        Some(0) => return Err(ResolveError::NotThroughOrigin),
        _ => {}
    }
    if let Some(rep) = repeated_factor(f) {
        return Err(ResolveError::NonReduced {
            factor: rep.to_string(),
        });
    }
    let res = Engine::new(opts.max_ext_degree).run(&BiPoly::from_rational(&f.rational_terms()))?;
    assemble(res)
}

/// The repeated part `gcd(f, f_x, f_y)` when it vanishes at the origin.
fn repeated_factor(f: &PlanePoly) -> Option<PlanePoly> {
    let y = f.to_ypoly();
    let rep = bivar::repeated_part(&y);
    if bivar::is_constant(&rep) || !num_traits::Zero::is_zero(&bivar::eval_origin(&rep)) {
        return None;
    }
    Some(PlanePoly::from_ypoly(&rep).normalized())
}

/// `f` with every repeated factor reduced to multiplicity one.
fn reduced(f: &PlanePoly) -> PlanePoly {
    let y = f.to_ypoly();
    let rep = bivar::repeated_part(&y);
    if bivar::is_constant(&rep) {
        return f.clone();
    }
    let q = bivar::ydiv_exact(&y, &rep).expect("the repeated part divides f");
    PlanePoly::from_ypoly(&q)
}

fn assemble(res: blowup::Resolution) -> Result<ResolutionResult, ResolveError> {
    let geo = &res.tree;
    let r = res.ends.len();
    let theta = geo.noether_matrix();
    let chars: Vec<CharSequence> = res.ends.iter().map(|&v| char_of_vertex(geo, v)).collect();
    let mut shared = vec![vec![0usize; r]; r];
    let mut inter = vec![vec![0u64; r]; r];
    for i in 0..r {
        for j in 0..r {
            if i != j {
                let (a, b) = (res.ends[i], res.ends[j]);
                shared[i][j] = geo.shared_prefix(a, b);
                inter[i][j] = u64::try_from(&theta[a][b]).expect("intersection fits in u64");
            }
        }
    }
    let built = tree_from_branches(&chars, &shared)?;
    let multseqs: Vec<MultiplicitySequence> = chars.iter().map(char_to_multseq).collect();
    let (delta, mu) = delta_and_milnor(&multseqs, &inter)?;
    let geo_marks = Divisor::from_pairs(res.ends.iter().map(|&v| (v, 1)));
    let geo_key = TopologicalType::of_divisor(geo, &geo_marks)?.canonical_key();
    let key = TopologicalType::of_divisor(&built.tree, &built.divisor)?.canonical_key();
    if key != geo_key {
        return Err(BranchError::InconsistentPairwise("rebuilt tree differs from the resolution".into()).into());
    }
    let branches = chars
        .into_iter()
        .zip(multseqs)
        .zip(&res.orbit)
        .map(|((char_seq, multseq), &orbit)| BranchData {
            char_seq,
            multseq,
            orbit,
        })
        .collect();
    Ok(ResolutionResult {
        tree: built.tree,
        marked: built.divisor,
        branches,
        shared,
        intersections: inter,
        delta,
        mu,
        resolution_tree: res.tree,
        resolution_ends: res.ends,
        max_field_degree: res.max_field_degree,
    })
}

pub fn topological_type_of(f: &PlanePoly) -> Result<TopologicalType, ResolveError> {
    Ok(resolve(f)?.topological_type())
}

/// One generic sample of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySample {
    pub s: Q,
    pub result: Result<ResolutionResult, ResolveError>,
}

impl FamilySample {
    pub fn key(&self) -> Option<CanonicalKey> {
        self.result.as_ref().ok().map(|r| r.canonical_key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub special: ResolutionResult,
    pub samples: Vec<FamilySample>,
    /// Common resolution of the samples when they all agree.
    pub generic: Option<ResolutionResult>,
    pub warnings: Vec<String>,
}

impl FamilyReport {
    pub fn agreed(&self) -> bool {
        self.generic.is_some()
    }

    pub fn status(&self) -> &'static str {
        if self.agreed() {
            "agreed"
        } else {
            "inconclusive"
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status(),
            "special": self.special.to_json(),
            "generic": self.generic.as_ref().map(|g| g.to_json()),
            "samples": self.samples.iter().map(|s| match &s.result {
                Ok(r) => json!({"s": s.s.to_string(), "mu": r.mu, "key": r.canonical_key().0}),
                Err(e) => json!({"s": s.s.to_string(), "error": e.to_string()}),
            }).collect::<Vec<_>>(),
            "warnings": self.warnings,
        })
    }
}

/// Resolves `F(0, x, y)` and `F(s, x, y)` at `samples ≥ 3` distinct random
/// nonzero rationals, voting on the topological type.
pub fn resolve_family(
    family: &PlanePoly,
    samples: usize,
    seed: u64,
    opts: &ResolveOptions,
) -> Result<FamilyReport, ResolveError> {
    if !family.coeff(0, 0).is_zero() {
        return Err(ResolveError::NotADeformation);
    }
    let mut warnings = Vec::new();
    let special_poly = family.specialize(&Q::from_integer(0.into()));
    let special_poly = match repeated_factor(&special_poly) {
        Some(rep) => {
            warnings.push(format!(
                "special fibre has repeated factor {rep}; resolving its reduction"
            ));
            reduced(&special_poly)
        }
        None => special_poly,
    };
    let special = resolve_with(&special_poly, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<Q> = Vec::new();
    while values.len() < samples.max(3) {
        let num: i64 = rng.gen_range(1..=97) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let den: i64 = rng.gen_range(1..=13);
        let v = Q::new(num.into(), den.into());
        if !values.contains(&v) {
            values.push(v);
        }
    }
    let samples: Vec<FamilySample> = values
        .into_iter()
        .map(|s| {
            let result = resolve_with(&family.specialize(&s), opts);
            FamilySample { s, result }
        })
        .collect();
    let keys: Vec<Option<CanonicalKey>> = samples.iter().map(|s| s.key()).collect();
    let agreed = keys[0].is_some() && keys.iter().all(|k| k == &keys[0]);
    let generic = agreed.then(|| samples[0].result.clone().expect("agreed samples resolved"));
    if !agreed {
        let mut tally: BTreeMap<String, usize> = BTreeMap::new();
        for k in &keys {
            *tally
                .entry(k.as_ref().map_or("error".into(), |k| k.0.clone()))
                .or_default() += 1;
        }
        warnings.push(format!("samples disagree: {} distinct outcomes", tally.len()));
    }
    Ok(FamilyReport {
        special,
        samples,
        generic,
        warnings,
    })
}

/// `Res_t(p_x(t) − x, p_y(t) − y)` reduced and made primitive: the
/// implicit equation of the parametrized curve `(p_x(t), p_y(t))`.
pub fn implicit_equation(px: &QPoly, py: &QPoly) -> PlanePoly {
    let (dx, dy) = (py.degree(), px.degree());
    let xi = |a: i64| px.sub(&QPoly::constant(Q::from_integer(a.into())));
    let yi = |b: i64| py.sub(&QPoly::constant(Q::from_integer(b.into())));
    // For each x = a, the polynomial in y; then interpolate every y-power in x.
    let rows: Vec<QPoly> = (0..=dx as i64)
        .map(|a| {
            let pts: Vec<(Q, Q)> = (0..=dy as i64)
                .map(|b| (Q::from_integer(b.into()), qpoly::resultant(&xi(a), &yi(b))))
                .collect();
            qpoly::interpolate(&pts)
        })
        .collect();
    let mut out = PlanePoly::zero();
    for j in 0..=dy {
        let pts: Vec<(Q, Q)> = rows
            .iter()
            .enumerate()
            .map(|(a, row)| (Q::from_integer((a as i64).into()), row.coeff(j)))
            .collect();
        let cx = qpoly::interpolate(&pts);
        for (i, c) in cx.coeffs().iter().enumerate() {
            out = out.add(&PlanePoly::from_rational([((i as u32, j as u32), c.clone())]));
        }
    }
    reduced(&out).normalized()
}
