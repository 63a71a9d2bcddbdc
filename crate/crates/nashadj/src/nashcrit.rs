//! Nash-adjacency verdicts between prime divisors: the valuative necessary
//! condition, the codimension bounds from log-discrepancies, the `β₁ + 1`
//! obstruction and the known sufficient conditions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branchinv::char_of_vertex;
use crate::proximity::{PairConfig, ProximityError};
use crate::valorder::{val_leq, ValError, ValVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NashError {
    #[error(transparent)]
    Proximity(#[from] ProximityError),
    #[error(transparent)]
    Val(#[from] ValError),
    #[error("prime divisors required")]
    NotPrime,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NashStatus {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for NashStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NashStatus::Yes => "YES",
            NashStatus::No => "NO",
            NashStatus::Unknown => "UNKNOWN",
        })
    }
}

/// `λ(E) ≥ λ(F)` obstructs `N̄_F ⊂ N̄_E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElmCheck {
    pub lambda_e: BigInt,
    pub lambda_f: BigInt,
    pub obstructed: bool,
}

/// `λ(E) > λ(F) − k − h` obstructs `N̄_F ⊂ N̄_E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovedCheck {
    pub i: usize,
    pub k: usize,
    pub h: usize,
    pub lambda_e: BigInt,
    pub lambda_f: BigInt,
    pub obstructed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beta1Check {
    NotApplicable { contact: usize, genus: usize },
    Checked { m0_f: u64, beta1: u64, fires: bool },
}

impl Beta1Check {
    pub fn fires(&self) -> bool {
        matches!(self, Beta1Check::Checked { fires: true, .. })
    }
}

/// One tagged finding with its numeric evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    ValuativeFail {
        vertex: Option<usize>,
        lhs: BigInt,
        rhs: BigInt,
    },
    ElmCodim {
        lambda_e: BigInt,
        lambda_f: BigInt,
    },
    ImprovedCodim {
        i: usize,
        k: usize,
        h: usize,
        lambda_e: BigInt,
        lambda_f: BigInt,
    },
    Beta1Obstruction {
        m0_f: u64,
        beta1: u64,
    },
    DominationSufficient,
    ToricSufficient {
        beta: Vec<u64>,
    },
}

impl Finding {
    pub fn tag(&self) -> &'static str {
        match self {
            Finding::ValuativeFail { .. } => "valuative_fail",
            Finding::ElmCodim { .. } => "elm_codim",
            Finding::ImprovedCodim { .. } => "improved_codim",
            Finding::Beta1Obstruction { .. } => "beta1_obstruction",
            Finding::DominationSufficient => "domination_sufficient",
            Finding::ToricSufficient { .. } => "toric_sufficient",
        }
    }

    pub fn is_obstruction(&self) -> bool {
        !matches!(self, Finding::DominationSufficient | Finding::ToricSufficient { .. })
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ValuativeFail { vertex, lhs, rhs } => match vertex {
                Some(v) => write!(f, "valuative inequality fails at E{v}: {lhs} > {rhs}"),
                None => write!(f, "valuative inequality fails at a generic line: {lhs} > {rhs}"),
            },
            Finding::ElmCodim { lambda_e, lambda_f } => {
                write!(f, "codimension obstruction: λ(E)={lambda_e} ≥ λ(F)={lambda_f}")
            }
            Finding::ImprovedCodim {
                i,
                k,
                h,
                lambda_e,
                lambda_f,
            } => write!(
                f,
                "improved codimension obstruction: λ(E)={lambda_e} > λ(F)−k−h={lambda_f}−{k}−{h} (i={i})"
            ),
            Finding::Beta1Obstruction { m0_f, beta1 } => {
                write!(f, "beta1 obstruction: m0(F)={m0_f}=β1+1 with β1={beta1}")
            }
            Finding::DominationSufficient => f.write_str("F dominates E"),
            Finding::ToricSufficient { beta } => {
                write!(f, "toric case: E has one Puiseux pair {beta:?} and ν_E ≤ ν_F")
            }
        }
    }
}

/// Quantities computed for a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashData {
    pub contact: usize,
    pub valuative: ValVerdict,
    pub elm: Option<ElmCheck>,
    pub improved: ImprovedCheck,
    pub beta1: Beta1Check,
    pub char_e: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashVerdict {
    pub status: NashStatus,
    pub reasons: Vec<Finding>,
    pub data: NashData,
}

impl NashVerdict {
    /// One-line report, e.g. `NO (beta1 obstruction: m0(F)=10=β1+1)`.
    pub fn summary(&self) -> String {
        let obstructions: Vec<&Finding> = self.reasons.iter().filter(|r| r.is_obstruction()).collect();
        let shown: Vec<String> = match self.status {
            NashStatus::No => obstructions.iter().map(|r| short(r)).collect(),
            NashStatus::Yes => self.reasons.iter().filter(|r| !r.is_obstruction()).map(short).collect(),
            NashStatus::Unknown => vec!["no obstruction and no sufficient condition".into()],
        };
        format!("{} ({})", self.status, shown.join("; "))
    }
}

fn short(r: &Finding) -> String {
    match r {
        Finding::Beta1Obstruction { m0_f, .. } => format!("beta1 obstruction: m0(F)={m0_f}=β1+1"),
        Finding::ValuativeFail { .. } => "valuative inequality fails".into(),
        Finding::ElmCodim { lambda_e, lambda_f } => format!("codimension: λ(E)={lambda_e} ≥ λ(F)={lambda_f}"),
        Finding::ImprovedCodim {
            k,
            h,
            lambda_e,
            lambda_f,
            ..
        } => {
            format!("improved codimension: λ(E)={lambda_e} > {lambda_f}−{k}−{h}")
        }
        Finding::DominationSufficient => "domination".into(),
        Finding::ToricSufficient { .. } => "toric, one Puiseux pair".into(),
    }
}

fn primes(cfg: &PairConfig) -> Result<(usize, usize), NashError> {
    let e = cfg.left.prime_vertex().map_err(|_| NashError::NotPrime)?;
    let f = cfg.right.prime_vertex().map_err(|_| NashError::NotPrime)?;
    cfg.tree.check_vertex(e)?;
    cfg.tree.check_vertex(f)?;
    Ok((e, f))
}

/// Codimension check: `None` when `E = F`.
pub fn elm_codim_check(cfg: &PairConfig) -> Result<Option<ElmCheck>, NashError> {
    let (e, f) = primes(cfg)?;
    if e == f {
        return Ok(None);
    }
    let l = cfg.tree.log_discrepancies();
    Ok(Some(ElmCheck {
        obstructed: l[e] >= l[f],
        lambda_e: l[e].clone(),
        lambda_f: l[f].clone(),
    }))
}

/// Improved codimension check with `i = Cont(E,F)`, `k` the free points
/// `x_j`, `j ≥ i`, on the chain of `F` and `h = 1` iff the chain of `E` has a
/// free point `x_j`, `j ≥ i`.  Adjacency forces `λ(E) + h ≤ λ(F) − k`, and
/// `λ(E) < λ(F)` when `k = h = 0`.  Vacuous when `E = F`.
pub fn improved_codim_check(cfg: &PairConfig) -> Result<ImprovedCheck, NashError> {
    let (e, f) = primes(cfg)?;
    let t = &cfg.tree;
    let l = t.log_discrepancies();
    let i = t.shared_prefix(e, f);
    let free_from = |v: usize| -> usize {
        t.chain(v)
            .into_iter()
            .enumerate()
            .filter(|&(j, x)| j >= i && j > 0 && t.is_free(x))
            .count()
    };
    let k = free_from(f);
    let h = usize::from(free_from(e) > 0);
    let slack = (k + h).saturating_sub(1);
    let obstructed = e != f && l[e] >= &l[f] - BigInt::from(slack);
    Ok(ImprovedCheck {
        i,
        k,
        h,
        lambda_e: l[e].clone(),
        lambda_f: l[f].clone(),
        obstructed,
    })
}

/// Fires iff `Cont(E,F) = 1` and `m₀(h_F) = β₁(E) + 1`.  Needs `E` of genus at
/// least 2: with one Puiseux pair `ν_E ≤ ν_F` already gives the adjacency.
pub fn beta1_obstruction(cfg: &PairConfig) -> Result<Beta1Check, NashError> {
    let (e, f) = primes(cfg)?;
    let t = &cfg.tree;
    let contact = t.shared_prefix(e, f);
    let ch = char_of_vertex(t, e);
    if contact != 1 || ch.genus() < 2 {
        return Ok(Beta1Check::NotApplicable {
            contact,
            genus: ch.genus(),
        });
    }
    let beta1 = ch.beta()[1];
    let m0_f = t.curvetta_multiplicities(f)[0].to_u64().expect("small multiplicity");
    Ok(Beta1Check::Checked {
        m0_f,
        beta1,
        fires: m0_f == beta1 + 1,
    })
}

/// Aggregates every check into a verdict.
pub fn nash_verdict(cfg: &PairConfig) -> Result<NashVerdict, NashError> {
    let (e, f) = primes(cfg)?;
    let t = &cfg.tree;
    let valuative = val_leq(cfg)?;
    let elm = elm_codim_check(cfg)?;
    let improved = improved_codim_check(cfg)?;
    let beta1 = beta1_obstruction(cfg)?;
    let ch = char_of_vertex(t, e);
    let mut reasons = Vec::new();
    if let Some(i) = valuative.first_failure {
        let c = &valuative.checks[i];
        reasons.push(Finding::ValuativeFail {
            vertex: c.vertex,
            lhs: c.lhs.clone(),
            rhs: c.rhs.clone(),
        });
    }
    if let Some(c) = elm.as_ref().filter(|c| c.obstructed) {
        reasons.push(Finding::ElmCodim {
            lambda_e: c.lambda_e.clone(),
            lambda_f: c.lambda_f.clone(),
        });
    }
    if improved.obstructed {
        reasons.push(Finding::ImprovedCodim {
            i: improved.i,
            k: improved.k,
            h: improved.h,
            lambda_e: improved.lambda_e.clone(),
            lambda_f: improved.lambda_f.clone(),
        });
    }
    if let Beta1Check::Checked {
        m0_f,
        beta1,
        fires: true,
    } = beta1
    {
        reasons.push(Finding::Beta1Obstruction { m0_f, beta1 });
    }
    let obstructed = !reasons.is_empty();
    if t.is_ancestor_or_equal(e, f) {
        reasons.push(Finding::DominationSufficient);
    }
    if t.is_satellite(e) && ch.genus() == 1 && valuative.holds {
        reasons.push(Finding::ToricSufficient {
            beta: ch.beta().to_vec(),
        });
    }
    let sufficient = reasons.iter().any(|r| !r.is_obstruction());
    if obstructed && sufficient {
        return Err(NashError::Inconsistent(format!(
            "obstruction and sufficient condition both hold: {:?}",
            reasons.iter().map(|r| r.tag()).collect::<Vec<_>>()
        )));
    }
    let status = if obstructed {
        NashStatus::No
    } else if sufficient {
        NashStatus::Yes
    } else {
        NashStatus::Unknown
    };
    Ok(NashVerdict {
        status,
        reasons,
        data: NashData {
            contact: t.shared_prefix(e, f),
            valuative,
            elm,
            improved,
            beta1,
            char_e: ch.beta().to_vec(),
        },
    })
}
