//! Sparse plane polynomials with an optional parameter `s`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::bivar::{ytrim, YPoly};
use super::parse::{parse_terms, ParseError};
use super::qpoly::{QPoly, Q};

/// `Σ c_{ij}(s) x^i y^j` with `c_{ij} ∈ Q[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanePoly {
    terms: BTreeMap<(u32, u32), QPoly>,
}

impl PlanePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// From `((i, j), c)` pairs with rational coefficients.
    pub fn from_rational<I: IntoIterator<Item = ((u32, u32), Q)>>(iter: I) -> Self {
        let mut p = PlanePoly::zero();
        for (k, c) in iter {
            p.add_term(k, QPoly::constant(c));
        }
        p
    }

    pub fn from_ints(terms: &[((u32, u32), i64)]) -> Self {
        Self::from_rational(terms.iter().map(|&(k, c)| (k, Q::from_integer(c.into()))))
    }

    fn add_term(&mut self, k: (u32, u32), c: QPoly) {
        let e = self.terms.entry(k).or_insert_with(QPoly::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// Coefficients as polynomials in `s`.
    pub fn terms(&self) -> &BTreeMap<(u32, u32), QPoly> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> QPoly {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(QPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_parameter(&self) -> bool {
        self.terms.values().any(|c| c.degree() > 0)
    }

    /// Order at the origin; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    /// Substitutes `s = value`.
    pub fn specialize(&self, value: &Q) -> PlanePoly {
        Self::from_rational(self.terms.iter().map(|(&k, c)| (k, c.eval(value))))
    }

    /// Rational coefficients; callers must ensure there is no parameter.
    pub fn rational_terms(&self) -> BTreeMap<(u32, u32), Q> {
        self.terms.iter().map(|(&k, c)| (k, c.coeff(0))).collect()
    }

    pub fn add(&self, other: &PlanePoly) -> PlanePoly {
        let mut p = self.clone();
        for (&k, c) in &other.terms {
            p.add_term(k, c.clone());
        }
        p
    }

    pub fn sub(&self, other: &PlanePoly) -> PlanePoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> PlanePoly {
        let mut p = PlanePoly::zero();
        for (&k, v) in &self.terms {
            p.add_term(k, v.scale(c));
        }
        p
    }

    pub fn mul(&self, other: &PlanePoly) -> PlanePoly {
        let mut p = PlanePoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                p.add_term((i + k, j + l), a.mul(b));
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> PlanePoly {
        (0..e).fold(Self::from_ints(&[((0, 0), 1)]), |acc, _| acc.mul(self))
    }

    /// Substitutes `x ↦ a·x + b·y`, `y ↦ c·x + d·y`.
    pub fn linear_change(&self, m: &[[Q; 2]; 2]) -> PlanePoly {
        let x = Self::from_rational([((1, 0), m[0][0].clone()), ((0, 1), m[0][1].clone())]);
        let y = Self::from_rational([((1, 0), m[1][0].clone()), ((0, 1), m[1][1].clone())]);
        let mut out = PlanePoly::zero();
        for (&(i, j), c) in &self.terms {
            let mono = x.pow(i).mul(&y.pow(j));
            for (&k, v) in &mono.terms {
                out.add_term(k, c.mul(v));
            }
        }
        out
    }

    pub fn swap_xy(&self) -> PlanePoly {
        PlanePoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// As a polynomial in `y` over `Q[x]` (parameter-free input).
    pub fn to_ypoly(&self) -> YPoly {
        let mut v = vec![QPoly::zero(); self.degree_y() as usize + 1];
        for (&(i, j), c) in &self.terms {
            v[j as usize] = v[j as usize].add(&QPoly::monomial(c.coeff(0), i as usize));
        }
        ytrim(v)
    }

    pub fn from_ypoly(p: &[QPoly]) -> PlanePoly {
        Self::from_rational(
            p.iter()
                .enumerate()
                .flat_map(|(j, c)| {
                    c.coeffs()
                        .iter()
                        .enumerate()
                        .map(move |(i, a)| ((i as u32, j as u32), a.clone()))
                })
                .filter(|(_, a)| !a.is_zero()),
        )
    }

    /// Integer primitive multiple whose first term in display order is
    /// positive.
    pub fn normalized(&self) -> PlanePoly {
        let flat = self.flat_terms();
        if flat.is_empty() {
            return self.clone();
        }
        let den = flat.iter().fold(BigInt::one(), |l, t| l.lcm(t.3.denom()));
        let num = flat
            .iter()
            .fold(BigInt::zero(), |g, t| g.gcd(&(t.3.numer() * (&den / t.3.denom()))));
        let mut c = Q::new(den, num);
        if flat[0].3.is_negative() {
            c = -c;
        }
        self.scale(&c)
    }

    /// `(i, j, k, c)` for `c·x^i y^j s^k`, in display order.
    fn flat_terms(&self) -> Vec<(u32, u32, u32, Q)> {
        let mut v: Vec<(u32, u32, u32, Q)> = self
            .terms
            .iter()
            .flat_map(|(&(i, j), c)| {
                c.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(move |(k, a)| (i, j, k as u32, a.clone()))
            })
            .collect();
        v.sort_by_key(|&(i, j, k, _)| (i + j, j, k));
        v
    }
}

impl fmt::Display for PlanePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat = self.flat_terms();
        if flat.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, j, k, c)) in flat.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            for (name, e) in [("s", k), ("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() || !a.is_one() {
                factors.insert(0, a.to_string());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for PlanePoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_curve(s)
    }
}

/// Parses an expression over `x`, `y` and the parameter `s`.
pub fn parse_curve(text: &str) -> Result<PlanePoly, ParseError> {
    let mut p = PlanePoly::zero();
    for ((i, j, k), c) in parse_terms(text)? {
        p.add_term((i, j), QPoly::monomial(c, k as usize));
    }
    Ok(p)
}
