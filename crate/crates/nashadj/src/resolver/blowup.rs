//! Embedded resolution by point blow-ups over number fields.
//!
//! At every infinitely near point the local equation is kept in coordinates
//! where `x = 0` is the exceptional divisor the point lies on and, for
//! satellite points, `y = 0` is the second one.  Tangent directions are read
//! off the tangent cone: `x = 0` leads to a satellite point proximate to the
//! grandparent, `y = 0` to a satellite point proximate to the parent's extra
//! divisor (or a free point), every other root `t₀` of the dehomogenised cone
//! to a free point.  Conjugate roots are followed once and replicated.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::field::{Elem, KFactor, NumberField};
use super::qpoly::{q, QPoly, Q};
use crate::proximity::{PointKind, ProximityTree};

/// Sparse bivariate polynomial over a number field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPoly {
    pub terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn from_rational(terms: &BTreeMap<(u32, u32), Q>) -> Self {
        BiPoly {
            terms: terms
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&k, c)| (k, QPoly::constant(c.clone())))
                .collect(),
        }
    }

    /// Order at the origin.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    fn map(&self, from: &NumberField, to: &NumberField, image: &Elem) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, from.embed(c, to, image))).collect(),
        }
    }

    /// Strict transform in the chart `y = x(y₁ + t₀)`.
    fn chart(&self, k: &NumberField, m: u32, t0: Option<&Elem>) -> BiPoly {
        let mut out: BTreeMap<(u32, u32), Elem> = BTreeMap::new();
        let maxj = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0) as usize;
        let pows: Vec<Elem> = match t0 {
            Some(t) => {
                let mut v = vec![QPoly::one()];
                for _ in 0..maxj {
                    v.push(k.mul(v.last().unwrap(), t));
                }
                v
            }
            None => Vec::new(),
        };
        for (&(i, j), c) in &self.terms {
            let nx = i + j - m;
            match t0 {
                None => add_term(&mut out, (nx, j), c.clone()),
                Some(_) => {
                    let mut binom = Q::from_integer(1.into());
                    for l in 0..=j {
                        // C(j, l) t₀^{j-l} y₁^l
                        let coef = k.mul(c, &pows[(j - l) as usize]).scale(&binom);
                        add_term(&mut out, (nx, l), coef);
                        binom = binom * q((j - l) as i64) / q(l as i64 + 1);
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        BiPoly { terms: out }
    }

    /// Strict transform in the chart `x = x₁ y`, renamed so that the new
    /// exceptional divisor is `x = 0`.
    fn chart_infinity(&self, m: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + j - m, i), c.clone()))
                .collect(),
        }
    }
}

fn add_term(out: &mut BTreeMap<(u32, u32), Elem>, key: (u32, u32), c: Elem) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(key).or_insert_with(QPoly::zero);
    *e = e.add(&c);
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupError {
    DegreeExceeded {
        needed: usize,
        bound: usize,
        vertices: usize,
        branches: usize,
    },
    TooManyPoints(usize),
    NotThroughOrigin,
    Zero,
}

/// A blown-up point, replicated `copies` times under each copy of its parent.
#[derive(Debug, Clone)]
struct Node {
    kind: PointKind,
    copies: usize,
    /// Branches leaving through free points of this divisor, per copy.
    ends: usize,
    children: Vec<usize>,
}

/// Output of the blow-up process with conjugates expanded.
#[derive(Debug, Clone)]
pub struct Resolution {
    pub tree: ProximityTree,
    /// Vertex whose divisor each branch meets transversally.
    pub ends: Vec<usize>,
    /// Number of conjugate copies each branch was generated with.
    pub orbit: Vec<usize>,
    pub max_field_degree: usize,
}

pub struct Engine {
    bound: usize,
    max_points: usize,
    nodes: Vec<Node>,
    max_field_degree: usize,
}

impl Engine {
    pub fn new(bound: usize) -> Self {
        Engine {
            bound,
            max_points: 4000,
            nodes: Vec::new(),
            max_field_degree: 1,
        }
    }

    pub fn run(mut self, f: &BiPoly) -> Result<Resolution, BlowupError> {
        match f.ord() {
            None => return Err(BlowupError::Zero),
            Some(0) => return Err(BlowupError::NotThroughOrigin),
            _ => {}
        }
        self.visit(&NumberField::rationals(), f, None, PointKind::Root, 1, false)?;
        Ok(self.expand())
    }

    fn partial(&self, needed: usize) -> BlowupError {
        BlowupError::DegreeExceeded {
            needed,
            bound: self.bound,
            vertices: self.nodes.len(),
            branches: self.nodes.iter().map(|n| n.ends).sum(),
        }
    }

    fn visit(
        &mut self,
        k: &NumberField,
        f: &BiPoly,
        parent: Option<usize>,
        kind: PointKind,
        copies: usize,
        y_div: bool,
    ) -> Result<(), BlowupError> {
        let m = f.ord().expect("strict transform passes through the point");
        if let Some(p) = parent {
            let transversal = f.terms.get(&(0, 1)).is_some_and(|c| !c.is_zero());
            if m == 1 && !y_div && transversal {
                self.nodes[p].ends += copies;
                return Ok(());
            }
        }
        if self.nodes.len() >= self.max_points {
            return Err(BlowupError::TooManyPoints(self.max_points));
        }
        let v = self.nodes.len();
        self.nodes.push(Node {
            kind,
            copies,
            ends: 0,
            children: Vec::new(),
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(v);
        }
        // Tangent cone as a polynomial in t = y/x.
        let cone: Vec<Elem> = (0..=m)
            .map(|j| f.terms.get(&(m - j, j)).cloned().unwrap_or_else(QPoly::zero))
            .collect();
        let cone = k.ptrim(cone);
        let at_infinity = m as usize + 1 - cone.len();
        let at_zero = cone.iter().position(|c| !c.is_zero()).unwrap();
        let rest: Vec<Elem> = cone[at_zero..].to_vec();
        let mut accounted = at_infinity + at_zero;
        if at_infinity > 0 {
            let g = f.chart_infinity(m);
            let (kind, yd) = if parent.is_some() {
                (PointKind::SatelliteGrand, true)
            } else {
                (PointKind::Free, false)
            };
            self.visit(k, &g, Some(v), kind, 1, yd)?;
        }
        if at_zero > 0 {
            let g = f.chart(k, m, None);
            let kind = if y_div {
                PointKind::SatelliteExtra
            } else {
                PointKind::Free
            };
            self.visit(k, &g, Some(v), kind, 1, y_div)?;
        }
        for (part, e) in k.squarefree(&rest) {
            for fac in k.factor(&part) {
                let d = fac.degree();
                accounted += d * e;
                if e == 1 {
                    self.nodes[v].ends += d;
                } else if d == 1 {
                    let t0 = fac.poly[0].neg();
                    let g = f.chart(k, m, Some(&t0));
                    self.visit(k, &g, Some(v), PointKind::Free, 1, false)?;
                } else {
                    self.descend(k, f, m, v, &fac)?;
                }
            }
        }
        debug_assert_eq!(accounted, m as usize);
        Ok(())
    }

    fn descend(&mut self, k: &NumberField, f: &BiPoly, m: u32, v: usize, fac: &KFactor) -> Result<(), BlowupError> {
        let needed = k.degree() * fac.degree();
        if needed > self.bound {
            return Err(self.partial(needed));
        }
        self.max_field_degree = self.max_field_degree.max(needed);
        let (big, theta, t0) = k.extend(fac);
        let g = f.map(k, &big, &theta).chart(&big, m, Some(&t0));
        self.visit(&big, &g, Some(v), PointKind::Free, fac.degree(), false)
    }

    fn expand(&self) -> Resolution {
        let mut tree = ProximityTree::root_only();
        let mut ends = Vec::new();
        let mut orbit = Vec::new();
        let mut stack: Vec<(usize, usize, usize)> = vec![(0, 0, 1)];
        while let Some((node, geo, orb)) = stack.pop() {
            let n = &self.nodes[node];
            for _ in 0..n.ends {
                ends.push(geo);
                orbit.push(orb);
            }
            for &c in n.children.iter().rev() {
                let child = &self.nodes[c];
                for _ in 0..child.copies {
                    let g = tree.push_kind(geo, child.kind).expect("legal blow-up point");
                    stack.push((c, g, orb * child.copies));
                }
            }
        }
        Resolution {
            tree,
            ends,
            orbit,
            max_field_degree: self.max_field_degree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[((u32, u32), i64)]) -> BiPoly {
        BiPoly::from_rational(&terms.iter().map(|&(k, c)| (k, q(c))).collect())
    }

    #[test]
    fn cusp() {
        let r = Engine::new(16).run(&poly(&[((0, 2), 1), ((3, 0), -1)])).unwrap();
        assert_eq!(r.tree.len(), 3);
        assert_eq!(r.ends, vec![2]);
    }

    #[test]
    fn node_over_q_and_over_extension() {
        let r = Engine::new(16).run(&poly(&[((1, 1), 1)])).unwrap();
        assert_eq!((r.tree.len(), r.ends.clone()), (1, vec![0, 0]));
        let r = Engine::new(16).run(&poly(&[((2, 0), 1), ((0, 2), 1)])).unwrap();
        assert_eq!((r.tree.len(), r.ends.clone()), (1, vec![0, 0]));
    }

    #[test]
    fn conjugate_tacnodes() {
        // (y² − 2x²)² + x⁵ needs √2.
        let r = Engine::new(16)
            .run(&poly(&[((0, 4), 1), ((2, 2), -4), ((4, 0), 4), ((5, 0), 1)]))
            .unwrap();
        assert_eq!(r.max_field_degree, 2);
        assert_eq!(r.ends.len(), 2);
        assert_eq!(r.orbit, vec![2, 2]);
    }
}
