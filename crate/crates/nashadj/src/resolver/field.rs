//! Simple algebraic extensions `Q(θ)` and polynomials over them.

use super::factor::factor_squarefree;
use super::qpoly::{interpolate, q, resultant, QPoly, Q};

/// `Q[θ]/(m)` with `m` monic irreducible; elements are reduced `QPoly`s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberField {
    pub minpoly: QPoly,
}

pub type Elem = QPoly;
pub type KPoly = Vec<Elem>;

impl NumberField {
    pub fn rationals() -> Self {
        NumberField {
            minpoly: QPoly::from_ints(&[0, 1]),
        }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn theta(&self) -> Elem {
        QPoly::from_ints(&[0, 1]).rem(&self.minpoly)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if self.degree() == 1 {
            return QPoly::constant(a.coeff(0) * b.coeff(0));
        }
        a.mul(b).rem(&self.minpoly)
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        if self.degree() == 1 {
            return QPoly::constant(a.coeff(0).recip());
        }
        let (g, s, _) = a.ext_gcd(&self.minpoly);
        debug_assert_eq!(g, QPoly::one());
        s.rem(&self.minpoly)
    }

    /// `N_{K/Q}(a)`.
    pub fn norm(&self, a: &Elem) -> Q {
        if self.degree() == 1 {
            return a.coeff(0);
        }
        resultant(&self.minpoly, a)
    }

    pub fn ptrim(&self, mut p: KPoly) -> KPoly {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn padd(&self, a: &[Elem], b: &[Elem]) -> KPoly {
        let n = a.len().max(b.len());
        let z = QPoly::zero();
        self.ptrim(
            (0..n)
                .map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn psub(&self, a: &[Elem], b: &[Elem]) -> KPoly {
        let n = a.len().max(b.len());
        let z = QPoly::zero();
        self.ptrim(
            (0..n)
                .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn pmul(&self, a: &[Elem], b: &[Elem]) -> KPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![QPoly::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] = v[i + j].add(&self.mul(x, y));
            }
        }
        self.ptrim(v)
    }

    pub fn pscale(&self, a: &[Elem], c: &Elem) -> KPoly {
        self.ptrim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn pdivrem(&self, a: &[Elem], d: &[Elem]) -> (KPoly, KPoly) {
        let dd = d.len() - 1;
        if a.len() <= dd {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(&d[dd]);
        let mut r = a.to_vec();
        let mut quot = vec![QPoly::zero(); a.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = self.mul(&r[k + dd], &inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.iter().enumerate() {
                r[k + j] = r[k + j].sub(&self.mul(&c, b));
            }
            quot[k] = c;
        }
        r.truncate(dd);
        (self.ptrim(quot), self.ptrim(r))
    }

    pub fn pmonic(&self, a: &[Elem]) -> KPoly {
        match a.last() {
            None => Vec::new(),
            Some(l) => self.pscale(a, &self.inv(l)),
        }
    }

    pub fn pgcd(&self, a: &[Elem], b: &[Elem]) -> KPoly {
        let (mut a, mut b) = (self.ptrim(a.to_vec()), self.ptrim(b.to_vec()));
        while !b.is_empty() {
            let r = self.pdivrem(&a, &b).1;
            a = b;
            b = self.pmonic(&r);
        }
        self.pmonic(&a)
    }

    pub fn pderiv(&self, a: &[Elem]) -> KPoly {
        self.ptrim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&q(k as i64)))
                .collect(),
        )
    }

    pub fn peval(&self, a: &[Elem], x: &Elem) -> Elem {
        a.iter().rev().fold(QPoly::zero(), |acc, c| self.mul(&acc, x).add(c))
    }

    /// `p(t + c)`.
    pub fn pshift(&self, a: &[Elem], c: &Elem) -> KPoly {
        let lin = vec![c.clone(), QPoly::one()];
        a.iter().rev().fold(Vec::new(), |acc, x| {
            self.padd(&self.pmul(&acc, &lin), std::slice::from_ref(x))
        })
    }

    /// Yun's squarefree decomposition over `K`: monic `(a_i, i)`.
    pub fn squarefree(&self, f: &[Elem]) -> Vec<(KPoly, usize)> {
        let mut out = Vec::new();
        if f.len() <= 1 {
            return out;
        }
        let f = self.pmonic(f);
        let d = self.pderiv(&f);
        let a0 = self.pgcd(&f, &d);
        let mut b = self.pdivrem(&f, &a0).0;
        let mut c = self.pdivrem(&d, &a0).0;
        let mut dd = self.psub(&c, &self.pderiv(&b));
        let mut i = 1;
        while b.len() > 1 {
            let a = self.pgcd(&b, &dd);
            if a.len() > 1 {
                out.push((a.clone(), i));
            }
            b = self.pdivrem(&b, &a).0;
            c = self.pdivrem(&dd, &a).0;
            dd = self.psub(&c, &self.pderiv(&b));
            i += 1;
        }
        out
    }

    /// `N(t) = N_{K/Q}(g(t − cθ))`, by evaluation and interpolation.
    fn shifted_norm(&self, g: &[Elem], c: i64) -> QPoly {
        let shift = self.theta().scale(&q(-c));
        let h = self.pshift(g, &shift);
        let n = self.degree() * (h.len() - 1);
        let pts: Vec<(Q, Q)> = (0..=n as i64)
            .map(|a| {
                let v = self.peval(&h, &QPoly::constant(q(a)));
                (q(a), self.norm(&v))
            })
            .collect();
        interpolate(&pts)
    }

    /// Irreducible factors of a monic squarefree `g` over `K` (Trager).
    pub fn factor(&self, g: &[Elem]) -> Vec<KFactor> {
        if g.len() <= 1 {
            return Vec::new();
        }
        if self.degree() == 1 {
            let gq = QPoly::new(g.iter().map(|c| c.coeff(0)).collect());
            return factor_squarefree(&gq)
                .into_iter()
                .map(|f| KFactor {
                    poly: f.coeffs().iter().map(|c| QPoly::constant(c.clone())).collect(),
                    norm: f,
                    shift: 0,
                })
                .collect();
        }
        if g.len() == 2 {
            return vec![KFactor {
                poly: self.pmonic(g),
                norm: QPoly::zero(),
                shift: 0,
            }];
        }
        for c in shifts() {
            let n = self.shifted_norm(g, c);
            if !n.is_squarefree() {
                continue;
            }
            let sh = self.theta().scale(&q(c));
            return factor_squarefree(&n)
                .into_iter()
                .map(|ni| {
                    let lifted: KPoly = ni.coeffs().iter().map(|a| QPoly::constant(a.clone())).collect();
                    let back = self.pshift(&lifted, &sh);
                    KFactor {
                        poly: self.pgcd(g, &back),
                        norm: ni,
                        shift: c,
                    }
                })
                .collect();
        }
        unreachable!("some shift makes the norm squarefree")
    }

    /// `K(t₀)` for a root `t₀` of an irreducible factor: the new field, the
    /// image of `θ` and the image of `t₀`.
    pub fn extend(&self, fac: &KFactor) -> (NumberField, Elem, Elem) {
        let big = NumberField {
            minpoly: fac.norm.monic(),
        };
        let alpha = big.theta();
        if self.degree() == 1 {
            return (big, QPoly::zero(), alpha);
        }
        // θ is the common root of m(z) and g̃(z, α − c z).
        let c = q(fac.shift);
        let lin: KPoly = vec![alpha.clone(), QPoly::constant(-c.clone())];
        let mut gz: KPoly = Vec::new();
        let mut pw: KPoly = vec![QPoly::one()];
        for coef in &fac.poly {
            let cz: KPoly = coef.coeffs().iter().map(|a| QPoly::constant(a.clone())).collect();
            gz = big.padd(&gz, &big.pmul(&cz, &pw));
            pw = big.pmul(&pw, &lin);
        }
        let mz: KPoly = self
            .minpoly
            .coeffs()
            .iter()
            .map(|a| QPoly::constant(a.clone()))
            .collect();
        let lin_gcd = big.pgcd(&mz, &gz);
        assert_eq!(lin_gcd.len(), 2, "primitive element computation");
        let theta = lin_gcd[0].neg();
        let t0 = alpha.sub(&theta.scale(&c)).rem(&big.minpoly);
        (big, theta, t0)
    }

    /// Image of an element under `θ ↦ image`.
    pub fn embed(&self, a: &Elem, target: &NumberField, image: &Elem) -> Elem {
        a.coeffs().iter().rev().fold(QPoly::zero(), |acc, c| {
            target.mul(&acc, image).add(&QPoly::constant(c.clone()))
        })
    }
}

/// An irreducible factor over `K`, with the norm `N(t)` of `poly(t − shift·θ)`
/// that is the minimal polynomial of `t₀ + shift·θ`.  Linear factors over a
/// proper extension carry no norm.
#[derive(Debug, Clone)]
pub struct KFactor {
    pub poly: KPoly,
    pub norm: QPoly,
    pub shift: i64,
}

impl KFactor {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }
}

fn shifts() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k: i64| if k == 0 { vec![0] } else { vec![k, -k] })
}
