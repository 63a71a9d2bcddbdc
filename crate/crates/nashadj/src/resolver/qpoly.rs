//! Dense univariate polynomials over Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Coefficients from degree 0 upwards, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<Q>);

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly[{}]", self)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl QPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: Q, k: usize) -> Self {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`, for bounds.
    pub fn degree(&self) -> usize {
        self.deg().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        QPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Keeps the terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.0.iter().take(n).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Q::zero(); k];
        v.extend(self.0.iter().cloned());
        QPoly(v)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.0.len() - 1;
        let inv = d.lc().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                r[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        r.truncate(dd);
        (Self::new(quot), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            let s = s0.sub(&qt.mul(&s1));
            let t = t0.sub(&qt.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// Yun's algorithm: monic `(a_i, i)` with `self = lc · Π a_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.divrem(&a0).0;
        let mut c = d.divrem(&a0).0;
        let mut dd = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&dd);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            c = dd.divrem(&a).0;
            dd = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// `p(t + c)`.
    pub fn taylor_shift(&self, c: &Q) -> Self {
        let lin = QPoly::new(vec![c.clone(), Q::one()]);
        self.0
            .iter()
            .rev()
            .fold(Self::zero(), |acc, a| acc.mul(&lin).add(&Self::constant(a.clone())))
    }

    /// `p(λ·t)`.
    pub fn scale_var(&self, l: &Q) -> Self {
        let mut pw = Q::one();
        let mut v = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            v.push(c * &pw);
            pw *= l;
        }
        Self::new(v)
    }

    /// Integer primitive multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let den = self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let mut out: Vec<BigInt> = ints.into_iter().map(|c| c / &g).collect();
        if out.last().is_some_and(|c| c.is_negative()) {
            out.iter_mut().for_each(|c| *c = -c.clone());
        }
        out
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| Q::from_integer(x.clone())).collect())
    }
}

/// Resultant by the Euclidean remainder sequence.
pub fn resultant(a: &QPoly, b: &QPoly) -> Q {
    if a.is_zero() || b.is_zero() {
        return Q::zero();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = Q::one();
    loop {
        let (da, db) = (a.degree(), b.degree());
        if db == 0 {
            return acc * num_traits::pow(b.lc(), da);
        }
        if da == 0 {
            return acc * num_traits::pow(a.lc(), db);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Q::zero();
        }
        let dr = r.degree();
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.lc(), da - dr);
        a = b;
        b = r;
    }
}

/// Newton interpolation through `(x_i, y_i)`.
pub fn interpolate(points: &[(Q, Q)]) -> QPoly {
    let n = points.len();
    let mut coef: Vec<Q> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    let mut out = QPoly::zero();
    for i in (0..n).rev() {
        let lin = QPoly::new(vec![-points[i].0.clone(), Q::one()]);
        out = out.mul(&lin).add(&QPoly::constant(coef[i].clone()));
    }
    out
}
