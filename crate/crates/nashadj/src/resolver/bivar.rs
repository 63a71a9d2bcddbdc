//! Polynomials in `y` with coefficients in `Q[x]`.

use num_traits::{One, Zero};

use super::qpoly::{interpolate, q, resultant, QPoly, Q};

/// Index `j` holds the coefficient of `y^j`.
pub type YPoly = Vec<QPoly>;

pub fn ytrim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn yadd(a: &[QPoly], b: &[QPoly]) -> YPoly {
    let n = a.len().max(b.len());
    let z = QPoly::zero();
    ytrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

pub fn ysub(a: &[QPoly], b: &[QPoly]) -> YPoly {
    let n = a.len().max(b.len());
    let z = QPoly::zero();
    ytrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
            .collect(),
    )
}

pub fn ymul(a: &[QPoly], b: &[QPoly]) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![QPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] = v[i + j].add(&x.mul(y));
        }
    }
    ytrim(v)
}

pub fn yscale(a: &[QPoly], c: &QPoly) -> YPoly {
    ytrim(a.iter().map(|x| x.mul(c)).collect())
}

/// Drops every `x^k`, `k ≥ n`.
pub fn ytruncate(a: &[QPoly], n: usize) -> YPoly {
    ytrim(a.iter().map(|c| c.truncate(n)).collect())
}

pub fn dy(a: &[QPoly]) -> YPoly {
    ytrim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.scale(&q(j as i64)))
            .collect(),
    )
}

pub fn dx(a: &[QPoly]) -> YPoly {
    ytrim(a.iter().map(|c| c.derivative()).collect())
}

fn content(a: &[QPoly]) -> QPoly {
    a.iter().fold(QPoly::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &[QPoly]) -> YPoly {
    let c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    ytrim(a.iter().map(|x| x.divrem(&c).0).collect())
}

/// Pseudo-remainder of `a` by `b` in `Q[x][y]`.
fn prem(a: &[QPoly], b: &[QPoly]) -> YPoly {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let mut next: YPoly = r.iter().map(|c| c.mul(lb)).collect();
        for (j, c) in b.iter().enumerate() {
            next[dr - db + j] = next[dr - db + j].sub(&c.mul(&lr));
        }
        next.pop();
        r = ytrim(next);
    }
    r
}

/// Gcd in `Q[x][y]`, normalised to a monic content and primitive part.
pub fn ygcd(a: &[QPoly], b: &[QPoly]) -> YPoly {
    let (a, b) = (ytrim(a.to_vec()), ytrim(b.to_vec()));
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let c = content(&a).gcd(&content(&b));
    let (mut u, mut v) = (primitive(&a), primitive(&b));
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    while v.len() > 1 {
        let r = prem(&u, &v);
        u = v;
        v = if r.is_empty() { Vec::new() } else { primitive(&r) };
    }
    let g = if v.is_empty() { u } else { vec![QPoly::one()] };
    let lcx = g.last().unwrap().lc();
    yscale(&g, &c.scale(&lcx.recip()))
}

/// Exact quotient in `Q[x][y]`, if it exists.
pub fn ydiv_exact(a: &[QPoly], b: &[QPoly]) -> Option<YPoly> {
    let db = b.len() - 1;
    let mut r = ytrim(a.to_vec());
    if r.len() < b.len() {
        return r.is_empty().then(Vec::new);
    }
    let mut quot = vec![QPoly::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let (c, rem) = r[dr].divrem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] = r[dr - db + j].sub(&c.mul(bj));
        }
        quot[dr - db] = c;
        r = ytrim(r);
        if r.len() > dr {
            return None;
        }
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(ytrim(quot))
    } else {
        None
    }
}

/// `gcd(f, ∂f/∂x, ∂f/∂y)`: the product of repeated factors with
/// multiplicity lowered by one.
pub fn repeated_part(f: &[QPoly]) -> YPoly {
    let g = ygcd(f, &dy(f));
    ygcd(&g, &dx(f))
}

pub fn is_constant(a: &[QPoly]) -> bool {
    a.len() <= 1 && a.first().is_none_or(|c| c.degree() == 0)
}

pub fn eval_origin(a: &[QPoly]) -> Q {
    a.first().map(|c| c.coeff(0)).unwrap_or_else(Q::zero)
}

/// Evaluates every coefficient at `x = a`.
fn at_x(p: &[QPoly], a: &Q) -> QPoly {
    QPoly::new(p.iter().map(|c| c.eval(a)).collect())
}

/// `Res_y(a, b)` as a polynomial in `x`, for `a`, `b` monic in `y`.
pub fn resultant_y(a: &[QPoly], b: &[QPoly]) -> QPoly {
    let degx = |p: &[QPoly]| p.iter().map(|c| c.degree()).max().unwrap_or(0);
    let bound = (a.len() - 1) * degx(b) + (b.len() - 1) * degx(a);
    let pts: Vec<(Q, Q)> = (1..=bound as i64 + 1)
        .map(|k| (q(k), resultant(&at_x(a, &q(k)), &at_x(b, &q(k)))))
        .collect();
    interpolate(&pts)
}

/// Weierstrass preparation modulo `x^n`: the monic `P` of degree `m` in `y`
/// with `f = u·P`, `u(0,0) ≠ 0`, where `m` is the order of `f(0, y)`.
pub fn weierstrass(f: &[QPoly], n: usize) -> Option<YPoly> {
    // Series in x whose coefficients are polynomials in y.
    let xdeg = f.iter().map(|c| c.degree()).max().unwrap_or(0);
    let fx: Vec<QPoly> = (0..n.max(xdeg + 1))
        .map(|i| QPoly::new(f.iter().map(|c| c.coeff(i)).collect()))
        .collect();
    let f0 = &fx[0];
    let m = f0.ord()?;
    let v0 = QPoly::new(f0.coeffs()[m..].to_vec());
    let ym = QPoly::monomial(Q::one(), m);
    let (g, s, t) = ym.ext_gcd(&v0);
    if g != QPoly::one() {
        return None;
    }
    let mut p = vec![ym.clone()];
    let mut u = vec![v0];
    for i in 1..n {
        let mut e = fx.get(i).cloned().unwrap_or_else(QPoly::zero);
        for a in 0..=i {
            if let (Some(pa), Some(ub)) = (p.get(a), u.get(i - a)) {
                e = e.sub(&pa.mul(ub));
            }
        }
        let (qq, dp) = e.mul(&t).divrem(&ym);
        let du = e.mul(&s).add(&qq.mul(&u[0]));
        p.push(dp);
        u.push(du);
    }
    // Back to coefficients in x.
    let mut out: YPoly = vec![QPoly::zero(); m + 1];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = QPoly::new(p.iter().map(|pi| pi.coeff(j)).collect());
    }
    Some(ytrim(out))
}

/// Quotient and remainder by a `y`-monic divisor, truncated mod `x^n`.
fn ydivrem_monic(a: &[QPoly], d: &[QPoly], n: usize) -> (YPoly, YPoly) {
    let dd = d.len() - 1;
    let mut r = ytruncate(a, n);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut quot = vec![QPoly::zero(); r.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = r.get(k + dd).cloned().unwrap_or_else(QPoly::zero);
        if c.is_zero() {
            continue;
        }
        for (j, b) in d.iter().enumerate() {
            r[k + j] = r[k + j].sub(&c.mul(b)).truncate(n);
        }
        quot[k] = c;
    }
    r.truncate(dd);
    (ytrim(quot), ytrim(r))
}

/// The `e`-th approximate root of a `y`-monic `p`, computed modulo `x^n`
/// (`n = usize::MAX` for exact polynomial arithmetic).
pub fn approximate_root(p: &[QPoly], e: usize, n: usize) -> Option<YPoly> {
    let d = p.len() - 1;
    if e == 0 || !d.is_multiple_of(e) || p[d] != QPoly::one() {
        return None;
    }
    if e == 1 {
        return Some(ytruncate(p, n));
    }
    let k = d / e;
    let mut root: YPoly = vec![QPoly::zero(); k];
    root.push(QPoly::one());
    for _ in 0..=d + 1 {
        // p = Σ a_i root^i with deg a_i < k; Tschirnhausen step on a_{e-1}.
        let mut rest = ytruncate(p, n);
        let mut digits = Vec::with_capacity(e + 1);
        while !rest.is_empty() {
            let (quot, rem) = ydivrem_monic(&rest, &root, n);
            digits.push(rem);
            rest = quot;
        }
        let a = digits.get(e - 1).cloned().unwrap_or_default();
        if a.is_empty() {
            return Some(root);
        }
        root = ytruncate(&yadd(&root, &yscale(&a, &QPoly::constant(q(e as i64).recip()))), n);
    }
    None
}

pub fn ypow(a: &[QPoly], e: usize, n: usize) -> YPoly {
    (0..e).fold(vec![QPoly::one()], |acc, _| ytruncate(&ymul(&acc, a), n))
}
