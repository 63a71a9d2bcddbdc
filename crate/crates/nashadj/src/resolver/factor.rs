//! Factorisation over Q: modular factorisation, Hensel lifting and
//! recombination of lifted factors.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::qpoly::{QPoly, Q};

/// Monic irreducible factors of a squarefree polynomial over Q.
pub fn factor_squarefree(f: &QPoly) -> Vec<QPoly> {
    let n = f.degree();
    if n <= 1 {
        return if n == 1 { vec![f.monic()] } else { Vec::new() };
    }
    // p(t) = lc^{n-1} f(t/lc) is monic in Z[t].
    let ints = f.primitive_integer();
    let lc = ints[n].clone();
    let mut monic: Vec<BigInt> = (0..n).map(|k| &ints[k] * lc.pow((n - 1 - k) as u32)).collect();
    monic.push(BigInt::one());
    let lcq = Q::from_integer(lc);
    factor_monic_integer(&monic)
        .into_iter()
        .map(|g| QPoly::from_bigints(&g).scale_var(&lcq).monic())
        .collect()
}

fn factor_monic_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let (p, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << (n + 1)) * (norm2.sqrt() + 1u32);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift(f, &modular, p, &modulus);
    recombine(f, lifted, &modulus)
}

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239,
    241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379,
    383, 389, 397, 401, 409, 419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521,
    523, 541, 547, 557, 563, 569, 571, 577, 587, 593, 599, 601, 607, 613, 617, 619, 631, 641, 643, 647, 653, 659, 661,
    673, 677, 683, 691, 701, 709, 719, 727, 733, 739, 743, 751, 757, 761, 769, 773, 787, 797, 809, 811, 821, 823, 827,
    829, 839, 853, 857, 859, 863, 877, 881, 883, 887, 907, 911, 919, 929, 937, 941, 947, 953, 967, 971, 977, 983, 991,
    997,
];

/// Among the first few primes keeping `f` squarefree, the one with the
/// fewest modular factors.
fn choose_prime(f: &[BigInt]) -> (u64, Vec<Vec<u64>>) {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &p in PRIMES {
        let fp = reduce(f, p);
        if fp.len() != f.len() || gcd_p(&fp, &deriv_p(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p);
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    best.expect("some small prime keeps a squarefree polynomial squarefree")
}

fn reduce(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn sub_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn mul_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(v)
}

fn divrem_p(a: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dd = d.len() - 1;
    if a.len() <= dd {
        return (Vec::new(), a.to_vec());
    }
    let inv = inv_mod(d[dd], p);
    let mut r = a.to_vec();
    let mut quot = vec![0u64; a.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = r[k + dd] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &b) in d.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * b % p) % p;
        }
        quot[k] = c;
    }
    r.truncate(dd);
    (trim(quot), trim(r))
}

fn monic_p(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn gcd_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = divrem_p(&a, &b, p).1;
        a = b;
        b = r;
    }
    monic_p(&a, p)
}

fn ext_gcd_p(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (qt, r) = divrem_p(&r0, &r1, p);
        let s = sub_p(&s0, &mul_p(&qt, &s1, p), p);
        let t = sub_p(&t0, &mul_p(&qt, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(r0[r0.len() - 1], p);
    let sc = |v: Vec<u64>| trim(v.into_iter().map(|c| c * inv % p).collect());
    (sc(s0), sc(t0))
}

fn deriv_p(a: &[u64], p: u64) -> Vec<u64> {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| (k as u64 % p) * c % p)
            .collect(),
    )
}

fn powmod_poly(base: &[u64], mut e: BigInt, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = divrem_p(base, m, p).1;
    while e.sign() == Sign::Plus {
        if e.is_odd() {
            r = divrem_p(&mul_p(&r, &b, p), m, p).1;
        }
        b = divrem_p(&mul_p(&b, &b, p), m, p).1;
        e >>= 1u32;
    }
    r
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p.
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0usize;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        h = powmod_poly(&h, BigInt::from(p), &rest, p);
        let g = gcd_p(&rest, &sub_p(&h, &x, p), p);
        if g.len() > 1 {
            equal_degree(&g, d, p, &mut out);
            rest = divrem_p(&rest, &g, p).0;
            h = divrem_p(&h, &rest, p).1;
        }
    }
    out.sort();
    out
}

fn equal_degree(f: &[u64], d: usize, p: u64, out: &mut Vec<Vec<u64>>) {
    if f.len() - 1 == d {
        out.push(f.to_vec());
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(f.len() as u64 * 7919 + p);
    let e = (BigInt::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Vec<u64> = trim((0..f.len() - 1).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = sub_p(&powmod_poly(&a, e.clone(), f, p), &[1], p);
        let g = gcd_p(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem_p(f, &g, p).0;
            equal_degree(&g, d, p, out);
            equal_degree(&monic_p(&h, p), d, p, out);
            return;
        }
    }
}

type ZPoly = Vec<BigInt>;

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmod(v: ZPoly, m: &BigInt) -> ZPoly {
    ztrim(v.into_iter().map(|c| c.mod_floor(m)).collect())
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
            .collect(),
    )
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    ztrim(v)
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let dd = d.len() - 1;
    let mut r = zmod(a.to_vec(), m);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut quot = vec![BigInt::zero(); r.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = r[k + dd].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, b) in d.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * b).mod_floor(m);
        }
        quot[k] = c;
    }
    r.truncate(dd);
    (ztrim(quot), zmod(r, m))
}

fn to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: `f ≡ g h`, `s g + t h ≡ 1` mod `m` become the
/// same relations mod `m²`; `g`, `h` monic.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod(zsub(f, &zmul(g, h)), &m2);
    let (qt, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g2 = zmod(zadd(g, &zadd(&zmul(t, &e), &zmul(&qt, g))), &m2);
    let h2 = zmod(zadd(h, &r), &m2);
    let b = zmod(zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &[BigInt::one()]), &m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, &m2);
    let s2 = zmod(zsub(s, &d), &m2);
    let t2 = zmod(zsub(t, &zadd(&zmul(t, &b), &zmul(&c, &g2))), &m2);
    (g2, h2, s2, t2)
}

fn hensel_lift(f: &[BigInt], facs: &[Vec<u64>], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if facs.len() == 1 {
        return vec![zmod(f.to_vec(), target)];
    }
    let k = facs.len() / 2;
    let prod = |fs: &[Vec<u64>]| fs.iter().fold(vec![1u64], |acc, g| mul_p(&acc, g, p));
    let (g0, h0) = (prod(&facs[..k]), prod(&facs[k..]));
    let (s0, t0) = ext_gcd_p(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (to_z(&g0), to_z(&h0), to_z(&s0), to_z(&t0));
    let mut m = BigInt::from(p);
    while &m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let mut out = hensel_lift(&g, &facs[..k], p, target);
    out.extend(hensel_lift(&h, &facs[k..], p, target));
    out
}

fn symmetric(v: ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2u32;
    ztrim(
        v.into_iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

/// Exact quotient by a monic integer polynomial, if any.
fn zdiv_exact(a: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if a.len() <= dd {
        return None;
    }
    let mut r = a.to_vec();
    let mut quot = vec![BigInt::zero(); r.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, b) in d.iter().enumerate() {
            r[k + j] -= &c * b;
        }
        quot[k] = c;
    }
    if r[..dd].iter().all(|c| c.is_zero()) {
        Some(ztrim(quot))
    } else {
        None
    }
}

fn recombine(f: &[BigInt], mut lifted: Vec<ZPoly>, m: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        for subset in Subsets::new(lifted.len(), size) {
            let cand = subset
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| zmod(zmul(&acc, &lifted[i]), m));
            let cand = symmetric(cand, m);
            if !rest[0].is_zero() && (cand[0].is_zero() || !(&rest[0] % &cand[0]).is_zero()) {
                continue;
            }
            if let Some(quot) = zdiv_exact(&rest, &cand) {
                found = Some((subset, cand, quot));
                break;
            }
        }
        match found {
            Some((subset, cand, quot)) => {
                out.push(cand);
                rest = quot;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    if rest.len() > 1 {
        if rest.last().is_some_and(|c| c.is_negative()) {
            rest.iter_mut().for_each(|c| *c = -c.clone());
        }
        out.push(rest);
    }
    out
}

/// Index subsets of a fixed size in lexicographic order.
struct Subsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            cur: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(f: &QPoly) -> Vec<usize> {
        let mut d: Vec<usize> = factor_squarefree(f).iter().map(|g| g.degree()).collect();
        d.sort();
        d
    }

    #[test]
    fn splits_products() {
        let f = QPoly::from_ints(&[-2, 0, 1])
            .mul(&QPoly::from_ints(&[1, 0, 1]))
            .mul(&QPoly::from_ints(&[-3, 1]));
        assert_eq!(degrees(&f), vec![1, 2, 2]);
        let prod = factor_squarefree(&f).iter().fold(QPoly::one(), |a, g| a.mul(g));
        assert_eq!(prod, f.monic());
    }

    #[test]
    fn irreducible_with_many_modular_factors() {
        // x⁴ + 1 splits modulo every prime.
        assert_eq!(degrees(&QPoly::from_ints(&[1, 0, 0, 0, 1])), vec![4]);
        // Swinnerton-Dyer polynomial of √2, √3.
        assert_eq!(degrees(&QPoly::from_ints(&[1, 0, -10, 0, 1])), vec![4]);
    }

    #[test]
    fn non_monic_input() {
        let f = QPoly::from_ints(&[-1, 2]).mul(&QPoly::from_ints(&[3, 0, 5]));
        assert_eq!(degrees(&f), vec![1, 2]);
    }
}
