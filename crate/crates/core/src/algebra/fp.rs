//! Word-size prime field arithmetic and the multimodular lifting shared by
//! the modular gcd and the modular elimination.
//!
//! Polynomials over F_p are plain `Vec<u64>`, low degree first, with no
//! trailing zeros. All primes are below 2^31, so products fit in a `u64`.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::Cyclotomic;
use super::ring::Q;

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime p = 1 (mod N), so that Q(zeta_N) maps onto F_p in phi(N) ways.
#[derive(Clone, Debug)]
pub struct SplitPrime {
    pub p: u64,
    pub conductor: u32,
    /// Images of zeta, one per unit k mod N.
    pub roots: Vec<u64>,
    /// Inverse Vandermonde matrix of `roots`: turns embedding values into
    /// power-basis coordinates.
    vinv: Vec<Vec<u64>>,
}

impl SplitPrime {
    fn new(p: u64, n: u32) -> Option<Self> {
        let qs = prime_factors(n as u64);
        let w = (2..p)
            .map(|g| pow_mod(g, (p - 1) / n as u64, p))
            .find(|&w| qs.iter().all(|q| pow_mod(w, n as u64 / q, p) != 1))?;
        let roots: Vec<u64> = (1..=n as u64).filter(|k| k.gcd(&(n as u64)) == 1).map(|k| pow_mod(w, k, p)).collect();
        let phi = roots.len();
        let vander: Vec<Vec<u64>> =
            roots.iter().map(|&r| (0..phi).map(|i| pow_mod(r, i as u64, p)).collect()).collect();
        let vinv = mat_inv(&vander, p)?;
        Some(SplitPrime { p, conductor: n, roots, vinv })
    }

    /// Image of a rational number, `None` if p divides the denominator.
    pub fn rational(&self, q: &Q) -> Option<u64> {
        let pb = BigInt::from(self.p);
        let d = q.denom().mod_floor(&pb).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(q.numer().mod_floor(&pb).to_u64()? * inv(d, self.p) % self.p)
    }

    /// Image of `c` under the embedding with index `k` (into `roots`).
    pub fn embed(&self, c: &Cyclotomic, k: usize) -> Option<u64> {
        let c = c.lift(self.conductor);
        let r = self.roots[k];
        let mut acc = 0u64;
        for x in c.coords().iter().rev() {
            acc = (acc * r + self.rational(x)?) % self.p;
        }
        Some(acc)
    }

    /// Power-basis coordinates from the values under every embedding.
    pub fn coords(&self, values: &[u64]) -> Vec<u64> {
        self.vinv.iter().map(|row| row.iter().zip(values).fold(0u64, |acc, (a, b)| (acc + a * b) % self.p)).collect()
    }
}

/// Split primes for conductor `n`, largest first.
pub fn split_primes(n: u32) -> impl Iterator<Item = SplitPrime> {
    let n64 = n as u64;
    let top = (1u64 << 31) - 1;
    let start = top - (top - 1) % n64;
    (0..)
        .map(move |k| start - k * n64)
        .take_while(|&p| p > 1 << 20)
        .filter(|&p| is_prime(p))
        .filter_map(move |p| SplitPrime::new(p, n))
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    trim(&mut a);
    let dm = m.len() - 1;
    let li = inv(*m.last().expect("nonzero modulus"), p);
    while a.len() > dm {
        let c = a.last().unwrap() * li % p;
        let shift = a.len() - 1 - dm;
        for (j, mj) in m.iter().enumerate() {
            a[shift + j] = (a[shift + j] + p - c * mj % p) % p;
        }
        a.pop();
        trim(&mut a);
    }
    a
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    if let Some(&l) = a.last() {
        let li = inv(l, p);
        a.iter_mut().for_each(|x| *x = *x * li % p);
    }
    a
}

/// Inverse of `a` modulo `m`, if they are coprime.
pub fn inv_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    // invariant: r_i = s_i a (mod m)
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv(r0[0], p);
    Some(s0.iter().map(|x| x * c % p).collect())
}

fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut a = a.to_vec();
    trim(&mut a);
    let dm = m.len() - 1;
    if a.len() <= dm {
        return (Vec::new(), a);
    }
    let mut q = vec![0u64; a.len() - dm];
    let li = inv(*m.last().unwrap(), p);
    while a.len() > dm {
        let c = a.last().unwrap() * li % p;
        let shift = a.len() - 1 - dm;
        q[shift] = c;
        for (j, mj) in m.iter().enumerate() {
            a[shift + j] = (a[shift + j] + p - c * mj % p) % p;
        }
        a.pop();
        trim(&mut a);
    }
    trim(&mut q);
    (q, a)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> =
        (0..a.len().max(b.len())).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect();
    trim(&mut out);
    out
}

/// Matrix of multiplication by `h` on F_p[t]/(m), columns t^j h mod m.
pub fn mult_matrix(h: &[u64], m: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = m.len() - 1;
    let mut cur = rem(h, m, p);
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        cols.push(cur.clone());
        let mut shifted = vec![0u64];
        shifted.extend(&cur);
        cur = rem(&shifted, m, p);
    }
    (0..n).map(|i| cols.iter().map(|c| c.get(i).copied().unwrap_or(0)).collect()).collect()
}

pub fn det(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut d = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else { return 0 };
        if piv != col {
            a.swap(piv, col);
            d = (p - d) % p;
        }
        d = d * a[col][col] % p;
        let ic = inv(a[col][col], p);
        for r in col + 1..n {
            if a[r][col] == 0 {
                continue;
            }
            let f = a[r][col] * ic % p;
            for k in col..n {
                a[r][k] = (a[r][k] + p - f * a[col][k] % p) % p;
            }
        }
    }
    d
}

/// Characteristic polynomial det(x I - A) via Hessenberg reduction.
pub fn charpoly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let ip = inv(h[m][m - 1], p);
        for i in m + 1..n {
            if h[i][m - 1] == 0 {
                continue;
            }
            let u = h[i][m - 1] * ip % p;
            for j in 0..n {
                h[i][j] = (h[i][j] + p - u * h[m][j] % p) % p;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let xm = [(p - h[m - 1][m - 1]) % p, 1];
        let mut pm = mul(&xm, &polys[m - 1], p);
        let mut t = 1u64;
        for i in 1..m {
            t = t * h[m - i][m - i - 1] % p;
            let c = t * h[m - i - 1][m - 1] % p;
            let scaled: Vec<u64> = polys[m - i - 1].iter().map(|x| x * c % p).collect();
            pm = sub(&pm, &scaled, p);
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

/// Interpolating polynomial through (xs, ys) with distinct xs, in monomial form.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (dd[i] + p - dd[i - 1]) % p;
            let den = (xs[i] + p - xs[i - j]) % p;
            dd[i] = num * inv(den, p) % p;
        }
    }
    // Horner on the Newton form
    let mut out: Vec<u64> = Vec::new();
    for i in (0..n).rev() {
        let lin = [(p - xs[i] % p) % p, 1];
        out = mul(&out, &lin, p);
        if out.is_empty() {
            out.push(0);
        }
        out[0] = (out[0] + dd[i]) % p;
        trim(&mut out);
    }
    out
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0u64, |acc, c| (acc * x + c) % p)
}

/// Inverse of a square matrix mod p.
pub fn mat_inv(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let ic = inv(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = *x * ic % p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for k in 0..2 * n {
                    a[r][k] = (a[r][k] + p - f * a[col][k] % p) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Q> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (s0, s1) = (s1.clone(), &s0 - &q * &s1);
    }
    if s1.is_zero() || s1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Chinese remaindering of a flat vector of residues, with rational
/// reconstruction and a two-in-a-row stability test.
#[derive(Clone, Debug, Default)]
pub struct CrtLift {
    residues: Vec<BigInt>,
    modulus: BigInt,
    last: Option<Vec<Q>>,
}

impl CrtLift {
    pub fn new() -> Self {
        CrtLift { residues: Vec::new(), modulus: BigInt::one(), last: None }
    }

    pub fn primes_used(&self) -> bool {
        !self.modulus.is_one()
    }

    /// Fold in the images mod `p`; returns the reconstruction once it agrees
    /// with the previous one.
    pub fn add(&mut self, images: &[u64], p: u64) -> Option<Vec<Q>> {
        let pb = BigInt::from(p);
        if self.residues.is_empty() {
            self.residues = images.iter().map(|&x| BigInt::from(x)).collect();
            self.modulus = pb;
            return None;
        }
        assert_eq!(images.len(), self.residues.len(), "image length changed between primes");
        let m_inv = BigInt::from(inv(self.modulus.mod_floor(&pb).to_u64().expect("reduced"), p));
        for (r, &c) in self.residues.iter_mut().zip(images) {
            let diff = (BigInt::from(c) - &*r).mod_floor(&pb);
            let t = (diff * &m_inv).mod_floor(&pb);
            *r += &self.modulus * t;
        }
        self.modulus *= &pb;
        let cand: Option<Vec<Q>> = self.residues.iter().map(|r| rational_reconstruct(r, &self.modulus)).collect();
        let cand = cand?;
        if self.last.as_ref() == Some(&cand) {
            return Some(cand);
        }
        self.last = Some(cand);
        None
    }

    /// Forget everything (used when a better-degree image shows up).
    pub fn reset(&mut self) {
        *self = CrtLift::new();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{q, Ring};

    const P: u64 = 2_147_483_647;

    #[test]
    fn inverse_and_gcd() {
        // (t + 1)(t + 2) and (t + 1)(t + 3)
        let a = mul(&[1, 1], &[2, 1], P);
        let b = mul(&[1, 1], &[3, 1], P);
        assert_eq!(gcd(&a, &b, P), vec![1, 1]);
        let m = vec![P - 2, 0, 1]; // t^2 - 2
        let i = inv_mod(&[0, 1], &m, P).unwrap();
        assert_eq!(rem(&mul(&i, &[0, 1], P), &m, P), vec![1]);
        assert!(inv_mod(&[P - 1, 1], &[P - 1, 0, 1], P).is_none());
    }

    #[test]
    fn charpoly_and_det_of_companion() {
        // companion-like multiplication by t modulo t^3 - 2t + 5
        let m = vec![5, P - 2, 0, 1];
        let mat = mult_matrix(&[0, 1], &m, P);
        assert_eq!(charpoly(&mat, P), m);
        assert_eq!(det(mat, P), P - 5);
    }

    #[test]
    fn newton_interpolation() {
        let f = vec![7, 0, P - 3, 1];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| eval(&f, x, P)).collect();
        assert_eq!(interpolate(&xs, &ys, P), f);
    }

    #[test]
    fn embeddings_and_lift() {
        let sp = split_primes(12).next().unwrap();
        let z = Cyclotomic::sqrt3().plus(&Cyclotomic::rational(q(1, 7)));
        let vals: Vec<u64> = (0..sp.roots.len()).map(|k| sp.embed(&z, k).unwrap()).collect();
        let coords = sp.coords(&vals);
        let mut lift = CrtLift::new();
        let mut got = None;
        for sp2 in split_primes(12).take(4) {
            let vals: Vec<u64> = (0..sp2.roots.len()).map(|k| sp2.embed(&z, k).unwrap()).collect();
            got = lift.add(&sp2.coords(&vals), sp2.p);
            if got.is_some() {
                break;
            }
        }
        assert_eq!(Cyclotomic::new(12, got.unwrap()), z);
        assert_eq!(coords.len(), 4);
    }
}
