//! Elements of the cyclotomic fields Q(zeta_N).
//!
//! An element stores its conductor `N` and coordinates in the power basis
//! `1, z, ..., z^(phi(N)-1)` of `Q[z]/Phi_N(z)`. Operands with different
//! conductors are lifted to the lcm before combining, so rational constants
//! (conductor 1) mix freely with everything else.

#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::ring::{qi, Field, Ring, Q};

/// Reduction data for one conductor.
#[derive(Debug)]
struct Ctx {
    phi: usize,
    /// Phi_N coefficients, low to high, monic.
    modulus: Vec<i64>,
}

fn ctx(n: u32) -> Arc<Ctx> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Ctx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let modulus = cyclotomic_polynomial(n);
            Arc::new(Ctx { phi: modulus.len() - 1, modulus })
        })
        .clone()
}

/// Integer coefficients of the n-th cyclotomic polynomial, low to high.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "conductor must be positive");
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic_int(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let dq = rem.len() - 1 - db;
    let mut quo = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + db];
        quo[k] = c;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

pub fn euler_phi(n: u32) -> usize {
    ctx(n).phi
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    n: u32,
    coords: Vec<Q>,
}

impl Cyclotomic {
    /// Build from power-basis coordinates (any length; reduced mod Phi_N).
    pub fn new(n: u32, coords: Vec<Q>) -> Self {
        let c = ctx(n);
        Cyclotomic { n, coords: reduce(&c, coords) }
    }

    pub fn rational(x: Q) -> Self {
        Cyclotomic { n: 1, coords: vec![x] }
    }

    /// The primitive root zeta_N = exp(2 pi i / N).
    pub fn zeta(n: u32) -> Self {
        Self::zeta_pow(n, 1)
    }

    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![qi(0); e + 1];
        v[e] = qi(1);
        Self::new(n, v)
    }

    pub fn i() -> Self {
        Self::zeta(4)
    }

    /// sqrt(3) = zeta_12 + zeta_12^{-1}.
    pub fn sqrt3() -> Self {
        Self::zeta_pow(12, 1).plus(&Self::zeta_pow(12, -1))
    }

    /// sqrt(5) = zeta_5 - zeta_5^2 - zeta_5^3 + zeta_5^4.
    pub fn sqrt5() -> Self {
        let z = |k| Self::zeta_pow(5, k);
        z(1).minus(&z(2)).minus(&z(3)).plus(&z(4))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    /// Rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_m); requires N | m.
    pub fn lift(&self, m: u32) -> Self {
        assert!(m % self.n == 0, "cannot lift conductor {} to {}", self.n, m);
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut v = vec![qi(0); (self.coords.len().max(1) - 1) * step + 1];
        for (k, c) in self.coords.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::new(m, v)
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        if self.n == other.n {
            return (self.clone(), other.clone());
        }
        let m = self.n.lcm(&other.n);
        (self.lift(m), other.lift(m))
    }

    fn zip(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Self {
        if self.n != other.n {
            let (a, b) = self.align(other);
            return a.zip(&b, f);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect();
        Cyclotomic { n: self.n, coords }
    }

    /// Galois conjugate zeta -> zeta^k (k coprime to N).
    pub fn galois(&self, k: i64) -> Self {
        let n = self.n as i64;
        let mut acc = Self::new(self.n, vec![qi(0)]);
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                let t = Self::zeta_pow(self.n, (j as i64 * k).rem_euclid(n));
                acc = acc.plus(&t.scale_q(c));
            }
        }
        acc
    }

    /// Complex conjugate (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        Cyclotomic { n: self.n, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    /// Double-precision embedding zeta_N -> exp(2 pi i / N).
    pub fn to_c64(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            acc += Complex64::from_polar(1.0, ang) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Exact square root inside the element's own field, if one exists.
    ///
    /// Candidates are reconstructed from the numeric square roots at every
    /// complex embedding (one sign choice per embedding) and then checked
    /// exactly, so a returned value is always a true square root.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(r) = self.as_rational() {
            if let Some(s) = r.kth_root(2) {
                return Some(Self::rational(s));
            }
        }
        let n = self.n;
        let units: Vec<i64> = (1..=n as i64).filter(|k| k.gcd(&(n as i64)) == 1).collect();
        let phi = units.len();
        if phi > 12 {
            return None;
        }
        let targets: Vec<Complex64> = units.iter().map(|&k| self.galois(k).to_c64().sqrt()).collect();
        // Vandermonde system V c = t with V[k][j] = zeta^(k j).
        let v: Vec<Vec<Complex64>> = units
            .iter()
            .map(|&k| {
                (0..phi)
                    .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * j as i64) as f64 / n as f64))
                    .collect()
            })
            .collect();
        for mask in 0u32..(1 << (phi - 1)) {
            let rhs: Vec<Complex64> = targets
                .iter()
                .enumerate()
                .map(|(i, t)| if i > 0 && mask >> (i - 1) & 1 == 1 { -t } else { *t })
                .collect();
            let Some(sol) = solve_complex(&v, &rhs) else { continue };
            if sol.iter().any(|c| c.im.abs() > 1e-7) {
                continue;
            }
            let coords: Option<Vec<Q>> = sol.iter().map(|c| approx_rational(c.re, 100_000)).collect();
            if let Some(coords) = coords {
                let cand = Self::new(n, coords);
                if cand.times(&cand) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n,
            "coords": self.coords.iter().map(super::ring::q_to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let n = v.get("N")?.as_u64()? as u32;
        if n == 0 {
            return None;
        }
        let coords = v
            .get("coords")?
            .as_array()?
            .iter()
            .map(|c| c.as_str().and_then(super::ring::parse_q))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(n, coords))
    }
}

fn reduce(c: &Ctx, mut v: Vec<Q>) -> Vec<Q> {
    let phi = c.phi;
    if v.len() > phi {
        for k in (phi..v.len()).rev() {
            let top = std::mem::replace(&mut v[k], qi(0));
            if top.is_zero() {
                continue;
            }
            for (j, m) in c.modulus[..phi].iter().enumerate() {
                if *m != 0 {
                    v[k - phi + j] -= &top * BigRational::from_integer((*m).into());
                }
            }
        }
        v.truncate(phi);
    }
    v.resize(phi, qi(0));
    v
}

/// Gaussian elimination with partial pivoting over complex doubles.
fn solve_complex(a: &[Vec<Complex64>], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    let mut m: Vec<Vec<Complex64>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(*bi);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))?;
        if m[piv][col].norm() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..=n {
                    let t = m[col][k];
                    m[r][k] -= f * t;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Continued-fraction recognition of a double as p/q with q <= max_den.
pub fn approx_rational(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < 1e-9 {
            return Some(super::ring::q(h1, k1));
        }
        let frac = r - r.floor();
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 != 0 && (x - h1 as f64 / k1 as f64).abs() < 1e-9 {
        Some(super::ring::q(h1, k1))
    } else {
        None
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            self.coords == other.coords
        } else {
            let (a, b) = self.align(other);
            a.coords == b.coords
        }
    }
}

impl Ring for Cyclotomic {
    fn zero() -> Self {
        Self::rational(qi(0))
    }
    fn one() -> Self {
        Self::rational(qi(1))
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
    fn plus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }
    fn minus(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }
    fn times(&self, other: &Self) -> Self {
        if self.n != other.n {
            if let Some(r) = other.as_rational() {
                return self.scale_q(&r);
            }
            if let Some(r) = self.as_rational() {
                return other.scale_q(&r);
            }
            let (a, b) = self.align(other);
            return a.times(&b);
        }
        let c = ctx(self.n);
        let mut prod = vec![qi(0); 2 * c.phi - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Cyclotomic { n: self.n, coords: reduce(&c, prod) }
    }
    fn negate(&self) -> Self {
        Cyclotomic { n: self.n, coords: self.coords.iter().map(|c| -c).collect() }
    }
    fn from_int(n: i64) -> Self {
        Self::rational(qi(n))
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.divide(other)
    }
    fn from_rational(q: &Q) -> Self {
        Self::rational(q.clone())
    }
    fn kth_root(&self, k: u32) -> Option<Self> {
        if k == 1 || self.is_one() {
            return Some(self.clone());
        }
        if let Some(r) = self.as_rational() {
            if let Some(s) = r.kth_root(k) {
                return Some(Self::rational(s));
            }
        }
        if k == 2 {
            return self.sqrt();
        }
        None
    }
}

impl Field for Cyclotomic {
    fn poly_gcd_fast(a: &super::Poly<Self>, b: &super::Poly<Self>) -> Option<super::Poly<Self>> {
        super::modgcd::cyclotomic_gcd(a, b)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::rational(r.recip()));
        }
        // Extended Euclid: s*a + t*Phi = 1 in Q[z].
        let c = ctx(self.n);
        let modulus: Vec<Q> = c.modulus.iter().map(|m| qi(*m)).collect();
        let (g, s) = ext_gcd_q(self.coords.clone(), modulus);
        debug_assert!(g.len() == 1);
        let scale = g[0].recip();
        Some(Self::new(self.n, s.into_iter().map(|x| x * &scale).collect()))
    }
}

fn trim(v: &mut Vec<Q>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Returns (g, s) with s*a == g (mod b), g = gcd as a constant for coprime inputs.
fn ext_gcd_q(mut a: Vec<Q>, mut b: Vec<Q>) -> (Vec<Q>, Vec<Q>) {
    trim(&mut a);
    trim(&mut b);
    let (mut s0, mut s1) = (vec![qi(1)], vec![qi(0)]);
    while !(b.len() == 1 && b[0].is_zero()) {
        let (qt, r) = divrem_q(&a, &b);
        let prod = mul_q(&qt, &s1);
        let mut s2 = s0.clone();
        if s2.len() < prod.len() {
            s2.resize(prod.len(), qi(0));
        }
        for (i, p) in prod.iter().enumerate() {
            s2[i] -= p;
        }
        trim(&mut s2);
        a = b;
        b = r;
        s0 = s1;
        s1 = s2;
    }
    (a, s0)
}

fn mul_q(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![qi(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn divrem_q(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![qi(0)], rem);
    }
    let lead_inv = b[db].recip();
    let mut quo = vec![qi(0); rem.len() - db];
    for k in (0..quo.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quo[k] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    (quo, rem)
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", super::ring::q_to_string(&r));
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag_s = super::ring::q_to_string(&mag);
            match k {
                0 => write!(f, "{mag_s}")?,
                _ => {
                    let base = if k == 1 { format!("z{}", self.n) } else { format!("z{}^{}", self.n, k) };
                    if mag == qi(1) {
                        write!(f, "{base}")?
                    } else {
                        write!(f, "{mag_s}*{base}")?
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(20), 8);
    }

    #[test]
    fn zeta_order_and_minimal_polynomial() {
        for n in [1u32, 3, 4, 5, 12, 20] {
            let z = Cyclotomic::zeta(n);
            assert!(z.power(n).is_one(), "zeta_{n}^{n} != 1");
            let phi = cyclotomic_polynomial(n);
            let mut acc = Cyclotomic::zero();
            for (k, c) in phi.iter().enumerate() {
                acc = acc.plus(&z.power(k as u32).scale_int(*c));
            }
            assert!(acc.is_zero(), "Phi_{n}(zeta) != 0");
        }
    }

    #[test]
    fn named_constants() {
        let s3 = Cyclotomic::sqrt3();
        assert_eq!(s3.times(&s3), Cyclotomic::from_int(3));
        let s5 = Cyclotomic::sqrt5();
        assert_eq!(s5.times(&s5), Cyclotomic::from_int(5));
        let i = Cyclotomic::i();
        assert_eq!(i.times(&i), Cyclotomic::from_int(-1));
        // i lives in Q(zeta_12) as zeta_12^3
        assert_eq!(Cyclotomic::zeta_pow(12, 3), i);
    }

    #[test]
    fn inverse_round_trip() {
        let x = Cyclotomic::new(20, vec![qi(1), qi(2), qi(0), qi(-3), super::super::ring::q(1, 2)]);
        let y = x.inv().unwrap();
        assert!(x.times(&y).is_one());
    }

    #[test]
    fn exact_square_roots() {
        let d = Cyclotomic::from_int(-6).times(&Cyclotomic::i());
        let r = d.lift(12).sqrt().expect("sqrt(-6i) lies in Q(zeta_12)");
        assert_eq!(r.times(&r), d);
        assert!(Cyclotomic::from_int(2).lift(12).sqrt().is_none());
    }
}
