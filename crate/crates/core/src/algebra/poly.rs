//! Dense univariate polynomials over any [`Ring`].
//!
//! Coefficients are stored low degree first and trimmed so the leading
//! coefficient is nonzero (the zero polynomial is the empty vector).

use super::ring::{Field, Ring};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.times(x).plus(c))
    }

    /// Evaluate at a point of a ring that the coefficients map into.
    pub fn eval_with<S: Ring>(&self, x: &S, lift: impl Fn(&R) -> S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc.times(x).plus(&lift(c)))
    }

    /// Composition self(g).
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc.times(g).plus(&Self::constant(c.clone())))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale_int(k as i64)).collect())
    }

    /// Pseudo-remainder free division by a monic divisor; works over any ring.
    pub fn divrem_monic(&self, d: &Self) -> (Self, Self) {
        assert!(d.is_monic(), "divisor must be monic");
        self.divrem_by(d, |c| Some(c.clone())).expect("monic division cannot fail")
    }

    /// Division where each leading-coefficient quotient is computed by `div`.
    fn divrem_by(&self, d: &Self, div: impl Fn(&R) -> Option<R>) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        if self.coeffs.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![R::zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let c = div(top)?;
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].minus(&c.times(dj));
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quo), Self::new(rem)))
    }

    /// Exact division in R[x]; `None` if the quotient does not exist.
    pub fn div_exact_poly(&self, d: &Self) -> Option<Self> {
        let lead = d.lead();
        let (q, r) = self.divrem_by(d, |c| c.div_exact(&lead))?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Homogeneous-style Möbius substitution: sum c_k (a x + b)^k (c x + d)^(n-k).
    pub fn mobius_transform(&self, n: usize, a: &R, b: &R, c: &R, d: &R) -> Self {
        // Horner in the numerator: P ← P·(az + b) + c_k (cz + d)^(n−k).
        let num = Self::new(vec![b.clone(), a.clone()]);
        let den = Self::new(vec![d.clone(), c.clone()]);
        let mut den_pows = vec![Self::one()];
        for _ in 0..n {
            den_pows.push(den_pows.last().unwrap().times(&den));
        }
        let top = self.coeffs.len().saturating_sub(1);
        let mut acc = Self::zero();
        for k in (0..=n).rev() {
            acc = acc.times(&num);
            if k <= top && !self.coeffs[k].is_zero() {
                acc = acc.plus(&den_pows[n - k].scale(&self.coeffs[k]));
            }
        }
        acc
    }
}

impl<R: Field> Poly<R> {
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let lead_inv = d.lead().inv().ok_or(AlgebraError::DivisionByZero)?;
        self.divrem_by(d, |c| Some(c.times(&lead_inv))).ok_or(AlgebraError::DivisionByZero)
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        if let Some(g) = R::poly_gcd_fast(self, other) {
            return g;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s2 = s0.minus(&q.times(&s1));
            let t2 = t0.minus(&q.times(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        match r0.lead().inv() {
            Some(i) => (r0.scale(&i), s0.scale(&i), t0.scale(&i)),
            None => (r0, s0, t0),
        }
    }

    /// Inverse of self modulo m, if gcd(self, m) = 1.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.ext_gcd(m);
        if g.is_one() {
            Some(s.divrem(m).ok()?.1)
        } else {
            None
        }
    }

    /// Lagrange interpolation through (x_i, y_i).
    pub fn interpolate(xs: &[R], ys: &[R]) -> Result<Self, AlgebraError> {
        // Newton divided differences.
        let n = xs.len();
        let mut dd: Vec<R> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let den = xs[i].minus(&xs[i - j]);
                dd[i] = dd[i].minus(&dd[i - 1]).divide(&den).ok_or(AlgebraError::DivisionByZero)?;
            }
        }
        let mut acc = Self::zero();
        for i in (0..n).rev() {
            acc = acc.times(&Self::new(vec![xs[i].negate(), R::one()])).plus(&Self::constant(dd[i].clone()));
        }
        Ok(acc)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).plus(&other.coeff(k))).collect())
    }
    fn minus(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).minus(&other.coeff(k))).collect())
    }
    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::new(out)
    }
    fn negate(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.negate()).collect() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(R::from_int(n))
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        self.div_exact_poly(other)
    }
    fn from_rational(q: &num_rational::BigRational) -> Self {
        Self::constant(R::from_rational(q))
    }
    fn kth_root(&self, k: u32) -> Option<Self> {
        pth_root_generic(self, k).ok()
    }
}

/// k-th root by the power-series recursion on the reversed coefficients.
///
/// With P(t) = t^(kd) pi(1/t) and pi(0) = lead, the root rho = pi^(1/k)
/// satisfies n a_0 b_n = sum_{j=1..n} (j/k - n + j) a_j b_(n-j).
pub fn pth_root_generic<R: Ring>(p: &Poly<R>, k: u32) -> Result<Poly<R>, AlgebraError> {
    if k == 0 {
        return Err(AlgebraError::NotAPower { index: 0 });
    }
    let Some(deg) = p.degree() else { return Ok(Poly::zero()) };
    if deg % k as usize != 0 {
        return Err(AlgebraError::NotAPower { index: deg });
    }
    let d = deg / k as usize;
    // a_j = coefficient of t^(deg - j)
    let a: Vec<R> = (0..=deg).map(|j| p.coeff(deg - j)).collect();
    let b0 = a[0].kth_root(k).ok_or(AlgebraError::NotAPower { index: deg })?;
    let kk = k as i64;
    let mut b = vec![b0];
    let denom_base = a[0].scale_int(kk);
    for n in 1..=d {
        // k * n * a_0 * b_n = sum_j (j - k(n - j)) a_j b_(n-j)
        let mut acc = R::zero();
        for j in 1..=n.min(deg) {
            let w = j as i64 - kk * (n as i64 - j as i64);
            if w != 0 && !a[j].is_zero() {
                acc = acc.plus(&a[j].times(&b[n - j]).scale_int(w));
            }
        }
        let den = denom_base.scale_int(n as i64);
        let bn = acc.div_exact(&den).ok_or(AlgebraError::NotAPower { index: deg - n })?;
        b.push(bn);
    }
    let root = Poly::new(b.into_iter().rev().collect());
    let check = root.power(k);
    if check != *p {
        let idx = (0..=deg).rev().find(|&i| check.coeff(i) != p.coeff(i)).unwrap_or(0);
        return Err(AlgebraError::NotAPower { index: idx });
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{qi, Q};

    fn pq(v: &[i64]) -> Poly<Q> {
        Poly::new(v.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(pq(&[-1, 0, 1]).gcd(&pq(&[-1, 1])), pq(&[-1, 1]));
        assert_eq!(pq(&[0, 0, 0, 1]).gcd(&pq(&[0, 0, 1])), pq(&[0, 0, 1]));
    }

    #[test]
    fn pth_roots() {
        assert_eq!(pth_root_generic(&pq(&[1, 2, 1]), 2).unwrap(), pq(&[1, 1]));
        let r = pq(&[1, 2, 1]);
        assert_eq!(pth_root_generic(&r.power(3), 3).unwrap(), r);
        match pth_root_generic(&pq(&[2, 2, 1]), 2) {
            Err(AlgebraError::NotAPower { index }) => assert_eq!(index, 0),
            other => panic!("expected not-a-power, got {other:?}"),
        }
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = pq(&[3, -1, 0, 2]);
        let xs: Vec<Q> = (0..4).map(qi).collect();
        let ys: Vec<Q> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys).unwrap(), p);
    }
}
