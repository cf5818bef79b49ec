//! Sparse multivariate polynomials over Q, and unreduced fractions of them.
//!
//! Variables are plain indices; callers attach names when printing. The same
//! type doubles as a jet ring (variable k = k-th derivative of one function)
//! through [`MPoly::jet_derivative`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::ring::{q_to_string, qi, Field, Ring, Q};

/// Exponent vector with trailing zeros trimmed.
pub type Monomial = Vec<u32>;

fn trim_mono(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    trim_mono((0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect())
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (i, e) in b.iter().enumerate() {
        out[i] = out[i].checked_sub(*e)?;
    }
    Some(trim_mono(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl MPoly {
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::term(qi(1), m)
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim_mono(m), c);
        }
        MPoly { terms }
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, vec![])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(qi(0)),
            1 => self.terms.get(&vec![]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| *m.get(var).unwrap_or(&0)).max().unwrap_or(0)
    }

    /// Highest variable index that occurs.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.len().checked_sub(1)).max()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let e = *m.get(var).unwrap_or(&0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(trim_mono(m2), c * qi(e as i64));
        }
        out
    }

    /// Total derivative on a jet ring: d/dz x_k = x_(k+1).
    pub fn jet_derivative(&self) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let mut m2 = m.clone();
                m2[k] -= 1;
                if m2.len() <= k + 1 {
                    m2.resize(k + 2, 0);
                }
                m2[k + 1] += 1;
                out.add_term(trim_mono(m2), c * qi(e as i64));
            }
        }
        out
    }

    /// Replace variable `var` by `value` everywhere.
    pub fn substitute(&self, var: usize, value: &MPoly) -> Self {
        let mut pows: Vec<MPoly> = vec![MPoly::one()];
        let mut out = Self::default();
        for (m, c) in &self.terms {
            let e = *m.get(var).unwrap_or(&0) as usize;
            while pows.len() <= e {
                let next = pows.last().unwrap().times(value);
                pows.push(next);
            }
            let mut rest = m.clone();
            if var < rest.len() {
                rest[var] = 0;
            }
            let base = Self::term(c.clone(), rest);
            out = out.plus(&base.times(&pows[e]));
        }
        out
    }

    pub fn eval_q(&self, values: &[Q]) -> Q {
        let mut acc = qi(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= values[i].clone().pow(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_c64(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= values[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn lead_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &qi(0);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (v, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names(v)),
                    _ => factors.push(format!("{}^{}", names(v), e)),
                }
            }
            if factors.is_empty() || mag != qi(1) {
                factors.insert(0, q_to_string(&mag));
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(qi(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
    fn times(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(qi(n))
    }
    fn from_rational(q: &Q) -> Self {
        Self::constant(q.clone())
    }
    /// Exact division under lex order; fails if any step leaves a remainder.
    fn div_exact(&self, other: &Self) -> Option<Self> {
        let (lm, lc) = other.lead_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quo = Self::default();
        while let Some((m, c)) = rem.lead_term() {
            let qm = mono_div(m, &lm)?;
            let qc = c / &lc;
            let t = Self::term(qc.clone(), qm.clone());
            rem = rem.minus(&t.times(other));
            quo.add_term(qm, qc);
        }
        Some(quo)
    }
}

/// Fraction of multivariate polynomials. Not reduced: equality is decided by
/// cross-multiplication, which is all the identity checks need.
#[derive(Clone, Debug)]
pub struct MRat {
    pub num: MPoly,
    pub den: MPoly,
}

impl MRat {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = MRat { num, den };
        r.tidy();
        r
    }

    pub fn from_poly(p: MPoly) -> Self {
        MRat { num: p, den: MPoly::one() }
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MPoly::var(i))
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    /// Cheap normalization: fold constant denominators and cancel exact
    /// polynomial quotients.
    fn tidy(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one();
            return;
        }
        if let Some(c) = self.den.as_constant() {
            self.num = self.num.scale_q(&c.recip());
            self.den = MPoly::one();
            return;
        }
        if self.num.num_terms() * self.den.num_terms() < 4000 {
            if let Some(q) = self.num.div_exact(&self.den) {
                self.num = q;
                self.den = MPoly::one();
            }
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let n = self.num.derivative(var).times(&self.den).minus(&self.num.times(&self.den.derivative(var)));
        Self::new(n, self.den.times(&self.den))
    }

    pub fn substitute(&self, var: usize, value: &MRat) -> Self {
        // Homogenize both sides to a common power of value.den.
        let d = self.num.degree_in(var).max(self.den.degree_in(var));
        let sub = |p: &MPoly| -> MPoly {
            let mut out = MPoly::zero();
            for k in 0..=p.degree_in(var) {
                let ck = coefficient_in(p, var, k);
                if ck.is_zero() {
                    continue;
                }
                let t = ck.times(&value.num.power(k)).times(&value.den.power(d - k));
                out = out.plus(&t);
            }
            out
        };
        Self::new(sub(&self.num), sub(&self.den))
    }

    pub fn eval_q(&self, values: &[Q]) -> Option<Q> {
        let d = self.den.eval_q(values);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_q(values) / d)
        }
    }
}

/// Coefficient of var^k viewed as a polynomial in the remaining variables.
pub fn coefficient_in(p: &MPoly, var: usize, k: u32) -> MPoly {
    let mut out = MPoly::zero();
    for (m, c) in p.terms() {
        if *m.get(var).unwrap_or(&0) == k {
            let mut m2 = m.clone();
            if var < m2.len() {
                m2[var] = 0;
            }
            out = out.plus(&MPoly::term(c.clone(), m2));
        }
    }
    out
}

impl PartialEq for MRat {
    fn eq(&self, other: &Self) -> bool {
        self.num.times(&other.den) == other.num.times(&self.den)
    }
}

impl Ring for MRat {
    fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(MPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.plus(&other.num), self.den.clone());
        }
        Self::new(self.num.times(&other.den).plus(&other.num.times(&self.den)), self.den.times(&other.den))
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
    fn times(&self, other: &Self) -> Self {
        Self::new(self.num.times(&other.num), self.den.times(&other.den))
    }
    fn negate(&self) -> Self {
        MRat { num: self.num.negate(), den: self.den.clone() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(qi(n))
    }
    fn from_rational(q: &Q) -> Self {
        Self::constant(q.clone())
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.divide(other)
    }
}

impl Field for MRat {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_derivative_leibniz() {
        // d/dz (q0^2 q1) = 2 q0 q1^2 + q0^2 q2
        let q0 = MPoly::var(0);
        let q1 = MPoly::var(1);
        let f = q0.times(&q0).times(&q1);
        let expect = q0.times(&q1).times(&q1).scale_int(2).plus(&q0.times(&q0).times(&MPoly::var(2)));
        assert_eq!(f.jet_derivative(), expect);
    }

    #[test]
    fn exact_division() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let a = x.plus(&y);
        let b = x.minus(&y).times(&x);
        assert_eq!(a.times(&b).div_exact(&a), Some(b.clone()));
        assert_eq!(b.plus(&MPoly::one()).div_exact(&a), None);
    }

    #[test]
    fn mrat_equality_by_cross_multiplication() {
        let x = MRat::var(0);
        let lhs = x.times(&x).minus(&MRat::one()).divide(&x.minus(&MRat::one())).unwrap();
        assert_eq!(lhs, x.plus(&MRat::one()));
    }
}
