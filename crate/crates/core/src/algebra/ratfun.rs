//! Univariate rational functions over a field, kept in lowest terms with a
//! monic denominator.

use super::poly::Poly;
use super::ring::{Field, Ring};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct RatFun<K: Field> {
    num: Poly<K>,
    den: Poly<K>,
}

impl<K: Field> RatFun<K> {
    pub fn new(num: Poly<K>, den: Poly<K>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(Poly::zero()));
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g)?;
        let (mut d, _) = den.divrem(&g)?;
        let l = d.lead().inv().ok_or(AlgebraError::DivisionByZero)?;
        n = n.scale(&l);
        d = d.scale(&l);
        Ok(RatFun { num: n, den: d })
    }

    /// Caller guarantees gcd(num, den) = 1; only the denominator is made monic.
    fn coprime(num: Poly<K>, den: Poly<K>) -> Self {
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        let l = den.lead().inv().expect("nonzero denominator");
        RatFun { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn from_poly(p: Poly<K>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: K) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<K> {
        &self.num
    }

    pub fn den(&self) -> &Poly<K> {
        &self.den
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().times(&self.den).minus(&self.num.times(&self.den.derivative()));
        let d = self.den.times(&self.den);
        Self::new(n, d).expect("nonzero denominator")
    }

    /// Value at a point, `None` at a pole.
    pub fn eval(&self, x: &K) -> Option<K> {
        self.num.eval(x).divide(&self.den.eval(x))
    }

    pub fn compose(&self, g: &Self) -> Result<Self, AlgebraError> {
        let n = self.num.eval_with(g, |c| Self::constant(c.clone()));
        let d = self.den.eval_with(g, |c| Self::constant(c.clone()));
        n.divide(&d).ok_or(AlgebraError::DivisionByZero)
    }

    /// Image under z -> (a z + b)/(c z + d).
    pub fn mobius_substitute(&self, a: &K, b: &K, c: &K, d: &K) -> Result<Self, AlgebraError> {
        let g = Self::new(Poly::new(vec![b.clone(), a.clone()]), Poly::new(vec![d.clone(), c.clone()]))?;
        self.compose(&g)
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Result<RatFun<L>, AlgebraError> {
        RatFun::new(self.num.map(&f), self.den.map(&f))
    }
}

fn quo<K: Field>(a: &Poly<K>, g: &Poly<K>) -> Poly<K> {
    if g.deg() == 0 {
        return a.clone();
    }
    a.divrem(g).expect("nonzero divisor").0
}

impl<K: Field> Ring for RatFun<K> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    // Henrici: cancel through gcds of the (smaller) denominators only.
    fn plus(&self, other: &Self) -> Self {
        let g = self.den.gcd(&other.den);
        if g.deg() == 0 {
            let n = self.num.times(&other.den).plus(&other.num.times(&self.den));
            return Self::coprime(n, self.den.times(&other.den));
        }
        let d1 = quo(&self.den, &g);
        let d2 = quo(&other.den, &g);
        let t = self.num.times(&d2).plus(&other.num.times(&d1));
        if t.is_zero() {
            return Self::zero();
        }
        let g2 = t.gcd(&g);
        Self::coprime(quo(&t, &g2), d1.times(&quo(&other.den, &g2)))
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        Self::coprime(
            quo(&self.num, &g1).times(&quo(&other.num, &g2)),
            quo(&self.den, &g2).times(&quo(&other.den, &g1)),
        )
    }
    fn negate(&self) -> Self {
        RatFun { num: self.num.negate(), den: self.den.clone() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(K::from_int(n))
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        self.divide(other)
    }
    fn from_rational(q: &num_rational::BigRational) -> Self {
        Self::constant(K::from_rational(q))
    }
    fn kth_root(&self, k: u32) -> Option<Self> {
        let n = super::poly::pth_root_generic(&self.num, k).ok()?;
        let d = super::poly::pth_root_generic(&self.den, k).ok()?;
        Self::new(n, d).ok()
    }
}

impl<K: Field> Field for RatFun<K> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Self::new(self.den.clone(), self.num.clone()).ok()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{qi, Q};

    #[test]
    fn derivative_of_dihedral_invariant() {
        // 1/z^3 + z^3  ->  -3/z^4 + 3 z^2
        let z = RatFun::<Q>::x();
        let f = z.power(3).plus(&z.power(3).inv().unwrap());
        let expect = z.power(2).scale_int(3).minus(&z.power(4).inv().unwrap().scale_int(3));
        assert_eq!(f.derivative(), expect);
    }

    #[test]
    fn lowest_terms() {
        let n = Poly::new(vec![qi(-1), qi(0), qi(1)]);
        let d = Poly::new(vec![qi(-2), qi(2)]);
        let r = RatFun::new(n, d).unwrap();
        assert_eq!(r.num(), &Poly::new(vec![qi(1), qi(1)]).scale(&crate::algebra::ring::q(1, 2)));
        assert!(r.den().is_monic());
    }
}
