//! Minimal ring and field abstractions shared by every coefficient type.
//!
//! Arithmetic goes through named methods rather than operator traits so that
//! generic code can work on borrowed values without cloning.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Commutative ring with identity. `div_exact` returns `None` when the
/// quotient does not exist in the ring.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_int(n: i64) -> Self;
    fn div_exact(&self, other: &Self) -> Option<Self>;

    fn from_rational(q: &BigRational) -> Self {
        let n = Self::from_bigint(q.numer());
        let d = Self::from_bigint(q.denom());
        n.div_exact(&d).expect("ring does not contain 1/denominator")
    }

    fn from_bigint(n: &BigInt) -> Self {
        // Horner in base 2^32 keeps this generic without a conversion trait.
        let (sign, digits) = n.to_u32_digits();
        let base = Self::from_int(1i64 << 32);
        let mut acc = Self::zero();
        for d in digits.iter().rev() {
            acc = acc.times(&base).plus(&Self::from_int(*d as i64));
        }
        if sign == num_bigint::Sign::Minus {
            acc.negate()
        } else {
            acc
        }
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn power(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }

    /// Exact k-th root if one is known to exist in the ring.
    fn kth_root(&self, k: u32) -> Option<Self> {
        if k == 1 || self.is_one() {
            Some(self.clone())
        } else if self.is_zero() {
            Some(Self::zero())
        } else {
            None
        }
    }

    fn scale_int(&self, n: i64) -> Self {
        self.times(&Self::from_int(n))
    }
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn divide(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.times(&i))
    }

    /// Fast monic gcd in K[t]; `None` means use the Euclidean algorithm.
    fn poly_gcd_fast(_a: &super::Poly<Self>, _b: &super::Poly<Self>) -> Option<super::Poly<Self>> {
        None
    }
}

/// Shorthand for the rational field.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        qi(n)
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn kth_root(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return None;
        }
        if self.is_negative() && k % 2 == 0 {
            return None;
        }
        let root = |n: &BigInt| -> Option<BigInt> {
            let r = n.abs().nth_root(k);
            if r.pow(k) == n.abs() {
                Some(if n.is_negative() { -r } else { r })
            } else {
                None
            }
        };
        Some(BigRational::new(root(self.numer())?, root(self.denom())?))
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn poly_gcd_fast(a: &super::Poly<Self>, b: &super::Poly<Self>) -> Option<super::Poly<Self>> {
        use super::Cyclotomic;
        let lift = |p: &super::Poly<Self>| p.map(|c| Cyclotomic::rational(c.clone()));
        let g = super::modgcd::cyclotomic_gcd(&lift(a), &lift(b))?;
        Some(g.map(|c| c.as_rational().expect("gcd of rational polynomials is rational")))
    }
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn binomial(n: u64, k: u64) -> Q {
    if k > n {
        return qi(0);
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

pub fn q_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
