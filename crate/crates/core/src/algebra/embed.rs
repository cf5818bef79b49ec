//! Arbitrary-precision complex embedding of cyclotomic numbers.
//!
//! Everything is fixed-point integer arithmetic with a power-of-two scale,
//! so the error bound is explicit: each zeta^k is accurate to a few units in
//! the last place and the working scale has enough guard bits to absorb the
//! coordinate magnitudes.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::Cyclotomic;

/// Exact rational approximation of a complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl BigComplex {
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// Max of |Re| and |Im| of the difference (a cheap norm bound).
    pub fn dist_inf(&self, other: &BigComplex) -> BigRational {
        let a = (&self.re - &other.re).abs();
        let b = (&self.im - &other.im).abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    /// Exact quotient; `None` for division by zero.
    pub fn div(&self, o: &BigComplex) -> Option<BigComplex> {
        let n = &o.re * &o.re + &o.im * &o.im;
        if n.is_zero() {
            return None;
        }
        let conj = BigComplex { re: o.re.clone(), im: -o.im.clone() };
        let p = self.mul(&conj);
        Some(BigComplex { re: p.re / &n, im: p.im / &n })
    }

    /// Principal square root, rounded to `bits` fractional bits per part.
    pub fn sqrt(&self, bits: u64) -> BigComplex {
        let scale = BigInt::one() << bits;
        // sqrt of a nonnegative rational, as a fixed-point integer
        let rsqrt = |x: &BigRational| -> BigInt {
            let v = (x * BigRational::from_integer(&scale * &scale)).floor().to_integer();
            if v.is_negative() {
                BigInt::zero()
            } else {
                v.sqrt()
            }
        };
        let x = &self.re;
        let y = &self.im;
        let modulus = BigRational::new(rsqrt(&(x * x + y * y)), scale.clone());
        let two = BigRational::from_integer(BigInt::from(2));
        let re = rsqrt(&((&modulus + x) / &two));
        let mut im = rsqrt(&((&modulus - x) / &two));
        if y.is_negative() {
            im = -im;
        }
        BigComplex { re: BigRational::new(re, scale.clone()), im: BigRational::new(im, scale) }
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

fn arctan_inv(x: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x * x);
    let mut term = &one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        let t = &term / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        term /= &x2;
        k += 1;
    }
    sum
}

/// pi scaled by 2^bits (error a few ulps).
fn pi_fixed(bits: u64) -> BigInt {
    16 * arctan_inv(5, bits) - 4 * arctan_inv(239, bits)
}

/// (cos t, sin t) scaled by 2^bits for a fixed-point angle t.
fn cos_sin_fixed(theta: &BigInt, bits: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << bits;
    let mut c = BigInt::zero();
    let mut s = BigInt::zero();
    let mut term = one.clone(); // theta^k / k!
    let mut k: u64 = 0;
    loop {
        match k % 4 {
            0 => c += &term,
            1 => s += &term,
            2 => c -= &term,
            _ => s -= &term,
        }
        k += 1;
        term = ((&term * theta) >> bits) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
    }
    (c, s)
}

/// Embed z with zeta_N -> exp(2 pi i / N), error below 10^(-precision).
pub fn cyc_embed(z: &Cyclotomic, precision: u32) -> BigComplex {
    let n = z.conductor() as i64;
    let coords = z.coords();
    // Magnitude bound on the coordinates decides the number of guard bits.
    let mag: f64 = coords.iter().map(|c| c.abs().to_f64().unwrap_or(f64::MAX)).sum::<f64>().max(1.0);
    let bits = (precision as f64 * std::f64::consts::LOG2_10 + mag.log2() + 40.0).ceil() as u64;
    let pi = pi_fixed(bits + 8) >> 8u32;
    let scale = BigRational::from_integer(BigInt::one() << bits);
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for (k, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // angle 2 pi k / N reduced to (-pi, pi]
        let mut kk = (k as i64).rem_euclid(n);
        if 2 * kk > n {
            kk -= n;
        }
        let theta = (&pi * BigInt::from(2 * kk)) / BigInt::from(n);
        let (cs, sn) = cos_sin_fixed(&theta, bits);
        re += c * BigRational::from_integer(cs) / &scale;
        im += c * BigRational::from_integer(sn) / &scale;
    }
    BigComplex { re, im }
}

/// 10^(-digits) as a rational.
pub fn ten_pow_neg(digits: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::Ring;

    #[test]
    fn zeta4_is_i() {
        let e = cyc_embed(&Cyclotomic::zeta(4), 30);
        let target = BigComplex { re: <BigRational as Zero>::zero(), im: <BigRational as One>::one() };
        assert!(e.dist_inf(&target) < ten_pow_neg(30));
    }

    #[test]
    fn twice_cos_pi_third() {
        let z = Cyclotomic::zeta_pow(12, 2).plus(&Cyclotomic::zeta_pow(12, -2));
        assert_eq!(z, Cyclotomic::one());
        let e = cyc_embed(&Cyclotomic::zeta_pow(12, 2), 40);
        let e2 = cyc_embed(&Cyclotomic::zeta_pow(12, -2), 40);
        let sum = BigComplex { re: &e.re + &e2.re, im: &e.im + &e2.im };
        let one = BigComplex { re: <BigRational as One>::one(), im: <BigRational as Zero>::zero() };
        assert!(sum.dist_inf(&one) < ten_pow_neg(38));
    }
}
