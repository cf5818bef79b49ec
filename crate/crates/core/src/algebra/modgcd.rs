//! Modular gcd for polynomials over Q(zeta_N).
//!
//! Primes p = 1 (mod N) split completely, so Z[zeta]/p is a product of
//! phi(N) copies of F_p, one per embedding zeta -> w^k. The monic gcd is
//! computed in each copy, the coordinates are recovered with an inverse
//! Vandermonde matrix, lifted by CRT and rational reconstruction, and the
//! candidate is accepted only after exact trial division.

use num_integer::Integer;

use super::cyclotomic::Cyclotomic;
use super::fp::{self, split_primes, CrtLift};
use super::poly::Poly;
use super::ring::Ring;

/// Monic gcd over Q(zeta_N); `None` if the prime budget runs out.
pub fn cyclotomic_gcd(a: &Poly<Cyclotomic>, b: &Poly<Cyclotomic>) -> Option<Poly<Cyclotomic>> {
    if a.is_zero() || b.is_zero() {
        return None;
    }
    if a.deg() == 0 || b.deg() == 0 {
        return Some(Poly::one());
    }
    let n = a.coeffs().iter().chain(b.coeffs()).fold(1u32, |acc, c| acc.lcm(&c.conductor()));
    let mut best_deg = usize::MAX;
    let mut lift = CrtLift::new();
    'primes: for sp in split_primes(n).take(400) {
        let p = sp.p;
        let image = |x: &Poly<Cyclotomic>, k: usize| -> Option<Vec<u64>> {
            x.coeffs().iter().map(|c| sp.embed(c, k)).collect()
        };
        let mut gs: Vec<Vec<u64>> = Vec::with_capacity(sp.roots.len());
        for k in 0..sp.roots.len() {
            let (Some(ia), Some(ib)) = (image(a, k), image(b, k)) else { continue 'primes };
            if ia.last() == Some(&0) || ib.last() == Some(&0) {
                continue 'primes;
            }
            gs.push(fp::gcd(&ia, &ib, p));
        }
        if gs.iter().any(|g| g.len() != gs[0].len()) {
            continue;
        }
        let deg = gs[0].len() - 1;
        if deg == 0 {
            return Some(Poly::one());
        }
        if deg > best_deg {
            continue;
        }
        if deg < best_deg {
            best_deg = deg;
            lift.reset();
        }
        // flat layout: coefficient j, coordinate i
        let images: Vec<u64> =
            (0..=deg).flat_map(|j| sp.coords(&gs.iter().map(|g| g[j]).collect::<Vec<_>>())).collect();
        let Some(cand) = lift.add(&images, p) else { continue };
        let phi = sp.roots.len();
        let g = Poly::new(cand.chunks(phi).map(|c| Cyclotomic::new(n, c.to_vec())).collect());
        if g.lead().is_one() && a.divrem_monic(&g).1.is_zero() && b.divrem_monic(&g).1.is_zero() {
            return Some(g);
        }
        lift.reset();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn gcd_over_q_zeta12() {
        let s = Cyclotomic::sqrt3().times(&Cyclotomic::i());
        // (t - i sqrt3)(t + 1/2) and (t - i sqrt3)(t - 2)^2
        let g = Poly::new(vec![s.negate(), c(1)]);
        let a = g.times(&Poly::new(vec![Cyclotomic::rational(crate::algebra::ring::q(1, 2)), c(1)]));
        let b = g.times(&Poly::new(vec![c(-2), c(1)]).power(2));
        assert_eq!(cyclotomic_gcd(&a, &b).unwrap(), g);
        let coprime = Poly::new(vec![c(3), c(1)]);
        assert_eq!(cyclotomic_gcd(&a, &coprime).unwrap(), Poly::one());
    }
}
