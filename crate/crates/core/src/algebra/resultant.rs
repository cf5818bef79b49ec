//! Sylvester resultants (fraction-free Bareiss) and small dense linear algebra.

#![allow(clippy::needless_range_loop)]

use super::poly::Poly;
use super::ring::{Field, Ring};
use super::AlgebraError;

/// Sylvester matrix of p (degree m) and q (degree n), size m + n.
pub fn sylvester<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Vec<Vec<R>> {
    let m = p.deg();
    let n = q.deg();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![R::zero(); size];
        for k in 0..=m {
            row[i + k] = p.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![R::zero(); size];
        for k in 0..=n {
            row[i + k] = q.coeff(n - k);
        }
        rows.push(row);
    }
    rows
}

/// Determinant by Bareiss fraction-free elimination; needs exact division.
pub fn det_bareiss<R: Ring>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut sign = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].times(&a[k][k]).minus(&a[i][k].times(&a[k][j]));
                a[i][j] = t.div_exact(&prev).expect("Bareiss division must be exact");
            }
            a[i][k] = R::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.negate()
    } else {
        d
    }
}

/// Res(p, q) as the Sylvester determinant. Coefficients may live in any
/// integral domain with exact division (for example polynomials in other
/// variables).
pub fn poly_resultant<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Result<R, AlgebraError> {
    if p.is_zero() || q.is_zero() {
        return Err(AlgebraError::Degenerate("resultant of a zero polynomial".into()));
    }
    if p.deg() == 0 {
        return Ok(p.lead().power(q.deg() as u32));
    }
    if q.deg() == 0 {
        return Ok(q.lead().power(p.deg() as u32));
    }
    Ok(det_bareiss(sylvester(p, q)))
}

/// Determinant over a field by Gaussian elimination.
pub fn det_field<K: Field>(mut a: Vec<Vec<K>>) -> K {
    let n = a.len();
    let mut det = K::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else { return K::zero() };
        if piv != k {
            a.swap(k, piv);
            det = det.negate();
        }
        det = det.times(&a[k][k]);
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].times(&inv);
            for j in k..n {
                let t = f.times(&a[k][j]);
                a[i][j] = a[i][j].minus(&t);
            }
        }
    }
    det
}

/// Characteristic polynomial det(x I - A) via Hessenberg reduction.
pub fn charpoly<K: Field>(a: &[Vec<K>]) -> Poly<K> {
    let n = a.len();
    let mut h: Vec<Vec<K>> = a.to_vec();
    // Reduce to upper Hessenberg form by similarity transforms.
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = h[m][m - 1].inv().expect("nonzero pivot");
        for i in m + 1..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let u = h[i][m - 1].times(&inv);
            for j in 0..n {
                let t = u.times(&h[m][j]);
                h[i][j] = h[i][j].minus(&t);
            }
            for row in h.iter_mut() {
                let t = u.times(&row[i]);
                row[m] = row[m].plus(&t);
            }
        }
    }
    // Recurrence on leading principal minors.
    let mut p: Vec<Poly<K>> = vec![Poly::one()];
    for m in 1..=n {
        let xm = Poly::new(vec![h[m - 1][m - 1].negate(), K::one()]);
        let mut pm = xm.times(&p[m - 1]);
        let mut t = K::one();
        for i in 1..m {
            t = t.times(&h[m - i][m - i - 1]);
            let c = t.times(&h[m - i - 1][m - 1]);
            pm = pm.minus(&p[m - i - 1].scale(&c));
        }
        p.push(pm);
    }
    p.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::{qi, Q};

    fn pq(v: &[i64]) -> Poly<Q> {
        Poly::new(v.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(poly_resultant(&pq(&[-2, 1]), &pq(&[-3, 1])).unwrap(), qi(-1));
        // Res_t(t^2 - 1, t - x) with coefficients in Q[x]
        let c = |v: &[i64]| Poly::new(v.iter().map(|&c| qi(c)).collect::<Vec<Q>>());
        let p: Poly<Poly<Q>> = Poly::new(vec![c(&[-1]), c(&[]), c(&[1])]);
        let q: Poly<Poly<Q>> = Poly::new(vec![c(&[0, -1]), c(&[1])]);
        assert_eq!(poly_resultant(&p, &q).unwrap(), c(&[-1, 0, 1]));
        assert!(poly_resultant(&pq(&[]), &pq(&[1, 1])).is_err());
    }

    #[test]
    fn charpoly_of_companion() {
        // companion matrix of x^3 - 2x + 5
        let z = qi(0);
        let a =
            vec![vec![z.clone(), z.clone(), qi(-5)], vec![qi(1), z.clone(), qi(2)], vec![z.clone(), qi(1), z.clone()]];
        assert_eq!(charpoly(&a), pq(&[5, -2, 0, 1]));
        assert_eq!(det_field(a), qi(-5));
    }
}
