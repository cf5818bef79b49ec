//! Modular dynamical systems as exact identities.
//!
//! Every τ-derivative is rewritten with D = q d/dq (d/dτ = 2πi D) and the
//! powers of π are absorbed into hatted quantities, so each check is an
//! identity between q-series over Q:
//!
//! | original                         | hatted                                   |
//! |----------------------------------|------------------------------------------|
//! | e_i = π² ê_i                     | 2Dê = −ê² + ⅓E₂ê + (2/9)E₄               |
//! | X_k = π²X̂_k, t = (4i/π)τ         | ½D(X̂_i + X̂_j) = X̂_iX̂_j                  |
//! | ω_i = 2πi ŵ_i                    | Dŵ₁ = −ŵ₁(ŵ₂ + ŵ₃) + ŵ₂ŵ₃                 |
//!
//! For Chazy the sign-consistent statement is h = +E₂/6 under δ = D; the
//! opposite sign γ = −E₂/6 corresponds to reversing the time direction.
//!
//! The symbolic checks (Cramer replay of the cubic, S4 → S3, the degenerate
//! families) are exact multivariate identities.

use num_rational::BigRational;

use crate::algebra::mpoly::{MPoly, MRat};
use crate::algebra::ring::{q_to_string, qi, Field, Ring, Q};
use crate::qseries::{series_identity, FracSeries, ModularRegistry, SeriesError};
use crate::report::{Check, Report};

fn q(a: i64, b: i64) -> Q {
    BigRational::new(a.into(), b.into())
}

fn sq(s: &FracSeries) -> FracSeries {
    s.mul(s)
}

/// D E₂ = (E₂² − E₄)/12, D E₄ = (E₂E₄ − E₆)/3, D E₆ = (E₂E₆ − E₄²)/2.
pub fn verify_ramanujan(order: u32) -> Result<Report, SeriesError> {
    if order < 4 {
        return Err(SeriesError::OrderTooSmall(4));
    }
    let reg = ModularRegistry::new(order)?;
    Ok(ramanujan_report(&reg.e2, &reg.e4, &reg.e6, order))
}

pub fn ramanujan_report(e2: &FracSeries, e4: &FracSeries, e6: &FracSeries, order: u32) -> Report {
    let mut r = Report::new("halphen");
    r.push(series_identity("ramanujan/DE2", &e2.d(), &sq(e2).sub(e4).scale(&q(1, 12)), order));
    r.push(series_identity("ramanujan/DE4", &e4.d(), &e2.mul(e4).sub(e6).scale(&q(1, 3)), order));
    r.push(series_identity("ramanujan/DE6", &e6.d(), &e2.mul(e6).sub(&sq(e4)).scale(&q(1, 2)), order));
    r
}

/// 2Dê_i = −ê_i² + ⅓E₂ê_i + (2/9)E₄ for i = 1, 2, 3.
pub fn verify_e_riccati(order: u32) -> Result<Report, SeriesError> {
    if order < 4 {
        return Err(SeriesError::OrderTooSmall(4));
    }
    let reg = ModularRegistry::new(order)?;
    Ok(e_riccati_report(&reg.e_hat, &reg.e2, &reg.e4, order))
}

pub fn e_riccati_report(e: &[FracSeries; 3], e2: &FracSeries, e4: &FracSeries, order: u32) -> Report {
    let mut r = Report::new("halphen");
    for (i, ei) in e.iter().enumerate() {
        let lhs = ei.d().scale(&qi(2));
        let rhs = sq(ei).neg().add(&e2.mul(ei).scale(&q(1, 3))).add(&e4.scale(&q(2, 9)));
        r.push(series_identity(format!("e_riccati/e{}", i + 1), &lhs, &rhs, order));
    }
    r
}

/// h = E₂/6 solves δ³h = 6hδ²h − 9(δh)² with δ = D.
pub fn verify_chazy_series(order: u32) -> Result<Report, SeriesError> {
    if order < 6 {
        return Err(SeriesError::OrderTooSmall(6));
    }
    let reg = ModularRegistry::new(order)?;
    let mut r = Report::new("halphen");
    r.push(chazy_series_check(&reg.e2.scale(&q(1, 6)), order));
    Ok(r)
}

pub fn chazy_series_check(h: &FracSeries, order: u32) -> Check {
    let (h1, h2) = (h.d(), h.d().d());
    let rhs = h.mul(&h2).scale(&qi(6)).sub(&sq(&h1).scale(&qi(9)));
    series_identity("chazy/E2_over_6", &h2.d(), &rhs, order)
}

/// X̂_k = E₂/12 + ê_k/4.
pub fn hatted_x(e2: &FracSeries, e: &[FracSeries; 3]) -> [FracSeries; 3] {
    let base = e2.scale(&q(1, 12));
    [0, 1, 2].map(|k| base.add(&e[k].scale(&q(1, 4))))
}

/// ½D(X̂_i + X̂_j) = X̂_iX̂_j for the three pairs.
pub fn verify_hatted_halphen(order: u32) -> Result<Report, SeriesError> {
    if order < 4 {
        return Err(SeriesError::OrderTooSmall(4));
    }
    let reg = ModularRegistry::new(order)?;
    Ok(hatted_halphen_report(&hatted_x(&reg.e2, &reg.e_hat), order))
}

pub fn hatted_halphen_report(x: &[FracSeries; 3], order: u32) -> Report {
    let mut r = Report::new("halphen");
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let lhs = x[i].add(&x[j]).d().scale(&q(1, 2));
        r.push(series_identity(format!("halphen_S4/X{}X{}", i + 1, j + 1), &lhs, &x[i].mul(&x[j]), order));
    }
    r
}

/// Which companion functions feed the λ-parameterization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaVariant {
    /// λ′/λ, λ′/(λ − 1), λ′/(λ(λ − 1)).
    Standard,
    /// λ − 1 put in place of λ in the third slot; must fail.
    WrongSlot,
}

/// ŵ_i = −½ D log f_i with f₁ = Dλ/λ, f₂ = Dλ/(λ − 1), f₃ = Dλ/(λ(λ − 1)),
/// checked against the Darboux-Halphen system in hatted form.
pub fn lambda_parameterization_check(order: u32, variant: LambdaVariant) -> Result<Report, SeriesError> {
    if order < 4 {
        return Err(SeriesError::OrderTooSmall(4));
    }
    // Dividing by λ (valuation 1 in s) costs two s-orders per inversion.
    let reg = ModularRegistry::new(order + 4)?;
    let lam = &reg.lambda;
    let one = FracSeries::one(2, i64::MAX / 4);
    let lm1 = lam.sub(&one);
    let dl = lam.d();
    let third_den = match variant {
        LambdaVariant::Standard => lam.mul(&lm1),
        LambdaVariant::WrongSlot => lm1.mul(&lm1),
    };
    let fs = [dl.div(lam)?, dl.div(&lm1)?, dl.div(&third_den)?];
    let mut w = Vec::with_capacity(3);
    for f in &fs {
        w.push(f.log_derivative()?.scale(&q(-1, 2)));
    }
    let mut r = Report::new("halphen");
    for (i, j, k) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        let rhs = w[i].mul(&w[j].add(&w[k])).neg().add(&w[j].mul(&w[k]));
        r.push(series_identity(format!("lambda_DH/w{}", i + 1), &w[i].d(), &rhs, order));
    }
    Ok(r)
}

// ---- symbolic identities ----

fn var(i: usize) -> MPoly {
    MPoly::var(i)
}

fn c(a: i64, b: i64) -> MPoly {
    MPoly::constant(q(a, b))
}

fn det3(m: &[[MPoly; 3]; 3]) -> MPoly {
    let minor = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&x| x != c).collect();
        m[rows[0]][cols[0]].times(&m[rows[1]][cols[1]]).minus(&m[rows[0]][cols[1]].times(&m[rows[1]][cols[0]]))
    };
    (0..3).fold(MPoly::zero(), |acc, j| {
        let t = m[0][j].times(&minor(0, j));
        if j % 2 == 0 {
            acc.plus(&t)
        } else {
            acc.minus(&t)
        }
    })
}

fn mpoly_residual(p: &MPoly, names: &[&str]) -> Option<(String, Option<i64>)> {
    if p.is_zero() {
        return None;
    }
    let s = p.fmt_with(&|i| names.get(i).map_or_else(|| format!("v{i}"), |n| n.to_string()));
    let s = if s.len() > 160 { format!("{}... ({} terms)", &s[..160], p.num_terms()) } else { s };
    Some((s, None))
}

const OMEGA: [&str; 4] = ["w1", "w2", "w3", "g3"];

/// Darboux-Halphen from the cubic ω³ + (3/2)γω² + (3/2)γ′ω + ¼γ″ = 0: express
/// γ, γ′, γ″ through the roots, differentiate the Vieta relations, solve for
/// ω̇ by Cramer and compare with −ω_i(ω_j + ω_k) + ω_jω_k.
pub fn cubic_dh_identity() -> Report {
    cubic_dh_report(true)
}

/// With `use_chazy = false`, γ‴ stays a free symbol and the identity fails.
pub fn cubic_dh_report(use_chazy: bool) -> Report {
    let w = [var(0), var(1), var(2)];
    let e1 = w[0].plus(&w[1]).plus(&w[2]);
    let e2 = w[0].times(&w[1]).plus(&w[0].times(&w[2])).plus(&w[1].times(&w[2]));
    let e3 = w[0].times(&w[1]).times(&w[2]);
    let g0 = e1.times(&c(-2, 3));
    let g1 = e2.times(&c(2, 3));
    let g2 = e3.times(&c(-4, 1));
    let g3 = if use_chazy { g0.times(&g2).scale_int(6).minus(&g1.times(&g1).scale_int(9)) } else { var(3) };
    let m = [
        [MPoly::one(), MPoly::one(), MPoly::one()],
        [w[1].plus(&w[2]), w[0].plus(&w[2]), w[0].plus(&w[1])],
        [w[1].times(&w[2]), w[0].times(&w[2]), w[0].times(&w[1])],
    ];
    let rhs = [g1.times(&c(-3, 2)), g2.times(&c(3, 2)), g3.times(&c(-1, 4))];
    let det = det3(&m);
    let mut r = Report::new("halphen");
    for i in 0..3 {
        let mut mi = m.clone();
        for row in 0..3 {
            mi[row][i] = rhs[row].clone();
        }
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let expect = w[i].times(&w[j].plus(&w[k])).negate().plus(&w[j].times(&w[k]));
        let res = det3(&mi).minus(&expect.times(&det));
        let tag = if use_chazy { "" } else { "_without_chazy" };
        r.push(Check::exact(format!("cubic_dh/w{}dot{tag}", i + 1), mpoly_residual(&res, &OMEGA)));
    }
    r
}

/// Time derivative of a polynomial in X₁, X₂, X₃ along (S4).
fn s4_flow(p: &MPoly, x: &[MPoly; 3]) -> MPoly {
    let half = c(1, 2);
    (0..3).fold(MPoly::zero(), |acc, i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // from d/dt(X_i + X_j) = X_iX_j and its two companions
        let xi_dot = x[i].times(&x[j]).plus(&x[i].times(&x[k])).minus(&x[j].times(&x[k])).times(&half);
        acc.plus(&p.derivative(i).times(&xi_dot))
    })
}

/// (S4) ⇒ (S3) under (S5), plus the sign map X_i = −2ω_i to Darboux-Halphen.
pub fn s4_s3_equivalence() -> Report {
    let x = [var(0), var(1), var(2)];
    let xs = x[0].plus(&x[1]).plus(&x[2]);
    let sq_sum = x.iter().fold(MPoly::zero(), |a, xi| a.plus(&xi.times(xi)));
    let cross = x[0].times(&x[1]).plus(&x[1].times(&x[2])).plus(&x[2].times(&x[0]));
    let lin = |i: usize| x[i].scale_int(2).minus(&x[(i + 1) % 3]).minus(&x[(i + 2) % 3]);
    let xx = xs.times(&c(1, 3));
    let yy = sq_sum.minus(&cross).times(&c(4, 3));
    let zz = lin(0).times(&lin(1)).times(&lin(2)).times(&c(4, 27));
    let names = ["X1", "X2", "X3"];
    let mut r = Report::new("halphen");
    let eqs = [
        ("s3/dx", &xx, xx.times(&xx).times(&c(1, 2)).minus(&yy.times(&c(1, 24)))),
        ("s3/dy", &yy, xx.times(&yy).scale_int(2).minus(&zz.scale_int(3))),
        ("s3/dz", &zz, xx.times(&zz).scale_int(3).minus(&yy.times(&yy).times(&c(1, 6)))),
    ];
    for (name, f, rhs) in eqs {
        r.push(Check::exact(name, mpoly_residual(&s4_flow(f, &x).minus(&rhs), &names)));
    }
    // X_i = -2 w_i with w solving Darboux-Halphen gives back (S4)
    let w = [var(0), var(1), var(2)];
    let dh = |i: usize| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        w[i].times(&w[j].plus(&w[k])).negate().plus(&w[j].times(&w[k]))
    };
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let lhs = dh(i).plus(&dh(j)).scale_int(-2);
        let rhs = w[i].scale_int(-2).times(&w[j].scale_int(-2));
        r.push(Check::exact(format!("s4_from_dh/X{}X{}", i + 1, j + 1), mpoly_residual(&lhs.minus(&rhs), &OMEGA)));
    }
    r
}

// variables of the degenerate families
const A: usize = 0;
const C: usize = 1;
const D: usize = 2;
const TAU: usize = 3;
const TAU0: usize = 4;
const FAMILY: [&str; 5] = ["a", "c", "d", "tau", "tau0"];

fn dh_residuals(w: &[MRat; 3]) -> Vec<MRat> {
    (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let rhs = w[i].times(&w[j].plus(&w[k])).negate().plus(&w[j].times(&w[k]));
            w[i].derivative(TAU).minus(&rhs)
        })
        .collect()
}

fn mrat_residual(r: &MRat) -> Option<(String, Option<i64>)> {
    mpoly_residual(&r.num, &FAMILY)
}

/// The closed-form solutions: all ω equal to 1/(τ − τ₀); ω₂ = ω₃ = c/(cτ + d)
/// with ω₁ = c/(cτ + d) − a/(cτ + d)²; and the rational Chazy solution
/// γ = −2c/(cτ + d) + (2/3)a/(cτ + d)².
pub fn degenerate_solutions_check() -> Report {
    let v = MRat::var;
    let s = v(C).times(&v(TAU)).plus(&v(D));
    let inv_s = s.inv().expect("c tau + d != 0");
    let mut r = Report::new("halphen");

    let all = v(TAU).minus(&v(TAU0)).inv().expect("nonzero");
    for (i, res) in dh_residuals(&[all.clone(), all.clone(), all]).iter().enumerate() {
        r.push(Check::exact(format!("degenerate/all_equal/w{}", i + 1), mrat_residual(res)));
    }

    let w23 = v(C).times(&inv_s);
    let w1 = w23.minus(&v(A).times(&inv_s).times(&inv_s));
    for (i, res) in dh_residuals(&[w1, w23.clone(), w23]).iter().enumerate() {
        r.push(Check::exact(format!("degenerate/two_equal/w{}", i + 1), mrat_residual(res)));
    }

    let g = v(C).times(&inv_s).scale_int(-2).plus(&MRat::constant(q(2, 3)).times(&v(A)).times(&inv_s).times(&inv_s));
    r.push(Check::exact("degenerate/chazy_rational", mrat_residual(&chazy_residual(&g))));
    r
}

/// γ‴ − 6γγ″ + 9γ′² in the τ variable.
pub fn chazy_residual(g: &MRat) -> MRat {
    let g1 = g.derivative(TAU);
    let g2 = g1.derivative(TAU);
    let g3 = g2.derivative(TAU);
    g3.minus(&g.times(&g2).scale_int(6)).plus(&g1.times(&g1).scale_int(9))
}

/// Every check of this module.
pub fn run_all(order: u32) -> Result<Report, SeriesError> {
    let mut r = Report::new("halphen");
    for sub in [
        verify_ramanujan(order)?,
        verify_e_riccati(order)?,
        verify_chazy_series(order)?,
        verify_hatted_halphen(order)?,
        lambda_parameterization_check(order.min(24), LambdaVariant::Standard)?,
        cubic_dh_identity(),
        s4_s3_equivalence(),
        degenerate_solutions_check(),
    ] {
        r.extend(sub);
    }
    Ok(r)
}

/// Constant terms of X̂, rendered; handy in reports.
pub fn hatted_x_constants(order: u32) -> Result<[String; 3], SeriesError> {
    let reg = ModularRegistry::new(order)?;
    let x = hatted_x(&reg.e2, &reg.e_hat);
    Ok([0, 1, 2].map(|k| q_to_string(&x[k].coeff(0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramanujan_first_coefficient() {
        // D E2 at q^1 is -24; (E2^2 - E4)/12 at q^1 is (-48 - 240)/12 = -24
        let reg = ModularRegistry::new(4).unwrap();
        let rhs = sq(&reg.e2).sub(&reg.e4).scale(&q(1, 12));
        assert_eq!(rhs.coeff(1), qi(-24));
        assert!(verify_ramanujan(16).unwrap().passed());
    }

    #[test]
    fn corrupted_e6_fails() {
        let reg = ModularRegistry::new(12).unwrap();
        let mut c = reg.e6.dense_from(0);
        c[5] += qi(1);
        let bad = FracSeries::from_coeffs(1, 0, c, reg.e6.order());
        let r = ramanujan_report(&reg.e2, &reg.e4, &bad, 12);
        let fails: Vec<_> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(fails, vec!["ramanujan/DE4", "ramanujan/DE6"]);
    }

    #[test]
    fn chazy_and_negative_control() {
        assert!(verify_chazy_series(12).unwrap().passed());
        let reg = ModularRegistry::new(12).unwrap();
        assert!(!chazy_series_check(&reg.e2.scale(&q(1, 5)), 12).passed());
    }

    #[test]
    fn hatted_constants() {
        assert_eq!(hatted_x_constants(4).unwrap(), ["1/4".to_string(), "0".into(), "0".into()]);
        assert!(verify_hatted_halphen(12).unwrap().passed());
        assert!(verify_e_riccati(12).unwrap().passed());
    }

    #[test]
    fn lambda_parameterization() {
        assert!(lambda_parameterization_check(10, LambdaVariant::Standard).unwrap().passed());
        assert!(!lambda_parameterization_check(10, LambdaVariant::WrongSlot).unwrap().passed());
    }

    #[test]
    fn symbolic_identities() {
        assert!(cubic_dh_identity().passed());
        assert_eq!(cubic_dh_report(false).failures().count(), 3);
        assert!(s4_s3_equivalence().passed());
        let d = degenerate_solutions_check();
        assert!(d.passed(), "{}", d.to_text());
    }
}
