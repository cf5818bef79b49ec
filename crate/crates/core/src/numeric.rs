//! Fixed-step complex RK4 and the drift diagnostics built on it.
//!
//! Everything here is an independent floating-point cross-check of the exact
//! modules: cross-ratios of four Riccati solutions stay constant, a solution
//! seeded on a root of the Darboux polynomial stays on it, and Ω²/H³ is a
//! first integral. The equianharmonic ℘₀ (g₂ = 0) is evaluated from its
//! Laurent series only, inside 0.8 times the distance to the nearest lattice
//! point.

use std::io::Write;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::mpoly::MPoly;
use crate::algebra::ring::{q_to_string, qi, Ring, Q};
use crate::algebra::Poly;
use crate::anharmonic::{build_riccati, orbit_polynomial, poly_roots, rf_c64, AnharmonicSpec};
use crate::darboux::{build_phi, covariants, ConstraintIdeal};
use crate::mobius::GroupKind;
use crate::report::{Check, Report};

type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("non-finite state at z = {0}")]
    Singular(C64),
    #[error("degenerate path: {0}")]
    Degenerate(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

/// Every numeric threshold used by the suite, in one place.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// |u(1) − ½| for u′ = −u² and |y(2π) − y(0)| for y′ = iy.
    pub closed_form: f64,
    /// Relative cross-ratio drift on the closed-form and ℘₀ problems.
    pub cross_ratio: f64,
    /// Relative cross-ratio drift for the constructed dihedral equation.
    pub anharmonic_cross_ratio: f64,
    /// Relative |Φ(u)| along a trajectory seeded on a root.
    pub phi_residual: f64,
    /// Relative drift of Ω²/H³.
    pub gamma_drift: f64,
    /// Accepted window for the error ratio under step halving.
    pub rk4_ratio: (f64, f64),
    /// Negative controls must exceed this.
    pub control_departure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            closed_form: 1e-8,
            cross_ratio: 1e-9,
            anharmonic_cross_ratio: 1e-8,
            phi_residual: 1e-8,
            gamma_drift: 1e-6,
            rk4_ratio: (12.0, 20.0),
            control_departure: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub steps: usize,
    pub g3: Q,
    pub tol: Tolerances,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { steps: 4000, g3: qi(4), tol: Tolerances::default() }
    }
}

type Rhs<'a> = Box<dyn Fn(C64, &[C64]) -> Vec<C64> + 'a>;

/// y′ = f(z, y) over C^dim.
pub struct OdeSystem<'a> {
    pub dim: usize,
    pub tag: String,
    rhs: Rhs<'a>,
}

impl<'a> OdeSystem<'a> {
    pub fn new(dim: usize, tag: impl Into<String>, rhs: impl Fn(C64, &[C64]) -> Vec<C64> + 'a) -> Self {
        OdeSystem { dim, tag: tag.into(), rhs: Box::new(rhs) }
    }

    pub fn eval(&self, z: C64, y: &[C64]) -> Vec<C64> {
        (self.rhs)(z, y)
    }

    /// u_i′ = B₀ + B₁u_i + B₂u_i² for each component.
    pub fn riccati(dim: usize, tag: impl Into<String>, b: impl Fn(C64) -> [C64; 3] + 'a) -> Self {
        Self::new(dim, tag, move |z, y| {
            let [b0, b1, b2] = b(z);
            y.iter().map(|u| b0 + b1 * u + b2 * u * u).collect()
        })
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub z: Vec<C64>,
    pub y: Vec<Vec<C64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[C64] {
        self.y.last().expect("trajectory has the initial point")
    }

    /// CSV with columns z_re, z_im, then re/im of each component.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let dim = self.y.first().map_or(0, Vec::len);
        let mut header = vec!["z_re".to_string(), "z_im".to_string()];
        for i in 0..dim {
            header.push(format!("u{i}_re"));
            header.push(format!("u{i}_im"));
        }
        w.write_record(&header)?;
        for (z, y) in self.z.iter().zip(&self.y) {
            let mut row = vec![z.re.to_string(), z.im.to_string()];
            for u in y {
                row.push(u.re.to_string());
                row.push(u.im.to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn axpy(y: &[C64], h: C64, k: &[C64]) -> Vec<C64> {
    y.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

/// Classical RK4 along the straight segment z0 → z1.
pub fn rk4_integrate(sys: &OdeSystem, y0: &[C64], z0: C64, z1: C64, steps: usize) -> Result<Trajectory, NumericError> {
    if steps == 0 {
        return Err(NumericError::Invalid("steps must be at least 1".into()));
    }
    if y0.len() != sys.dim {
        return Err(NumericError::Invalid(format!("expected {} initial values, got {}", sys.dim, y0.len())));
    }
    let h = (z1 - z0) / steps as f64;
    let mut zs = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    zs.push(z0);
    ys.push(y.clone());
    for i in 0..steps {
        let z = z0 + h * i as f64;
        let k1 = sys.eval(z, &y);
        let k2 = sys.eval(z + h / 2.0, &axpy(&y, h / 2.0, &k1));
        let k3 = sys.eval(z + h / 2.0, &axpy(&y, h / 2.0, &k2));
        let k4 = sys.eval(z + h, &axpy(&y, h, &k3));
        for j in 0..y.len() {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let zn = z0 + h * (i + 1) as f64;
        if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(NumericError::Singular(zn));
        }
        zs.push(zn);
        ys.push(y.clone());
    }
    Ok(Trajectory { z: zs, y: ys })
}

/// End value with `steps` and a Richardson estimate |y_h − y_(h/2)|/15.
pub fn rk4_with_estimate(
    sys: &OdeSystem,
    y0: &[C64],
    z0: C64,
    z1: C64,
    steps: usize,
) -> Result<(Vec<C64>, f64), NumericError> {
    let coarse = rk4_integrate(sys, y0, z0, z1, steps)?;
    let fine = rk4_integrate(sys, y0, z0, z1, 2 * steps)?;
    let err = coarse.last().iter().zip(fine.last()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / 15.0;
    Ok((fine.last().to_vec(), err))
}

/// Error ratio e(N)/e(2N) on u′ = −u², u(0) = 1 over [0, 1].
pub fn rk4_convergence_ratio(steps: usize) -> Result<f64, NumericError> {
    let sys = OdeSystem::new(1, "u'=-u^2", |_, y| vec![-y[0] * y[0]]);
    let one = C64::new(1.0, 0.0);
    let err = |n| -> Result<f64, NumericError> {
        let t = rk4_integrate(&sys, &[one], C64::new(0.0, 0.0), one, n)?;
        Ok((t.last()[0] - 0.5).norm())
    };
    Ok(err(steps)? / err(2 * steps)?)
}

pub fn cross_ratio_c64(u: &[C64]) -> C64 {
    (u[0] - u[2]) * (u[1] - u[3]) / ((u[1] - u[2]) * (u[0] - u[3]))
}

/// Max relative |cr(z) − cr(z₀)| over the path for four solutions.
pub fn cross_ratio_drift(sys: &OdeSystem, ics: [C64; 4], z0: C64, z1: C64, steps: usize) -> Result<f64, NumericError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if (ics[i] - ics[j]).norm() < 1e-12 {
                return Err(NumericError::Invalid(format!("initial values {i} and {j} coincide")));
            }
        }
    }
    let traj = rk4_integrate(sys, &ics, z0, z1, steps)?;
    let cr0 = cross_ratio_c64(&ics);
    let scale = cr0.norm().max(1e-300);
    let mut worst = 0.0f64;
    for (z, y) in traj.z.iter().zip(&traj.y) {
        let sep = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| (y[i] - y[j]).norm())
            .fold(f64::MAX, f64::min);
        if sep < 1e-10 {
            return Err(NumericError::Degenerate(format!("solutions collide near z = {z}")));
        }
        worst = worst.max((cross_ratio_c64(y) - cr0).norm() / scale);
    }
    Ok(worst)
}

/// Laurent data of the equianharmonic ℘₀ = z⁻² + Σ_(k≥1) c_k z^(2k−2).
#[derive(Clone, Debug)]
pub struct LaurentP0 {
    pub g3: Q,
    /// c_1..c_M (index 0 holds c_1).
    pub coeffs: Vec<Q>,
    approx: Vec<f64>,
}

/// c₁ = c₂ = 0, c₃ = g₃/28, c_k = 3/((2k+1)(k−3)) Σ_(m=2)^(k−2) c_m c_(k−m).
pub fn p0_series(g3: &Q, m: usize) -> Result<LaurentP0, NumericError> {
    if num_traits::Zero::is_zero(g3) {
        return Err(NumericError::Invalid("g3 must be nonzero".into()));
    }
    if m < 8 {
        return Err(NumericError::Invalid("at least 8 Laurent coefficients are needed".into()));
    }
    let mut c = vec![qi(0); m + 1];
    c[3] = g3 / qi(28);
    for k in 4..=m {
        let s = (2..=k - 2).fold(qi(0), |acc, j| acc + &c[j] * &c[k - j]);
        c[k] = s * BigRational::new(3.into(), ((2 * k + 1) * (k - 3)).into());
    }
    let coeffs: Vec<Q> = c[1..].to_vec();
    let approx = coeffs.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    Ok(LaurentP0 { g3: g3.clone(), coeffs, approx })
}

impl LaurentP0 {
    /// Coefficient of z^j (j ≥ −2), exact.
    pub fn coeff(&self, j: i64) -> Q {
        if j == -2 {
            return qi(1);
        }
        if j < 0 || j % 2 == 1 {
            return qi(0);
        }
        self.coeffs.get((j as usize + 2) / 2 - 1).cloned().unwrap_or_else(|| qi(0))
    }

    /// Highest exponent known exactly.
    pub fn known_through(&self) -> i64 {
        2 * self.coeffs.len() as i64 - 2
    }

    /// Distance from 0 to the nearest nonzero lattice point: 2|ω| with
    /// ω = (g₃/4)^(1/3) g₃^(−1/2) B(1/6, 1/2)/3 for the hexagonal lattice.
    pub fn lattice_distance(&self) -> f64 {
        let g = self.g3.to_f64().unwrap_or(f64::NAN).abs();
        let beta = libm::tgamma(1.0 / 6.0) * libm::tgamma(0.5) / libm::tgamma(2.0 / 3.0);
        2.0 * (g / 4.0).cbrt() / g.sqrt() * beta / 3.0
    }

    /// (℘₀(z), ℘₀′(z)).
    pub fn eval(&self, z: C64) -> (C64, C64) {
        let z2 = z * z;
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        // Horner in z² over c_1 + c_2 z² + …, then add the principal part.
        for (i, c) in self.approx.iter().enumerate().rev() {
            p = p * z2 + c;
            let k = i + 1;
            if k >= 2 {
                dp = dp * z2 + (2 * k - 2) as f64 * c;
            }
        }
        // dp holds Σ (2k−2)c_k z^(2k−4) for k ≥ 2, so multiply by z once
        (p + 1.0 / z2, dp * z - 2.0 / (z2 * z))
    }

    /// (℘′)² − 4℘³ + g₃ vanishes exactly through z^(known − 4).
    pub fn residual_check(&self) -> Check {
        let top = self.known_through();
        let lo = -6;
        let hi = top - 4;
        let p: Vec<Q> = (-2..=top).map(|j| self.coeff(j)).collect(); // index j + 2
        let dp: Vec<Q> = (-3..=top - 1).map(|j| self.coeff(j + 1) * qi(j + 1)).collect(); // index j + 3
        let mut first_bad = None;
        for e in lo..=hi {
            let mut s = qi(0);
            for i in -3..=top - 1 {
                let j = e - i;
                if (-3..=top - 1).contains(&j) {
                    s += &dp[(i + 3) as usize] * &dp[(j + 3) as usize];
                }
            }
            for i in -2..=top {
                for j in -2..=top {
                    let k = e - i - j;
                    if (-2..=top).contains(&k) {
                        s -= qi(4) * &p[(i + 2) as usize] * &p[(j + 2) as usize] * &p[(k + 2) as usize];
                    }
                }
            }
            if e == 0 {
                s += &self.g3;
            }
            if !num_traits::Zero::is_zero(&s) {
                first_bad = Some((format!("{} at z^{e}", q_to_string(&s)), Some(e)));
                break;
            }
        }
        Check::exact("p0/weierstrass_residual", first_bad).with_order((hi + 1) as u32)
    }
}

/// Relative residual of a polynomial in u: |P(u)| / Σ|c_k||u|^k.
fn rel_eval(coeffs: &[C64], u: C64) -> f64 {
    let mut v = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    for c in coeffs.iter().rev() {
        v = v * u + c;
        scale = scale * u.norm() + c.norm();
    }
    v.norm() / scale.max(1e-300)
}

fn eval_upoly(p: &Poly<MPoly>, qv: &[C64; 2]) -> Vec<C64> {
    p.coeffs().iter().map(|c| c.eval_c64(qv)).collect()
}

fn horner(c: &[C64], u: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, x| acc * u + x)
}

#[derive(Clone, Debug)]
pub struct FirstIntegralDrift {
    pub phi_residual: f64,
    pub gamma0: C64,
    pub gamma_drift: f64,
}

/// Along u′ = q − u² with q = (3/4)℘₀ (so q″ = 8q²): the largest relative
/// |Φ(u)| and the relative drift of Ω²/H³, for u(z₀) a root of Φ(·, z₀) or,
/// with `on_root = false`, that root shifted by 0.05.
pub fn first_integral_drift(
    p0: &LaurentP0,
    z0: C64,
    z1: C64,
    steps: usize,
    on_root: bool,
) -> Result<FirstIntegralDrift, NumericError> {
    let limit = 0.8 * p0.lattice_distance();
    if z0.norm() >= limit || z1.norm() >= limit {
        return Err(NumericError::Invalid(format!("path leaves |z| < {limit:.4}")));
    }
    let data = build_phi(4, &MPoly::zero()).map_err(|e| NumericError::Construction(e.to_string()))?;
    let ideal = ConstraintIdeal::for_degree(4);
    let phi = ideal.reduce_u(&data.phi);
    let cov = covariants(&phi, 4);
    let (h, omega) = (ideal.reduce_u(&cov.h), ideal.reduce_u(&cov.omega));
    let qvals = |z: C64| -> [C64; 2] {
        let (p, dp) = p0.eval(z);
        [0.75 * p, 0.75 * dp]
    };
    let q0 = qvals(z0);
    let roots = poly_roots(&eval_upoly(&phi, &q0));
    let h0 = eval_upoly(&h, &q0);
    // the root where H is best conditioned
    let seed = roots
        .iter()
        .copied()
        .max_by(|a, b| rel_eval(&h0, *a).total_cmp(&rel_eval(&h0, *b)))
        .ok_or_else(|| NumericError::Construction("Phi has no roots".into()))?;
    let seed = if on_root { seed } else { seed + 0.05 };
    let sys = OdeSystem::new(1, "u'=q-u^2", |z, y| vec![qvals(z)[0] - y[0] * y[0]]);
    let traj = rk4_integrate(&sys, &[seed], z0, z1, steps)?;
    let mut phi_res = 0.0f64;
    let mut gamma0 = None;
    let mut drift = 0.0f64;
    for (z, y) in traj.z.iter().zip(&traj.y) {
        let qv = qvals(*z);
        let u = y[0];
        phi_res = phi_res.max(rel_eval(&eval_upoly(&phi, &qv), u));
        let hc = eval_upoly(&h, &qv);
        if rel_eval(&hc, u) < 1e-8 {
            return Err(NumericError::IllConditioned(format!("H nearly vanishes at z = {z}")));
        }
        let gamma = horner(&eval_upoly(&omega, &qv), u).powi(2) / horner(&hc, u).powi(3);
        let g0 = *gamma0.get_or_insert(gamma);
        drift = drift.max((gamma - g0).norm() / g0.norm().max(1e-300));
    }
    Ok(FirstIntegralDrift { phi_residual: phi_res, gamma0: gamma0.unwrap_or_default(), gamma_drift: drift })
}

/// Cross-ratio drift for four solutions of the Riccati equation built from
/// the dihedral(3), p = 2 anharmonic, coefficients embedded numerically.
pub fn dihedral_cross_ratio_drift(steps: usize) -> Result<f64, NumericError> {
    let spec =
        AnharmonicSpec::new(GroupKind::Dihedral(3), 3, 2).map_err(|e| NumericError::Construction(e.to_string()))?;
    let u = orbit_polynomial(&spec).map_err(|e| NumericError::Construction(e.to_string()))?;
    let ric = build_riccati(&spec, &u).map_err(|e| NumericError::Construction(e.to_string()))?;
    let sys = OdeSystem::riccati(4, "dihedral3", |t| [rf_c64(&ric.b0, t), rf_c64(&ric.b1, t), rf_c64(&ric.b2, t)]);
    let ics = [C64::new(0.3, 0.1), C64::new(-0.4, 0.2), C64::new(0.1, -0.5), C64::new(0.7, 0.6)];
    cross_ratio_drift(&sys, ics, C64::new(0.3, 0.2), C64::new(0.6, 0.5), steps)
}

fn std_ics() -> [C64; 4] {
    [1.0, 2.0, 3.0, 4.0].map(|x| C64::new(x, 0.0))
}

/// Segment used for the ℘₀ checks, inside the disk and away from the pole.
pub const P0_PATH: (C64, C64) = (C64::new(0.6, 0.3), C64::new(1.2, 0.6));

/// The numeric suite.
pub fn run_all(opts: &NumericOptions) -> Report {
    let tol = &opts.tol;
    let steps = opts.steps;
    let mut rep = Report::new("numeric");
    let err_check = |name: &str, e: NumericError| Check::exact(name, Some((e.to_string(), None)));
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);

    let free = OdeSystem::new(1, "u'=-u^2", |_, y| vec![-y[0] * y[0]]);
    rep.push(match rk4_integrate(&free, &[one], zero, one, 10_000) {
        Ok(t) => Check::numeric("rk4/closed_form", (t.last()[0] - 0.5).norm(), tol.closed_form),
        Err(e) => err_check("rk4/closed_form", e),
    });
    let rot = OdeSystem::new(1, "y'=iy", |_, y| vec![C64::i() * y[0]]);
    let two_pi = C64::new(2.0 * std::f64::consts::PI, 0.0);
    rep.push(match rk4_integrate(&rot, &[one], zero, two_pi, 10_000) {
        Ok(t) => Check::numeric("rk4/linear", (t.last()[0] - one).norm(), tol.closed_form),
        Err(e) => err_check("rk4/linear", e),
    });
    rep.push(match rk4_convergence_ratio(16) {
        Ok(r) => Check::flag(
            "rk4/convergence_ratio",
            (tol.rk4_ratio.0..=tol.rk4_ratio.1).contains(&r),
            format!("ratio {r:.3}"),
        ),
        Err(e) => err_check("rk4/convergence_ratio", e),
    });

    let free4 = OdeSystem::riccati(4, "u'=-u^2", |_| [zero, zero, -one]);
    rep.push(match cross_ratio_drift(&free4, std_ics(), zero, one, steps) {
        Ok(d) => Check::numeric("cross_ratio/free", d, tol.cross_ratio),
        Err(e) => err_check("cross_ratio/free", e),
    });

    match p0_series(&opts.g3, 120) {
        Err(e) => rep.push(err_check("p0/series", e)),
        Ok(p0) => {
            rep.push(
                p0_series(&opts.g3, 16)
                    .map_or_else(|e| err_check("p0/weierstrass_residual", e), |s| s.residual_check()),
            );
            let c3_ok = p0.coeff(4) == &opts.g3 / qi(28) && p0.coeff(2) == qi(0);
            rep.push(Check::flag("p0/leading_coefficients", c3_ok, "z^2 coefficient 0, z^4 coefficient g3/28"));
            let (z0, z1) = P0_PATH;
            let p0_ref = &p0;
            let sys = OdeSystem::riccati(4, "u'=q-u^2", move |z| [0.75 * p0_ref.eval(z).0, zero, -one]);
            let ics = [C64::new(0.5, 0.2), C64::new(-0.7, 0.1), C64::new(1.1, -0.4), C64::new(0.2, 0.9)];
            rep.push(match cross_ratio_drift(&sys, ics, z0, z1, steps) {
                Ok(d) => Check::numeric("cross_ratio/p0", d, tol.cross_ratio),
                Err(e) => err_check("cross_ratio/p0", e),
            });
            match first_integral_drift(&p0, z0, z1, steps, true) {
                Ok(fi) => {
                    rep.push(Check::numeric("first_integral/phi_residual", fi.phi_residual, tol.phi_residual));
                    rep.push(
                        Check::numeric("first_integral/gamma_drift", fi.gamma_drift, tol.gamma_drift)
                            .with_detail(format!("Omega^2/H^3 = {:.10} {:+.3e}i", fi.gamma0.re, fi.gamma0.im)),
                    );
                }
                Err(e) => rep.push(err_check("first_integral/phi_residual", e)),
            }
            rep.push(match first_integral_drift(&p0, z0, z1, steps, false) {
                Ok(fi) => Check::flag(
                    "control/off_root_seed",
                    fi.phi_residual > tol.control_departure,
                    format!("Phi residual {:.3e}", fi.phi_residual),
                ),
                Err(e) => err_check("control/off_root_seed", e),
            });
        }
    }

    rep.push(match dihedral_cross_ratio_drift(steps) {
        Ok(d) => Check::numeric("cross_ratio/dihedral3", d, tol.anharmonic_cross_ratio),
        Err(e) => err_check("cross_ratio/dihedral3", e),
    });

    let cubic = OdeSystem::new(4, "u'=-u^3", |_, y| y.iter().map(|u| -u * u * u).collect());
    rep.push(match cross_ratio_drift(&cubic, std_ics().map(|x| x / 4.0), zero, one, steps) {
        Ok(d) => Check::flag("control/non_riccati_cross_ratio", d > tol.control_departure, format!("drift {d:.3e}")),
        Err(e) => err_check("control/non_riccati_cross_ratio", e),
    });
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let sys = OdeSystem::new(1, "", |_, y| vec![-y[0] * y[0]]);
        let one = C64::new(1.0, 0.0);
        let t = rk4_integrate(&sys, &[one], C64::default(), one, 10_000).unwrap();
        assert!((t.last()[0] - 0.5).norm() < 1e-8);
        let (v, est) = rk4_with_estimate(&sys, &[one], C64::default(), one, 50).unwrap();
        assert!((v[0] - 0.5).norm() < 1e-8 && est < 1e-7);
        assert!(rk4_integrate(&sys, &[one], C64::default(), one, 0).is_err());
    }

    #[test]
    fn convergence_order_four() {
        let r = rk4_convergence_ratio(16).unwrap();
        assert!((12.0..=20.0).contains(&r), "ratio {r}");
    }

    #[test]
    fn blow_up_is_reported() {
        // u = 1/(z − 1) reaches its pole at z = 1
        let sys = OdeSystem::new(1, "", |_, y| vec![-y[0] * y[0]]);
        let r = rk4_integrate(&sys, &[C64::new(-1.0, 0.0)], C64::default(), C64::new(2.0, 0.0), 2);
        assert!(matches!(r, Err(NumericError::Singular(_))) || r.unwrap().last()[0].norm() > 1e3);
    }

    #[test]
    fn cross_ratio_drift_shrinks_with_steps() {
        let sys = OdeSystem::riccati(4, "", |_| [C64::default(), C64::default(), C64::new(-1.0, 0.0)]);
        let one = C64::new(1.0, 0.0);
        let coarse = cross_ratio_drift(&sys, std_ics(), C64::default(), one, 50).unwrap();
        let fine = cross_ratio_drift(&sys, std_ics(), C64::default(), one, 100).unwrap();
        assert!(fine < coarse || coarse < 1e-14);
        let dup = [one, one, C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        assert!(cross_ratio_drift(&sys, dup, C64::default(), one, 10).is_err());
    }

    #[test]
    fn p0_coefficients_and_residual() {
        let p0 = p0_series(&qi(4), 20).unwrap();
        assert_eq!(p0.coeff(2), qi(0));
        assert_eq!(p0.coeff(4), BigRational::new(1.into(), 7.into()));
        assert_eq!(p0.coeff(0), qi(0));
        assert!(p0.residual_check().passed());
        assert!(p0_series(&qi(0), 20).is_err());
        // a tampered coefficient breaks the oracle
        let mut bad = p0.clone();
        bad.coeffs[5] += qi(1);
        assert!(!bad.residual_check().passed());
    }

    #[test]
    fn p0_numeric_ode() {
        // ℘″ = 6℘² when g₂ = 0, checked by central differences
        let p0 = p0_series(&qi(4), 120).unwrap();
        let z = C64::new(0.7, 0.4);
        let h = 1e-4;
        let (p, _) = p0.eval(z);
        let second = (p0.eval(z + h).0 - 2.0 * p + p0.eval(z - h).0) / (h * h);
        assert!((second - 6.0 * p * p).norm() / (6.0 * p * p).norm() < 1e-6);
        let (_, dp) = p0.eval(z);
        let fd = (p0.eval(z + h).0 - p0.eval(z - h).0) / (2.0 * h);
        assert!((dp - fd).norm() / dp.norm() < 1e-7);
        assert!((p0.lattice_distance() - 2.428_650_648).abs() < 1e-6);
    }

    #[test]
    fn trajectory_csv() {
        let sys = OdeSystem::new(1, "", |_, y| vec![-y[0] * y[0]]);
        let t = rk4_integrate(&sys, &[C64::new(1.0, 0.0)], C64::default(), C64::new(1.0, 0.0), 4).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("z_re,z_im,u0_re,u0_im"));
    }

    #[test]
    fn suite_passes() {
        let rep = run_all(&NumericOptions::default());
        assert!(rep.passed(), "{}", rep.to_text());
    }
}
