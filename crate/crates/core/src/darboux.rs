//! Darboux polynomials of the Riccati derivation X = ∂/∂z + (q − u²)∂/∂u.
//!
//! Coefficients live in the jet ring Q[q, q′, q″, …] (variable k of an
//! [`MPoly`] is q⁽ᵏ⁾) and u-polynomials are `Poly<MPoly>`. Identities that
//! only hold on solutions of q″ = 6aq² are decided by rewriting every jet of
//! order ≥ 2 into Q[q, q′], which is a canonical normal form because the
//! ideal is generated by one rule and its derivatives.

use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::mpoly::MPoly;
use crate::algebra::ring::{q_to_string, qi, Ring, Q};
use crate::algebra::Poly;
use crate::binform::fourth_transvectant;
use crate::report::{Check, Report};

pub type DiffPoly = MPoly;
pub type UPoly = Poly<MPoly>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DarbouxError {
    #[error("degree n = {0} is outside the supported range")]
    Degree(usize),
    #[error("k = 6 − 12/n is not an integer for n = {0}")]
    NoFirstIntegral(usize),
    #[error("jet order {0} exceeds the precomputed rewrite rules")]
    JetOrder(usize),
}

fn q(a: i64, b: i64) -> Q {
    BigRational::new(a.into(), b.into())
}

/// q⁽ᵏ⁾ as a differential polynomial.
pub fn q_jet(k: usize) -> DiffPoly {
    MPoly::var(k)
}

pub fn jet_name(k: usize) -> String {
    match k {
        0 => "q".into(),
        1 => "q'".into(),
        2 => "q''".into(),
        _ => format!("q^({k})"),
    }
}

pub fn show(p: &DiffPoly) -> String {
    p.fmt_with(&jet_name)
}

fn u() -> UPoly {
    Poly::x()
}

fn scale_u(f: &UPoly, c: &Q) -> UPoly {
    f.scale(&MPoly::constant(c.clone()))
}

/// X(f) = Σ (∂_z c_j) u^j + (q − u²) ∂f/∂u.
pub fn derivation_x(f: &UPoly) -> UPoly {
    let dz = f.map(|c| c.jet_derivative());
    let drift = Poly::new(vec![q_jet(0), MPoly::zero(), MPoly::from_int(-1)]);
    dz.plus(&drift.times(&f.derivative()))
}

/// Φ, its coefficients a₀..a_n and the leftover k = n relation.
#[derive(Clone, Debug)]
pub struct PhiData {
    pub n: usize,
    pub a: Vec<DiffPoly>,
    pub phi: UPoly,
    /// a_n′ − na₁a_n + na_(n−1)q; vanishes exactly when X(Φ) = n(a₁ − u)Φ.
    pub closure: DiffPoly,
}

/// Coefficients from (n−k)a_(k+1) = na₁a_k − a_k′ − ka_(k−1)q, assembled as
/// Φ = Σ C(n,k) a_k u^(n−k).
pub fn build_phi(n: usize, a1: &DiffPoly) -> Result<PhiData, DarbouxError> {
    if n < 2 {
        return Err(DarbouxError::Degree(n));
    }
    let ni = n as i64;
    let qv = q_jet(0);
    let mut a = vec![MPoly::one(), a1.clone()];
    for k in 1..n {
        let rhs = a1
            .times(&a[k])
            .scale_q(&qi(ni))
            .minus(&a[k].jet_derivative())
            .minus(&a[k - 1].times(&qv).scale_q(&qi(k as i64)));
        a.push(rhs.scale_q(&q(1, ni - k as i64)));
    }
    let closure =
        a[n].jet_derivative().minus(&a1.times(&a[n]).scale_q(&qi(ni))).plus(&a[n - 1].times(&qv).scale_q(&qi(ni)));
    let mut coeffs = vec![MPoly::zero(); n + 1];
    let mut binom = BigRational::from_integer(1.into());
    for (k, ak) in a.iter().enumerate() {
        coeffs[n - k] = ak.scale_q(&binom);
        binom = binom * qi(ni - k as i64) / qi(k as i64 + 1);
    }
    Ok(PhiData { n, a, phi: Poly::new(coeffs), closure })
}

/// The differential ideal ⟨q″ − 6aq² − c⟩, as rewrite rules for q⁽ᵏ⁾, k ≥ 2.
#[derive(Clone, Debug)]
pub struct ConstraintIdeal {
    pub a: Q,
    pub c: Q,
    rules: Vec<DiffPoly>,
}

const MAX_JET: usize = 32;

impl ConstraintIdeal {
    pub fn new(a: Q) -> Self {
        Self::with_constant(a, qi(0))
    }

    /// q″ = 6aq² + c; `c` is the integration constant that the n = 4
    /// closure leaves undetermined.
    pub fn with_constant(a: Q, c: Q) -> Self {
        let first = q_jet(0).times(&q_jet(0)).scale_q(&(&a * qi(6))).plus(&MPoly::constant(c.clone()));
        let mut rules = vec![MPoly::zero(), MPoly::zero(), first];
        for k in 3..=MAX_JET {
            let d = rules[k - 1].jet_derivative().substitute(2, &rules[2]);
            rules.push(d);
        }
        ConstraintIdeal { a, c, rules }
    }

    /// a = (n−2)²/(n−1), the value forced by a degree-n Darboux polynomial.
    pub fn for_degree(n: usize) -> Self {
        let ni = n as i64;
        Self::new(q((ni - 2) * (ni - 2), ni - 1))
    }

    pub fn rule(&self, k: usize) -> Result<&DiffPoly, DarbouxError> {
        self.rules.get(k).filter(|_| k >= 2).ok_or(DarbouxError::JetOrder(k))
    }

    /// Normal form in Q[q, q′].
    pub fn reduce(&self, f: &DiffPoly) -> DiffPoly {
        let top = f.max_var().unwrap_or(0);
        assert!(top <= MAX_JET, "jet order {top} exceeds {MAX_JET}");
        (2..=top).rev().fold(f.clone(), |acc, k| acc.substitute(k, &self.rules[k]))
    }

    pub fn reduce_u(&self, f: &UPoly) -> UPoly {
        f.map(|c| self.reduce(c))
    }
}

#[derive(Clone, Debug)]
pub struct Covariants {
    pub h: UPoly,
    pub omega: UPoly,
    pub omega1: UPoly,
    pub xi: UPoly,
}

/// H = nΦΦ″ − (n−1)Φ′², Ω = nΦH′ − 2(n−2)HΦ′, Ω₁ = nΦΩ′ − 3(n−2)ΩΦ′,
/// Ξ = 2HΩ′ − 3ΩH′, primes in u.
pub fn covariants(phi: &UPoly, n: usize) -> Covariants {
    let ni = n as i64;
    let c = |v: i64| MPoly::from_int(v);
    let d1 = phi.derivative();
    let h = phi.times(&d1.derivative()).scale(&c(ni)).minus(&d1.times(&d1).scale(&c(ni - 1)));
    let omega = phi.times(&h.derivative()).scale(&c(ni)).minus(&h.times(&d1).scale(&c(2 * (ni - 2))));
    let omega1 = phi.times(&omega.derivative()).scale(&c(ni)).minus(&omega.times(&d1).scale(&c(3 * (ni - 2))));
    let xi = h.times(&omega.derivative()).scale(&c(2)).minus(&omega.times(&h.derivative()).scale(&c(3)));
    Covariants { h, omega, omega1, xi }
}

fn zero_mod(name: impl Into<String>, ideal: &ConstraintIdeal, f: &UPoly) -> Check {
    let r = ideal.reduce_u(f);
    if r.is_zero() {
        Check::exact(name, None)
    } else {
        let j = r.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
        Check::exact(name, Some((format!("u^{j} coefficient {}", show(&r.coeffs()[j])), Some(j as i64))))
    }
}

/// X(F) − (cofactor)·F for Φ and the four covariants, a₁ = 0.
pub fn verify_cofactors(phi: &UPoly, cov: &Covariants, ideal: &ConstraintIdeal, n: usize) -> Report {
    let ni = n as i64;
    let mut rep = Report::new("darboux");
    let cases: [(&str, &UPoly, i64); 5] = [
        ("Phi", phi, -ni),
        ("H", &cov.h, -2 * (ni - 2)),
        ("Omega", &cov.omega, -3 * (ni - 2)),
        ("Omega1", &cov.omega1, -4 * (ni - 2)),
        ("Xi", &cov.xi, -(5 * ni - 12)),
    ];
    for (name, f, k) in cases {
        let cofactor = u().scale(&MPoly::from_int(k));
        let lhs = derivation_x(f).minus(&cofactor.times(f));
        rep.push(zero_mod(format!("n{n}/cofactor_{name}"), ideal, &lhs));
    }
    rep
}

/// a, α, k and the computed β, C of the first-integral relations.
#[derive(Clone, Debug)]
pub struct FirstIntegrals {
    pub a: Q,
    pub alpha: Q,
    pub k: usize,
    pub beta: Option<DiffPoly>,
    pub c: Option<DiffPoly>,
}

/// Quotient of `f` by Φ^k if the remainder vanishes mod the ideal and the
/// quotient has u-degree 0; returns the reduced quotient.
fn u_free_quotient(f: &UPoly, phi_k: &UPoly, ideal: &ConstraintIdeal) -> Result<DiffPoly, String> {
    let (quo, rem) = f.divrem_monic(phi_k);
    let rem = ideal.reduce_u(&rem);
    if !rem.is_zero() {
        return Err(format!("remainder of u-degree {}", rem.deg()));
    }
    let quo = ideal.reduce_u(&quo);
    if quo.deg() > 0 {
        return Err(format!("quotient of u-degree {}", quo.deg()));
    }
    Ok(quo.coeff(0))
}

fn constant_check(name: String, value: &Result<DiffPoly, String>, ideal: &ConstraintIdeal) -> Check {
    match value {
        Err(e) => Check::exact(name, Some((e.clone(), None))),
        Ok(v) => {
            let d = ideal.reduce(&v.jet_derivative());
            if d.is_zero() {
                Check::exact(name, None).with_detail(format!("value {}", show(v)))
            } else {
                Check::exact(name, Some((format!("derivative {}", show(&d)), None)))
            }
        }
    }
}

/// Ω₁ − aH² ≡ 0, Ω² − αH³ = βΦ^k and Ξ = CΦ^(k−1) with β, C constant, all
/// modulo the ideal.
pub fn verify_first_integral_relations(
    phi: &UPoly,
    cov: &Covariants,
    ideal: &ConstraintIdeal,
    n: usize,
) -> Result<(Report, FirstIntegrals), DarbouxError> {
    let ni = n as i64;
    if 12 % n != 0 || n < 3 {
        return Err(DarbouxError::NoFirstIntegral(n));
    }
    let k = 6 - 12 / n;
    let a = q(-6 * (ni - 2) * (ni - 2), ni - 1);
    let alpha = q(-4 * (ni - 2) * (ni - 2), ni - 1);
    let mut rep = Report::new("darboux");
    let sq = |f: &UPoly| f.times(f);
    rep.push(zero_mod(format!("n{n}/Omega1_minus_aH2"), ideal, &cov.omega1.minus(&scale_u(&sq(&cov.h), &a))));
    let top = ideal.reduce_u(&sq(&cov.omega).minus(&scale_u(&cov.h.power(3), &alpha)));
    let beta = u_free_quotient(&top, &phi.power(k as u32), ideal);
    rep.push(constant_check(format!("n{n}/beta_constant"), &beta, ideal));
    let c = u_free_quotient(&ideal.reduce_u(&cov.xi), &phi.power(k as u32 - 1), ideal);
    rep.push(constant_check(format!("n{n}/Xi_over_Phi_constant"), &c, ideal));
    Ok((rep, FirstIntegrals { a, alpha, k, beta: beta.ok(), c: c.ok() }))
}

/// τ₄(Φ) two ways: (n−1)/n² · (Ω₁ − aH²)/Φ², and the fourth transvectant of
/// Φ in u. They must agree and vanish mod the ideal.
pub fn tau4_check(phi: &UPoly, cov: &Covariants, ideal: &ConstraintIdeal, n: usize) -> Report {
    let ni = n as i64;
    let mut rep = Report::new("darboux");
    let name = |s: &str| format!("n{n}/tau4_{s}");
    let Ok(direct) = fourth_transvectant(phi, n) else {
        rep.push(Check::skipped(name("zero"), "needs n ≥ 4"));
        return rep;
    };
    let a = q(-6 * (ni - 2) * (ni - 2), ni - 1);
    let top = cov.omega1.minus(&scale_u(&cov.h.times(&cov.h), &a));
    let (quo, rem) = top.divrem_monic(&phi.times(phi));
    let quotient = scale_u(&quo, &q(ni - 1, ni * ni));
    let agree = rem.is_zero() && quotient == direct;
    rep.push(Check::flag(name("two_routes"), agree, "quotient form equals fourth-transvectant form"));
    rep.push(zero_mod(name("zero"), ideal, &direct));
    rep
}

/// Summary of one degree, for reports and the CLI.
#[derive(Clone, Debug)]
pub struct DarbouxCase {
    pub n: usize,
    pub data: PhiData,
    pub ideal: ConstraintIdeal,
    pub integrals: Option<FirstIntegrals>,
    pub report: Report,
}

impl DarbouxCase {
    pub fn to_json(&self) -> Value {
        let fi = self.integrals.as_ref();
        json!({
            "n": self.n,
            "constraint": format!("q'' = {}*q^2", q_to_string(&(&self.ideal.a * qi(6)))),
            "coefficients": self.data.a.iter().map(show).collect::<Vec<_>>(),
            "a": fi.map(|f| q_to_string(&f.a)),
            "alpha": fi.map(|f| q_to_string(&f.alpha)),
            "k": fi.map(|f| f.k),
            "beta": fi.and_then(|f| f.beta.as_ref()).map(show),
            "xi_constant": fi.and_then(|f| f.c.as_ref()).map(show),
            "passed": self.report.passed(),
        })
    }
}

/// For closures of jet order ≤ 3, the b in q″ = bq² they integrate to
/// (integration constant zero).
pub fn closure_exponent(closure: &DiffPoly) -> Option<Q> {
    let top = closure.max_var()?;
    let lead = crate::algebra::mpoly::coefficient_in(closure, top, 1).as_constant()?;
    let norm = closure.scale_q(&(qi(1) / lead));
    let q0 = q_jet(0);
    match top {
        2 => {
            let b = -crate::algebra::mpoly::coefficient_in(&norm, 0, 2).as_constant()?;
            (norm == q_jet(2).minus(&q0.times(&q0).scale_q(&b))).then_some(b)
        }
        3 => {
            let q1_coeff = crate::algebra::mpoly::coefficient_in(&norm, 1, 1);
            let b = -crate::algebra::mpoly::coefficient_in(&q1_coeff, 0, 1).as_constant()? / qi(2);
            let want = q_jet(3).minus(&q0.times(&q_jet(1)).scale_q(&(&b * qi(2))));
            (norm == want).then_some(b)
        }
        _ => None,
    }
}

/// The full battery for one degree n ∈ {3, 4, 6, 12}, with a₁ = 0.
pub fn run_case(n: usize) -> Result<DarbouxCase, DarbouxError> {
    if n < 3 {
        return Err(DarbouxError::Degree(n));
    }
    let data = build_phi(n, &MPoly::zero())?;
    let ideal = ConstraintIdeal::for_degree(n);
    let mut rep = Report::new("darboux");
    let six_a = &ideal.a * qi(6);
    match closure_exponent(&data.closure) {
        Some(b) => rep.push(Check::flag(
            format!("n{n}/closure_constraint"),
            b == six_a,
            format!("closure integrates to q'' = {}*q^2", q_to_string(&b)),
        )),
        None => {
            let r = ideal.reduce(&data.closure);
            rep.push(Check::exact(format!("n{n}/closure_constraint"), (!r.is_zero()).then(|| (show(&r), None))));
        }
    }
    if n == 4 {
        let want = [
            q_jet(0).scale_q(&q(-1, 3)),
            q_jet(1).scale_q(&q(1, 6)),
            q_jet(2).scale_q(&q(-1, 6)).plus(&q_jet(0).times(&q_jet(0))),
        ];
        let ok = data.a[2..] == want;
        rep.push(Check::flag("n4/coefficients", ok, "a2 = -q/3, a3 = q'/6, a4 = -q''/6 + q^2"));
    }
    if n == 3 {
        let ok = data.a[2] == q_jet(0).scale_q(&q(-1, 2)) && data.a[3] == q_jet(1).scale_q(&q(1, 2));
        rep.push(Check::flag("n3/coefficients", ok, "a2 = -q/2 (nonzero), a3 = q'/2"));
    }
    let phi = ideal.reduce_u(&data.phi);
    let cov = covariants(&phi, n);
    let cov = Covariants {
        h: ideal.reduce_u(&cov.h),
        omega: ideal.reduce_u(&cov.omega),
        omega1: ideal.reduce_u(&cov.omega1),
        xi: ideal.reduce_u(&cov.xi),
    };
    rep.push(Check::flag(
        format!("n{n}/H_nonzero"),
        !cov.h.is_zero() && cov.h.deg() <= 2 * (n - 2),
        format!("deg_u H = {}", cov.h.deg()),
    ));
    rep.extend(verify_cofactors(&phi, &cov, &ideal, n));
    let (fi_rep, fi) = verify_first_integral_relations(&phi, &cov, &ideal, n)?;
    rep.extend(fi_rep);
    rep.extend(tau4_check(&phi, &cov, &ideal, n));
    Ok(DarbouxCase { n, data, ideal, integrals: Some(fi), report: rep })
}

/// n = 2: the closure is a nonzero multiple of q′, so a₂ = −q must be
/// constant and Φ cannot be a Darboux polynomial for a genuine potential.
pub fn n2_impossibility() -> Check {
    let data = build_phi(2, &MPoly::zero()).expect("n = 2 is buildable");
    let forced = crate::algebra::mpoly::coefficient_in(&data.closure, 1, 1).as_constant();
    let only_q1 = data.closure == q_jet(1).scale_q(&forced.clone().unwrap_or_else(|| qi(0)));
    let raised = only_q1 && forced.is_some_and(|c| c != qi(0));
    Check::flag("n2/impossible", raised, format!("closure {} = 0 forces a2 = -q constant", show(&data.closure)))
}

/// Negative controls: perturbing a₃ breaks τ₄ (n = 6; for a quartic with
/// a₁ = 0 the fourth transvectant does not involve a₃), and a nonzero
/// integration constant breaks the n = 4 battery.
pub fn negative_controls() -> Report {
    let mut rep = Report::new("darboux");
    let six = build_phi(6, &MPoly::zero()).expect("n = 6");
    let ideal6 = ConstraintIdeal::for_degree(6);
    let mut bumped = six.phi.coeffs().to_vec();
    // u³ carries C(6,3)a₃
    bumped[3] = bumped[3].plus(&MPoly::from_int(1));
    let t4 = fourth_transvectant(&ideal6.reduce_u(&Poly::new(bumped)), 6).expect("n = 6");
    let ok = !ideal6.reduce_u(&t4).is_zero();
    rep.push(Check::flag("control/tau4_perturbed_a3", ok, "perturbed Phi must give tau4 != 0"));

    let n = 4;
    let data = build_phi(n, &MPoly::zero()).expect("n = 4");
    let ideal = ConstraintIdeal::for_degree(n);
    let shifted = ConstraintIdeal::with_constant(ideal.a.clone(), qi(1));
    let phi = shifted.reduce_u(&data.phi);
    let cov = covariants(&phi, n);
    let cov = Covariants {
        h: shifted.reduce_u(&cov.h),
        omega: shifted.reduce_u(&cov.omega),
        omega1: shifted.reduce_u(&cov.omega1),
        xi: shifted.reduce_u(&cov.xi),
    };
    let battery = verify_cofactors(&phi, &cov, &shifted, n);
    let t4 = tau4_check(&phi, &cov, &shifted, n);
    let rejected = !(battery.passed() && t4.passed());
    rep.push(Check::flag("control/integration_constant", rejected, "q'' = 8q^2 + 1 must fail the n = 4 battery"));
    rep
}

/// Degrees 3, 4, 6 (and 12 when `include_12`), the n = 2 flag and controls.
pub fn run_all(include_12: bool) -> Result<(Report, Vec<DarbouxCase>), DarbouxError> {
    let mut rep = Report::new("darboux");
    let mut cases = Vec::new();
    let degrees: &[usize] = if include_12 { &[3, 4, 6, 12] } else { &[3, 4, 6] };
    for &n in degrees {
        let case = run_case(n)?;
        rep.extend(case.report.clone());
        cases.push(case);
    }
    rep.push(n2_impossibility());
    rep.extend(negative_controls());
    Ok((rep, cases))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn constant_u(c: DiffPoly) -> UPoly {
        Poly::constant(c)
    }

    fn upoly(coeffs: Vec<DiffPoly>) -> UPoly {
        Poly::new(coeffs)
    }

    #[test]
    fn x_on_basics() {
        assert_eq!(derivation_x(&u()), upoly(vec![q_jet(0), MPoly::zero(), MPoly::from_int(-1)]));
        assert!(derivation_x(&constant_u(MPoly::from_int(7))).is_zero());
    }

    #[test]
    fn n4_coefficients_and_closure() {
        let d = build_phi(4, &MPoly::zero()).unwrap();
        assert_eq!(d.a[2], q_jet(0).scale_q(&q(-1, 3)));
        assert_eq!(d.a[3], q_jet(1).scale_q(&q(1, 6)));
        assert_eq!(d.a[4], q_jet(2).scale_q(&q(-1, 6)).plus(&q_jet(0).times(&q_jet(0))));
        assert_eq!(closure_exponent(&d.closure), Some(qi(8)));
        let d3 = build_phi(3, &MPoly::zero()).unwrap();
        assert_eq!(closure_exponent(&d3.closure), Some(qi(3)));
    }

    #[test]
    fn x_phi_prime_identity() {
        // X(Φ′) = −nΦ + (na₁ − nu + 2u)Φ′ once X(Φ) = n(a₁ − u)Φ, here with a₁ ≠ 0
        let n = 4;
        let a1 = q_jet(0).scale_q(&qi(2)).plus(&MPoly::from_int(1));
        let d = build_phi(n, &a1).unwrap();
        let ni = MPoly::from_int(n as i64);
        let x_phi = derivation_x(&d.phi);
        let want = constant_u(a1.clone()).minus(&u()).scale(&ni).times(&d.phi);
        // the only discrepancy is the closure relation in the u⁰ slot
        assert_eq!(x_phi.minus(&want), constant_u(d.closure.clone()));
        let dphi = d.phi.derivative();
        let lhs = derivation_x(&dphi);
        let cof = constant_u(a1.scale_q(&qi(n as i64))).minus(&u().scale(&MPoly::from_int(n as i64 - 2)));
        let rhs = d.phi.scale(&ni).negate().plus(&cof.times(&dphi));
        // differentiating the u⁰ closure term gives nothing
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_rules() {
        let ideal = ConstraintIdeal::new(q(4, 3));
        assert_eq!(ideal.reduce(&q_jet(3)), q_jet(0).times(&q_jet(1)).scale_q(&qi(16)));
        let want = q_jet(1).times(&q_jet(1)).scale_q(&qi(16)).plus(&q_jet(0).power(3).scale_q(&qi(128)));
        assert_eq!(ideal.reduce(&q_jet(4)), want);
    }

    #[test]
    fn n3_hessian() {
        let d = build_phi(3, &MPoly::zero()).unwrap();
        let cov = covariants(&d.phi, 3);
        let (a2, a3) = (&d.a[2], &d.a[3]);
        let want = upoly(vec![a2.times(a2).negate(), a3.clone(), a2.clone()]).scale(&MPoly::from_int(18));
        assert_eq!(cov.h, want);
    }

    #[test]
    fn degree_four_battery() {
        let case = run_case(4).unwrap();
        assert!(case.report.passed(), "{}", case.report.to_text());
        assert_eq!(case.cov_h_degree(), 4);
        let fi = case.integrals.unwrap();
        assert_eq!((fi.a.clone(), fi.alpha.clone(), fi.k), (qi(-8), q(-16, 3), 3));
        assert!(fi.beta.is_some());
    }

    impl DarbouxCase {
        fn cov_h_degree(&self) -> usize {
            covariants(&self.ideal.reduce_u(&self.data.phi), self.n).h.map(|c| self.ideal.reduce(c)).deg()
        }
    }

    #[test]
    fn degrees_three_and_six() {
        for n in [3, 6] {
            let case = run_case(n).unwrap();
            assert!(case.report.passed(), "n = {n}\n{}", case.report.to_text());
        }
        assert_eq!(ConstraintIdeal::for_degree(6).a, q(16, 5));
    }

    #[test]
    fn n2_and_controls() {
        assert!(n2_impossibility().passed());
        let rep = negative_controls();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    fn arb_diffpoly() -> impl Strategy<Value = DiffPoly> {
        prop::collection::vec((-3i64..=3, 0u32..3, 0u32..2, 0u32..2), 0..4).prop_map(|ts| {
            ts.into_iter().fold(MPoly::zero(), |acc, (c, e0, e1, e2)| acc.plus(&MPoly::term(qi(c), vec![e0, e1, e2])))
        })
    }

    fn arb_upoly() -> impl Strategy<Value = UPoly> {
        prop::collection::vec(arb_diffpoly(), 0..4).prop_map(Poly::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn leibniz(f in arb_upoly(), g in arb_upoly()) {
            let lhs = derivation_x(&f.times(&g));
            let rhs = f.times(&derivation_x(&g)).plus(&g.times(&derivation_x(&f)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutator_with_d_du(f in arb_upoly()) {
            // [X, ∂/∂u] = 2u ∂/∂u
            let lhs = derivation_x(&f.derivative()).minus(&derivation_x(&f).derivative());
            prop_assert_eq!(lhs, u().scale(&MPoly::from_int(2)).times(&f.derivative()));
        }

        #[test]
        fn reduction_idempotent(f in arb_diffpoly(), k in 2usize..6) {
            let ideal = ConstraintIdeal::for_degree(4);
            let g = f.times(&q_jet(k));
            let r = ideal.reduce(&g);
            prop_assert!(r.max_var().unwrap_or(0) <= 1);
            prop_assert_eq!(ideal.reduce(&r), r);
        }
    }
}
