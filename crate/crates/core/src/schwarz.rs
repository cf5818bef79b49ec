//! Schwarzian derivatives, the Riccati change-of-variable law, the reduction
//! of the equianharmonic Riccati equation and hypergeometric bookkeeping.
//!
//! Under t = θ(ξ) the Riccati equation w′ + w² = R(t) becomes
//! v′ + v² = θ′²R(θ) − ½{θ, ξ}. For the equianharmonic potential θ′ is
//! 1/(2√(ξ³−1)), so the computation lives in the quadratic extension
//! Q(a, ξ)[y]/(y² − ξ³ + 1) and is carried out exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::mpoly::MRat;
use crate::algebra::ring::{q, q_to_string, qi, Field, Ring, Q};
use crate::algebra::{poly_display, AlgebraError, Poly, RatFun};
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchwarzError {
    #[error("derivative vanishes identically")]
    ConstantMap,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("orders must be positive integers")]
    BadOrder,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Variable index of the parameter a in [`MRat`] expressions.
pub const VAR_A: usize = 0;
/// Variable index of ξ.
pub const VAR_XI: usize = 1;

fn var_name(i: usize) -> String {
    match i {
        VAR_A => "a".into(),
        VAR_XI => "xi".into(),
        k => format!("v{k}"),
    }
}

/// Human-readable rendering of a fraction in a and ξ.
pub fn show_mrat(r: &MRat) -> String {
    let n = r.num.fmt_with(&var_name);
    if r.den.as_constant().is_some_and(|c| c == qi(1)) {
        n
    } else {
        format!("({n})/({})", r.den.fmt_with(&var_name))
    }
}

pub fn show_ratfun(r: &RatFun<Q>, var: &str) -> String {
    let n = poly_display(r.num(), var);
    if r.den().deg() == 0 {
        n
    } else {
        format!("({n})/({})", poly_display(r.den(), var))
    }
}

/// {f, x} = (f″/f′)′ − ½(f″/f′)² for a rational function of one variable.
pub fn schwarzian<K: Field>(f: &RatFun<K>) -> Result<RatFun<K>, SchwarzError> {
    let d1 = f.derivative();
    if d1.is_zero() {
        return Err(SchwarzError::ConstantMap);
    }
    let l = d1.derivative().divide(&d1).ok_or(SchwarzError::ConstantMap)?;
    let half = K::from_int(2).inv().expect("characteristic zero");
    Ok(l.derivative().minus(&l.times(&l).times(&RatFun::constant(half))))
}

/// Schwarzian of a multivariate fraction with respect to one variable.
pub fn schwarzian_mrat(f: &MRat, var: usize) -> Result<MRat, SchwarzError> {
    let d1 = f.derivative(var);
    if d1.is_zero() {
        return Err(SchwarzError::ConstantMap);
    }
    let l = d1.derivative(var).divide(&d1).ok_or(SchwarzError::ConstantMap)?;
    Ok(l.derivative(var).minus(&l.times(&l).times(&MRat::constant(q(1, 2)))))
}

/// θ′²R(θ) − ½{θ, x} for rational R and θ.
pub fn riccati_pullback(r: &RatFun<Q>, theta: &RatFun<Q>) -> Result<RatFun<Q>, SchwarzError> {
    let s = schwarzian(theta)?;
    let d1 = theta.derivative();
    let r_theta = r.compose(theta)?;
    Ok(d1.times(&d1).times(&r_theta).minus(&s.times(&RatFun::constant(q(1, 2)))))
}

/// p + q·y with y² = ξ³ − 1; p and q are fractions in a and ξ.
#[derive(Clone, Debug)]
pub struct AlgebraicElement {
    pub p: MRat,
    pub q: MRat,
}

fn disc() -> MRat {
    MRat::var(VAR_XI).power(3).minus(&MRat::one())
}

impl AlgebraicElement {
    pub fn rational(p: MRat) -> Self {
        AlgebraicElement { p, q: MRat::zero() }
    }

    /// The generator y = √(ξ³ − 1).
    pub fn y() -> Self {
        AlgebraicElement { p: MRat::zero(), q: MRat::one() }
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn plus(&self, o: &Self) -> Self {
        AlgebraicElement { p: self.p.plus(&o.p), q: self.q.plus(&o.q) }
    }

    pub fn minus(&self, o: &Self) -> Self {
        AlgebraicElement { p: self.p.minus(&o.p), q: self.q.minus(&o.q) }
    }

    pub fn times(&self, o: &Self) -> Self {
        AlgebraicElement {
            p: self.p.times(&o.p).plus(&self.q.times(&o.q).times(&disc())),
            q: self.p.times(&o.q).plus(&self.q.times(&o.p)),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let c = MRat::constant(c.clone());
        AlgebraicElement { p: self.p.times(&c), q: self.q.times(&c) }
    }

    /// Inverse through the conjugate p − q·y.
    pub fn inv(&self) -> Option<Self> {
        let norm = self.p.times(&self.p).minus(&self.q.times(&self.q).times(&disc()));
        let k = norm.inv()?;
        Some(AlgebraicElement { p: self.p.times(&k), q: self.q.negate().times(&k) })
    }

    /// d/dξ, using y′ = 3ξ²y / (2(ξ³ − 1)).
    pub fn derivative(&self) -> Self {
        let xi = MRat::var(VAR_XI);
        let dy = xi.times(&xi).times(&MRat::constant(q(3, 2))).divide(&disc()).expect("nonzero");
        AlgebraicElement { p: self.p.derivative(VAR_XI), q: self.q.derivative(VAR_XI).plus(&self.q.times(&dy)) }
    }

    pub fn substitute(&self, var: usize, value: &MRat) -> Self {
        AlgebraicElement { p: self.p.substitute(var, value), q: self.q.substitute(var, value) }
    }

    pub fn show(&self) -> String {
        if self.is_rational() {
            show_mrat(&self.p)
        } else {
            format!("{} + ({})*y", show_mrat(&self.p), show_mrat(&self.q))
        }
    }
}

/// {θ, ξ} computed from θ′ alone; θ itself need not be algebraic.
pub fn schwarzian_from_derivative(dtheta: &AlgebraicElement) -> Result<AlgebraicElement, SchwarzError> {
    let inv = dtheta.inv().ok_or(SchwarzError::ConstantMap)?;
    let l = dtheta.derivative().times(&inv);
    Ok(l.derivative().minus(&l.times(&l).scale(&q(1, 2))))
}

/// θ′²R(θ) − ½{θ, ξ} with R(θ) already expressed in ξ.
pub fn riccati_pullback_alg(
    r_of_theta: &AlgebraicElement,
    dtheta: &AlgebraicElement,
) -> Result<AlgebraicElement, SchwarzError> {
    let s = schwarzian_from_derivative(dtheta)?;
    Ok(dtheta.times(dtheta).times(r_of_theta).minus(&s.scale(&q(1, 2))))
}

/// c₀ = 4/a − 3 and c₁ = 1/a + 6.
pub fn curve_constants(a: &Q) -> Result<(Q, Q), SchwarzError> {
    if a.is_zero() {
        return Err(SchwarzError::ZeroParameter);
    }
    let ia = a.recip();
    Ok((&ia * qi(4) - qi(3), ia + qi(6)))
}

/// The reduced potential (ξ/16)(c₀ξ³ − 4c₁)/(ξ³ − 1)² with symbolic a.
pub fn curve_potential() -> MRat {
    let a = MRat::var(VAR_A);
    let ia = a.inv().expect("a is a variable");
    let c0 = ia.times(&MRat::constant(qi(4))).minus(&MRat::constant(qi(3)));
    let c1 = ia.plus(&MRat::constant(qi(6)));
    let xi = MRat::var(VAR_XI);
    let d = disc();
    let num =
        xi.times(&MRat::constant(q(1, 16))).times(&c0.times(&xi.power(3)).minus(&c1.times(&MRat::constant(qi(4)))));
    num.divide(&d.times(&d)).expect("nonzero")
}

/// Pullback of w′ + w² = ξ/a along 2dt = dξ/√(ξ³−1), still symbolic in a.
pub fn curve_pipeline() -> Result<AlgebraicElement, SchwarzError> {
    let dtheta = AlgebraicElement::y().scale(&qi(2)).inv().ok_or(SchwarzError::ConstantMap)?;
    let a = MRat::var(VAR_A);
    let r = AlgebraicElement::rational(MRat::var(VAR_XI).divide(&a).expect("a is a variable"));
    riccati_pullback_alg(&r, &dtheta)
}

/// Runs the reduction and compares with the closed form. With `a = None`
/// the comparison is an identity in Q(a, ξ).
pub fn curve_verify(a: Option<&Q>) -> Result<Report, SchwarzError> {
    let mut rep = Report::new("schwarz");
    let mut lhs = curve_pipeline()?;
    let mut rhs = curve_potential();
    let name = match a {
        None => "curve/symbolic".to_string(),
        Some(v) => {
            if v.is_zero() {
                return Err(SchwarzError::ZeroParameter);
            }
            let val = MRat::constant(v.clone());
            lhs = lhs.substitute(VAR_A, &val);
            rhs = rhs.substitute(VAR_A, &val);
            format!("curve/a={}", q_to_string(v))
        }
    };
    let diff = lhs.p.minus(&rhs);
    let residual = if !lhs.is_rational() {
        Some((format!("y-part {}", show_mrat(&lhs.q)), None))
    } else if !diff.is_zero() {
        Some((show_mrat(&diff), None))
    } else {
        None
    };
    let mut check = Check::exact(name, residual);
    if let Some(v) = a {
        let (c0, c1) = curve_constants(v)?;
        check = check.with_detail(format!("c0={} c1={}", q_to_string(&c0), q_to_string(&c1)));
    }
    rep.push(check);
    Ok(rep)
}

/// The same reduced potential at a numeric a, as a function of ξ alone.
pub fn curve_potential_at(a: &Q) -> Result<RatFun<Q>, SchwarzError> {
    let (c0, c1) = curve_constants(a)?;
    let num = Poly::new(vec![qi(0), -c1 * qi(4), qi(0), qi(0), c0]).scale(&q(1, 16));
    let d = Poly::new(vec![qi(-1), qi(0), qi(0), qi(1)]);
    Ok(RatFun::new(num, d.times(&d))?)
}

/// Q(s) = ¼((λ²−1)/s² + (ν²−1)/(1−s)² + (λ²−μ²+ν²−1)/(s(1−s))).
pub fn hypergeom_potential(lambda: &Q, mu: &Q, nu: &Q) -> RatFun<Q> {
    let s = Poly::<Q>::x();
    let t = Poly::new(vec![qi(1), qi(-1)]);
    let one = qi(1);
    let c = |v: Q| RatFun::constant(v);
    let term = |k: Q, d: Poly<Q>| c(k).divide(&RatFun::from_poly(d)).expect("nonzero");
    let l2 = lambda * lambda;
    let m2 = mu * mu;
    let n2 = nu * nu;
    let sum = term(&l2 - &one, s.times(&s))
        .plus(&term(&n2 - &one, t.times(&t)))
        .plus(&term(&l2 - &m2 + &n2 - &one, s.times(&t)));
    sum.times(&c(q(1, 4)))
}

/// (λ, μ, ν) = (1/3, n/(6(n−2)), 1/2).
pub fn degree_triple(n: i64) -> Result<(Q, Q, Q), SchwarzError> {
    if n == 2 {
        return Err(SchwarzError::ZeroParameter);
    }
    Ok((q(1, 3), q(n, 6 * (n - 2)), q(1, 2)))
}

/// True when every pole of `r` sits at 0 or 1 with order at most two.
pub fn poles_at_zero_one(r: &RatFun<Q>) -> bool {
    let s = Poly::<Q>::x();
    let t = Poly::new(vec![qi(-1), qi(1)]);
    let bound = s.times(&s).times(&t).times(&t);
    matches!(bound.divrem(r.den()), Ok((_, rem)) if rem.is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlatonicOrder {
    Finite(Q),
    Infinite,
}

/// 2/N = 1/k₀ + 1/k₁ + 1/k∞ − 1; a non-positive right side means no finite group.
pub fn platonic_order(k0: i64, k1: i64, kinf: i64) -> Result<PlatonicOrder, SchwarzError> {
    if k0 <= 0 || k1 <= 0 || kinf <= 0 {
        return Err(SchwarzError::BadOrder);
    }
    let rhs = q(1, k0) + q(1, k1) + q(1, kinf) - qi(1);
    if rhs.is_positive() {
        Ok(PlatonicOrder::Finite(qi(2) / rhs))
    } else {
        Ok(PlatonicOrder::Infinite)
    }
}

/// Group name attached to a triple of orders, in any order.
pub fn platonic_name(k: [i64; 3]) -> Option<&'static str> {
    let mut s = k;
    s.sort_unstable();
    match s {
        [2, 2, m] if m >= 2 => Some("dihedral"),
        [2, 3, 3] => Some("tetrahedral"),
        [2, 3, 4] => Some("octahedral"),
        [2, 3, 5] => Some("icosahedral"),
        _ => None,
    }
}

/// Exponent bookkeeping for the hypergeometric parameters a, b, c.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentData {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub lambda: Q,
    pub mu: Q,
    pub nu: Q,
    pub mu0: Q,
    pub mu1: Q,
    pub mu_inf: Q,
    pub k0: Option<Q>,
    pub k1: Option<Q>,
    pub k_inf: Option<Q>,
}

impl ExponentData {
    /// μ₁ = c − a − b works out to 1 − λ + μ, which equals μ only at λ = 1.
    pub fn mu1_matches_mu(&self) -> bool {
        self.mu1 == self.mu
    }

    pub fn to_json(&self) -> Value {
        let s = |x: &Q| Value::String(q_to_string(x));
        let o = |x: &Option<Q>| x.as_ref().map_or(Value::Null, s);
        json!({
            "a": s(&self.a), "b": s(&self.b), "c": s(&self.c),
            "lambda": s(&self.lambda), "mu": s(&self.mu), "nu": s(&self.nu),
            "mu0": s(&self.mu0), "mu1": s(&self.mu1), "mu_inf": s(&self.mu_inf),
            "k0": o(&self.k0), "k1": o(&self.k1), "k_inf": o(&self.k_inf),
            "mu1_matches_mu": self.mu1_matches_mu(),
        })
    }
}

pub fn exponent_data(a: &Q, b: &Q, c: &Q) -> ExponentData {
    let one = qi(1);
    let lambda = &one - c;
    let nu = a - b;
    let mu = &one - &lambda - (a + b + c);
    let mu0 = &one - c;
    let mu1 = c - a - b;
    let mu_inf = b - a;
    let k = |m: &Q| (!m.is_zero()).then(|| m.recip());
    ExponentData {
        k0: k(&mu0),
        k1: k(&mu1),
        k_inf: k(&mu_inf),
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        lambda,
        mu,
        nu,
        mu0,
        mu1,
        mu_inf,
    }
}

/// Inverts c = 1 − λ, a − b = ν, a + b + c = 1 − λ − μ.
pub fn abc_from_exponents(lambda: &Q, mu: &Q, nu: &Q) -> (Q, Q, Q) {
    let half = q(1, 2);
    let a = (nu - mu) * &half;
    let b = (-mu - nu) * &half;
    (a, b, qi(1) - lambda)
}

/// Substitutions s = c·ξ^k that carry the hypergeometric potential of the
/// degree-n triple onto the reduced equianharmonic potential.
pub fn bridge_search(n: i64) -> Result<Vec<(Q, i32)>, SchwarzError> {
    let (l, m, v) = degree_triple(n)?;
    let pot = hypergeom_potential(&l, &m, &v);
    let a = q((n - 2) * (n - 2), n - 1);
    let target = curve_potential_at(&a)?;
    let scales = [qi(1), qi(-1), qi(2), qi(-2), q(1, 2), q(-1, 2), qi(4), q(1, 4)];
    let mut hits = Vec::new();
    for k in (-6i32..=6).filter(|k| *k != 0) {
        let mono = Poly::monomial(qi(1), k.unsigned_abs() as usize);
        let base = if k > 0 { RatFun::from_poly(mono) } else { RatFun::new(Poly::one(), mono)? };
        for c in &scales {
            let s = base.times(&RatFun::constant(c.clone()));
            if let Ok(r) = riccati_pullback(&pot, &s) {
                if r == target {
                    hits.push((c.clone(), k));
                }
            }
        }
    }
    Ok(hits)
}

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=3)))
}

fn random_mobius(rng: &mut ChaCha8Rng) -> RatFun<Q> {
    loop {
        let (a, b, c, d) = (small_q(rng), small_q(rng), small_q(rng), small_q(rng));
        if (&a * &d - &b * &c).is_zero() {
            continue;
        }
        if let Ok(f) = RatFun::new(Poly::new(vec![b, a]), Poly::new(vec![d, c])) {
            return f;
        }
    }
}

/// Random rational function of degree two that is not Möbius.
fn random_rational(rng: &mut ChaCha8Rng) -> RatFun<Q> {
    loop {
        let n = Poly::new((0..3).map(|_| small_q(rng)).collect());
        let d = Poly::new((0..2).map(|_| small_q(rng)).collect::<Vec<_>>());
        if d.is_zero() {
            continue;
        }
        if let Ok(f) = RatFun::new(n, d) {
            if f.num().deg().max(f.den().deg()) == 2 {
                return f;
            }
        }
    }
}

fn first_failure(cases: usize, mut ok: impl FnMut(usize) -> bool) -> Option<(String, Option<i64>)> {
    (0..cases).find(|i| !ok(*i)).map(|i| (format!("case {i}"), Some(i as i64)))
}

/// Möbius maps have zero Schwarzian; random degree-two maps do not.
pub fn mobius_checks(seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5c4a);
    let zero = first_failure(cases, |_| schwarzian(&random_mobius(&mut rng)).is_ok_and(|s| s.is_zero()));
    let nonzero = first_failure(cases, |_| schwarzian(&random_rational(&mut rng)).is_ok_and(|s| !s.is_zero()));
    vec![
        Check::exact("schwarzian/mobius_zero", zero).with_detail(format!("{cases} maps")),
        Check::exact("schwarzian/non_mobius_nonzero", nonzero).with_detail(format!("{cases} maps")),
    ]
}

/// {f∘g} = ({f}∘g)·g′² + {g} on random degree-two f and g.
pub fn chain_rule_check(seed: u64, cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc4a1);
    let res = first_failure(cases, |_| {
        let (f, g) = (random_rational(&mut rng), random_rational(&mut rng));
        let lhs = schwarzian(&f.compose(&g).expect("generic"));
        let sf = schwarzian(&f).and_then(|s| Ok(s.compose(&g)?));
        let sg = schwarzian(&g);
        match (lhs, sf, sg) {
            (Ok(l), Ok(sf), Ok(sg)) => {
                let d = g.derivative();
                l == sf.times(&d).times(&d).plus(&sg)
            }
            _ => false,
        }
    });
    Check::exact("schwarzian/chain_rule", res).with_detail(format!("{cases} pairs"))
}

/// Pulling back by θ₁ and then θ₂ equals pulling back by θ₁∘θ₂.
pub fn cocycle_check(seed: u64, pairs: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0c1);
    let res = first_failure(pairs, |_| {
        let r = random_rational(&mut rng);
        let (t1, t2) = (random_mobius(&mut rng), random_mobius(&mut rng));
        let two_step = riccati_pullback(&r, &t1).and_then(|r1| riccati_pullback(&r1, &t2));
        let one_step = t1.compose(&t2).map_err(SchwarzError::from).and_then(|t| riccati_pullback(&r, &t));
        matches!((two_step, one_step), (Ok(x), Ok(y)) if x == y)
    });
    Check::exact("pullback/cocycle", res).with_detail(format!("{pairs} random Möbius pairs"))
}

pub const COCYCLE_PAIRS: usize = 50;

/// Every check of the schwarz suite; `explore` adds the substitution search.
pub fn run_all(seed: u64, cases: usize, explore: bool) -> Result<Report, SchwarzError> {
    let mut rep = Report::new("schwarz");
    for c in mobius_checks(seed, cases) {
        rep.push(c);
    }
    let x = RatFun::<Q>::x();
    let sq = schwarzian(&x.times(&x))?;
    let want = RatFun::new(Poly::constant(q(-3, 2)), Poly::monomial(qi(1), 2))?;
    rep.push(Check::exact("schwarzian/x_squared", (sq != want).then(|| (show_ratfun(&sq, "x"), None))));
    rep.push(chain_rule_check(seed, cases.min(50)));
    rep.push(cocycle_check(seed, COCYCLE_PAIRS));
    let pb = riccati_pullback(&RatFun::zero(), &x.times(&x))?;
    let want = RatFun::new(Poly::constant(q(3, 4)), Poly::monomial(qi(1), 2))?;
    rep.push(Check::exact("pullback/r0_x_squared", (pb != want).then(|| (show_ratfun(&pb, "x"), None))));

    rep.extend(curve_verify(None)?);
    for a in [q(4, 3), q(1, 2)] {
        rep.extend(curve_verify(Some(&a))?);
    }

    let degenerate = hypergeom_potential(&qi(1), &qi(1), &qi(1));
    rep.push(Check::flag("hypergeom/degenerate_zero", degenerate.is_zero(), show_ratfun(&degenerate, "s")));
    for n in [3, 4, 6, 12] {
        let (l, m, v) = degree_triple(n)?;
        let pot = hypergeom_potential(&l, &m, &v);
        rep.push(Check::flag(format!("hypergeom/poles_n{n}"), poles_at_zero_one(&pot), show_ratfun(&pot, "s")));
    }

    let dictionary: Vec<([i64; 3], i64)> =
        (2..=12).map(|m| ([2, 2, m], 2 * m)).chain([([2, 3, 3], 12), ([2, 3, 4], 24), ([2, 3, 5], 60)]).collect();
    let bad =
        dictionary.iter().find(|(k, n)| platonic_order(k[0], k[1], k[2]).ok() != Some(PlatonicOrder::Finite(qi(*n))));
    rep.push(Check::exact("platonic/finite_orders", bad.map(|(k, n)| (format!("{k:?} should give {n}"), None))));
    let hyperbolic = platonic_order(2, 3, 7)? == PlatonicOrder::Infinite;
    rep.push(Check::flag("platonic/2_3_7_infinite", hyperbolic, "1/2 + 1/3 + 1/7 < 1"));

    let (l, m, v) = degree_triple(4)?;
    let (a, b, c) = abc_from_exponents(&l, &m, &v);
    let e = exponent_data(&a, &b, &c);
    let round_trip = e.lambda == l && e.mu == m && e.nu == v;
    rep.push(Check::flag("exponents/round_trip", round_trip, e.to_json().to_string()));
    let detail = if e.mu1_matches_mu() {
        "mu1 = c - a - b agrees with mu".to_string()
    } else {
        format!("mu1 = c - a - b = {} differs from mu = {}", q_to_string(&e.mu1), q_to_string(&e.mu))
    };
    rep.push(Check::flag("exponents/mu0_mu_inf", e.mu0 == l && e.mu_inf == -v.clone(), detail));

    if explore {
        for n in [3, 4, 6, 12] {
            let hits = bridge_search(n)?;
            let text: Vec<String> = hits.iter().map(|(c, k)| format!("s={}*xi^{k}", q_to_string(c))).collect();
            rep.push(Check::flag(format!("explore/bridge_n{n}"), !hits.is_empty(), text.join(", ")));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn schwarzian_of_square() {
        let x = RatFun::<Q>::x();
        let s = schwarzian(&x.times(&x)).unwrap();
        assert_eq!(s.eval(&qi(1)).unwrap(), q(-3, 2));
        assert_eq!(s.eval(&qi(2)).unwrap(), q(-3, 8));
        assert_eq!(schwarzian(&RatFun::constant(qi(5))), Err(SchwarzError::ConstantMap));
    }

    #[test]
    fn schwarzian_mrat_agrees() {
        let x = MRat::var(VAR_XI);
        let f = x.power(3).plus(&x).divide(&x.plus(&MRat::constant(qi(2)))).unwrap();
        let s = schwarzian_mrat(&f, VAR_XI).unwrap();
        let g = RatFun::new(Poly::new(vec![qi(0), qi(1), qi(0), qi(1)]), Poly::new(vec![qi(2), qi(1)])).unwrap();
        let s2 = schwarzian(&g).unwrap();
        for t in [qi(1), q(1, 3), qi(-5)] {
            assert_eq!(s.eval_q(&[qi(0), t.clone()]).unwrap(), s2.eval(&t).unwrap());
        }
    }

    #[test]
    fn pullback_of_zero_by_square() {
        let x = RatFun::<Q>::x();
        let r = riccati_pullback(&RatFun::zero(), &x.times(&x)).unwrap();
        assert_eq!(r.eval(&qi(1)).unwrap(), q(3, 4));
    }

    #[test]
    fn mobius_pullback_is_plain_substitution() {
        let theta = RatFun::new(Poly::new(vec![qi(1), qi(2)]), Poly::new(vec![qi(3), qi(-1)])).unwrap();
        let r = RatFun::new(Poly::new(vec![qi(1), qi(0), qi(1)]), Poly::new(vec![qi(2), qi(1)])).unwrap();
        let d = theta.derivative();
        let expect = d.times(&d).times(&r.compose(&theta).unwrap());
        assert_eq!(riccati_pullback(&r, &theta).unwrap(), expect);
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        let y = AlgebraicElement::y();
        let y2 = y.times(&y);
        assert!(y2.is_rational());
        assert!(y2.p == disc());
        let u = y.plus(&AlgebraicElement::rational(MRat::var(VAR_XI)));
        let one = u.times(&u.inv().unwrap()).minus(&AlgebraicElement::rational(MRat::one()));
        assert!(one.is_zero());
        // d/dξ of y² is 3ξ².
        let d = y2.derivative();
        let expect = y.times(&y.derivative()).scale(&qi(2));
        assert!(d.minus(&expect).is_zero());
    }

    #[test]
    fn curve_symbolic_and_numeric() {
        assert!(curve_verify(None).unwrap().passed());
        for a in [q(4, 3), q(1, 2), q(-7, 5)] {
            assert!(curve_verify(Some(&a)).unwrap().passed());
        }
        assert_eq!(curve_constants(&q(4, 3)).unwrap(), (qi(0), q(27, 4)));
        assert_eq!(curve_constants(&q(1, 2)).unwrap(), (qi(5), qi(8)));
        assert!(curve_verify(Some(&qi(0))).is_err());
    }

    #[test]
    fn curve_detects_wrong_constants() {
        // The pipeline at a = 4/3 must not match the closed form for a = 1/2.
        let lhs = curve_pipeline().unwrap().substitute(VAR_A, &MRat::constant(q(4, 3)));
        let at = |t: &Q| lhs.p.eval_q(&[qi(0), t.clone()]).unwrap();
        assert_eq!(at(&qi(2)), curve_potential_at(&q(4, 3)).unwrap().eval(&qi(2)).unwrap());
        assert_ne!(at(&qi(2)), curve_potential_at(&q(1, 2)).unwrap().eval(&qi(2)).unwrap());
    }

    #[test]
    fn hypergeom_examples() {
        assert!(hypergeom_potential(&qi(1), &qi(1), &qi(1)).is_zero());
        let (l, m, v) = degree_triple(4).unwrap();
        assert_eq!((l.clone(), m.clone(), v.clone()), (q(1, 3), q(1, 3), q(1, 2)));
        let pot = hypergeom_potential(&l, &m, &v);
        assert!(poles_at_zero_one(&pot));
        // ¼((1/9−1)/s² + (1/4−1)/(1−s)² + (1/4−1)/(s(1−s))) at s = 1/2.
        let expect = q(1, 4) * (q(-8, 9) * qi(4) + q(-3, 4) * qi(4) + q(-3, 4) * qi(4));
        assert_eq!(pot.eval(&q(1, 2)).unwrap(), expect);
        assert!(degree_triple(2).is_err());
    }

    #[test]
    fn platonic_examples() {
        assert_eq!(platonic_order(2, 3, 5).unwrap(), PlatonicOrder::Finite(qi(60)));
        assert_eq!(platonic_order(2, 2, 7).unwrap(), PlatonicOrder::Finite(qi(14)));
        assert_eq!(platonic_order(3, 2, 4).unwrap(), PlatonicOrder::Finite(qi(24)));
        assert_eq!(platonic_order(2, 3, 7).unwrap(), PlatonicOrder::Infinite);
        assert_eq!(platonic_order(2, 3, 6).unwrap(), PlatonicOrder::Infinite);
        assert_eq!(platonic_order(0, 3, 6), Err(SchwarzError::BadOrder));
        assert_eq!(platonic_name([5, 3, 2]), Some("icosahedral"));
        assert_eq!(platonic_name([2, 3, 7]), None);
    }

    #[test]
    fn exponent_examples() {
        let e = exponent_data(&q(1, 4), &q(-1, 4), &q(2, 3));
        assert_eq!(e.mu0, q(1, 3));
        assert_eq!(e.mu_inf, q(-1, 2));
        assert_eq!(e.k_inf.clone().unwrap().abs(), qi(2));
        assert_eq!(e.lambda, qi(1) - &e.c);
        assert_eq!(e.mu1, qi(1) - &e.lambda + &e.mu);
        let z = exponent_data(&qi(0), &qi(0), &qi(1));
        assert_eq!(z.k0, None);
    }

    #[test]
    fn bridge_finds_cube() {
        let hits = bridge_search(4).unwrap();
        assert!(hits.contains(&(qi(1), 3)));
        let hits = bridge_search(6).unwrap();
        assert_eq!(hits, vec![(qi(1), 3)]);
    }

    #[test]
    fn suite_passes() {
        let rep = run_all(0, 20, false).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn mobius_schwarzian_vanishes(a in -9i64..9, b in -9i64..9, c in -9i64..9, d in -9i64..9) {
            prop_assume!(a * d - b * c != 0);
            let f = RatFun::new(Poly::new(vec![qi(b), qi(a)]), Poly::new(vec![qi(d), qi(c)])).unwrap();
            prop_assert!(schwarzian(&f).unwrap().is_zero());
        }

        #[test]
        fn exponent_round_trip(ln in -9i64..9, mn in -9i64..9, nn in -9i64..9, den in 1i64..7) {
            let (l, m, v) = (q(ln, den), q(mn, den), q(nn, den));
            let (a, b, c) = abc_from_exponents(&l, &m, &v);
            let e = exponent_data(&a, &b, &c);
            prop_assert_eq!((e.lambda, e.mu, e.nu), (l, m, v));
        }
    }
}
