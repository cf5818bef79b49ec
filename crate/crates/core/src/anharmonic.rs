//! Anharmonic equations from finite Möbius groups.
//!
//! Given a group with invariant Ψ = ψ/φ and a seed η₀ whose stabilizer has
//! order p, the orbit of η₀ gives the polynomial U; each orbit point η_i gives
//! a root x_i = f(t, η_i) = (1/(t − η_i) − U′/(nU)) / Ψ′ of an equation
//! F(x, T) = 0 over Q(ζ)(T), T = Ψ(t), and every x_i solves one Riccati
//! equation du/dt = B₀ + B₁u + B₂u².
//!
//! When ∞ lies in the orbit (unavoidable for some vertex, edge and face
//! orbits of the standard invariants) U collects the finite points only and has
//! degree n − 1; the root attached to ∞ is −U′/(nU Ψ′).

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::resultant::{charpoly, det_field};
use crate::algebra::ring::{qi, Field, Ring};
use crate::algebra::{AlgebraError, Cyclotomic, Poly, RatFun};
use crate::mobius::{
    cross_ratio, fixed_points_in, generic_point, group_catalog, invariant_psi, orbit, AbsoluteInvariant,
    FiniteMobiusGroup, FixedPoints, GroupKind, MobiusError, MobiusMap, Point,
};
use crate::report::{Check, Report};

type C = Cyclotomic;
type RF = RatFun<C>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnharmonicError {
    #[error("(n, p) = ({n}, {p}) is not admissible for the {kind} group")]
    Inadmissible { kind: String, n: u32, p: u32 },
    #[error("no seed point with stabilizer of order {p} in the {kind} group")]
    NoSeed { kind: String, p: u32 },
    #[error("inadmissible seed: orbit size {orbit}, stabilizer order {stab}; expected n = {n}, p = {p}")]
    InadmissibleSeed { orbit: usize, stab: usize, n: u32, p: u32 },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("elimination failed: {0}")]
    Elimination(String),
    #[error("{0} is not a root of U")]
    NotARoot(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

/// One admissible (n, p) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeRow {
    pub n: u32,
    pub p: u32,
}

/// Admissible degrees for a concrete group. Cyclic groups only allow p = 1
/// and n ≥ 4; dihedral groups of order 2m give (2m, 1) when 2m ≥ 4 and (m, 2);
/// the polyhedral rows follow the running text (N = np throughout).
pub fn degree_table(kind: GroupKind) -> Vec<DegreeRow> {
    let row = |n, p| DegreeRow { n, p };
    match kind {
        GroupKind::Cyclic(n) if n >= 4 => vec![row(n, 1)],
        GroupKind::Cyclic(_) => vec![],
        GroupKind::Dihedral(m) => {
            let mut v = Vec::new();
            if 2 * m >= 4 {
                v.push(row(2 * m, 1));
            }
            v.push(row(m, 2));
            v
        }
        GroupKind::Tetrahedral => vec![row(12, 1), row(4, 3), row(6, 2)],
        GroupKind::Octahedral => vec![row(24, 1), row(12, 2), row(8, 3), row(6, 4)],
        GroupKind::Icosahedral => vec![row(60, 1), row(30, 2), row(20, 3), row(5, 12)],
    }
}

pub fn is_admissible(kind: GroupKind, n: u32, p: u32) -> bool {
    degree_table(kind).contains(&DegreeRow { n, p })
}

/// A group, its invariant and a seed with the right stabilizer.
#[derive(Clone, Debug)]
pub struct AnharmonicSpec {
    pub kind: GroupKind,
    pub group: FiniteMobiusGroup,
    pub invariant: AbsoluteInvariant,
    pub seed: Cyclotomic,
    pub n: u32,
    pub p: u32,
    pub orbit: Vec<Point>,
}

fn element_order(g: &MobiusMap) -> usize {
    let mut h = g.clone();
    let mut k = 1;
    while !h.is_identity() {
        h = h.compose(g);
        k += 1;
        assert!(k <= 120, "element of a finite group");
    }
    k
}

/// Conductors tried, in order, when looking for exact fixed points.
const EXTENSIONS: [u32; 7] = [1, 3, 4, 8, 5, 12, 24];

impl AnharmonicSpec {
    /// Choose a seed automatically: η₀ = 1 for cyclic groups, a rational
    /// point with trivial stabilizer for the other p = 1 cases, and an exact
    /// fixed point of an order-p element (generators first) when p > 1.
    pub fn new(kind: GroupKind, n: u32, p: u32) -> Result<Self, AnharmonicError> {
        if !is_admissible(kind, n, p) {
            return Err(AnharmonicError::Inadmissible { kind: kind.name(), n, p });
        }
        let group = group_catalog(kind)?;
        if p == 1 {
            let seed = match kind {
                GroupKind::Cyclic(_) => Point::int(1),
                _ => generic_point(&group),
            };
            let Point::Finite(s) = seed else { unreachable!("seeds are finite") };
            return Self::with_seed(kind, n, p, s);
        }
        let mut candidates: Vec<MobiusMap> = group.generators.iter().map(|(_, g)| g.clone()).collect();
        candidates.extend(group.elements().iter().cloned());
        let mut fallback = None;
        for g in candidates.iter().filter(|g| !g.is_identity() && element_order(g) == p as usize) {
            for ext in EXTENSIONS {
                let m = num_integer::lcm(ext, group.conductor());
                let Ok(FixedPoints::Exact(pts)) = fixed_points_in(g, m) else { continue };
                for pt in pts {
                    let Point::Finite(z) = &pt else { continue };
                    if group.stabilizer(&pt).len() != p as usize {
                        continue;
                    }
                    let orb = orbit(&pt, &group);
                    if orb.len() != n as usize {
                        continue;
                    }
                    if !orb.contains(&Point::Infinity) {
                        return Self::with_seed(kind, n, p, z.clone());
                    }
                    fallback.get_or_insert(z.clone());
                }
                break;
            }
        }
        match fallback {
            Some(z) => Self::with_seed(kind, n, p, z),
            None => Err(AnharmonicError::NoSeed { kind: kind.name(), p }),
        }
    }

    pub fn with_seed(kind: GroupKind, n: u32, p: u32, seed: Cyclotomic) -> Result<Self, AnharmonicError> {
        let group = group_catalog(kind)?;
        let pt = Point::Finite(seed.clone());
        let orb = orbit(&pt, &group);
        let stab = group.stabilizer(&pt).len();
        if orb.len() != n as usize || stab != p as usize {
            return Err(AnharmonicError::InadmissibleSeed { orbit: orb.len(), stab, n, p });
        }
        Ok(AnharmonicSpec { kind, invariant: invariant_psi(kind), group, seed, n, p, orbit: orb })
    }

    pub fn big_n(&self) -> u32 {
        self.n * self.p
    }

    /// Smallest conductor holding the group, the seed and the invariant.
    pub fn conductor(&self) -> u32 {
        let inv = self.invariant.psi.coeffs().iter().chain(self.invariant.phi.coeffs());
        inv.fold(num_integer::lcm(self.group.conductor(), self.seed.conductor()), |a, c| {
            num_integer::lcm(a, c.conductor())
        })
    }

    pub fn psi_ratfun(&self) -> RF {
        RF::new(self.invariant.psi.clone(), self.invariant.phi.clone()).expect("phi != 0")
    }

    pub fn finite_orbit(&self) -> Vec<Cyclotomic> {
        self.orbit.iter().filter_map(|p| p.finite().cloned()).collect()
    }
}

fn linear(root: &C) -> Poly<C> {
    Poly::new(vec![root.negate(), C::one()])
}

/// U = ∏ (t − η) over the finite orbit points, with the p-th power structure
/// ψ − Ψ(η₀)φ = c·U^p checked exactly (φ itself when η₀ is a pole of Ψ).
pub fn orbit_polynomial(spec: &AnharmonicSpec) -> Result<Poly<C>, AnharmonicError> {
    let u = spec.finite_orbit().iter().fold(Poly::one(), |acc, e| acc.times(&linear(e)));
    if power_structure_constant(spec, &u).is_none() {
        return Err(AnharmonicError::Construction(format!("psi - Psi(eta0) phi is not a constant times U^{}", spec.p)));
    }
    Ok(u)
}

/// The constant c with ψ − Ψ(η₀)φ = c·U^p, if there is one.
pub fn power_structure_constant(spec: &AnharmonicSpec, u: &Poly<C>) -> Option<C> {
    let fiber = fiber_polynomial(spec);
    let up = u.power(spec.p);
    let c = fiber.lead().divide(&up.lead())?;
    (fiber == up.scale(&c)).then_some(c)
}

/// ψ − Ψ(η₀)φ, or φ when Ψ(η₀) = ∞.
fn fiber_polynomial(spec: &AnharmonicSpec) -> Poly<C> {
    let inv = &spec.invariant;
    match inv.eval(&spec.seed) {
        Some(t0) => inv.psi.minus(&inv.phi.scale(&t0)),
        None => inv.phi.clone(),
    }
}

/// U′/(nU) with n the orbit size.
fn v_term(spec: &AnharmonicSpec, u: &Poly<C>) -> RF {
    RF::new(u.derivative(), u.scale_int(spec.n as i64)).expect("U != 0")
}

/// x_i = f(t, η_i) for a finite orbit point or ∞.
pub fn parameterize_root(spec: &AnharmonicSpec, u: &Poly<C>, eta: &Point) -> Result<RF, AnharmonicError> {
    let dpsi = spec.psi_ratfun().derivative();
    let v = v_term(spec, u);
    let head = match eta {
        Point::Finite(e) => {
            if !u.eval(e).is_zero() {
                return Err(AnharmonicError::NotARoot(e.to_string()));
            }
            RF::new(Poly::one(), linear(e))?.minus(&v)
        }
        Point::Infinity => {
            if spec.orbit.contains(&Point::Infinity) {
                v.negate()
            } else {
                return Err(AnharmonicError::NotARoot("oo".into()));
            }
        }
    };
    head.divide(&dpsi).ok_or(AnharmonicError::Construction("Psi' vanishes identically".into()))
}

/// Coefficients of du/dt = B₀ + B₁u + B₂u².
#[derive(Clone, Debug, PartialEq)]
pub struct Riccati {
    pub b0: RF,
    pub b1: RF,
    pub b2: RF,
}

impl Riccati {
    /// B₀ + B₁u + B₂u² − u′.
    pub fn residual(&self, u: &RF) -> RF {
        self.b0.plus(&self.b1.times(u)).plus(&self.b2.times(&u.times(u))).minus(&u.derivative())
    }
}

/// Solve Ψ′u′ + uΨ″ + V′ + (uΨ′ + V)² = 0 for u′, V = U′/(nU):
/// B₀ = −(V′ + V²)/Ψ′, B₁ = −(Ψ″/Ψ′ + 2V), B₂ = −Ψ′.
pub fn build_riccati(spec: &AnharmonicSpec, u: &Poly<C>) -> Result<Riccati, AnharmonicError> {
    let d1 = spec.psi_ratfun().derivative();
    if d1.is_zero() {
        return Err(AnharmonicError::Construction("Psi' vanishes identically".into()));
    }
    let d2 = d1.derivative();
    let v = v_term(spec, u);
    let b0 = v.derivative().plus(&v.times(&v)).divide(&d1).expect("Psi' != 0").negate();
    let b1 = d2.divide(&d1).expect("Psi' != 0").plus(&v.scale_int(2)).negate();
    let b2 = d1.negate();
    Ok(Riccati { b0, b1, b2 })
}

pub fn verify_root_satisfies_riccati(
    spec: &AnharmonicSpec,
    u: &Poly<C>,
    eta: &Point,
) -> Result<Report, AnharmonicError> {
    let ric = build_riccati(spec, u)?;
    let x = parameterize_root(spec, u, eta)?;
    let res = ric.residual(&x);
    let mut r = Report::new("anharmonic");
    let residual = if res.is_zero() { None } else { Some((rf_display(&res, "t"), None)) };
    r.push(Check::exact(format!("{}/riccati/root[{eta}]", spec_name(spec)), residual));
    Ok(r)
}

pub fn spec_name(spec: &AnharmonicSpec) -> String {
    format!("{}(n={},p={})", spec.kind.name(), spec.n, spec.p)
}

/// F(x, T) as a polynomial in x with coefficients in Q(ζ)(T), plus the
/// bookkeeping of the elimination.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub f: Poly<RF>,
    /// Degree in T of the stripped T-content of the resultant.
    pub content_degree: usize,
    /// Number of T-samples interpolated.
    pub samples: usize,
}

/// Multiplication-by-h matrix on K[t]/(P), columns t^j h mod P.
fn mult_matrix(h: &Poly<C>, p: &Poly<C>) -> Vec<Vec<C>> {
    let n = p.deg();
    let mut cols = Vec::with_capacity(n);
    let mut cur = h.divrem(p).expect("P != 0").1;
    for _ in 0..n {
        cols.push(cur.clone());
        cur = cur.shift(1).divrem(p).expect("P != 0").1;
    }
    (0..n).map(|i| cols.iter().map(|c| c.coeff(i)).collect()).collect()
}

/// Res_t(ψ − T₀φ, A x − B) = lc^d · Norm(A) · charpoly(B/A mod P), or
/// `None` when T₀ is a bad sample (degree drop or common factor).
fn resultant_at(spec: &AnharmonicSpec, a: &Poly<C>, b: &Poly<C>, d: usize, t0: &C) -> Option<Poly<C>> {
    let inv = &spec.invariant;
    let p = inv.psi.minus(&inv.phi.scale(t0));
    if p.deg() != spec.big_n() as usize {
        return None;
    }
    let a_inv = a.inv_mod(&p)?;
    let h = b.times(&a_inv).divrem(&p).ok()?.1;
    let chi = charpoly(&mult_matrix(&h, &p));
    let norm = det_field(mult_matrix(a, &p));
    Some(chi.scale(&p.lead().power(d as u32).times(&norm)))
}

/// Integer T-samples where ψ − T₀φ keeps full degree and is coprime to the
/// denominator A of the seed root; `count` of them.
fn regular_samples(spec: &AnharmonicSpec, a: &Poly<C>, count: usize) -> Result<Vec<i64>, AnharmonicError> {
    let inv = &spec.invariant;
    let mut out = Vec::with_capacity(count);
    let mut k = 1i64;
    while out.len() < count {
        let p = inv.psi.minus(&inv.phi.scale(&C::from_int(k)));
        if p.deg() == spec.big_n() as usize && a.gcd(&p).deg() == 0 {
            out.push(k);
        }
        k += 1;
        if k > 10 * (count as i64 + 10) {
            return Err(AnharmonicError::Elimination("could not find enough regular T samples".into()));
        }
    }
    Ok(out)
}

/// x-coefficients of Res_t(ψ − Tφ, A x − B) as polynomials in T, by exact
/// evaluation at d + 1 samples (one more checks the degree bound).
fn resultant_exact(spec: &AnharmonicSpec, a: &Poly<C>, b: &Poly<C>, d: usize) -> Result<Vec<Poly<C>>, AnharmonicError> {
    let ts: Vec<C> = regular_samples(spec, a, d + 2)?.into_iter().map(C::from_int).collect();
    let vals: Vec<Poly<C>> = ts
        .iter()
        .map(|t0| resultant_at(spec, a, b, d, t0))
        .collect::<Option<_>>()
        .ok_or_else(|| AnharmonicError::Elimination("singular sample".into()))?;
    (0..=spec.big_n() as usize)
        .map(|j| {
            let ys: Vec<C> = vals.iter().map(|v| v.coeff(j)).collect();
            let rk = Poly::interpolate(&ts[..d + 1], &ys[..d + 1])?;
            if rk.eval(&ts[d + 1]) != ys[d + 1] {
                return Err(AnharmonicError::Elimination(format!("T-degree bound {d} violated at x^{j}")));
            }
            Ok(rk)
        })
        .collect()
}

/// Same coefficients, computed in F_p under every embedding of ζ and lifted
/// by CRT and rational reconstruction until two primes agree.
fn resultant_modular(
    spec: &AnharmonicSpec,
    a: &Poly<C>,
    b: &Poly<C>,
    d: usize,
) -> Result<Vec<Poly<C>>, AnharmonicError> {
    use crate::algebra::fp::{self, split_primes, CrtLift};
    use num_integer::Integer;

    let big_n = spec.big_n() as usize;
    let samples = regular_samples(spec, a, d + 2)?;
    let inv = &spec.invariant;
    let cond =
        [&inv.psi, &inv.phi, a, b].iter().flat_map(|q| q.coeffs().iter()).fold(1u32, |acc, c| acc.lcm(&c.conductor()));
    let mut lift = CrtLift::new();
    let mut degree_failures = 0;
    'primes: for sp in split_primes(cond).take(2000) {
        let p = sp.p;
        let phi = sp.roots.len();
        // per embedding: coefficient j of x, then T-degree e
        let mut per_embedding: Vec<Vec<Vec<u64>>> = Vec::with_capacity(phi);
        for k in 0..phi {
            let img = |q: &Poly<C>| -> Option<Vec<u64>> {
                let mut v: Vec<u64> = q.coeffs().iter().map(|c| sp.embed(c, k)).collect::<Option<_>>()?;
                fp::trim(&mut v);
                Some(v)
            };
            let (Some(psi), Some(phi_), Some(ai), Some(bi)) = (img(&inv.psi), img(&inv.phi), img(a), img(b)) else {
                continue 'primes;
            };
            let mut vals: Vec<Vec<u64>> = Vec::with_capacity(samples.len());
            for &t0 in &samples {
                let t0 = t0 as u64 % p;
                let mut pt: Vec<u64> = (0..psi.len().max(phi_.len()))
                    .map(|i| (psi.get(i).unwrap_or(&0) + p - t0 * phi_.get(i).unwrap_or(&0) % p) % p)
                    .collect();
                fp::trim(&mut pt);
                if pt.len() != big_n + 1 {
                    continue 'primes;
                }
                let Some(a_inv) = fp::inv_mod(&ai, &pt, p) else { continue 'primes };
                let h = fp::rem(&fp::mul(&bi, &a_inv, p), &pt, p);
                let chi = fp::charpoly(&fp::mult_matrix(&h, &pt, p), p);
                let norm = fp::det(fp::mult_matrix(&ai, &pt, p), p);
                let scale = fp::pow_mod(pt[big_n], d as u64, p) * norm % p;
                vals.push((0..=big_n).map(|j| chi.get(j).unwrap_or(&0) * scale % p).collect());
            }
            let xs: Vec<u64> = samples.iter().map(|&t| t as u64 % p).collect();
            let mut coeffs = Vec::with_capacity(big_n + 1);
            for j in 0..=big_n {
                let ys: Vec<u64> = vals.iter().map(|v| v[j]).collect();
                let mut r = fp::interpolate(&xs[..d + 1], &ys[..d + 1], p);
                if fp::eval(&r, xs[d + 1], p) != ys[d + 1] {
                    degree_failures += 1;
                    if degree_failures > 3 {
                        return Err(AnharmonicError::Elimination(format!("T-degree bound {d} violated at x^{j}")));
                    }
                    continue 'primes;
                }
                r.resize(d + 1, 0);
                coeffs.push(r);
            }
            per_embedding.push(coeffs);
        }
        let images: Vec<u64> = (0..=big_n)
            .flat_map(|j| (0..=d).map(move |e| (j, e)))
            .flat_map(|(j, e)| sp.coords(&per_embedding.iter().map(|c| c[j][e]).collect::<Vec<_>>()))
            .collect();
        if let Some(flat) = lift.add(&images, p) {
            let coords: Vec<C> = flat.chunks(phi).map(|c| C::new(cond, c.to_vec())).collect();
            return Ok(coords.chunks(d + 1).map(|c| Poly::new(c.to_vec())).collect());
        }
    }
    Err(AnharmonicError::Elimination("modular reconstruction did not stabilize".into()))
}

/// Eliminate t between T = Ψ(t) and x = f(t, η₀): interpolate the resultant
/// in T (multimodular), strip its T-content, make it monic in x, then take
/// the exact p-th root.
pub fn eliminate(spec: &AnharmonicSpec, u: &Poly<C>) -> Result<Elimination, AnharmonicError> {
    eliminate_with(spec, u, resultant_modular)
}

/// [`eliminate`] with the resultant sampled and interpolated in exact
/// arithmetic throughout; slow beyond N = 12, kept as an independent route.
pub fn eliminate_exact(spec: &AnharmonicSpec, u: &Poly<C>) -> Result<Elimination, AnharmonicError> {
    eliminate_with(spec, u, resultant_exact)
}

type ResultantRoute = fn(&AnharmonicSpec, &Poly<C>, &Poly<C>, usize) -> Result<Vec<Poly<C>>, AnharmonicError>;

fn eliminate_with(spec: &AnharmonicSpec, u: &Poly<C>, route: ResultantRoute) -> Result<Elimination, AnharmonicError> {
    let f = parameterize_root(spec, u, &Point::Finite(spec.seed.clone()))?;
    let (b, a) = (f.num().clone(), f.den().clone());
    let d = a.deg().max(b.deg());
    let big_n = spec.big_n() as usize;
    let coeffs_x = route(spec, &a, &b, d)?;
    let content = coeffs_x.iter().fold(Poly::zero(), |g: Poly<C>, c| g.gcd(c));
    let stripped: Vec<Poly<C>> = coeffs_x.iter().map(|c| c.divrem(&content).expect("content != 0").0).collect();
    let lead = stripped[big_n].clone();
    let monic: Vec<RF> = stripped.iter().map(|c| RF::new(c.clone(), lead.clone()).expect("lead != 0")).collect();
    let fp = Poly::new(monic);
    if spec.p == 1 {
        return Ok(Elimination { f: fp, content_degree: content.deg(), samples: d + 2 });
    }
    let root = crate::algebra::poly::pth_root_generic(&fp, spec.p).map_err(|e| {
        AnharmonicError::Elimination(format!(
            "monic resultant (T-content of degree {}) is not a {}-th power: {e}",
            content.deg(),
            spec.p
        ))
    })?;
    Ok(Elimination { f: root, content_degree: content.deg(), samples: d + 2 })
}

fn eval_c64(p: &Poly<C>, z: Complex64) -> Complex64 {
    p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
}

/// Numeric value of an exact rational function at a complex point.
pub fn rf_c64(r: &RF, z: Complex64) -> Complex64 {
    eval_c64(r.num(), z) / eval_c64(r.den(), z)
}

/// Roots of a monic complex polynomial (coefficients low to high) by
/// Aberth iteration followed by Newton polishing.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            delta = delta.max(w.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Max relative distance between the roots of F(x, Ψ(t₀)) and the values
/// f(t₀, η_i), matched greedily.
pub fn numeric_root_match(
    spec: &AnharmonicSpec,
    u: &Poly<C>,
    f: &Poly<RF>,
    t0: Complex64,
) -> Result<f64, AnharmonicError> {
    let tt = rf_c64(&spec.psi_ratfun(), t0);
    let coeffs: Vec<Complex64> = f.coeffs().iter().map(|c| rf_c64(c, tt)).collect();
    let mut roots = poly_roots(&coeffs);
    let mut worst = 0.0f64;
    for eta in &spec.orbit {
        let x = rf_c64(&parameterize_root(spec, u, eta)?, t0);
        let (idx, dist) = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (r - x).norm() / x.norm().max(1.0)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| AnharmonicError::Construction("F has no roots".into()))?;
        roots.remove(idx);
        worst = worst.max(dist);
    }
    Ok(worst)
}

/// F(x, T₀) is squarefree at a rational sample, so disc_x(F) is not
/// identically zero.
pub fn separable_at(f: &Poly<RF>, t0: &C) -> Option<bool> {
    let coeffs: Option<Vec<C>> = f.coeffs().iter().map(|c| c.eval(t0)).collect();
    let g = Poly::new(coeffs?);
    Some(g.gcd(&g.derivative()).deg() == 0)
}

/// F(f(t, η), Ψ(t)) ≡ 0 in Q(ζ)(t).
///
/// Denominators are cleared up front (common denominator of F, then
/// homogenizing in Ψ = a/b and x = c/d), so the returned residual is a
/// polynomial multiple of the true one; only its vanishing is meaningful.
pub fn closure_residual(spec: &AnharmonicSpec, u: &Poly<C>, f: &Poly<RF>, eta: &Point) -> Result<RF, AnharmonicError> {
    let psi = spec.psi_ratfun();
    let x = parameterize_root(spec, u, eta)?;
    let lcm = f.coeffs().iter().fold(Poly::one(), |l: Poly<C>, c| {
        let g = l.gcd(c.den());
        l.times(&c.den().divrem(&g).expect("g != 0").0)
    });
    let g: Vec<Poly<C>> = f.coeffs().iter().map(|c| c.num().times(&lcm.divrem(c.den()).expect("den != 0").0)).collect();
    let powers = |p: &Poly<C>, k: usize| {
        let mut out = vec![Poly::one()];
        for _ in 0..k {
            out.push(out.last().unwrap().times(p));
        }
        out
    };
    let dt = g.iter().map(|c| c.deg()).max().unwrap_or(0);
    let nx = f.deg();
    let (an, ad) = (powers(psi.num(), dt), powers(psi.den(), dt));
    let (xn, xd) = (powers(x.num(), nx), powers(x.den(), nx));
    let mut acc = Poly::zero();
    for (k, gk) in g.iter().enumerate() {
        let mut hom = Poly::zero();
        for (j, c) in gk.coeffs().iter().enumerate() {
            if !c.is_zero() {
                hom = hom.plus(&an[j].times(&ad[dt - j]).scale(c));
            }
        }
        acc = acc.plus(&hom.times(&xn[k]).times(&xd[nx - k]));
    }
    Ok(RF::from_poly(acc))
}

/// For the cyclic family with U = tⁿ − K: apply x = (T y − K)/(nT(T − K)(1 − y))
/// and make monic in y; the result should be yⁿ − K/T.
pub fn cyclic_normal_form(f: &Poly<RF>, n: u32, k: &C) -> Result<Poly<RF>, AnharmonicError> {
    let t = RF::x();
    let kk = RF::constant(k.clone());
    let scale = t.times(&t.minus(&kk)).scale_int(n as i64);
    let a = t.clone();
    let b = kk.negate();
    let c = scale.negate();
    let d = scale;
    let g = f.mobius_transform(n as usize, &a, &b, &c, &d);
    if g.is_zero() {
        return Err(AnharmonicError::Construction("homography collapsed F".into()));
    }
    Ok(g.monic())
}

/// Everything the pipeline produces for one (group, n, p).
#[derive(Clone, Debug)]
pub struct AnharmonicResult {
    pub spec: AnharmonicSpec,
    pub u: Poly<C>,
    pub elimination: Elimination,
    pub riccati: Riccati,
    pub report: Report,
}

impl AnharmonicResult {
    pub fn f(&self) -> &Poly<RF> {
        &self.elimination.f
    }

    pub fn to_json(&self) -> Value {
        let s = &self.spec;
        json!({
            "group": s.kind.name(),
            "n": s.n,
            "p": s.p,
            "N": s.big_n(),
            "U": cpoly_json(&self.u),
            "F": self.f().coeffs().iter().map(rf_json).collect::<Vec<_>>(),
            "riccati": {
                "B0": rf_json(&self.riccati.b0),
                "B1": rf_json(&self.riccati.b1),
                "B2": rf_json(&self.riccati.b2),
            },
            "provenance": {
                "seed": s.seed.to_json(),
                "conductor": s.conductor(),
                "orbit_contains_infinity": s.orbit.contains(&Point::Infinity),
                "t_content_degree": self.elimination.content_degree,
                "t_samples": self.elimination.samples,
                "normalizations": [
                    "P(t) = 1/Psi'(t)",
                    "sum of roots zero via Q = -U'/(nU)",
                    "T-content removed",
                    "monic in x",
                    "exact p-th root",
                ],
            },
        })
    }

    pub fn to_text(&self, emit: &[&str]) -> String {
        let mut out = String::new();
        let s = &self.spec;
        out.push_str(&format!("{} seed={} conductor={}\n", spec_name(s), s.seed, s.conductor()));
        for e in emit {
            match *e {
                "U" => out.push_str(&format!("U(t) = {}\n", crate::algebra::poly_display(&self.u, "t"))),
                "F" => {
                    let terms: Vec<String> = self
                        .f()
                        .coeffs()
                        .iter()
                        .enumerate()
                        .rev()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| format!("({}) x^{k}", rf_display(c, "T")))
                        .collect();
                    out.push_str(&format!("F(x,T) = {}\n", terms.join(" + ")));
                }
                "riccati" => {
                    out.push_str(&format!("B0(t) = {}\n", rf_display(&self.riccati.b0, "t")));
                    out.push_str(&format!("B1(t) = {}\n", rf_display(&self.riccati.b1, "t")));
                    out.push_str(&format!("B2(t) = {}\n", rf_display(&self.riccati.b2, "t")));
                }
                _ => {}
            }
        }
        out
    }
}

pub fn cpoly_json(p: &Poly<C>) -> Value {
    Value::Array(p.coeffs().iter().map(Cyclotomic::to_json).collect())
}

pub fn rf_json(r: &RF) -> Value {
    json!({ "num": cpoly_json(r.num()), "den": cpoly_json(r.den()) })
}

pub fn rf_display(r: &RF, var: &str) -> String {
    let n = crate::algebra::poly_display(r.num(), var);
    if r.den().is_one() {
        n
    } else {
        format!("({n})/({})", crate::algebra::poly_display(r.den(), var))
    }
}

/// Options for [`run_pipeline`].
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Run the exact identity F(f(t, η), Ψ(t)) = 0 when N is at most this.
    pub closure_max_n: u32,
    pub tol: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { closure_max_n: 8, tol: 1e-8 }
    }
}

/// Build U, F and the Riccati coefficients and verify them.
pub fn run_pipeline(spec: AnharmonicSpec, opts: &PipelineOptions) -> Result<AnharmonicResult, AnharmonicError> {
    let name = spec_name(&spec);
    let mut report = Report::new("anharmonic");
    let u = orbit_polynomial(&spec)?;
    let c = power_structure_constant(&spec, &u);
    report.push(Check::flag(
        format!("{name}/U_power_structure"),
        c.is_some(),
        format!("psi - Psi(eta0) phi = c U^{}; deg U = {}", spec.p, u.deg()),
    ));
    // sum of the parameterized roots vanishes
    let roots: Vec<RF> = spec.orbit.iter().map(|e| parameterize_root(&spec, &u, e)).collect::<Result<_, _>>()?;
    let sum = roots.iter().fold(RF::zero(), |a, r| a.plus(r));
    report.push(Check::exact(format!("{name}/sum_of_roots"), (!sum.is_zero()).then(|| (rf_display(&sum, "t"), None))));

    let riccati = build_riccati(&spec, &u)?;
    for (eta, x) in spec.orbit.iter().zip(&roots) {
        let res = riccati.residual(x);
        report.push(Check::exact(
            format!("{name}/riccati/root[{eta}]"),
            (!res.is_zero()).then(|| (rf_display(&res, "t"), None)),
        ));
    }
    report.push(pole_check(&spec, &u, &riccati, &name));

    let elim = eliminate(&spec, &u)?;
    let f = &elim.f;
    let monic = f.deg() == spec.n as usize && f.lead().is_one();
    report.push(Check::flag(format!("{name}/F_monic_degree_n"), monic, format!("deg_x F = {}", f.deg())));
    let a1 = f.coeff(spec.n as usize - 1);
    report
        .push(Check::exact(format!("{name}/F_subleading_zero"), (!a1.is_zero()).then(|| (rf_display(&a1, "T"), None))));
    let sep = separable_at(f, &C::rational(BigRational::new(7.into(), 3.into()) + qi(100)));
    report.push(Check::flag(format!("{name}/F_separable"), sep == Some(true), "gcd(F, F_x) = 1 at T = 307/3"));
    let t0 = Complex64::new(0.3141, 0.2718);
    let dist = numeric_root_match(&spec, &u, f, t0)?;
    report.push(Check::numeric(format!("{name}/numeric_fiber_roots"), dist, opts.tol));
    if spec.big_n() <= opts.closure_max_n {
        let res = closure_residual(&spec, &u, f, &Point::Finite(spec.seed.clone()))?;
        report.push(Check::exact(format!("{name}/F_closure"), (!res.is_zero()).then(|| (rf_display(&res, "t"), None))));
    }
    Ok(AnharmonicResult { spec, u, elimination: elim, riccati, report })
}

/// Denominators of B₀, B₁ only involve U, the numerator of Ψ′ and φ.
fn pole_check(spec: &AnharmonicSpec, u: &Poly<C>, ric: &Riccati, name: &str) -> Check {
    let dpsi = spec.psi_ratfun().derivative();
    let allowed = u.times(dpsi.num()).times(&spec.invariant.phi);
    let ok = [&ric.b0, &ric.b1, &ric.b2].iter().all(|b| {
        let mut den = b.den().clone();
        for _ in 0..64 {
            let g = den.gcd(&allowed);
            if g.deg() == 0 {
                break;
            }
            den = den.divrem(&g).expect("g != 0").0;
        }
        den.deg() == 0
    });
    Check::flag(format!("{name}/riccati_poles"), ok, "poles among roots of U, Psi' and phi")
}

/// Cross-ratio of four parameterized roots, which should not depend on t and
/// should equal the cross-ratio of the corresponding orbit points.
pub fn root_cross_ratio(spec: &AnharmonicSpec, u: &Poly<C>, idx: [usize; 4]) -> Result<(RF, C), AnharmonicError> {
    let xs: Vec<RF> = idx.iter().map(|&i| parameterize_root(spec, u, &spec.orbit[i])).collect::<Result<_, _>>()?;
    let cr = xs[0]
        .minus(&xs[2])
        .times(&xs[1].minus(&xs[3]))
        .divide(&xs[1].minus(&xs[2]).times(&xs[0].minus(&xs[3])))
        .ok_or_else(|| AnharmonicError::Construction("coincident roots".into()))?;
    let pts = idx.map(|i| &spec.orbit[i]);
    let eta_cr = cross_ratio(pts)?;
    Ok((cr, eta_cr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_tables() {
        let p_gt_1 = |k| degree_table(k).into_iter().filter(|r| r.p > 1).map(|r| (r.n, r.p)).collect::<Vec<_>>();
        assert_eq!(p_gt_1(GroupKind::Tetrahedral), vec![(4, 3), (6, 2)]);
        assert_eq!(p_gt_1(GroupKind::Octahedral), vec![(12, 2), (8, 3), (6, 4)]);
        assert!(p_gt_1(GroupKind::Cyclic(5)).is_empty());
        assert!(degree_table(GroupKind::Cyclic(2)).is_empty());
    }

    #[test]
    fn cyclic_example() {
        let spec = AnharmonicSpec::new(GroupKind::Cyclic(4), 4, 1).unwrap();
        let u = orbit_polynomial(&spec).unwrap();
        assert_eq!(u, Poly::new(vec![C::from_int(-1), C::zero(), C::zero(), C::zero(), C::one()]));
        assert!(verify_root_satisfies_riccati(&spec, &u, &spec.orbit[1]).unwrap().passed());
        let e = eliminate(&spec, &u).unwrap();
        let y = cyclic_normal_form(&e.f, 4, &C::one()).unwrap();
        let t_inv = RF::x().inv().unwrap();
        let expect = Poly::new(vec![t_inv.negate(), RF::zero(), RF::zero(), RF::zero(), RF::one()]);
        assert_eq!(y, expect);
    }

    #[test]
    fn dihedral_three_end_to_end() {
        let spec = AnharmonicSpec::new(GroupKind::Dihedral(3), 3, 2).unwrap();
        assert_eq!(spec.seed, C::one());
        let res = run_pipeline(spec, &PipelineOptions::default()).unwrap();
        assert_eq!(res.u.deg(), 3);
        for c in &res.report.checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn icosahedral_twelve_has_no_point_seed() {
        assert!(matches!(AnharmonicSpec::new(GroupKind::Icosahedral, 5, 12), Err(AnharmonicError::NoSeed { .. })));
        assert!(matches!(AnharmonicSpec::new(GroupKind::Cyclic(2), 2, 1), Err(AnharmonicError::Inadmissible { .. })));
    }

    #[test]
    fn modular_and_exact_elimination_agree() {
        for (kind, n, p) in
            [(GroupKind::Dihedral(3), 3, 2), (GroupKind::Tetrahedral, 4, 3), (GroupKind::Cyclic(5), 5, 1)]
        {
            let spec = AnharmonicSpec::new(kind, n, p).unwrap();
            let u = orbit_polynomial(&spec).unwrap();
            let fast = eliminate(&spec, &u).unwrap();
            let slow = eliminate_exact(&spec, &u).unwrap();
            assert_eq!(fast.f, slow.f, "{}", spec_name(&spec));
        }
    }
}
