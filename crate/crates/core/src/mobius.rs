//! Finite Möbius groups, their absolute invariants, orbits and cross-ratios.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::BigRational;
use thiserror::Error;

use crate::algebra::embed::{cyc_embed, BigComplex};
use crate::algebra::ring::{qi, Field, Ring};
use crate::algebra::{Cyclotomic, Poly};
use crate::report::{Check, Report};

type C = Cyclotomic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MobiusError {
    #[error("unknown group kind {0:?}")]
    UnknownKind(String),
    #[error("group parameter must be at least 2 (got {0})")]
    BadParameter(u32),
    #[error("singular matrix (ad - bc = 0)")]
    Singular,
    #[error("the identity fixes every point")]
    Identity,
    #[error("degenerate cross-ratio: {0}")]
    Degenerate(String),
}

/// A point of the Riemann sphere with exact coordinates.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Finite(Cyclotomic),
    Infinity,
}

impl Point {
    pub fn int(n: i64) -> Self {
        Point::Finite(C::from_int(n))
    }

    pub fn finite(&self) -> Option<&Cyclotomic> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(z) => write!(f, "{z}"),
            Point::Infinity => write!(f, "oo"),
        }
    }
}

/// z -> (a z + b) / (c z + d), scaled so the first nonzero entry is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusMap {
    a: C,
    b: C,
    c: C,
    d: C,
}

impl MobiusMap {
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self, MobiusError> {
        if a.times(&d).minus(&b.times(&c)).is_zero() {
            return Err(MobiusError::Singular);
        }
        let lead = [&a, &b, &c, &d].into_iter().find(|x| !x.is_zero()).cloned().expect("nonsingular");
        let s = lead.inv().expect("nonzero");
        Ok(MobiusMap { a: a.times(&s), b: b.times(&s), c: c.times(&s), d: d.times(&s) })
    }

    pub fn identity() -> Self {
        MobiusMap { a: C::one(), b: C::zero(), c: C::zero(), d: C::one() }
    }

    pub fn entries(&self) -> [&C; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// self ∘ other.
    pub fn compose(&self, o: &Self) -> Self {
        let m = |x: &C, y: &C, z: &C, w: &C| x.times(y).plus(&z.times(w));
        MobiusMap::new(
            m(&self.a, &o.a, &self.b, &o.c),
            m(&self.a, &o.b, &self.b, &o.d),
            m(&self.c, &o.a, &self.d, &o.c),
            m(&self.c, &o.b, &self.d, &o.d),
        )
        .expect("product of nonsingular maps")
    }

    pub fn inverse(&self) -> Self {
        MobiusMap::new(self.d.clone(), self.b.negate(), self.c.negate(), self.a.clone()).expect("nonsingular")
    }

    pub fn apply(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => {
                if self.c.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(self.a.divide(&self.c).expect("c != 0"))
                }
            }
            Point::Finite(z) => {
                let den = self.c.times(z).plus(&self.d);
                if den.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(self.a.times(z).plus(&self.b).divide(&den).expect("den != 0"))
                }
            }
        }
    }

    /// Smallest conductor containing all entries.
    pub fn conductor(&self) -> u32 {
        self.entries().iter().fold(1, |acc, e| num_integer::lcm(acc, e.conductor()))
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> (({})z + ({})) / (({})z + ({}))", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl GroupKind {
    pub fn order(&self) -> usize {
        match *self {
            GroupKind::Cyclic(n) => n as usize,
            GroupKind::Dihedral(m) => 2 * m as usize,
            GroupKind::Tetrahedral => 12,
            GroupKind::Octahedral => 24,
            GroupKind::Icosahedral => 60,
        }
    }

    /// Parse a family name plus optional parameter.
    pub fn parse(kind: &str, param: Option<u32>) -> Result<Self, MobiusError> {
        let need = |p: Option<u32>| -> Result<u32, MobiusError> {
            let p = p.ok_or(MobiusError::BadParameter(0))?;
            if p < 2 {
                Err(MobiusError::BadParameter(p))
            } else {
                Ok(p)
            }
        };
        match kind.to_ascii_lowercase().as_str() {
            "cyc" | "cyclic" => Ok(GroupKind::Cyclic(need(param)?)),
            "dih" | "dihedral" => Ok(GroupKind::Dihedral(need(param)?)),
            "tetr" | "tetra" | "tetrahedral" => Ok(GroupKind::Tetrahedral),
            "oct" | "octa" | "octahedral" => Ok(GroupKind::Octahedral),
            "ico" | "icosa" | "icosahedral" => Ok(GroupKind::Icosahedral),
            other => Err(MobiusError::UnknownKind(other.to_string())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupKind::Cyclic(n) => format!("cyclic:{n}"),
            GroupKind::Dihedral(m) => format!("dihedral:{m}"),
            GroupKind::Tetrahedral => "tetrahedral".into(),
            GroupKind::Octahedral => "octahedral".into(),
            GroupKind::Icosahedral => "icosahedral".into(),
        }
    }
}

impl FromStr for GroupKind {
    type Err = MobiusError;

    /// Accepts `tetra`, `octa`, `ico`, `cyclic:5`, `dih:3`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((k, p)) => {
                let p: u32 = p.trim().parse().map_err(|_| MobiusError::UnknownKind(s.to_string()))?;
                GroupKind::parse(k.trim(), Some(p))
            }
            None => GroupKind::parse(s.trim(), None),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteMobiusGroup {
    pub kind: GroupKind,
    pub generators: Vec<(String, MobiusMap)>,
    elements: Vec<MobiusMap>,
}

impl FiniteMobiusGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// All elements, identity first.
    pub fn elements(&self) -> &[MobiusMap] {
        &self.elements
    }

    pub fn generator(&self, name: &str) -> Option<&MobiusMap> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn conductor(&self) -> u32 {
        self.generators.iter().fold(1, |acc, (_, g)| num_integer::lcm(acc, g.conductor()))
    }

    /// Elements fixing `p`.
    pub fn stabilizer(&self, p: &Point) -> Vec<&MobiusMap> {
        self.elements.iter().filter(|g| g.apply(p) == *p).collect()
    }
}

fn closure(gens: &[MobiusMap]) -> Vec<MobiusMap> {
    let mut elems = vec![MobiusMap::identity()];
    let mut frontier = vec![MobiusMap::identity()];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let h = g.compose(&e);
            if !elems.contains(&h) {
                elems.push(h.clone());
                frontier.push(h);
            }
        }
    }
    elems
}

fn map(a: C, b: C, c: C, d: C) -> MobiusMap {
    MobiusMap::new(a, b, c, d).expect("catalog maps are nonsingular")
}

fn int(n: i64) -> C {
    C::from_int(n)
}

/// (1 - i)/(1 + i), which equals -i.
fn tetra_factor() -> C {
    let i = C::i();
    int(1).minus(&i).divide(&int(1).plus(&i)).expect("1 + i != 0")
}

/// Generators as listed for each family; the icosahedral involution is
/// z -> -1/z, the one that actually preserves the icosahedral invariant.
pub fn group_catalog(kind: GroupKind) -> Result<FiniteMobiusGroup, MobiusError> {
    let rot = |n: u32| map(C::zeta(n), int(0), int(0), int(1));
    let eps0 = map(int(0), int(1), int(1), int(0));
    let theta1 = {
        let k = tetra_factor();
        map(k.clone(), k.clone(), int(1), int(-1))
    };
    let generators: Vec<(String, MobiusMap)> = match kind {
        GroupKind::Cyclic(n) | GroupKind::Dihedral(n) if n < 2 => return Err(MobiusError::BadParameter(n)),
        GroupKind::Cyclic(n) => vec![(format!("Theta_{n}"), rot(n))],
        GroupKind::Dihedral(m) => vec![(format!("Theta_{m}"), rot(m)), ("eps0".into(), eps0)],
        GroupKind::Tetrahedral => vec![
            ("Theta_2".into(), map(int(-1), int(0), int(0), int(1))),
            ("eps0".into(), eps0),
            ("theta1".into(), theta1),
        ],
        GroupKind::Octahedral => {
            vec![("theta1".into(), theta1), ("theta2".into(), map(tetra_factor(), int(0), int(0), int(1)))]
        }
        GroupKind::Icosahedral => {
            let z = |k| C::zeta_pow(5, k);
            let s5 = C::sqrt5();
            let alpha = z(4).minus(&z(1)).divide(&s5).expect("sqrt5 != 0");
            let beta = z(2).minus(&z(3)).divide(&s5).expect("sqrt5 != 0");
            vec![
                ("Theta_5".into(), rot(5)),
                ("eps0".into(), map(int(0), int(-1), int(1), int(0))),
                ("eps1".into(), map(alpha.clone(), beta.clone(), beta, alpha.negate())),
            ]
        }
    };
    let gens: Vec<MobiusMap> = generators.iter().map(|(_, g)| g.clone()).collect();
    Ok(FiniteMobiusGroup { kind, generators, elements: closure(&gens) })
}

/// Ψ = ψ/φ together with its degree as a map of the sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsoluteInvariant {
    pub psi: Poly<C>,
    pub phi: Poly<C>,
    pub degree: usize,
    coprime: OnceLock<bool>,
}

impl AbsoluteInvariant {
    fn new(psi: Poly<C>, phi: Poly<C>) -> Self {
        let degree = psi.deg().max(phi.deg());
        AbsoluteInvariant { psi, phi, degree, coprime: OnceLock::new() }
    }

    /// Ψ(z), or `None` at a pole.
    pub fn eval(&self, z: &C) -> Option<C> {
        self.psi.eval(z).divide(&self.phi.eval(z))
    }

    /// Ψ(g z) = Ψ(z), i.e. ψ̃ φ = φ̃ ψ where ψ̃ is the homogenized transform
    /// of ψ of degree `self.degree`. With gcd(ψ, φ) = 1 this is equivalent to
    /// ψ̃ = λψ and φ̃ = λφ for one constant λ, which avoids the products.
    pub fn is_invariant_under(&self, g: &MobiusMap) -> bool {
        let [a, b, c, d] = g.entries();
        let n = self.degree;
        let psi_t = self.psi.mobius_transform(n, a, b, c, d);
        let phi_t = self.phi.mobius_transform(n, a, b, c, d);
        if !self.coprime() {
            return psi_t.times(&self.phi) == phi_t.times(&self.psi);
        }
        let Some(lambda) = psi_t.lead().divide(&self.psi.lead()) else {
            return false;
        };
        psi_t == self.psi.scale(&lambda) && phi_t == self.phi.scale(&lambda)
    }

    /// gcd(ψ, φ) = 1, computed once.
    pub fn coprime(&self) -> bool {
        *self.coprime.get_or_init(|| self.psi.gcd(&self.phi).deg() == 0)
    }
}

fn cpoly(coeffs: &[(usize, i64)]) -> Poly<C> {
    let deg = coeffs.iter().map(|(k, _)| *k).max().unwrap_or(0);
    let mut v = vec![C::zero(); deg + 1];
    for (k, c) in coeffs {
        v[*k] = v[*k].plus(&int(*c));
    }
    Poly::new(v)
}

/// The classical invariants ψ/φ for each family.
pub fn invariant_psi(kind: GroupKind) -> AbsoluteInvariant {
    match kind {
        GroupKind::Cyclic(n) => AbsoluteInvariant::new(cpoly(&[(n as usize, 1)]), cpoly(&[(0, 1)])),
        GroupKind::Dihedral(m) => {
            let m = m as usize;
            AbsoluteInvariant::new(cpoly(&[(2 * m, 1), (0, 1)]), cpoly(&[(m, 1)]))
        }
        GroupKind::Tetrahedral => {
            // z^4 + 1 ± 2 i sqrt(3) z^2
            let c = C::i().times(&C::sqrt3()).times(&int(2));
            let q = |s: &C| Poly::new(vec![int(1), int(0), s.clone(), int(0), int(1)]);
            AbsoluteInvariant::new(q(&c).power(3), q(&c.negate()).power(3))
        }
        GroupKind::Octahedral => {
            let psi = cpoly(&[(0, 1), (4, 14), (8, 1)]).power(3);
            let phi = cpoly(&[(0, 1), (4, -1)]).power(4).times(&cpoly(&[(4, 108)]));
            AbsoluteInvariant::new(psi, phi)
        }
        GroupKind::Icosahedral => {
            let psi = cpoly(&[(20, -1), (0, -1), (15, 228), (5, -228), (10, -494)]).power(3);
            let phi = cpoly(&[(10, 1), (5, 11), (0, -1)]).power(5).times(&cpoly(&[(5, 1728)]));
            AbsoluteInvariant::new(psi, phi)
        }
    }
}

/// Per-generator invariance report; `all_elements` extends it to the whole group.
pub fn verify_invariance(group: &FiniteMobiusGroup, inv: &AbsoluteInvariant, all_elements: bool) -> Report {
    let mut r = Report::new("mobius");
    let kind = group.kind.name();
    for (name, g) in &group.generators {
        let ok = inv.is_invariant_under(g);
        r.push(Check::flag(format!("{kind}/invariance/{name}"), ok, g.to_string()));
    }
    if all_elements {
        let bad: Vec<usize> =
            group.elements().iter().enumerate().filter(|(_, g)| !inv.is_invariant_under(g)).map(|(i, _)| i).collect();
        r.push(Check::flag(
            format!("{kind}/invariance/all_elements"),
            bad.is_empty(),
            format!("{} elements, failing indices {:?}", group.order(), bad),
        ));
    }
    r.push(Check::flag(
        format!("{kind}/order"),
        group.order() == group.kind.order(),
        format!("enumerated {} expected {}", group.order(), group.kind.order()),
    ));
    r
}

/// Fixed points of a non-identity map.
#[derive(Clone, Debug, PartialEq)]
pub enum FixedPoints {
    /// Exact points (one entry for a parabolic map).
    Exact(Vec<Point>),
    /// The discriminant has no square root in the working field; the
    /// points are given numerically to about `10^-digits`.
    Extension { discriminant: C, approx: Vec<BigComplex>, digits: u32 },
}

/// Roots of c x² + (d − a) x − b = 0, working in Q(zeta_m) where m is the
/// lcm of `conductor` and the map's own conductor.
pub fn fixed_points_in(g: &MobiusMap, conductor: u32) -> Result<FixedPoints, MobiusError> {
    if g.is_identity() {
        return Err(MobiusError::Identity);
    }
    let [a, b, c, d] = g.entries();
    let dma = d.minus(a);
    if c.is_zero() {
        // x = ∞ plus the finite root of (d - a) x = b, if any
        let mut pts = vec![Point::Infinity];
        if !dma.is_zero() {
            pts.insert(0, Point::Finite(b.divide(&dma).expect("d != a")));
        }
        return Ok(FixedPoints::Exact(pts));
    }
    let m = num_integer::lcm(conductor, g.conductor());
    let disc = dma.times(&dma).plus(&b.times(c).times(&int(4))).lift(m);
    let two_c = c.times(&int(2));
    let amd = a.minus(d);
    if disc.is_zero() {
        return Ok(FixedPoints::Exact(vec![Point::Finite(amd.divide(&two_c).expect("c != 0"))]));
    }
    if let Some(s) = disc.sqrt() {
        let r1 = amd.plus(&s).divide(&two_c).expect("c != 0");
        let r2 = amd.minus(&s).divide(&two_c).expect("c != 0");
        return Ok(FixedPoints::Exact(vec![Point::Finite(r1), Point::Finite(r2)]));
    }
    let digits = 24;
    let bits = 120;
    let sd = cyc_embed(&disc, digits + 6).sqrt(bits);
    let e_amd = cyc_embed(&amd, digits + 6);
    let e_2c = cyc_embed(&two_c, digits + 6);
    let approx = vec![e_amd.add(&sd).div(&e_2c).expect("c != 0"), e_amd.sub(&sd).div(&e_2c).expect("c != 0")];
    Ok(FixedPoints::Extension { discriminant: disc, approx, digits })
}

pub fn fixed_points(g: &MobiusMap) -> Result<FixedPoints, MobiusError> {
    fixed_points_in(g, 1)
}

/// Orbit of a point, without repetitions.
pub fn orbit(p: &Point, group: &FiniteMobiusGroup) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for g in group.elements() {
        let q = g.apply(p);
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

/// Standard cross-ratio (u1−u3)(u2−u4) / ((u2−u3)(u1−u4)); factors containing
/// ∞ cancel in pairs. Any coincidence among the four points is rejected.
pub fn cross_ratio(u: [&Point; 4]) -> Result<C, MobiusError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if u[i] == u[j] {
                return Err(MobiusError::Degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
            }
        }
    }
    let diff = |i: usize, j: usize| -> Option<C> {
        match (u[i], u[j]) {
            (Point::Finite(x), Point::Finite(y)) => Some(x.minus(y)),
            _ => None,
        }
    };
    let mut num = C::one();
    let mut den = C::one();
    for (i, j) in [(0, 2), (1, 3)] {
        if let Some(x) = diff(i, j) {
            num = num.times(&x);
        }
    }
    for (i, j) in [(1, 2), (0, 3)] {
        if let Some(x) = diff(i, j) {
            den = den.times(&x);
        }
    }
    Ok(num.divide(&den).expect("distinct points"))
}

/// Numeric distance between an exact point and an approximation.
pub fn approx_distance(z: &C, w: &BigComplex, digits: u32) -> BigRational {
    cyc_embed(z, digits).dist_inf(w)
}

/// A rational point with trivial stabilizer, for generic-orbit checks.
pub fn generic_point(group: &FiniteMobiusGroup) -> Point {
    (2..)
        .map(|k: i64| Point::Finite(C::rational(BigRational::new(k.into(), 7.into()) + qi(k))))
        .find(|p| group.stabilizer(p).len() == 1)
        .expect("generic points exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        for (k, n) in [
            (GroupKind::Dihedral(3), 6),
            (GroupKind::Cyclic(5), 5),
            (GroupKind::Tetrahedral, 12),
            (GroupKind::Octahedral, 24),
            (GroupKind::Icosahedral, 60),
        ] {
            assert_eq!(group_catalog(k).unwrap().order(), n, "{k:?}");
        }
        assert_eq!(GroupKind::parse("dihedral", Some(1)), Err(MobiusError::BadParameter(1)));
        assert!(matches!("klein".parse::<GroupKind>(), Err(MobiusError::UnknownKind(_))));
    }

    #[test]
    fn generator_invariance() {
        for k in [GroupKind::Tetrahedral, GroupKind::Octahedral, GroupKind::Dihedral(4), GroupKind::Cyclic(3)] {
            let g = group_catalog(k).unwrap();
            assert!(verify_invariance(&g, &invariant_psi(k), false).passed(), "{k:?}");
        }
    }

    #[test]
    fn plain_reciprocal_breaks_icosahedral_invariant() {
        let inv = invariant_psi(GroupKind::Icosahedral);
        let recip = map(int(0), int(1), int(1), int(0));
        assert!(!inv.is_invariant_under(&recip));
        let g = group_catalog(GroupKind::Icosahedral).unwrap();
        assert!(inv.is_invariant_under(g.generator("eps1").unwrap()));
        assert!(inv.is_invariant_under(g.generator("eps0").unwrap()));
    }

    #[test]
    fn fixed_point_examples() {
        let recip = map(int(0), int(1), int(1), int(0));
        assert_eq!(fixed_points(&recip).unwrap(), FixedPoints::Exact(vec![Point::int(1), Point::int(-1)]));
        let rot = map(C::zeta(5), int(0), int(0), int(1));
        assert_eq!(fixed_points(&rot).unwrap(), FixedPoints::Exact(vec![Point::int(0), Point::Infinity]));
        assert_eq!(fixed_points(&MobiusMap::identity()), Err(MobiusError::Identity));
    }

    #[test]
    fn cross_ratio_examples() {
        let w = Point::int(-1);
        let v = cross_ratio([&Point::int(0), &Point::int(1), &Point::Infinity, &w]).unwrap();
        assert_eq!(v, int(2));
        let c = Point::int(3);
        assert!(cross_ratio([&Point::int(1), &Point::int(2), &c, &c]).is_err());
    }
}
