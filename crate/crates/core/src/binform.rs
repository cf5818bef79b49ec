//! Binary forms, the Cayley Ω-process and transvectants.
//!
//! A form of degree n is stored in the binomial convention
//! f = (a₀, a₁, …, a_n)(x, y)ⁿ, so the coefficient of x^(n−k)y^k is C(n,k)a_k.
//! Dehomogenization sets y = 1 and calls the remaining variable p; with the
//! binomials inside Ω^r the two transvectant formulas then agree with
//! constant 1, see [`reconciliation_constant`].

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::mpoly::MPoly;
use crate::algebra::ring::{q_to_string, qi, Field, Ring, Q};
use crate::algebra::{AlgebraError, Poly};
use crate::report::{Check, Report};

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryForm<R> {
    a: Vec<R>,
}

impl<R: Field> BinaryForm<R> {
    /// From binomial-convention coefficients a₀..a_n.
    pub fn new(a: Vec<R>) -> Self {
        assert!(!a.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { a }
    }

    /// From plain coefficients c_k of x^(n−k)y^k.
    pub fn from_plain(c: Vec<R>) -> Self {
        let n = c.len() - 1;
        let a = c
            .iter()
            .enumerate()
            .map(|(k, ck)| ck.divide(&R::from_bigint(&binom(n, k))).expect("binomial is nonzero"))
            .collect();
        BinaryForm { a }
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.a
    }

    pub fn plain(&self) -> Vec<R> {
        let n = self.degree();
        self.a.iter().enumerate().map(|(k, ak)| ak.times(&R::from_bigint(&binom(n, k)))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(R::is_zero)
    }

    /// f(p, 1) as a polynomial in p: coefficient of p^j is c_(n−j).
    pub fn dehomogenize(&self) -> Poly<R> {
        let mut c = self.plain();
        c.reverse();
        Poly::new(c)
    }

    /// Inverse of [`dehomogenize`](Self::dehomogenize) at formal degree n.
    pub fn homogenize(f: &Poly<R>, n: usize) -> Result<Self, AlgebraError> {
        if f.degree().is_some_and(|d| d > n) {
            return Err(AlgebraError::Degenerate(format!("degree {} exceeds formal degree {n}", f.deg())));
        }
        let c = (0..=n).map(|k| f.coeff(n - k)).collect();
        Ok(Self::from_plain(c))
    }

    /// f(αx + βy, γx + δy).
    pub fn linear_substitute(&self, alpha: &R, beta: &R, gamma: &R, delta: &R) -> Self {
        let n = self.degree();
        let l1 = vec![alpha.clone(), beta.clone()];
        let l2 = vec![gamma.clone(), delta.clone()];
        let mut out = vec![R::zero(); n + 1];
        for (k, ck) in self.plain().iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let mut t = vec![ck.clone()];
            for _ in 0..n - k {
                t = convolve(&t, &l1);
            }
            for _ in 0..k {
                t = convolve(&t, &l2);
            }
            for (o, v) in out.iter_mut().zip(&t) {
                *o = o.plus(v);
            }
        }
        Self::from_plain(out)
    }
}

fn convolve<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let mut out = vec![R::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].plus(&x.times(y));
        }
    }
    out
}

// Plain coefficient vectors: index k is x^(n−k) y^k.
fn d_x<R: Ring>(c: &[R]) -> Vec<R> {
    let n = c.len() - 1;
    if n == 0 {
        return vec![R::zero()];
    }
    (0..n).map(|k| c[k].scale_int((n - k) as i64)).collect()
}

fn d_y<R: Ring>(c: &[R]) -> Vec<R> {
    let n = c.len() - 1;
    if n == 0 {
        return vec![R::zero()];
    }
    (0..n).map(|k| c[k + 1].scale_int((k + 1) as i64)).collect()
}

fn d_xy<R: Ring>(c: &[R], i: usize, j: usize) -> Vec<R> {
    let mut v = c.to_vec();
    for _ in 0..i {
        v = d_x(&v);
    }
    for _ in 0..j {
        v = d_y(&v);
    }
    v
}

fn too_large(r: usize, n: usize, m: usize) -> AlgebraError {
    AlgebraError::Degenerate(format!("transvectant order {r} exceeds min degree of ({n}, {m})"))
}

/// (Q,R)^r = Ω^r{Q(x,y)R(x′,y′)} restricted to x′ = x, y′ = y, with
/// Ω = ∂²/∂x∂y′ − ∂²/∂x′∂y.
pub fn omega_transvectant<R: Field>(
    f: &BinaryForm<R>,
    g: &BinaryForm<R>,
    r: usize,
) -> Result<BinaryForm<R>, AlgebraError> {
    let (n, m) = (f.degree(), g.degree());
    if r > n.min(m) {
        return Err(too_large(r, n, m));
    }
    let (cf, cg) = (f.plain(), g.plain());
    let mut out = vec![R::zero(); n + m - 2 * r + 1];
    for i in 0..=r {
        let term = convolve(&d_xy(&cf, r - i, i), &d_xy(&cg, i, r - i));
        let w = R::from_bigint(&binom(r, i));
        for (o, t) in out.iter_mut().zip(&term) {
            let t = t.times(&w);
            *o = if i % 2 == 0 { o.plus(&t) } else { o.minus(&t) };
        }
    }
    Ok(BinaryForm::from_plain(out))
}

/// (F,G)^r = Σ (−1)^k C(r,k) (m−k)!/(m−r)! (n−r+k)!/(n−r)! F^(r−k) G^(k)
/// for F of formal degree n and G of formal degree m.
pub fn transvectant_inhom<R: Field>(
    f: &Poly<R>,
    n: usize,
    g: &Poly<R>,
    m: usize,
    r: usize,
) -> Result<Poly<R>, AlgebraError> {
    if r > n.min(m) {
        return Err(too_large(r, n, m));
    }
    let mut df = vec![f.clone()];
    let mut dg = vec![g.clone()];
    for _ in 0..r {
        df.push(df.last().unwrap().derivative());
        dg.push(dg.last().unwrap().derivative());
    }
    let mut acc = Poly::zero();
    for k in 0..=r {
        let w = binom(r, k) * falling(m - k, r - k) * falling(n - r + k, k);
        let w = if k % 2 == 1 { -w } else { w };
        acc = acc.plus(&df[r - k].times(&dg[k]).scale(&R::from_bigint(&w)));
    }
    Ok(acc)
}

/// Ratio Ω-route / inhomogeneous route on (x^r, y^r); 1 under the stored
/// conventions, which the tests assert for r ≤ 8.
pub fn reconciliation_constant<R: Field>(r: usize) -> R {
    let mut xr = vec![R::zero(); r + 1];
    xr[0] = R::one();
    let mut yr = vec![R::zero(); r + 1];
    yr[r] = R::one();
    let (f, g) = (BinaryForm::from_plain(xr), BinaryForm::from_plain(yr));
    let omega = omega_transvectant(&f, &g, r).expect("r ≤ r").coeffs()[0].clone();
    let inhom = transvectant_inhom(&f.dehomogenize(), r, &g.dehomogenize(), r, r).expect("r ≤ r").coeff(0);
    omega.divide(&inhom).expect("(x^r, y^r)^r is nonzero")
}

/// H = ½(F,F)² = n(n−1)(F F″ − ((n−1)/n) F′²).
pub fn hessian<R: Field>(f: &Poly<R>, n: usize) -> Result<Poly<R>, AlgebraError> {
    let t = transvectant_inhom(f, n, f, n, 2)?;
    Ok(t.scale(&R::from_int(2).inv().unwrap()))
}

/// m(m−1)F⁗F − 4(m−3)(m−1)F‴F′ + 3(m−3)(m−2)F″², which is
/// (F,F)⁴ / (2(m−3)(m−2)) for m > 3. Only ring operations are needed, so
/// it also runs on u-polynomials with differential coefficients.
pub fn fourth_transvectant<R: Ring>(f: &Poly<R>, m: usize) -> Result<Poly<R>, AlgebraError> {
    if m < 4 || f.degree().is_some_and(|d| d > m) {
        return Err(AlgebraError::Degenerate(format!("fourth transvectant needs formal degree ≥ 4, got {m}")));
    }
    let m = m as i64;
    let d1 = f.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let d4 = d3.derivative();
    Ok(d4
        .times(f)
        .scale(&R::from_int(m * (m - 1)))
        .minus(&d3.times(&d1).scale(&R::from_int(4 * (m - 3) * (m - 1))))
        .plus(&d2.times(&d2).scale(&R::from_int(3 * (m - 3) * (m - 2)))))
}

/// Coefficients α₀..α_m (m = 2(n−4)) of ½(f,f)⁴ normalized by (n!/(n−4)!)²,
/// from C(m,r)α_r = ½ Σ_{s=0}^{r} C(n−4,s)C(n−4,r−s) P_{r,s}.
pub fn fourth_transvectant_coeffs<R: Field>(f: &BinaryForm<R>) -> Result<BinaryForm<R>, AlgebraError> {
    let n = f.degree();
    if n < 4 {
        return Err(AlgebraError::Degenerate(format!("degree {n} < 4")));
    }
    let a = f.coeffs();
    let m = 2 * (n - 4);
    let big_p = |r: usize, s: usize| -> R {
        const W: [i64; 5] = [1, -4, 6, -4, 1];
        (0..5).fold(R::zero(), |acc, i| acc.plus(&a[s + i].times(&a[r - s + 4 - i]).scale_int(W[i])))
    };
    let half = R::from_int(2).inv().unwrap();
    let alpha = (0..=m)
        .map(|r| {
            let lo = r.saturating_sub(n - 4);
            let hi = r.min(n - 4);
            let sum = (lo..=hi).fold(R::zero(), |acc, s| {
                acc.plus(&big_p(r, s).times(&R::from_bigint(&(binom(n - 4, s) * binom(n - 4, r - s)))))
            });
            sum.times(&half).divide(&R::from_bigint(&binom(m, r))).unwrap()
        })
        .collect();
    Ok(BinaryForm::new(alpha))
}

/// Ground forms with vanishing fourth transvectant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KleinKind {
    /// x₁^k
    Degenerate1(usize),
    /// x₁^(k−1) x₂
    Degenerate2(usize),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl std::str::FromStr for KleinKind {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, k) = match s.split_once(':') {
            Some((h, k)) => {
                let k = k.parse().map_err(|_| AlgebraError::Parse(format!("bad degree in {s:?}")))?;
                (h, Some(k))
            }
            None => (s, None),
        };
        let k = k.unwrap_or(6);
        match head {
            "deg1" | "degenerate1" => Ok(KleinKind::Degenerate1(k)),
            "deg2" | "degenerate2" => Ok(KleinKind::Degenerate2(k)),
            "tet" | "tetra" | "tetrahedral" => Ok(KleinKind::Tetrahedral),
            "oct" | "octa" | "octahedral" => Ok(KleinKind::Octahedral),
            "ico" | "icosa" | "icosahedral" => Ok(KleinKind::Icosahedral),
            _ => Err(AlgebraError::Parse(format!("unknown form kind {s:?}"))),
        }
    }
}

impl KleinKind {
    pub fn all() -> [KleinKind; 5] {
        [
            KleinKind::Degenerate1(6),
            KleinKind::Degenerate2(6),
            KleinKind::Tetrahedral,
            KleinKind::Octahedral,
            KleinKind::Icosahedral,
        ]
    }

    pub fn name(&self) -> String {
        match self {
            KleinKind::Degenerate1(k) => format!("degenerate1_{k}"),
            KleinKind::Degenerate2(k) => format!("degenerate2_{k}"),
            KleinKind::Tetrahedral => "tetrahedral".into(),
            KleinKind::Octahedral => "octahedral".into(),
            KleinKind::Icosahedral => "icosahedral".into(),
        }
    }
}

/// The form in x₁ = x, x₂ = y.
pub fn klein_form(kind: KleinKind) -> Result<BinaryForm<Q>, AlgebraError> {
    // (degree, [(k, c)]) with c the plain coefficient of x^(n−k) y^k
    let (n, terms): (usize, Vec<(usize, i64)>) = match kind {
        KleinKind::Degenerate1(k) | KleinKind::Degenerate2(k) if k < 1 => {
            return Err(AlgebraError::Degenerate("degenerate forms need k ≥ 1".into()))
        }
        KleinKind::Degenerate1(k) => (k, vec![(0, 1)]),
        KleinKind::Degenerate2(k) => (k, vec![(1, 1)]),
        KleinKind::Tetrahedral => (4, vec![(1, 1), (4, 1)]),
        KleinKind::Octahedral => (6, vec![(1, 1), (5, 1)]),
        KleinKind::Icosahedral => (12, vec![(1, 1), (6, -11), (11, -1)]),
    };
    let mut c = vec![qi(0); n + 1];
    for (k, v) in terms {
        c[k] = qi(v);
    }
    Ok(BinaryForm::from_plain(c))
}

/// Result of substituting F′ = −nRF into the vanishing fourth transvectant.
#[derive(Clone, Debug)]
pub struct ChazyReduction {
    pub n: usize,
    /// The reduced expression divided by F², in jets R⁽⁰⁾..R⁽⁴⁾.
    pub expression: MPoly,
    /// R‴ − 12RR″ + 18R′² − (6n²/(n−1))(R′ − R²)².
    pub target: MPoly,
    /// λ with expression = λ·target, when proportional.
    pub scalar: Option<Q>,
}

/// F^(k) = P_k F with P₀ = 1 and P_(k+1) = P_k′ − nRP_k.
pub fn substitution_table(n: usize, upto: usize) -> Vec<MPoly> {
    let nr = MPoly::var(0).scale_q(&qi(n as i64));
    let mut p = vec![MPoly::one()];
    for _ in 0..upto {
        let last = p.last().unwrap();
        p.push(last.jet_derivative().minus(&nr.times(last)));
    }
    p
}

pub fn generalized_chazy_residue(n: usize) -> Result<ChazyReduction, AlgebraError> {
    if n < 4 {
        return Err(AlgebraError::Degenerate(format!("generalized Chazy needs n ≥ 4, got {n}")));
    }
    let p = substitution_table(n, 4);
    let ni = n as i64;
    let expression = p[4]
        .scale_q(&qi(ni * (ni - 1)))
        .minus(&p[3].times(&p[1]).scale_q(&qi(4 * (ni - 3) * (ni - 1))))
        .plus(&p[2].times(&p[2]).scale_q(&qi(3 * (ni - 3) * (ni - 2))));
    let r = |k| MPoly::var(k);
    let w = r(1).minus(&r(0).times(&r(0)));
    let target = r(3)
        .minus(&r(0).times(&r(2)).scale_q(&qi(12)))
        .plus(&r(1).times(&r(1)).scale_q(&qi(18)))
        .minus(&w.times(&w).scale_q(&BigRational::new((6 * ni * ni).into(), (ni - 1).into())));
    let lead = crate::algebra::mpoly::coefficient_in(&expression, 3, 1).as_constant();
    let scalar = lead.filter(|l| expression == target.scale_q(l));
    Ok(ChazyReduction { n, expression, target, scalar })
}

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> BinaryForm<Q> {
    let a =
        (0..=n).map(|_| BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())).collect();
    BinaryForm::new(a)
}

/// Ω-route vs inhomogeneous route on `cases` random pairs (degrees ≤ 8, r ≤ 4).
pub fn omega_vs_inhom_check(seed: u64, cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(1..=8);
        let r = rng.gen_range(0..=n.min(m).min(4));
        let (f, g) = (random_form(&mut rng, n), random_form(&mut rng, m));
        let lhs = omega_transvectant(&f, &g, r).unwrap().dehomogenize();
        let rhs = transvectant_inhom(&f.dehomogenize(), n, &g.dehomogenize(), m, r).unwrap();
        if lhs != rhs {
            return Check::exact("omega_vs_inhom", Some((format!("case {case}: degrees ({n},{m}), r={r}"), None)));
        }
    }
    Check::exact("omega_vs_inhom", None).with_detail(format!("{cases} random pairs, seed {seed}"))
}

/// α-recursion against ½(f,f)⁴ / (n!/(n−4)!)² on random degree-8 forms.
pub fn alpha_recursion_check(seed: u64, cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa1fa);
    let n = 8;
    let norm = BigRational::from_integer(falling(n, 4) * falling(n, 4) * BigInt::from(2)).recip();
    for case in 0..cases {
        let f = random_form(&mut rng, n);
        let alpha = fourth_transvectant_coeffs(&f).unwrap();
        let omega = omega_transvectant(&f, &f, 4).unwrap();
        let scaled: Vec<Q> = omega.coeffs().iter().map(|c| c * &norm).collect();
        if alpha.coeffs() != scaled.as_slice() {
            return Check::exact("alpha_recursion", Some((format!("case {case}"), None)));
        }
    }
    Check::exact("alpha_recursion", None).with_detail(format!("{cases} random degree-8 forms"))
}

/// Every check the transvect suite runs.
pub fn run_all(seed: u64, cases: usize) -> Report {
    let mut rep = Report::new("transvect");
    let recon: Vec<Q> = (0..=8).map(reconciliation_constant::<Q>).collect();
    let bad = recon.iter().position(|c| *c != qi(1));
    rep.push(match bad {
        None => Check::exact("reconciliation_constant", None),
        Some(r) => Check::exact("reconciliation_constant", Some((format!("r={r}: {}", q_to_string(&recon[r])), None))),
    });
    rep.push(omega_vs_inhom_check(seed, cases));
    rep.push(alpha_recursion_check(seed, cases.min(20)));
    for kind in KleinKind::all() {
        let f = klein_form(kind).expect("built-in kinds");
        let v = fourth_transvectant(&f.dehomogenize(), f.degree()).expect("degree ≥ 4");
        let residual = (!v.is_zero()).then(|| (format!("{} nonzero coefficients", v.coeffs().len()), None));
        rep.push(Check::exact(format!("wedekind/{}", kind.name()), residual));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let generic = (0..10).all(|_| {
        let f = random_form(&mut rng, 5);
        !fourth_transvectant(&f.dehomogenize(), 5).unwrap().is_zero()
    });
    rep.push(Check::flag("wedekind/random_nonzero", generic, "ten random quintics"));
    for n in [5, 6] {
        let red = generalized_chazy_residue(n).expect("n ≥ 4");
        rep.push(match &red.scalar {
            Some(l) => Check::exact(format!("gen_chazy/n{n}"), None).with_detail(format!("scalar {}", q_to_string(l))),
            None => Check::exact(format!("gen_chazy/n{n}"), Some(("not proportional".into(), None))),
        });
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ring::q;
    use crate::algebra::Cyclotomic;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| qi(x)).collect()
    }

    fn poly(v: &[i64]) -> Poly<Q> {
        Poly::new(qs(v))
    }

    #[test]
    fn storage_convention() {
        let f = BinaryForm::new(vec![qi(1), q(1, 4), qi(0), qi(0), qi(1)]);
        assert_eq!(f.plain(), qs(&[1, 1, 0, 0, 1]));
        assert_eq!(BinaryForm::from_plain(f.plain()), f);
        assert_eq!(f.dehomogenize(), poly(&[1, 0, 0, 1, 1]));
        assert_eq!(BinaryForm::homogenize(&f.dehomogenize(), 4).unwrap(), f);
    }

    #[test]
    fn low_order_transvectants() {
        let f = BinaryForm::from_plain(qs(&[1, -2, 3]));
        let g = BinaryForm::from_plain(qs(&[0, 5, 0, 1]));
        // (Q,R)⁰ = QR
        let t0 = omega_transvectant(&f, &g, 0).unwrap();
        assert_eq!(t0.plain(), convolve(&f.plain(), &g.plain()));
        // (Q,R)¹ = Q_x R_y − Q_y R_x
        let t1 = omega_transvectant(&f, &g, 1).unwrap();
        let (cf, cg) = (f.plain(), g.plain());
        let want: Vec<Q> =
            convolve(&d_x(&cf), &d_y(&cg)).iter().zip(convolve(&d_y(&cf), &d_x(&cg))).map(|(a, b)| a - b).collect();
        assert_eq!(t1.plain(), want);
        assert!(omega_transvectant(&f, &g, 3).is_err());
        assert!(transvectant_inhom(&f.dehomogenize(), 2, &g.dehomogenize(), 3, 3).is_err());
    }

    #[test]
    fn inhomogeneous_first_and_second() {
        let f = poly(&[2, -1, 0, 3]);
        let g = poly(&[1, 4, 1]);
        let (n, m) = (3, 2);
        let t1 = transvectant_inhom(&f, n, &g, m, 1).unwrap();
        let want = f.derivative().times(&g).scale(&qi(m as i64)).minus(&f.times(&g.derivative()).scale(&qi(n as i64)));
        assert_eq!(t1, want);
        let h = hessian(&f, n).unwrap();
        let direct = f
            .times(&f.derivative().derivative())
            .minus(&f.derivative().times(&f.derivative()).scale(&q(2, 3)))
            .scale(&qi(6));
        assert_eq!(h, direct);
        assert!(h.deg() <= 2 * n - 4);
    }

    #[test]
    fn reconciliation_is_one() {
        for r in 0..=8 {
            assert_eq!(reconciliation_constant::<Q>(r), qi(1), "r = {r}");
        }
        // (x⁴, y⁴)⁴ is a nonzero constant
        let x4 = BinaryForm::from_plain(qs(&[1, 0, 0, 0, 0]));
        let y4 = BinaryForm::from_plain(qs(&[0, 0, 0, 0, 1]));
        assert_eq!(omega_transvectant(&x4, &y4, 4).unwrap().coeffs(), &[qi(576)]);
    }

    #[test]
    fn omega_matches_inhom_on_random_pairs() {
        assert!(omega_vs_inhom_check(0, 100).passed());
    }

    #[test]
    fn odd_self_transvectants_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = rng.gen_range(1..=8);
            let f = random_form(&mut rng, n);
            for r in (1..=n).step_by(2) {
                assert!(omega_transvectant(&f, &f, r).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn fourth_transvectant_is_the_scaled_self_transvectant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 4..=8 {
            let f = random_form(&mut rng, m).dehomogenize();
            let v = fourth_transvectant(&f, m).unwrap();
            let t = transvectant_inhom(&f, m, &f, m, 4).unwrap();
            let k = 2 * (m as i64 - 3) * (m as i64 - 2);
            assert_eq!(t, v.scale(&qi(k)));
        }
        assert!(fourth_transvectant(&poly(&[1, 1, 1]), 3).is_err());
    }

    #[test]
    fn alpha_endpoints_and_recursion() {
        let a = qs(&[3, -1, 2, 5, -4]);
        let f = BinaryForm::new(a.clone());
        let alpha = fourth_transvectant_coeffs(&f).unwrap();
        assert_eq!(alpha.coeffs(), &[&a[0] * &a[4] - qi(4) * &a[1] * &a[3] + qi(3) * &a[2] * &a[2]]);
        let g = BinaryForm::new(qs(&[1, 2, -3, 0, 4, -1, 2, 1]));
        let alpha = fourth_transvectant_coeffs(&g).unwrap();
        let b = g.coeffs();
        let last = &b[7] * &b[3] - qi(4) * &b[6] * &b[4] + qi(3) * &b[5] * &b[5];
        assert_eq!(alpha.degree(), 6);
        assert_eq!(alpha.coeffs()[6], last);
        assert!(alpha_recursion_check(1, 10).passed());
    }

    #[test]
    fn wedekind_forms() {
        assert_eq!(klein_form(KleinKind::Octahedral).unwrap().plain(), qs(&[0, 1, 0, 0, 0, 1, 0]));
        assert_eq!(klein_form(KleinKind::Tetrahedral).unwrap().plain(), qs(&[0, 1, 0, 0, 1]));
        assert_eq!(klein_form(KleinKind::Degenerate2(5)).unwrap().plain(), qs(&[0, 1, 0, 0, 0, 0]));
        for kind in KleinKind::all() {
            let f = klein_form(kind).unwrap();
            assert!(fourth_transvectant(&f.dehomogenize(), f.degree()).unwrap().is_zero(), "{kind:?}");
            assert!(omega_transvectant(&f, &f, 4).unwrap().is_zero(), "{kind:?}");
        }
        assert!("ico".parse::<KleinKind>().is_ok());
        assert_eq!("deg1:9".parse::<KleinKind>().unwrap(), KleinKind::Degenerate1(9));
        assert!("cube".parse::<KleinKind>().is_err());
    }

    #[test]
    fn equivariance_under_gl2() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(4..=5);
            let f = random_form(&mut rng, n);
            let g: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-3..=3));
            let det = g[0] * g[3] - g[1] * g[2];
            if det == 0 {
                continue;
            }
            let [a, b, c, d] = g.map(qi);
            let lhs = omega_transvectant(&f.linear_substitute(&a, &b, &c, &d), &f.linear_substitute(&a, &b, &c, &d), 4)
                .unwrap();
            let rhs = omega_transvectant(&f, &f, 4).unwrap().linear_substitute(&a, &b, &c, &d);
            let k = qi(det).power(4);
            let rhs: Vec<Q> = rhs.coeffs().iter().map(|x| x * &k).collect();
            assert_eq!(lhs.coeffs(), rhs.as_slice());
        }
    }

    #[test]
    fn generic_over_cyclotomic() {
        let w = Cyclotomic::zeta(3);
        let f = BinaryForm::new(vec![
            Cyclotomic::one(),
            w.clone(),
            Cyclotomic::zero(),
            w.negate(),
            Cyclotomic::from_int(2),
        ]);
        let lhs = omega_transvectant(&f, &f, 2).unwrap().dehomogenize();
        let rhs = transvectant_inhom(&f.dehomogenize(), 4, &f.dehomogenize(), 4, 2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_table_entries() {
        let n = 5;
        let p = substitution_table(n, 3);
        let r = MPoly::var;
        // F″ = (−nR′ + n²R²)F
        assert_eq!(p[2], r(1).scale_q(&qi(-5)).plus(&r(0).times(&r(0)).scale_q(&qi(25))));
        // F‴ = (−nR″ + 3n²RR′ − n³R³)F
        let want = r(2)
            .scale_q(&qi(-5))
            .plus(&r(0).times(&r(1)).scale_q(&qi(75)))
            .minus(&r(0).times(&r(0)).times(&r(0)).scale_q(&qi(125)));
        assert_eq!(p[3], want);
    }

    #[test]
    fn generalized_chazy_proportional() {
        for n in [4usize, 5, 6, 12] {
            let red = generalized_chazy_residue(n).unwrap();
            let ni = n as i64;
            assert_eq!(red.scalar, Some(qi(-ni * ni * (ni - 1))), "n = {n}");
        }
        assert!(generalized_chazy_residue(3).is_err());
    }

    #[test]
    fn suite_passes() {
        let rep = run_all(0, 100);
        assert!(rep.passed(), "{}", rep.to_text());
    }
}
