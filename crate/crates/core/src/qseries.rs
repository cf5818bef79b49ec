//! Truncated q-expansions with exact rational coefficients.
//!
//! Series are stored in `s = q^(1/r)` with `r` equal to 1 or 2. Modular
//! quantities of weight `w` are divided by `pi^w` so everything stays in Q:
//! `ê_i = e_i / pi^2` for the lattice spanned by 1 and tau.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::ring::{parse_q, q_to_string, Q};
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("unsupported Eisenstein weight {0} (expected 2, 4 or 6)")]
    UnsupportedWeight(u32),
    #[error("order must be at least {0}")]
    OrderTooSmall(u32),
    #[error("series is zero to its truncation order and has no inverse")]
    NotInvertible,
    #[error("unknown series {0}")]
    UnknownSeries(String),
    #[error("malformed series JSON: {0}")]
    Parse(String),
}

/// Laurent series in `s = q^(1/r)`, known exactly for exponents below `order`.
///
/// `coeffs[i]` is the coefficient of `s^(val + i)`. The first stored
/// coefficient is nonzero; the zero series has no coefficients and
/// `val == order`.
#[derive(Clone, Debug, PartialEq)]
pub struct FracSeries {
    r: u32,
    val: i64,
    coeffs: Vec<Q>,
    order: i64,
}

impl FracSeries {
    /// Build from the coefficients of `s^start, s^(start+1), ...`, dropping
    /// anything at or beyond `order`.
    pub fn from_coeffs(r: u32, start: i64, coeffs: Vec<Q>, order: i64) -> Self {
        assert!(r == 1 || r == 2, "ramification must be 1 or 2");
        let keep = (order - start).max(0) as usize;
        let mut coeffs: Vec<Q> = coeffs.into_iter().take(keep).collect();
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => FracSeries { r, val: order, coeffs: Vec::new(), order },
            Some(k) => {
                coeffs.drain(..k);
                while coeffs.last().is_some_and(Zero::is_zero) {
                    coeffs.pop();
                }
                FracSeries { r, val: start + k as i64, coeffs, order }
            }
        }
    }

    pub fn from_ints(r: u32, start: i64, coeffs: &[i64], order: i64) -> Self {
        Self::from_coeffs(r, start, coeffs.iter().map(|&c| Q::from_integer(c.into())).collect(), order)
    }

    pub fn constant(r: u32, c: Q, order: i64) -> Self {
        Self::from_coeffs(r, 0, vec![c], order)
    }

    pub fn one(r: u32, order: i64) -> Self {
        Self::constant(r, Q::one(), order)
    }

    pub fn ramification(&self) -> u32 {
        self.r
    }

    /// Valuation in s; equals the order for the zero series.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `s^k` (zero below the valuation). Panics at or beyond
    /// the truncation order, where the coefficient is unknown.
    pub fn coeff(&self, k: i64) -> Q {
        assert!(k < self.order, "coefficient s^{k} is beyond truncation order {}", self.order);
        if k < self.val {
            return Q::zero();
        }
        self.coeffs.get((k - self.val) as usize).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of `q^(num/den)`, zero when that power does not occur.
    pub fn coeff_q(&self, num: i64, den: u32) -> Q {
        let r = self.r as i64;
        let den = den as i64;
        if (num * r) % den != 0 {
            return Q::zero();
        }
        self.coeff(num * r / den)
    }

    /// Dense coefficients of `s^from .. s^(order-1)`.
    pub fn dense_from(&self, from: i64) -> Vec<Q> {
        (from..self.order).map(|k| self.coeff(k)).collect()
    }

    pub fn leading(&self) -> Option<&Q> {
        self.coeffs.first()
    }

    /// Reinterpret a series in q as a series in s = q^(1/2).
    pub fn to_r2(&self) -> Self {
        if self.r == 2 {
            return self.clone();
        }
        let mut out = vec![Q::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        Self::from_coeffs(2, 2 * self.val, out, 2 * self.order)
    }

    /// Back to integer powers; `None` if a half-integer power is present.
    pub fn to_r1(&self) -> Option<Self> {
        if self.r == 1 {
            return Some(self.clone());
        }
        if self.val.rem_euclid(2) == 1 && !self.is_zero() {
            return None;
        }
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if (self.val + i as i64) % 2 == 0 {
                out.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        // exponent s^(2k) -> q^k; an odd order loses nothing since s^(order-1)
        // was the last known exponent
        Some(Self::from_coeffs(1, self.val.div_euclid(2), out, (self.order + 1).div_euclid(2)))
    }

    fn lift_pair(a: &Self, b: &Self) -> (Self, Self) {
        if a.r == b.r {
            (a.clone(), b.clone())
        } else {
            (a.to_r2(), b.to_r2())
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::lift_pair(self, other);
        let order = a.order.min(b.order);
        let start = a.val.min(b.val).min(order);
        let coeffs = (start..order).map(|k| a.coeff(k) + b.coeff(k)).collect();
        Self::from_coeffs(a.r, start, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(self.r, self.val, self.coeffs.iter().map(|x| x * c).collect(), self.order)
    }

    /// Product. The result is exact below `min(o1 + v2, o2 + v1)`, which is the
    /// minimum of the operand orders when both valuations are zero.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::lift_pair(self, other);
        let order = (a.order + b.val).min(b.order + a.val);
        let start = a.val + b.val;
        let n = (order - start).max(0) as usize;
        let mut out = vec![Q::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += x * y;
            }
        }
        Self::from_coeffs(a.r, start, out, order)
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.r, self.order);
        }
        // the identity has unbounded order so it never limits the product
        let mut acc = Self::one(self.r, i64::MAX / 4);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero known leading coefficient.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = self.coeffs.first().ok_or(SeriesError::NotInvertible)?;
        let n = (self.order - self.val).max(0) as usize;
        let inv0 = a0.recip();
        let mut b: Vec<Q> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                b.push(inv0.clone());
                continue;
            }
            let mut acc = Q::zero();
            for k in 1..=m.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[k] * &b[m - k];
            }
            b.push(-acc * &inv0);
        }
        Ok(Self::from_coeffs(self.r, -self.val, b, self.order - 2 * self.val))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inv()?))
    }

    /// The operator D = q d/dq, acting on `s^k` as `k/r`.
    pub fn d(&self) -> Self {
        let r = BigInt::from(self.r);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::new(BigInt::from(self.val + i as i64), r.clone()))
            .collect();
        Self::from_coeffs(self.r, self.val, coeffs, self.order)
    }

    /// D(f)/f.
    pub fn log_derivative(&self) -> Result<Self, SeriesError> {
        self.d().div(self)
    }

    /// The substitution s -> -s.
    pub fn mirror(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.val + i as i64) % 2 == 0 { c.clone() } else { -c })
            .collect();
        Self::from_coeffs(self.r, self.val, coeffs, self.order)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self::from_coeffs(self.r, self.val, self.coeffs.clone(), order)
    }

    /// First exponent below the common order where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let d = self.sub(other);
        if d.is_zero() {
            None
        } else {
            Some(d.val)
        }
    }

    /// Largest absolute coefficient, as an exact rational.
    pub fn max_abs_coeff(&self) -> Q {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "val": self.val,
            "order": self.order,
            "coeffs": self.coeffs.iter().map(q_to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesError> {
        let bad = |m: &str| SeriesError::Parse(m.to_string());
        let r = v["r"].as_u64().ok_or_else(|| bad("r"))? as u32;
        if r != 1 && r != 2 {
            return Err(bad("r must be 1 or 2"));
        }
        let val = v["val"].as_i64().ok_or_else(|| bad("val"))?;
        let order = v["order"].as_i64().ok_or_else(|| bad("order"))?;
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("coeffs"))?
            .iter()
            .map(|c| c.as_str().and_then(parse_q).ok_or_else(|| bad("coefficient")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(r, val, coeffs, order))
    }
}

impl fmt::Display for FracSeries {
    /// `c0 + c1 q^(1/2) + ... + O(q^(n/2))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let power = |k: i64| -> String {
            let (num, den) = if self.r == 2 && k % 2 == 0 { (k / 2, 1) } else { (k, self.r as i64) };
            match (num, den) {
                (0, _) => String::new(),
                (1, 1) => "q".into(),
                (n, 1) => format!("q^{n}"),
                (n, d) => format!("q^({n}/{d})"),
            }
        };
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.val + i as i64;
            let p = power(k);
            let cs = q_to_string(&c.abs());
            let body = match (p.is_empty(), c.abs().is_one()) {
                (true, _) => cs,
                (false, true) => p,
                (false, false) => format!("{cs} {p}"),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{sign} {body}"));
            }
        }
        let tail = format!("O({})", {
            let p = power(self.order);
            if p.is_empty() {
                "1".to_string()
            } else {
                p
            }
        });
        if parts.is_empty() {
            write!(f, "{tail}")
        } else {
            write!(f, "{} + {tail}", parts.join(" "))
        }
    }
}

fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn sigma(n: u64, k: u32) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// E_2, E_4 or E_6 with coefficients of q^0 .. q^(order-1).
pub fn eisenstein(k: u32, order: u32) -> Result<FracSeries, SeriesError> {
    if order < 1 {
        return Err(SeriesError::OrderTooSmall(1));
    }
    let c: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(SeriesError::UnsupportedWeight(k)),
    };
    let mut coeffs = vec![qi(1)];
    for n in 1..order as u64 {
        coeffs.push(Q::from_integer(sigma(n, k - 1) * c));
    }
    Ok(FracSeries::from_coeffs(1, 0, coeffs, order as i64))
}

/// E_k rebuilt as 1 + c·Σ n^(k−1) qⁿ/(1 − qⁿ), one series inversion per n.
/// Shares nothing with [`eisenstein`] beyond the normalizing constant.
pub fn eisenstein_lambert(k: u32, order: u32) -> Result<FracSeries, SeriesError> {
    let c: i64 = match k {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(SeriesError::UnsupportedWeight(k)),
    };
    let o = order as i64;
    let mut acc = FracSeries::one(1, o);
    for n in 1..o {
        let mut head = vec![qi(0); n as usize + 1];
        head[0] = qi(1);
        head[n as usize] = qi(-1);
        let geo = FracSeries::from_coeffs(1, 0, head, o).inv()?;
        let mut mono = vec![qi(0); n as usize + 1];
        mono[n as usize] = Q::from_integer(BigInt::from(n).pow(k - 1) * c);
        acc = acc.add(&FracSeries::from_coeffs(1, 0, mono, o).mul(&geo));
    }
    Ok(acc.truncate(o))
}

/// The Eisenstein checks: the head of E₂, all three series against their
/// Lambert expansions, and E₄ = ½(θ₂⁸ + θ₃⁸ + θ₄⁸).
pub fn eisenstein_checks(order: u32) -> Result<Report, SeriesError> {
    let mut r = Report::new("qseries");
    let e2 = eisenstein(2, order)?;
    let head = FracSeries::from_ints(1, 0, &[1, -24, -72, -96, -168], 5);
    r.push(series_identity("eisenstein/E2_head", &e2.truncate(5), &head, 5.min(order)));
    for k in [2, 4, 6] {
        let lhs = eisenstein(k, order)?;
        let rhs = eisenstein_lambert(k, order)?;
        r.push(series_identity(format!("eisenstein/E{k}_lambert"), &lhs, &rhs, order));
    }
    let [t2, t3, t4] = theta_fourths(order)?;
    let theta = t2.mul(&t2).add(&t3.mul(&t3)).add(&t4.mul(&t4)).scale(&BigRational::new(1.into(), 2.into()));
    r.push(series_identity("eisenstein/E4_theta", &eisenstein(4, order)?, &theta, order));
    Ok(r)
}

/// Delta = q prod (1 - q^n)^24, coefficients of q^1 .. q^(order-1).
pub fn delta(order: u32) -> FracSeries {
    let o = order as i64;
    // prod (1 - q^n) to order o - 1
    let mut eta = vec![qi(0); (o - 1).max(1) as usize];
    eta[0] = qi(1);
    for n in 1..eta.len() {
        for k in (n..eta.len()).rev() {
            let t = eta[k - n].clone();
            eta[k] -= t;
        }
    }
    let e = FracSeries::from_coeffs(1, 0, eta, (o - 1).max(1));
    let p = e.pow(24);
    let mut shifted = p.dense_from(0);
    shifted.insert(0, qi(0));
    FracSeries::from_coeffs(1, 0, shifted, o)
}

/// (θ₂⁴, θ₃⁴, θ₄⁴) in s = q^(1/2), exact for s-exponents below `2 * order`.
pub fn theta_fourths(order: u32) -> Result<[FracSeries; 3], SeriesError> {
    if order < 1 {
        return Err(SeriesError::OrderTooSmall(1));
    }
    let so = 2 * order as i64;
    let mut t3 = vec![qi(0); so as usize];
    let mut t4 = vec![qi(0); so as usize];
    let mut n: i64 = 0;
    while n * n < so {
        let w = if n == 0 { 1 } else { 2 };
        t3[(n * n) as usize] += qi(w);
        t4[(n * n) as usize] += qi(if n % 2 == 0 { w } else { -w });
        n += 1;
    }
    // θ₂ = 2 s^(1/4) sum_{n>=0} s^(n(n+1)), so θ₂⁴ = 16 s (sum)^4
    let mut t2 = vec![qi(0); so as usize];
    let mut n: i64 = 0;
    while n * (n + 1) < so {
        t2[(n * (n + 1)) as usize] += qi(1);
        n += 1;
    }
    let t3 = FracSeries::from_coeffs(2, 0, t3, so).pow(4);
    let t4 = FracSeries::from_coeffs(2, 0, t4, so).pow(4);
    let inner = FracSeries::from_coeffs(2, 0, t2, so - 1).pow(4);
    let mut c = vec![qi(0)];
    c.extend(inner.dense_from(0).into_iter().map(|x| x * qi(16)));
    let t2 = FracSeries::from_coeffs(2, 0, c, so);
    Ok([t2, t3, t4])
}

/// ê_i = e_i / pi^2 with ê₁ = 2/3 + 16 q + ..., ê₂ = -1/3 - 8 q^(1/2) + ...,
/// ê₃ = ê₂(-s).
pub fn e_hat(i: u32, order: u32) -> Result<FracSeries, SeriesError> {
    let [t2, t3, t4] = theta_fourths(order)?;
    let third = BigRational::new(1.into(), 3.into());
    let s = match i {
        1 => t3.add(&t4),
        2 => t2.add(&t3).neg(),
        3 => t2.sub(&t4),
        _ => return Err(SeriesError::UnknownSeries(format!("e_hat{i}"))),
    };
    Ok(s.scale(&third))
}

/// The modular lambda function θ₂⁴/θ₃⁴ in s = q^(1/2).
pub fn lambda_series(order: u32) -> Result<FracSeries, SeriesError> {
    let [t2, t3, _] = theta_fourths(order)?;
    t2.div(&t3)
}

/// Every named series at one order.
#[derive(Clone, Debug)]
pub struct ModularRegistry {
    pub order: u32,
    pub e2: FracSeries,
    pub e4: FracSeries,
    pub e6: FracSeries,
    pub delta: FracSeries,
    pub theta2_4: FracSeries,
    pub theta3_4: FracSeries,
    pub theta4_4: FracSeries,
    pub lambda: FracSeries,
    pub e_hat: [FracSeries; 3],
}

impl ModularRegistry {
    pub fn new(order: u32) -> Result<Self, SeriesError> {
        let [t2, t3, t4] = theta_fourths(order)?;
        Ok(ModularRegistry {
            order,
            e2: eisenstein(2, order)?,
            e4: eisenstein(4, order)?,
            e6: eisenstein(6, order)?,
            delta: delta(order),
            lambda: t2.div(&t3)?,
            e_hat: [e_hat(1, order)?, e_hat(2, order)?, e_hat(3, order)?],
            theta2_4: t2,
            theta3_4: t3,
            theta4_4: t4,
        })
    }

    pub const NAMES: [&'static str; 11] =
        ["E2", "E4", "E6", "Delta", "theta2_4", "theta3_4", "theta4_4", "lambda", "e1", "e2", "e3"];

    pub fn get(&self, name: &str) -> Result<&FracSeries, SeriesError> {
        Ok(match name {
            "E2" => &self.e2,
            "E4" => &self.e4,
            "E6" => &self.e6,
            "Delta" => &self.delta,
            "theta2_4" => &self.theta2_4,
            "theta3_4" => &self.theta3_4,
            "theta4_4" => &self.theta4_4,
            "lambda" => &self.lambda,
            "e1" => &self.e_hat[0],
            "e2" => &self.e_hat[1],
            "e3" => &self.e_hat[2],
            _ => return Err(SeriesError::UnknownSeries(name.to_string())),
        })
    }
}

/// Exact comparison of two series below q^order. Fails (rather than passing
/// vacuously) when either side is not known that far.
pub fn series_identity(name: impl Into<String>, lhs: &FracSeries, rhs: &FracSeries, order: u32) -> Check {
    let name = name.into();
    let d = lhs.sub(rhs);
    let r = d.r as i64;
    let need = order as i64 * r;
    if d.order < need {
        let msg = format!("difference known below s^{} only, need s^{need} (s = q^(1/{r}))", d.order);
        return Check::flag(name, false, msg).with_order(order);
    }
    let d = d.truncate(need);
    let residual = (!d.is_zero()).then(|| {
        let k = d.val;
        let at = if k % r == 0 { format!("q^{}", k / r) } else { format!("q^({k}/{r})") };
        (format!("{} at {at}", q_to_string(&d.coeff(k))), Some(k))
    });
    Check::exact(name, residual).with_order(order)
}

/// Vieta for the hatted half-period values: ∑ê = 0, ∑ê_iê_j = −E₄/3 and
/// ê₁ê₂ê₃ = (2/27)E₆, the q-expansion of 4X³ − g₂X − g₃ = 4∏(X − e_i).
pub fn verify_vieta(order: u32) -> Result<Report, SeriesError> {
    let reg = ModularRegistry::new(order)?;
    Ok(vieta_report(&reg.e_hat, &reg.e4, &reg.e6, order))
}

pub fn vieta_report(e: &[FracSeries; 3], e4: &FracSeries, e6: &FracSeries, order: u32) -> Report {
    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let zero = FracSeries::constant(2, Q::zero(), i64::MAX / 4);
    let s1 = e[0].add(&e[1]).add(&e[2]);
    let s2 = e[0].mul(&e[1]).add(&e[0].mul(&e[2])).add(&e[1].mul(&e[2]));
    let s3 = e[0].mul(&e[1]).mul(&e[2]);
    let mut r = Report::new("qseries");
    r.push(series_identity("vieta/sum", &s1, &zero, order));
    r.push(series_identity("vieta/pair_sum", &s2, &e4.scale(&q(-1, 3)), order));
    r.push(series_identity("vieta/product", &s3, &e6.scale(&q(2, 27)), order));
    r
}

/// Check D(Δ)/Δ = E₂ through q^(order-1). `corrupt = Some(k)` adds one to the
/// q^k coefficient of Δ first (k >= 2; the leading coefficient is invisible
/// to a logarithmic derivative). A failure is reported at the Δ exponent
/// whose change first shows up.
pub fn dlog_delta_check(order: u32, corrupt: Option<usize>) -> Result<Report, SeriesError> {
    if order < 2 {
        return Err(SeriesError::OrderTooSmall(2));
    }
    let mut dl = delta(order + 1);
    if let Some(k) = corrupt {
        let mut c = dl.dense_from(0);
        if k < c.len() {
            c[k] += qi(1);
        }
        dl = FracSeries::from_coeffs(1, 0, c, dl.order());
    }
    let lhs = dl.log_derivative()?.truncate(order as i64);
    let e2 = eisenstein(2, order)?;
    let residual = lhs.first_difference(&e2).map(|k| {
        let diff = lhs.coeff(k) - e2.coeff(k);
        (q_to_string(&diff), Some(k + 1))
    });
    let mut r = Report::new("qseries");
    r.push(Check::exact("dlog_delta_equals_E2", residual).with_order(order));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_routes_agree() {
        let r = eisenstein_checks(64).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        // A wrong constant in the Lambert route would show at q^1.
        let bad = eisenstein_lambert(4, 8).unwrap().scale(&BigRational::new(2.into(), 1.into()));
        assert!(!series_identity("x", &eisenstein(4, 8).unwrap(), &bad, 8).passed());
    }

    fn ints(s: &FracSeries, from: i64) -> Vec<i64> {
        s.dense_from(from).iter().map(|c| num_traits::ToPrimitive::to_i64(&c.to_integer()).unwrap()).collect()
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(ints(&eisenstein(2, 5).unwrap(), 0), vec![1, -24, -72, -96, -168]);
        assert_eq!(ints(&eisenstein(4, 3).unwrap(), 0), vec![1, 240, 2160]);
        assert_eq!(ints(&eisenstein(6, 2).unwrap(), 0), vec![1, -504]);
        assert_eq!(eisenstein(8, 3), Err(SeriesError::UnsupportedWeight(8)));
    }

    #[test]
    fn delta_leading_terms() {
        // tau(n): 1, -24, 252, -1472, 4830
        assert_eq!(ints(&delta(6), 1), vec![1, -24, 252, -1472, 4830]);
    }

    #[test]
    fn thetas_and_lambda() {
        let [t2, t3, t4] = theta_fourths(20).unwrap();
        assert_eq!(t2.valuation(), 1);
        assert_eq!(t2.leading(), Some(&qi(16)));
        assert_eq!(t3.coeff(0), qi(1));
        assert!(t3.sub(&t2).sub(&t4).is_zero());
        let l = lambda_series(4).unwrap();
        assert_eq!(ints(&l, 1)[..3], [16, -128, 704]);
        assert!(l.mul(&t3).sub(&t2).is_zero());
    }

    #[test]
    fn e_hat_conventions() {
        let e1 = e_hat(1, 10).unwrap();
        let e2 = e_hat(2, 10).unwrap();
        let e3 = e_hat(3, 10).unwrap();
        assert_eq!(e1.coeff(0), BigRational::new(2.into(), 3.into()));
        assert_eq!(e1.coeff_q(1, 1), qi(16));
        assert!(e1.to_r1().is_some());
        assert_eq!(e2.coeff(1), qi(-8));
        assert_eq!(e2.mirror(), e3);
        assert!(e1.add(&e2).add(&e3).is_zero());
    }

    #[test]
    fn dlog_delta() {
        assert!(dlog_delta_check(20, None).unwrap().passed());
        assert!(dlog_delta_check(2, None).unwrap().passed());
        let bad = dlog_delta_check(20, Some(5)).unwrap();
        assert!(!bad.passed());
        match &bad.checks[0].residual {
            crate::report::Residual::Exact { index, .. } => assert_eq!(*index, Some(5)),
            other => panic!("unexpected residual {other:?}"),
        }
    }

    #[test]
    fn inverse_and_orders() {
        let f = FracSeries::from_ints(1, 1, &[2, 1, 3], 6);
        let g = f.inv().unwrap();
        assert_eq!(g.valuation(), -1);
        assert_eq!(g.order(), 4);
        let one = f.mul(&g);
        assert_eq!(one.order(), 5);
        assert_eq!(one.dense_from(0)[0], qi(1));
        assert!(one.sub(&FracSeries::one(1, 5)).is_zero());
    }

    #[test]
    fn display_and_json() {
        let f = FracSeries::from_ints(2, 0, &[1, -8, 0, 3], 4);
        assert_eq!(f.to_string(), "1 - 8 q^(1/2) + 3 q^(3/2) + O(q^2)");
        assert_eq!(FracSeries::from_json(&f.to_json()).unwrap(), f);
    }
}
