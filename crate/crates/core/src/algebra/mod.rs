//! Exact arithmetic: rationals, cyclotomic numbers, polynomials, rational
//! functions, resultants and root extraction.

pub mod cyclotomic;
pub mod embed;
pub mod fp;
pub mod modgcd;
pub mod mpoly;
pub mod poly;
pub mod ratfun;
pub mod resultant;
pub mod ring;

pub use cyclotomic::Cyclotomic;
pub use embed::{cyc_embed, BigComplex};
pub use mpoly::{MPoly, MRat};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use resultant::poly_resultant;
pub use ring::{Field, Ring, Q};

use serde_json::Value;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("incompatible coefficient rings: {0}")]
    IncompatibleRing(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("not an exact power (first failing coefficient index {index})")]
    NotAPower { index: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A polynomial tagged with its variable name and coefficient ring, for
/// interfaces where the ring is only known at run time (JSON, CLI).
#[derive(Clone, Debug, PartialEq)]
pub enum SymPoly {
    Rational { var: String, poly: Poly<Q> },
    Cyclotomic { var: String, poly: Poly<Cyclotomic> },
}

impl SymPoly {
    pub fn var(&self) -> &str {
        match self {
            SymPoly::Rational { var, .. } | SymPoly::Cyclotomic { var, .. } => var,
        }
    }

    fn ring_name(&self) -> &'static str {
        match self {
            SymPoly::Rational { .. } => "Q",
            SymPoly::Cyclotomic { .. } => "Q(zeta_N)",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SymPoly::Rational { poly, .. } => poly_to_json(poly),
            SymPoly::Cyclotomic { poly, .. } => Value::Array(poly.coeffs().iter().map(Cyclotomic::to_json).collect()),
        }
    }
}

/// Monic gcd of two tagged polynomials; mixing rings or variables is an error.
pub fn poly_gcd(p: &SymPoly, q: &SymPoly) -> Result<SymPoly, AlgebraError> {
    if p.var() != q.var() {
        return Err(AlgebraError::IncompatibleRing(format!("variables {} and {}", p.var(), q.var())));
    }
    match (p, q) {
        (SymPoly::Rational { var, poly: a }, SymPoly::Rational { poly: b, .. }) => {
            Ok(SymPoly::Rational { var: var.clone(), poly: a.gcd(b) })
        }
        (SymPoly::Cyclotomic { var, poly: a }, SymPoly::Cyclotomic { poly: b, .. }) => {
            Ok(SymPoly::Cyclotomic { var: var.clone(), poly: a.gcd(b) })
        }
        _ => Err(AlgebraError::IncompatibleRing(format!("{} and {}", p.ring_name(), q.ring_name()))),
    }
}

/// Rational polynomial as a JSON array of "p/q" strings, low degree first.
pub fn poly_to_json(p: &Poly<Q>) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(ring::q_to_string(c))).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly<Q>, AlgebraError> {
    let arr = v.as_array().ok_or_else(|| AlgebraError::Parse("expected an array".into()))?;
    let coeffs = arr
        .iter()
        .map(|c| c.as_str().and_then(ring::parse_q).ok_or_else(|| AlgebraError::Parse(format!("bad coefficient {c}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::new(coeffs))
}

/// Human-readable rendering, highest degree first.
pub fn poly_display<R: Ring + std::fmt::Display>(p: &Poly<R>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
        parts.push(match k {
            0 => cs,
            1 if c.is_one() => var.to_string(),
            1 => format!("{cs}*{var}"),
            _ if c.is_one() => format!("{var}^{k}"),
            _ => format!("{cs}*{var}^{k}"),
        });
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ring::qi;

    #[test]
    fn mixed_rings_rejected() {
        let a = SymPoly::Rational { var: "t".into(), poly: Poly::new(vec![qi(1), qi(1)]) };
        let b = SymPoly::Cyclotomic { var: "t".into(), poly: Poly::new(vec![Cyclotomic::i(), Cyclotomic::one()]) };
        assert!(matches!(poly_gcd(&a, &b), Err(AlgebraError::IncompatibleRing(_))));
    }

    #[test]
    fn json_round_trip() {
        let p = Poly::new(vec![ring::q(-1, 2), qi(0), qi(3)]);
        let v = poly_to_json(&p);
        assert_eq!(v, serde_json::json!(["-1/2", "0", "3"]));
        assert_eq!(poly_from_json(&v).unwrap(), p);
        let z = Cyclotomic::sqrt5();
        assert_eq!(Cyclotomic::from_json(&z.to_json()).unwrap(), z);
    }
}
