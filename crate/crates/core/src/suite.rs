//! Named verification suites, each assembling the checks of one or more
//! modules into a single sorted report.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::ring::{Field, Ring};
use crate::algebra::{Cyclotomic, Poly, RatFun};
use crate::anharmonic::{
    cyclic_normal_form, degree_table, eliminate, orbit_polynomial, root_cross_ratio, run_pipeline, AnharmonicError,
    AnharmonicSpec, DegreeRow, PipelineOptions,
};
use crate::darboux::DarbouxError;
use crate::halphen::{self, LambdaVariant};
use crate::mobius::{group_catalog, invariant_psi, verify_invariance, GroupKind, MobiusError};
use crate::numeric::{self, NumericOptions};
use crate::qseries::{self, SeriesError};
use crate::report::{Check, Report};
use crate::schwarz::{self, SchwarzError};
use crate::{binform, darboux};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite {0:?} (expected one of modular, anharmonic, darboux, transvect, schwarz, numeric, all)")]
    UnknownSuite(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Anharmonic(#[from] AnharmonicError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
    #[error(transparent)]
    Schwarz(#[from] SchwarzError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteName {
    Modular,
    Anharmonic,
    Darboux,
    Transvect,
    Schwarz,
    Numeric,
    All,
}

impl SuiteName {
    pub const EACH: [SuiteName; 6] = [
        SuiteName::Modular,
        SuiteName::Anharmonic,
        SuiteName::Darboux,
        SuiteName::Transvect,
        SuiteName::Schwarz,
        SuiteName::Numeric,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::Modular => "modular",
            SuiteName::Anharmonic => "anharmonic",
            SuiteName::Darboux => "darboux",
            SuiteName::Transvect => "transvect",
            SuiteName::Schwarz => "schwarz",
            SuiteName::Numeric => "numeric",
            SuiteName::All => "all",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SuiteName::EACH
            .into_iter()
            .chain([SuiteName::All])
            .find(|n| n.as_str() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

/// Knobs shared by every suite.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random cases per property check.
    pub cases: usize,
    /// Series truncation order. `None` uses the per-identity defaults
    /// (64 for the Eisenstein and Ramanujan checks, 40 for Chazy, 32 otherwise).
    pub order: Option<u32>,
    /// Overrides every floating-point "at most" threshold.
    pub tol: Option<f64>,
    pub steps: usize,
    pub timing: bool,
    /// Adds the exploratory substitution search to the schwarz suite.
    pub explore: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, cases: 100, order: None, tol: None, steps: 4000, timing: false, explore: false }
    }
}

impl SuiteOptions {
    pub fn validate(&self) -> Result<(), SuiteError> {
        if let Some(o) = self.order {
            if o < 8 {
                return Err(SuiteError::InvalidOption(format!("order {o} is below the minimum 8")));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(SuiteError::InvalidOption(format!("tolerance {t} must be positive")));
            }
        }
        if self.cases == 0 {
            return Err(SuiteError::InvalidOption("cases must be positive".into()));
        }
        if self.steps < 16 {
            return Err(SuiteError::InvalidOption(format!("steps {} is below the minimum 16", self.steps)));
        }
        Ok(())
    }

    fn order_or(&self, default: u32) -> u32 {
        self.order.unwrap_or(default)
    }

    pub fn numeric(&self) -> NumericOptions {
        let mut o = NumericOptions { steps: self.steps, ..NumericOptions::default() };
        if let Some(t) = self.tol {
            o.tol.closed_form = t;
            o.tol.cross_ratio = t;
            o.tol.anharmonic_cross_ratio = t;
            o.tol.phi_residual = t;
        }
        o
    }

    pub fn pipeline(&self) -> PipelineOptions {
        let mut p = PipelineOptions::default();
        if let Some(t) = self.tol {
            p.tol = t;
        }
        p
    }
}

/// Eisenstein series, Ramanujan, e-Riccati, Vieta, Chazy, Halphen and the
/// multivariate Darboux-Halphen identities, plus two controls that must fail.
pub fn modular_suite(opts: &SuiteOptions) -> Result<Report, SuiteError> {
    let mut rep = Report::new("modular");
    let t = opts.timing;
    let o64 = opts.order_or(64);
    let o40 = opts.order_or(40);
    let o32 = opts.order_or(32);
    rep.timed_block(t, "eisenstein", || qseries::eisenstein_checks(o64))?;
    rep.timed_block(t, "ramanujan", || halphen::verify_ramanujan(o64))?;
    rep.timed_block(t, "vieta", || qseries::verify_vieta(o32))?;
    rep.timed_block(t, "e_riccati", || halphen::verify_e_riccati(o32))?;
    rep.timed_block(t, "chazy", || halphen::verify_chazy_series(o40))?;
    rep.timed_block(t, "halphen", || halphen::verify_hatted_halphen(o32))?;
    rep.timed_block(t, "lambda", || halphen::lambda_parameterization_check(o32.min(24), LambdaVariant::Standard))?;
    rep.timed_block(t, "dlog_delta", || qseries::dlog_delta_check(o32, None))?;
    rep.timed_block(t, "multivariate", || -> Result<Report, SuiteError> {
        let mut r = halphen::cubic_dh_identity();
        r.extend(halphen::s4_s3_equivalence());
        r.extend(halphen::degenerate_solutions_check());
        Ok(r)
    })?;
    let wrong = halphen::lambda_parameterization_check(o32.min(24), LambdaVariant::WrongSlot)?;
    rep.push(Check::flag("control/lambda_wrong_slot", !wrong.passed(), "(λ−1)² in the third slot must fail"));
    let corrupt = qseries::dlog_delta_check(o32.min(16), Some(5))?;
    rep.push(Check::flag("control/corrupt_delta", !corrupt.passed(), "Δ with q^5 coefficient bumped must fail"));
    Ok(rep)
}

/// Group catalog used by the invariance checks.
pub fn invariance_groups() -> Vec<GroupKind> {
    let mut v: Vec<GroupKind> = (4..=6).map(GroupKind::Cyclic).collect();
    v.extend((2..=5).map(GroupKind::Dihedral));
    v.extend([GroupKind::Tetrahedral, GroupKind::Octahedral, GroupKind::Icosahedral]);
    v
}

/// Expected (n, p) rows of the degree analysis, as literals. Cyclic
/// and dihedral parameters are instantiated.
pub fn expected_degrees(kind: GroupKind) -> Vec<(u32, u32)> {
    match kind {
        GroupKind::Cyclic(n) if n >= 4 => vec![(n, 1)],
        GroupKind::Cyclic(_) => vec![],
        GroupKind::Dihedral(m) if 2 * m >= 4 => vec![(2 * m, 1), (m, 2)],
        GroupKind::Dihedral(m) => vec![(m, 2)],
        GroupKind::Tetrahedral => vec![(12, 1), (6, 2), (4, 3)],
        GroupKind::Octahedral => vec![(24, 1), (12, 2), (8, 3), (6, 4)],
        GroupKind::Icosahedral => vec![(60, 1), (30, 2), (20, 3), (5, 12)],
    }
}

pub fn degree_table_check(kind: GroupKind) -> Check {
    let mut got: Vec<(u32, u32)> = degree_table(kind).into_iter().map(|DegreeRow { n, p }| (n, p)).collect();
    let mut want = expected_degrees(kind);
    got.sort_unstable();
    want.sort_unstable();
    Check::flag(format!("degree_table/{}", kind.name()), got == want, format!("{got:?}"))
}

/// F(x, T) for the cyclic group of order n normalizes to xⁿ − 1/T.
pub fn cyclic_example_check(n: u32) -> Result<Check, SuiteError> {
    type RF = RatFun<Cyclotomic>;
    let spec = AnharmonicSpec::new(GroupKind::Cyclic(n), n, 1)?;
    let u = orbit_polynomial(&spec)?;
    let k = u.coeff(0).negate();
    let f = eliminate(&spec, &u)?.f;
    let y = cyclic_normal_form(&f, n, &k)?;
    let mut coeffs = vec![RF::zero(); n as usize + 1];
    coeffs[0] = RF::constant(k).divide(&RF::x()).expect("T != 0").negate();
    coeffs[n as usize] = RF::one();
    let ok = y == Poly::new(coeffs);
    Ok(Check::flag(format!("cyclic_example/n{n}"), ok, format!("U = t^{n} - 1, normal form x^{n} - K/T")))
}

/// Pipelines run by default; icosahedral ones are too slow for the budget.
pub const DEFAULT_PIPELINES: [(GroupKind, u32, u32); 6] = [
    (GroupKind::Dihedral(3), 3, 2),
    (GroupKind::Dihedral(4), 4, 2),
    (GroupKind::Cyclic(5), 5, 1),
    (GroupKind::Tetrahedral, 4, 3),
    (GroupKind::Tetrahedral, 6, 2),
    (GroupKind::Octahedral, 6, 4),
];

pub fn anharmonic_suite(opts: &SuiteOptions) -> Result<Report, SuiteError> {
    let mut rep = Report::new("anharmonic");
    let t = opts.timing;
    rep.timed_block(t, "invariance", || -> Result<Report, SuiteError> {
        let mut r = Report::new("mobius");
        for kind in invariance_groups() {
            let g = group_catalog(kind)?;
            r.extend(verify_invariance(&g, &invariant_psi(kind), true));
        }
        Ok(r)
    })?;
    let mut families: Vec<GroupKind> = (2..=7).map(GroupKind::Cyclic).collect();
    families.extend((2..=6).map(GroupKind::Dihedral));
    families.extend([GroupKind::Tetrahedral, GroupKind::Octahedral, GroupKind::Icosahedral]);
    for kind in families {
        rep.push(degree_table_check(kind));
    }
    rep.timed_block(t, "cyclic_example", || -> Result<Report, SuiteError> {
        let mut r = Report::new("anharmonic");
        for n in 4..=7 {
            r.push(cyclic_example_check(n)?);
        }
        Ok(r)
    })?;
    let popts = opts.pipeline();
    for (kind, n, p) in DEFAULT_PIPELINES {
        let label = format!("pipeline/{}/{n}/{p}", kind.name());
        rep.timed_block(t, &label, || -> Result<Report, SuiteError> {
            let spec = AnharmonicSpec::new(kind, n, p)?;
            Ok(run_pipeline(spec, &popts)?.report)
        })?;
    }
    let spec = AnharmonicSpec::new(GroupKind::Cyclic(4), 4, 1)?;
    let u = orbit_polynomial(&spec)?;
    let (cr, eta_cr) = root_cross_ratio(&spec, &u, [0, 1, 2, 3])?;
    let constant = cr.num().deg() == 0 && cr.den().deg() == 0 && cr == RatFun::constant(eta_cr.clone());
    rep.push(Check::flag("cross_ratio/cyclic4_roots", constant, format!("orbit cross-ratio {eta_cr}")));
    Ok(rep)
}

pub fn darboux_suite(_opts: &SuiteOptions) -> Result<Report, SuiteError> {
    let (mut rep, _) = darboux::run_all(true)?;
    rep.suite = "darboux".into();
    Ok(rep)
}

pub fn run_suite(name: SuiteName, opts: &SuiteOptions) -> Result<Report, SuiteError> {
    opts.validate()?;
    let mut rep = Report::new(name.as_str());
    let t = opts.timing;
    let one = |n: SuiteName| -> Result<Report, SuiteError> {
        match n {
            SuiteName::Modular => modular_suite(opts),
            SuiteName::Anharmonic => anharmonic_suite(opts),
            SuiteName::Darboux => darboux_suite(opts),
            SuiteName::Transvect => Ok(binform::run_all(opts.seed, opts.cases)),
            SuiteName::Schwarz => Ok(schwarz::run_all(opts.seed, opts.cases, opts.explore)?),
            SuiteName::Numeric => Ok(numeric::run_all(&opts.numeric())),
            SuiteName::All => unreachable!("expanded by the caller"),
        }
    };
    match name {
        SuiteName::All => {
            for n in SuiteName::EACH {
                rep.timed_block(t, n.as_str(), || one(n))?;
            }
        }
        n => rep.timed_block(t, n.as_str(), || one(n))?,
    }
    Ok(rep.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in SuiteName::EACH {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert!(matches!("bogus".parse::<SuiteName>(), Err(SuiteError::UnknownSuite(_))));
    }

    #[test]
    fn invalid_options_rejected() {
        let o = SuiteOptions { order: Some(2), ..SuiteOptions::default() };
        assert!(matches!(run_suite(SuiteName::Schwarz, &o), Err(SuiteError::InvalidOption(_))));
        let o = SuiteOptions { tol: Some(-1.0), ..SuiteOptions::default() };
        assert!(o.validate().is_err());
    }

    #[test]
    fn degree_tables_match_text() {
        for kind in [GroupKind::Cyclic(5), GroupKind::Dihedral(2), GroupKind::Dihedral(5), GroupKind::Icosahedral] {
            assert!(degree_table_check(kind).passed(), "{kind:?}");
        }
    }

    #[test]
    fn schwarz_suite_is_deterministic() {
        let o = SuiteOptions { cases: 10, ..SuiteOptions::default() };
        let a = run_suite(SuiteName::Schwarz, &o).unwrap().to_json();
        let b = run_suite(SuiteName::Schwarz, &o).unwrap().to_json();
        assert_eq!(a, b);
    }
}
