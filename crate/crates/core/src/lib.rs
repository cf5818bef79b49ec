//! Exact construction and verification of anharmonic Riccati equations.
//!
//! Modules:
//! - [`algebra`]: rationals, cyclotomic fields, polynomials, resultants
//! - [`qseries`]: truncated q-expansions of modular objects
//! - [`mobius`]: finite Möbius groups and their absolute invariants
//! - [`anharmonic`]: orbit polynomials, root parameterization, elimination
//! - [`binform`]: binary forms and transvectants
//! - [`darboux`]: Darboux polynomials for elliptic-potential Riccati equations
//! - [`halphen`]: Ramanujan, Chazy and Darboux-Halphen identities
//! - [`numeric`]: RK4 integration and drift diagnostics
//! - [`schwarz`]: Schwarzian derivative and hypergeometric bookkeeping
//! - [`report`]: structured verification results
//! - [`suite`]: named suites combining the checks above

pub mod algebra;
pub mod anharmonic;
pub mod binform;
pub mod darboux;
pub mod halphen;
pub mod mobius;
pub mod numeric;
pub mod qseries;
pub mod report;
pub mod schwarz;
pub mod suite;
