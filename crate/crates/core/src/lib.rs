//! Exact-arithmetic workbench for closure operations on fractional ideals
//! over small concrete domains, together with the associated Nagata and
//! Kronecker function-ring calculators and localization/gluing checks.

pub mod arith;
pub mod checks;
pub mod domain;
pub mod element;
pub mod error;
pub mod ideal;
pub mod prime;
pub mod probes;
pub mod report;
pub mod star;

pub use error::{Error, Result};
