//! Probe-scale P★MD certification.
//!
//! A domain is a P★MD when every nonzero finitely generated ideal F is
//! ★-invertible: (FF⁻¹)^★ = D^★. That quantifier is not finitely checkable,
//! so everything here is probe-relative by construction: suites run over
//! explicit probe sets and report pass-on-probes or a concrete failing
//! witness, never an unqualified classification.

pub mod invert;
pub mod pipeline;
pub mod suite;

pub use invert::{is_star_invertible, pair_intersection_finiteness};
pub use pipeline::invertibility_pipeline;
pub use suite::{local_global_suite, LocalRow, PmdReport, PmdVerdict};
