//! Nagata and Kronecker function-ring oracles.
//!
//! Polynomials here live in an indeterminate `X` that is distinct from any
//! backend variable (so over ℤ[Y] one works with (ℤ[Y])[X]). The crate
//! answers unit questions in the Nagata ring Na(D,★) = D[X]_{N(★)} and its
//! localizations, and membership questions in the Kronecker function ring
//! Kr(D,★), exactly where a closed form is certified and by bounded witness
//! search everywhere else.

pub mod kronecker;
pub mod nagata;
pub mod poly;

pub use kronecker::{kronecker_member, na_kr_probe, star_a_eval, KrVerdict};
pub use nagata::{in_n, unit_in_nagata_localized, SearchBounds, UnitVerdict};
pub use poly::PolyX;
