//! Error taxonomy shared by every layer of the workbench.
//!
//! A bounded search that comes back empty is *not* an error: those surface as
//! [`crate::report::Verdict::Undecided`] with the bound that was exhausted.
//! Errors are reserved for ill-posed requests.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Operands live over different domains (or the same constructor with
    /// different parameters).
    #[error("mixed domains: {0}")]
    MixedDomains(String),

    /// Target ring of an extension is not an overring of the source.
    #[error("not an overring: {0}")]
    NotAnOverring(String),

    /// An ideal offered as prime failed its certificate check.
    #[error("prime certificate rejected: {0}")]
    NotPrimeCertified(String),

    /// The zero module is not a fractional ideal here.
    #[error("zero ideal: {0}")]
    ZeroIdeal(String),

    /// Operation is meaningless or unimplemented for the backend
    /// (e.g. gcd over a non-UFD).
    #[error("unsupported for backend: {0}")]
    UnsupportedBackend(String),

    /// The requested closure provably has no finitely generated
    /// representative within the engine's value forms.
    #[error("not representable as a finitely generated module: {0}")]
    NotFgRepresentable(String),

    /// A constructor that needs a nonempty candidate list got an empty one.
    #[error("empty candidate list: {0}")]
    EmptyCandidates(String),

    /// The zero polynomial has no content ideal, no degree, no verdicts.
    #[error("zero polynomial: {0}")]
    ZeroPolynomial(String),

    /// A pipeline hypothesis could not be certified (e.g. a prime offered as
    /// a valuation prime fails the structural DVR check).
    #[error("valuation hypothesis unverified: {0}")]
    ValuationHypothesisUnverified(String),

    /// Text that does not parse as an element/ideal/star in the given domain.
    #[error("parse error: {0}")]
    Parse(String),

    /// Division that was required to be exact was not.
    #[error("inexact division: {0}")]
    InexactDivision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
