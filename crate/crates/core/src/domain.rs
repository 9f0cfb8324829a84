//! The concrete coefficient domains the workbench operates over, together
//! with the capability flags that gate which algorithms apply (gcd-based
//! canonical forms, Dedekind inverse identities, principality searches).
//!
//! A `Localized` domain is an intersection ∩ D_P over a finite antichain of
//! primes of a non-localized base; a single prime gives the usual D_P.

use std::fmt;

use crate::prime::PrimeIdeal;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Domain {
    /// ℤ
    Int,
    /// ℚ
    Rat,
    /// ℤ[w] with w² = d (d squarefree, d ≢ 1 mod 4; validated at construction)
    Quad { d: i64 },
    /// ℚ(w)
    QuadField { d: i64 },
    /// ℤ[Y]
    IntPoly,
    /// ℚ[Y]
    RatPoly,
    /// ℚ(Y)
    RatFunc,
    /// ∩_P base_P over finitely many incomparable nonzero primes of `base`.
    Localized(Box<LocalizedDomain>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalizedDomain {
    pub base: Domain,
    pub primes: Vec<PrimeIdeal>,
}

fn squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl Domain {
    /// Quadratic order ℤ[√d]; rejects d that would not give the full ring of
    /// integers in ℚ(√d) (d ≡ 1 mod 4) and non-squarefree or degenerate d.
    pub fn quadratic(d: i64) -> crate::Result<Domain> {
        if d == 0 || d == 1 || !squarefree(d) || d.rem_euclid(4) == 1 {
            return Err(crate::Error::UnsupportedBackend(format!(
                "quadratic order requires squarefree d with d mod 4 != 1, got d={d}"
            )));
        }
        Ok(Domain::Quad { d })
    }

    pub fn localized(base: Domain, primes: Vec<PrimeIdeal>) -> crate::Result<Domain> {
        if matches!(base, Domain::Localized(_)) {
            return Err(crate::Error::UnsupportedBackend(
                "localize the underlying base directly instead of a localization".into(),
            ));
        }
        if base.is_field() {
            return Err(crate::Error::UnsupportedBackend(
                "localizing a field changes nothing".into(),
            ));
        }
        if primes.is_empty() {
            return Err(crate::Error::UnsupportedBackend(
                "localization needs at least one prime".into(),
            ));
        }
        for p in &primes {
            if p.domain() != &base {
                return Err(crate::Error::MixedDomains(format!(
                    "prime over {} used to localize {}",
                    p.domain(),
                    base
                )));
            }
            if p.is_zero() {
                return Err(crate::Error::UnsupportedBackend(
                    "localizing at the zero prime yields the whole field; use the field domain"
                        .into(),
                ));
            }
        }
        for i in 0..primes.len() {
            for j in 0..primes.len() {
                if i != j && primes[i].contains_prime(&primes[j]) {
                    return Err(crate::Error::UnsupportedBackend(
                        "localization primes must be incomparable".into(),
                    ));
                }
            }
        }
        let mut primes = primes;
        primes.sort_by_key(|p| p.sort_key());
        primes.dedup();
        Ok(Domain::Localized(Box::new(LocalizedDomain { base, primes })))
    }

    /// The non-localized domain underneath (self if already plain).
    pub fn base(&self) -> &Domain {
        match self {
            Domain::Localized(l) => &l.base,
            d => d,
        }
    }

    pub fn localization_primes(&self) -> &[PrimeIdeal] {
        match self {
            Domain::Localized(l) => &l.primes,
            _ => &[],
        }
    }

    pub fn fraction_field(&self) -> Domain {
        match self.base() {
            Domain::Int | Domain::Rat => Domain::Rat,
            Domain::Quad { d } | Domain::QuadField { d } => Domain::QuadField { d: *d },
            Domain::IntPoly | Domain::RatPoly | Domain::RatFunc => Domain::RatFunc,
            Domain::Localized(_) => unreachable!("base is plain"),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Domain::Rat | Domain::QuadField { .. } | Domain::RatFunc)
    }

    /// Element-level gcds are defined and implemented (gcd domain with an
    /// effective algorithm).
    pub fn has_gcd(&self) -> bool {
        match self {
            Domain::Int | Domain::IntPoly | Domain::RatPoly => true,
            d if d.is_field() => true,
            Domain::Quad { .. } => false,
            Domain::Localized(l) => l.base.has_gcd(),
            _ => unreachable!(),
        }
    }

    /// Every nonzero f.g. fractional ideal is principal, constructively.
    pub fn is_pid(&self) -> bool {
        match self {
            Domain::Int | Domain::RatPoly => true,
            d if d.is_field() => true,
            Domain::Quad { .. } | Domain::IntPoly => false,
            Domain::Localized(l) => match &l.base {
                // Localizing a Dedekind domain (or ℤ, ℚ[Y]) at finitely many
                // primes gives a semilocal PID.
                Domain::Int | Domain::Quad { .. } | Domain::RatPoly => true,
                // ℤ[Y] localized away from height-2 primes is a semilocal PID
                // only when every prime is principal (height 1).
                Domain::IntPoly => l.primes.iter().all(|p| p.height() <= 1),
                _ => false,
            },
            _ => unreachable!(),
        }
    }

    /// Noetherian, dimension <= 1, integrally closed: I·I⁻¹ = D holds for
    /// every nonzero f.g. ideal.
    pub fn is_dedekind(&self) -> bool {
        match self {
            Domain::Int | Domain::Quad { .. } | Domain::RatPoly => true,
            d if d.is_field() => true,
            Domain::IntPoly => false,
            Domain::Localized(l) => {
                l.base.is_dedekind() || l.primes.iter().all(|p| p.height() <= 1)
            }
            _ => unreachable!(),
        }
    }

    /// Unique factorization with an effective factoring algorithm.
    pub fn is_ufd(&self) -> bool {
        match self {
            Domain::Int | Domain::IntPoly | Domain::RatPoly => true,
            d if d.is_field() => true,
            Domain::Quad { d } => *d == -1 || *d == -2,
            Domain::Localized(l) => l.base.is_ufd(),
            _ => unreachable!(),
        }
    }

    pub fn krull_dim(&self) -> u32 {
        match self {
            d if d.is_field() => 0,
            Domain::Int | Domain::Quad { .. } | Domain::RatPoly => 1,
            Domain::IntPoly => 2,
            Domain::Localized(l) => l.primes.iter().map(|p| p.height()).max().unwrap_or(0),
            _ => unreachable!(),
        }
    }

    /// Is `self` an overring of `other` (a ring between `other` and its
    /// quotient field), within the supported families?
    pub fn is_overring_of(&self, other: &Domain) -> bool {
        if self.fraction_field() != other.fraction_field() {
            return false;
        }
        if self == other || *self == other.fraction_field() {
            return true;
        }
        match (other, self) {
            // D ⊆ D_Δ for any primes of D; D_Δ ⊆ D_Γ when every prime of Γ
            // is below (contained in) some prime of Δ.
            (base, Domain::Localized(l)) if *base == l.base => true,
            (Domain::Localized(a), Domain::Localized(b)) if a.base == b.base => b
                .primes
                .iter()
                .all(|q| a.primes.iter().any(|p| p.contains_prime(q))),
            (Domain::Int, Domain::Rat) => true,
            (Domain::IntPoly, Domain::RatPoly | Domain::RatFunc) => true,
            (Domain::IntPoly, Domain::Localized(l)) => l.base == Domain::RatPoly,
            (Domain::RatPoly, Domain::RatFunc) => true,
            (Domain::Quad { d }, Domain::QuadField { d: d2 }) => d == d2,
            _ => false,
        }
    }

    /// Short stable name used in reports and parsed by the CLI.
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Int => write!(f, "Z"),
            Domain::Rat => write!(f, "Q"),
            Domain::Quad { d: -5 } => write!(f, "Zw"),
            Domain::Quad { d } => write!(f, "Zsqrt({d})"),
            Domain::QuadField { d: -5 } => write!(f, "Qw"),
            Domain::QuadField { d } => write!(f, "Qsqrt({d})"),
            Domain::IntPoly => write!(f, "ZY"),
            Domain::RatPoly => write!(f, "QY"),
            Domain::RatFunc => write!(f, "QfY"),
            Domain::Localized(l) => {
                write!(f, "loc({}; ", l.base)?;
                for (i, p) in l.primes.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}
