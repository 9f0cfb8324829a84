//! Semistar operations as expression trees, with an exact evaluator on
//! finitely generated fractional ideals.
//!
//! Values are either finitely generated ideals (possibly over a localized
//! ring) or the whole quotient field. Evaluations that provably leave the
//! finitely generated world (products of localizations at incomparable
//! height-two primes of ℤ[Y]) are refused with `NotFgRepresentable`;
//! membership queries against such values remain exact through
//! [`StarOp::contains`], which never materializes the value.

use std::fmt;

use crate::arith::upoly::{factor_zy, UPoly};
use crate::domain::Domain;
use crate::element::{field_kind, Value};
use crate::ideal::{FractionalIdeal, Repr};
use crate::prime::PrimeIdeal;
use crate::{Error, Result};

/// Result of a closure evaluation, as a submodule of the quotient field.
#[derive(Debug, Clone)]
pub enum Closure {
    WholeField,
    Fg(FractionalIdeal),
}

/// How a computed value relates to the mathematical definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// Monotone fixed point over a finite candidate list; the true value
    /// may be larger.
    LowerBound,
    /// Finite stand-in for an infinite family (verified candidates only);
    /// the true value may be smaller.
    FiniteApproximation,
}

impl Exactness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower_bound",
            Exactness::FiniteApproximation => "finite_approximation",
        }
    }

    /// Combined exactness of a value built from two evaluations: exact only
    /// when both were, otherwise the earlier caveat prevails.
    pub fn combine(self, other: Exactness) -> Exactness {
        if self == Exactness::Exact {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Closure,
    pub exactness: Exactness,
}

impl Closure {
    pub fn fg(ideal: FractionalIdeal) -> Closure {
        if matches!(ideal.repr(), Repr::Whole) {
            Closure::WholeField
        } else {
            Closure::Fg(ideal)
        }
    }

    pub fn contains_value(&self, x: &Value) -> bool {
        match self {
            Closure::WholeField => true,
            Closure::Fg(i) => i.contains_value(x),
        }
    }

    pub fn canonical_gens(&self) -> Option<Vec<Value>> {
        match self {
            Closure::WholeField => None,
            Closure::Fg(i) => Some(i.canonical_gens()),
        }
    }

    pub fn scale(&self, x: &Value) -> Result<Closure> {
        match self {
            Closure::WholeField => Ok(Closure::WholeField),
            Closure::Fg(i) => Ok(Closure::fg(i.scale(x)?)),
        }
    }

    /// Is self ⊆ other as submodules of the quotient field?
    pub fn le(&self, other: &Closure) -> bool {
        match (self, other) {
            (_, Closure::WholeField) => true,
            (Closure::WholeField, Closure::Fg(_)) => false,
            (Closure::Fg(a), Closure::Fg(b)) => {
                a.canonical_gens().iter().all(|g| b.contains_value(g))
            }
        }
    }

    pub fn eq_module(&self, other: &Closure) -> bool {
        self.le(other) && other.le(self)
    }

    /// Exact intersection when representable: same domain, or one side
    /// contained in the other.
    pub fn intersect(&self, other: &Closure) -> Result<Closure> {
        match (self, other) {
            (Closure::WholeField, x) | (x, Closure::WholeField) => Ok(x.clone()),
            (Closure::Fg(a), Closure::Fg(b)) => {
                if a.domain() == b.domain() {
                    Ok(Closure::fg(a.intersect(b)?))
                } else if self.le(other) {
                    Ok(self.clone())
                } else if other.le(self) {
                    Ok(other.clone())
                } else {
                    Err(Error::NotFgRepresentable(
                        "intersection of values over incomparable rings".into(),
                    ))
                }
            }
        }
    }

    /// The contraction (value ∩ R) as an ideal of R, for R the root ring
    /// the value came from (or its base).
    pub fn contract_to_ring(&self, ring: &Domain) -> Result<FractionalIdeal> {
        match self {
            Closure::WholeField => Ok(FractionalIdeal::one(ring)),
            Closure::Fg(i) => contract_ideal_to_ring(i, ring),
        }
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Closure::WholeField => write!(f, "K"),
            Closure::Fg(i) => write!(f, "{i}"),
        }
    }
}

fn contract_ideal_to_ring(i: &FractionalIdeal, ring: &Domain) -> Result<FractionalIdeal> {
    let vd = i.domain();
    if vd == ring {
        return i.intersect(&FractionalIdeal::one(ring));
    }
    match (vd, ring) {
        // value over a localization of the target ring: the saturated inner
        // representative already satisfies inner·D_Γ ∩ D = inner ∩ D.
        (Domain::Localized(l), _) if &l.base == ring => match i.repr() {
            Repr::Local { inner } => inner.intersect(&FractionalIdeal::one(ring)),
            _ => unreachable!("localized ideals have Local representation"),
        },
        // value over a field: the whole field contracts to the ring.
        (d, _) if d.is_field() => Ok(FractionalIdeal::one(ring)),
        // ℚ[Y]-value contracted to ℤ[Y]: Gauss — (g)ℚ[Y] ∩ ℤ[Y] is generated
        // by the primitive part of g.
        (Domain::RatPoly, Domain::IntPoly) => {
            let g = &i.canonical_gens()[0];
            let (num, den) = match g {
                Value::Fun { num, den } => (num.clone(), den.clone()),
                _ => unreachable!(),
            };
            if !den.is_one() {
                // fractional generator: contraction is prim(num)/den-free part
                // intersected with the ring; fall back to primitive numerator
                // when den is constant, otherwise the contraction is prim(num)·(den)⁻¹∩D = prim(num)·D : (den)
                let fi = FractionalIdeal::from_gens(
                    ring,
                    &[Value::Fun {
                        num: num.primitive_part(),
                        den: UPoly::one(),
                    }],
                )?;
                let di = FractionalIdeal::from_gens(
                    ring,
                    &[Value::Fun {
                        num: den,
                        den: UPoly::one(),
                    }],
                )?;
                return fi.colon(&di)?.intersect(&FractionalIdeal::one(ring));
            }
            FractionalIdeal::from_gens(
                ring,
                &[Value::Fun {
                    num: num.primitive_part(),
                    den: UPoly::one(),
                }],
            )
        }
        (Domain::Localized(l), _) if l.base.is_overring_of(ring) => {
            let partial = contract_ideal_to_ring(
                &match i.repr() {
                    Repr::Local { inner } => (**inner).clone(),
                    _ => unreachable!(),
                },
                ring,
            )?;
            partial.intersect(&FractionalIdeal::one(ring))
        }
        _ => Err(Error::UnsupportedBackend(format!(
            "contraction from {vd} to {ring} is not implemented"
        ))),
    }
}

/// A semistar operation, as an expression tree rooted at a specific domain.
#[derive(Debug, Clone)]
pub enum StarOp {
    /// d: E ↦ E.
    Identity { root: Domain },
    /// e: E ↦ K.
    Trivial { root: Domain },
    /// v: E ↦ (D : (D : E)).
    Divisorial { root: Domain },
    /// ★_T: E ↦ E·T for an overring T.
    OverringExt { root: Domain, target: Domain },
    /// ★_Δ: E ↦ ∩ E·D_P over a nonempty finite Δ of primes of the base.
    Spectral { root: Domain, primes: Vec<PrimeIdeal> },
    /// ★_P: the operation of `inner` restricted to modules over D_P.
    Ascend {
        inner: Box<StarOp>,
        p: PrimeIdeal,
        root: Domain,
    },
    /// ∧_Θ: E ↦ ∩ (E·D_P)^{s_P}.
    Glue {
        root: Domain,
        parts: Vec<(PrimeIdeal, StarOp)>,
    },
    /// Bounded e.a.b. closure: monotone fixed point of
    /// X ↦ Σ_H ((XH)^★ : H^★) over the candidate list.
    EabClosure {
        inner: Box<StarOp>,
        candidates: Vec<FractionalIdeal>,
    },
    /// ★̃ approximated by the spectral operation over those candidates that
    /// verify as quasi-★-primes.
    SpectralClosureOf {
        inner: Box<StarOp>,
        candidates: Vec<PrimeIdeal>,
    },
    /// ★_𝒱 for a finite family of discrete valuation overrings D_P.
    ValuationFamily { root: Domain, primes: Vec<PrimeIdeal> },
}

impl StarOp {
    pub fn identity(root: &Domain) -> StarOp {
        StarOp::Identity { root: root.clone() }
    }

    pub fn trivial(root: &Domain) -> StarOp {
        StarOp::Trivial { root: root.clone() }
    }

    pub fn divisorial(root: &Domain) -> StarOp {
        StarOp::Divisorial { root: root.clone() }
    }

    pub fn overring_ext(root: &Domain, target: &Domain) -> Result<StarOp> {
        if !target.is_overring_of(root) {
            return Err(Error::NotAnOverring(format!(
                "{target} is not a supported overring of {root}"
            )));
        }
        Ok(StarOp::OverringExt {
            root: root.clone(),
            target: target.clone(),
        })
    }

    pub fn spectral(root: &Domain, primes: Vec<PrimeIdeal>) -> Result<StarOp> {
        if primes.is_empty() {
            return Err(Error::EmptyCandidates(
                "spectral operation needs a nonempty prime family; use e for the empty one".into(),
            ));
        }
        let base = root.base();
        for p in &primes {
            if p.domain() != base {
                return Err(Error::MixedDomains(format!(
                    "prime {p} does not live in {base}"
                )));
            }
        }
        Ok(StarOp::Spectral {
            root: root.clone(),
            primes,
        })
    }

    /// ★_P: valid when P is a prime of inner's (plain) root domain.
    pub fn ascend(inner: StarOp, p: PrimeIdeal) -> Result<StarOp> {
        let base = inner.root().clone();
        if matches!(base, Domain::Localized(_)) {
            return Err(Error::UnsupportedBackend(
                "ascending an operation whose root is already localized".into(),
            ));
        }
        if p.domain() != &base {
            return Err(Error::MixedDomains(format!(
                "prime {p} does not live in {base}"
            )));
        }
        if p.is_zero() {
            // D_(0) = K, on which every semistar operation is trivial.
            return Ok(StarOp::Trivial {
                root: base.fraction_field(),
            });
        }
        let root = Domain::localized(base, vec![p.clone()])?;
        Ok(StarOp::Ascend {
            inner: Box::new(inner),
            p,
            root,
        })
    }

    pub fn glue(root: &Domain, parts: Vec<(PrimeIdeal, StarOp)>) -> Result<StarOp> {
        if parts.is_empty() {
            return Err(Error::EmptyCandidates(
                "gluing over the empty family is the trivial operation; use e".into(),
            ));
        }
        for (p, s) in &parts {
            if p.domain() != root.base() {
                return Err(Error::MixedDomains(format!(
                    "prime {p} does not live in {}",
                    root.base()
                )));
            }
            if p.is_zero() {
                continue;
            }
            let expected = Domain::localized(root.base().clone(), vec![p.clone()])?;
            if s.root() != &expected {
                return Err(Error::MixedDomains(format!(
                    "the operation attached to {p} must act on {expected}, not {}",
                    s.root()
                )));
            }
        }
        Ok(StarOp::Glue {
            root: root.clone(),
            parts,
        })
    }

    pub fn eab_closure(inner: StarOp, candidates: Vec<FractionalIdeal>) -> Result<StarOp> {
        if candidates.is_empty() {
            return Err(Error::EmptyCandidates(
                "the e.a.b. closure needs at least one candidate ideal".into(),
            ));
        }
        for c in &candidates {
            if c.domain() != inner.root() {
                return Err(Error::MixedDomains(format!(
                    "candidate {c} does not live over {}",
                    inner.root()
                )));
            }
        }
        Ok(StarOp::EabClosure {
            inner: Box::new(inner),
            candidates,
        })
    }

    pub fn spectral_closure_of(inner: StarOp, candidates: Vec<PrimeIdeal>) -> Result<StarOp> {
        if candidates.is_empty() {
            return Err(Error::EmptyCandidates(
                "the spectral closure needs at least one candidate prime".into(),
            ));
        }
        for p in &candidates {
            if p.domain() != inner.root().base() {
                return Err(Error::MixedDomains(format!(
                    "candidate prime {p} does not live in {}",
                    inner.root().base()
                )));
            }
        }
        Ok(StarOp::SpectralClosureOf {
            inner: Box::new(inner),
            candidates,
        })
    }

    pub fn valuation_family(root: &Domain, primes: Vec<PrimeIdeal>) -> Result<StarOp> {
        if primes.is_empty() {
            return Err(Error::EmptyCandidates(
                "a valuation family needs at least one prime".into(),
            ));
        }
        for p in &primes {
            if p.domain() != root.base() {
                return Err(Error::MixedDomains(format!(
                    "prime {p} does not live in {}",
                    root.base()
                )));
            }
            if !prime_gives_dvr(p) {
                return Err(Error::UnsupportedBackend(format!(
                    "D_P is not a valuation ring for P = {p}"
                )));
            }
        }
        Ok(StarOp::ValuationFamily {
            root: root.clone(),
            primes,
        })
    }

    /// The domain whose modules this operation acts on.
    pub fn root(&self) -> &Domain {
        match self {
            StarOp::Identity { root }
            | StarOp::Trivial { root }
            | StarOp::Divisorial { root }
            | StarOp::OverringExt { root, .. }
            | StarOp::Spectral { root, .. }
            | StarOp::Ascend { root, .. }
            | StarOp::Glue { root, .. }
            | StarOp::ValuationFamily { root, .. } => root,
            StarOp::EabClosure { inner, .. } | StarOp::SpectralClosureOf { inner, .. } => {
                inner.root()
            }
        }
    }

    /// Evaluate E^★ exactly.
    ///
    /// E may live over the root domain itself, over a localization of the
    /// same base, or over the fraction field: the operation acts on all
    /// D-submodules of K, and those are the module shapes the engine can
    /// represent.
    pub fn evaluate(&self, e: &FractionalIdeal) -> Result<Evaluation> {
        if !module_compatible(self.root(), e.domain()) {
            return Err(Error::MixedDomains(format!(
                "ideal over {} fed to an operation on {}",
                e.domain(),
                self.root()
            )));
        }
        self.evaluate_module(e)
    }

    /// Evaluate on a module that may live over an overring of the root
    /// (used internally for ascents, where F̄(D_P) ⊆ F̄(D)).
    fn evaluate_module(&self, e: &FractionalIdeal) -> Result<Evaluation> {
        if e.domain().is_field() {
            // the whole-field sentinel propagates through every constructor
            return Ok(exact(Closure::WholeField));
        }
        match self {
            StarOp::Identity { .. } => Ok(exact(Closure::fg(e.clone()))),
            StarOp::Trivial { .. } => Ok(exact(Closure::WholeField)),
            StarOp::Divisorial { root } => {
                if e.domain() == root {
                    let one = FractionalIdeal::one(root);
                    let inv = one.colon(e)?;
                    Ok(exact(Closure::fg(one.colon(&inv)?)))
                } else {
                    // E is a module over a proper localization of the root:
                    // the conductor (D : D_P) vanishes (an element of D_P
                    // integral over D in the same quotient field would force
                    // the localizing elements to be units), so (D : E) = 0
                    // and E^v = K by convention.
                    Ok(exact(Closure::WholeField))
                }
            }
            StarOp::OverringExt { target, .. } => {
                let gens = e.canonical_gens();
                let ext = FractionalIdeal::from_gens(target, &gens)?;
                Ok(exact(Closure::fg(ext)))
            }
            StarOp::Spectral { primes, .. } | StarOp::ValuationFamily { primes, .. } => {
                let fam = spectral_family(e.domain(), primes)?;
                Ok(exact(localize_value(e, fam)?))
            }
            StarOp::Ascend { inner, .. } => inner.evaluate_module(e),
            StarOp::Glue { root, parts } => evaluate_glue(root, parts, e),
            StarOp::EabClosure { inner, candidates } => {
                let mut exactness = Exactness::LowerBound;
                if matches!(**inner, StarOp::ValuationFamily { .. }) {
                    // F^{★_a} = ∩ FV for a.b. valuation stars: already exact.
                    exactness = Exactness::Exact;
                    let ev = inner.evaluate_module(e)?;
                    return Ok(Evaluation {
                        value: ev.value,
                        exactness,
                    });
                }
                let mut current = inner.evaluate_module(e)?.value;
                for _round in 0..32 {
                    let mut next = current.clone();
                    for h in candidates {
                        let term = eab_term(inner, &current, h)?;
                        if let Some(t) = term {
                            next = closure_sum(&next, &t)?;
                        }
                    }
                    if next.eq_module(&current) {
                        return Ok(Evaluation {
                            value: current,
                            exactness,
                        });
                    }
                    current = next;
                }
                Err(Error::NotFgRepresentable(
                    "e.a.b. closure did not stabilize within the iteration budget".into(),
                ))
            }
            StarOp::SpectralClosureOf { inner, candidates } => {
                let verified: Vec<PrimeIdeal> = candidates
                    .iter()
                    .filter(|p| {
                        !p.is_zero()
                            && is_quasi_star_prime(inner, p).unwrap_or(false)
                    })
                    .cloned()
                    .collect();
                if verified.is_empty() {
                    return Ok(Evaluation {
                        value: Closure::WholeField,
                        exactness: Exactness::FiniteApproximation,
                    });
                }
                let fam = spectral_family(e.domain(), &verified)?;
                let v = localize_value(e, fam)?;
                Ok(Evaluation {
                    value: v,
                    exactness: Exactness::FiniteApproximation,
                })
            }
        }
    }

    /// Exact membership x ∈ E^★, without materializing the value. Falls
    /// back to per-term tests when the value itself is not finitely
    /// generated over any finite localization.
    pub fn contains(&self, e: &FractionalIdeal, x: &Value) -> Result<bool> {
        match self.evaluate_module(e) {
            Ok(ev) => {
                if ev.exactness == Exactness::Exact {
                    return Ok(ev.value.contains_value(x));
                }
                // non-exact value: a positive membership in a lower bound is
                // still a positive membership; otherwise route below.
                if ev.value.contains_value(x) && ev.exactness == Exactness::LowerBound {
                    return Ok(true);
                }
                if !ev.value.contains_value(x)
                    && ev.exactness == Exactness::FiniteApproximation
                {
                    return Ok(false);
                }
                Err(Error::NotFgRepresentable(
                    "membership undecided under a bounded approximation".into(),
                ))
            }
            Err(Error::NotFgRepresentable(_)) => self.contains_fallback(e, x),
            Err(e) => Err(e),
        }
    }

    fn contains_fallback(&self, e: &FractionalIdeal, x: &Value) -> Result<bool> {
        match self {
            StarOp::Spectral { primes, .. } | StarOp::ValuationFamily { primes, .. } => {
                for q in primes {
                    if !term_contains(e, q, x)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            StarOp::Ascend { inner, .. } => inner.contains_fallback(e, x),
            StarOp::Glue { parts, .. } => {
                for (p, s) in parts {
                    if p.is_zero() {
                        continue;
                    }
                    let loc = Domain::localized(p.domain().clone(), vec![p.clone()])?;
                    let ep = FractionalIdeal::from_gens(&loc, &e.canonical_gens())?;
                    if !s.contains(&ep, x)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::NotFgRepresentable(
                "membership in a value that is not finitely generated".into(),
            )),
        }
    }
}

fn exact(value: Closure) -> Evaluation {
    Evaluation {
        value,
        exactness: Exactness::Exact,
    }
}

/// Module shapes an operation rooted at `root` can act on: the root itself,
/// a localization of the same base that contains it, or the fraction field.
fn module_compatible(root: &Domain, edom: &Domain) -> bool {
    if edom == root || *edom == root.fraction_field() {
        return true;
    }
    match edom {
        Domain::Localized(l) => &l.base == root.base() && edom.is_overring_of(root),
        _ => false,
    }
}

fn prime_gives_dvr(p: &PrimeIdeal) -> bool {
    if p.is_zero() {
        return false;
    }
    match p.domain() {
        Domain::Int | Domain::RatPoly | Domain::Quad { .. } => true,
        Domain::IntPoly => p.height() == 1,
        _ => false,
    }
}

/// The localization family of the module's current domain: None for a plain
/// domain (the whole ring), Some(Γ) for D_Γ.
fn current_family(d: &Domain) -> Option<&[PrimeIdeal]> {
    match d {
        Domain::Localized(l) => Some(&l.primes),
        _ => None,
    }
}

/// Maximal members of W(Γ, Q) = {primes Q′ with Q′ ⊆ γ ∩ Q for some γ∈Γ},
/// i.e. the primes surviving in D_Γ·D_Q. Empty means D_Γ·D_Q = K.
fn product_term(ctx: Option<&[PrimeIdeal]>, q: &PrimeIdeal) -> Result<Vec<PrimeIdeal>> {
    if q.is_zero() {
        return Ok(Vec::new());
    }
    let Some(fam) = ctx else {
        return Ok(vec![q.clone()]);
    };
    let mut out = Vec::new();
    for g in fam {
        if g.contains_prime(q) {
            out.push(q.clone());
        } else if q.contains_prime(g) {
            out.push(g.clone());
        } else if g.height() == 2 && q.height() == 2 {
            // incomparable maximal primes of ℤ[Y]: infinitely many height-one
            // primes survive below g ∩ q, so the product ring has no finite
            // localization description.
            return Err(Error::NotFgRepresentable(format!(
                "D_{g}·D_{q} is a localization at infinitely many primes"
            )));
        }
        // otherwise only (0) lies below both: the term contributes K.
    }
    Ok(maximal_primes(out))
}

fn maximal_primes(mut fam: Vec<PrimeIdeal>) -> Vec<PrimeIdeal> {
    fam.sort_by_key(|p| p.sort_key());
    fam.dedup();
    let keep: Vec<PrimeIdeal> = fam
        .iter()
        .filter(|p| {
            !fam.iter()
                .any(|q| q != *p && q.contains_prime(p))
        })
        .cloned()
        .collect();
    keep
}

/// Collect the combined family for ∩_Q E·(D_Γ·D_Q); the finite-intersection
/// identity ∩_Q E·D_{W_Q} = E·D_{∪W_Q} holds for f.g. E by prime avoidance.
fn spectral_family(edomain: &Domain, primes: &[PrimeIdeal]) -> Result<Vec<PrimeIdeal>> {
    let ctx = current_family(edomain);
    let mut all = Vec::new();
    for q in primes {
        all.extend(product_term(ctx, q)?);
    }
    Ok(maximal_primes(all))
}

/// E · D_fam as a closure value (WholeField when fam is empty).
fn localize_value(e: &FractionalIdeal, fam: Vec<PrimeIdeal>) -> Result<Closure> {
    if fam.is_empty() {
        return Ok(Closure::WholeField);
    }
    let base = e.domain().base().clone();
    let loc = Domain::localized(base, fam)?;
    Ok(Closure::fg(FractionalIdeal::from_gens(
        &loc,
        &e.canonical_gens(),
    )?))
}

/// Membership in the single spectral term E·(D_Γ·D_Q), exact even when the
/// product ring has no finite localization description: the obstruction
/// ideal (E₀ : x) must avoid every surviving prime, and over ℤ[Y] the
/// surviving height-one primes are exactly the irreducible divisors of its
/// staircase gcd lying in γ ∩ Q.
fn term_contains(e: &FractionalIdeal, q: &PrimeIdeal, x: &Value) -> Result<bool> {
    let ctx = current_family(e.domain());
    match product_term(ctx, q) {
        Ok(fam) => {
            if fam.is_empty() {
                return Ok(true);
            }
            let base = e.domain().base().clone();
            let loc = Domain::localized(base, fam)?;
            let le = FractionalIdeal::from_gens(&loc, &e.canonical_gens())?;
            Ok(le.contains_value(x))
        }
        Err(Error::NotFgRepresentable(_)) => {
            let base = e.domain().base().clone();
            let e0 = FractionalIdeal::from_gens(&base, &e.canonical_gens())?;
            let xi = FractionalIdeal::from_gens(&base, std::slice::from_ref(x))?;
            let obstruction = e0
                .colon(&xi)?
                .intersect(&FractionalIdeal::one(&base))?;
            // survivors per context prime γ: comparable cases are finite and
            // handled by product_term; here both γ and q have height two.
            let fam = ctx.expect("a non-finite product needs a localized context");
            for g in fam {
                if g.contains_prime(q) || q.contains_prime(g) {
                    let p = if g.contains_prime(q) { q } else { g };
                    if p.ideal().contains_ideal(&obstruction) {
                        return Ok(false);
                    }
                } else if g.height() == 2 && q.height() == 2 {
                    if poly_pair_blocks(&obstruction, g, q) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Err(err) => Err(err),
    }
}

/// Does some height-one prime below g ∩ q contain the obstruction ideal?
fn poly_pair_blocks(obstruction: &FractionalIdeal, g: &PrimeIdeal, q: &PrimeIdeal) -> bool {
    // gcd of the obstruction ideal's elements
    let mut gcd = UPoly::zero();
    for v in obstruction.canonical_gens() {
        let Value::Fun { num, den } = v else {
            unreachable!()
        };
        debug_assert!(den.is_one());
        gcd = gcd.gcd_zy(&num);
    }
    let (_, ints, polys) = factor_zy(&gcd);
    let mut factors: Vec<UPoly> = ints
        .into_iter()
        .map(|(c, _)| UPoly::constant(num_rational::BigRational::from(c)))
        .collect();
    factors.extend(polys.into_iter().map(|(f, _)| f));
    factors.into_iter().any(|f| {
        let fv = Value::Fun {
            num: f,
            den: UPoly::one(),
        };
        g.contains(&fv) && q.contains(&fv)
    })
}

fn evaluate_glue(
    root: &Domain,
    parts: &[(PrimeIdeal, StarOp)],
    e: &FractionalIdeal,
) -> Result<Evaluation> {
    let base = root.base().clone();
    let mut inner_reps: Vec<(FractionalIdeal, Vec<PrimeIdeal>)> = Vec::new();
    let mut exactness = Exactness::Exact;
    for (p, s) in parts {
        if p.is_zero() {
            continue; // (E·K)^{s} = K imposes no constraint
        }
        let loc = Domain::localized(base.clone(), vec![p.clone()])?;
        let ep = FractionalIdeal::from_gens(&loc, &e.canonical_gens())?;
        let term = s.evaluate_module(&ep)?;
        exactness = exactness.combine(term.exactness);
        match term.value {
            Closure::WholeField => continue,
            Closure::Fg(i) => {
                let fam: Vec<PrimeIdeal> = match i.domain() {
                    Domain::Localized(l) => l.primes.clone(),
                    _ => {
                        return Err(Error::NotFgRepresentable(format!(
                            "glue component over {} is not a localized value",
                            i.domain()
                        )))
                    }
                };
                let inner = match i.repr() {
                    Repr::Local { inner } => (**inner).clone(),
                    _ => unreachable!(),
                };
                inner_reps.push((inner, fam));
            }
        }
    }
    if inner_reps.is_empty() {
        return Ok(Evaluation {
            value: Closure::WholeField,
            exactness,
        });
    }
    // candidate f.g. representative N = (∩ B_P) + E₀; every part is
    // extensive so E ⊆ each term, and B_P ⊆ B_P·D_{Γ_P}, hence N·D ⊆ ∩ T_P.
    // Adding E₀ matters: a saturated base rep B_P carries phantom
    // constraints at primes outside Γ_P that the term itself does not.
    // Certifying gens(B_P) ⊆ N·D_{Γ_P} for every P then makes
    // ∩_P B_P·D_{Γ_P} = N·D_{∪Γ_P} exactly.
    let mut n = inner_reps[0].0.clone();
    for (b, _) in &inner_reps[1..] {
        n = n.intersect(b)?;
    }
    n = n.sum(&FractionalIdeal::from_gens(&base, &e.canonical_gens())?)?;
    for (b, fam) in &inner_reps {
        let loc = Domain::localized(base.clone(), fam.clone())?;
        let nd = FractionalIdeal::from_gens(&loc, &n.canonical_gens())?;
        if !b.canonical_gens().iter().all(|g| nd.contains_value(g)) {
            return Err(Error::NotFgRepresentable(
                "glue value could not be certified finitely generated over a finite localization"
                    .into(),
            ));
        }
    }
    let mut fam_all = Vec::new();
    for (_, fam) in &inner_reps {
        fam_all.extend(fam.iter().cloned());
    }
    let value = localize_value(
        &FractionalIdeal::from_gens(&base, &n.canonical_gens())?,
        maximal_primes(fam_all),
    )?;
    Ok(Evaluation { value, exactness })
}

/// One e.a.b. summand ((XH)^★ : H^★) as a closure, or None when it reduces
/// to zero (H^★ the whole field over a proper value).
fn eab_term(inner: &StarOp, x: &Closure, h: &FractionalIdeal) -> Result<Option<Closure>> {
    let hstar = inner.evaluate_module(h)?.value;
    let xh = match x {
        Closure::WholeField => Closure::WholeField,
        Closure::Fg(xi) => {
            let gens_h = h.canonical_gens();
            let gens_x = xi.canonical_gens();
            let mut prods = Vec::new();
            for a in &gens_x {
                for b in &gens_h {
                    prods.push(a.mul(b));
                }
            }
            Closure::fg(FractionalIdeal::from_gens(xi.domain(), &prods)?)
        }
    };
    let xh_star = match &xh {
        Closure::WholeField => Closure::WholeField,
        Closure::Fg(i) => inner.evaluate_module(i)?.value,
    };
    match (&xh_star, &hstar) {
        (Closure::WholeField, Closure::WholeField) => Ok(Some(Closure::WholeField)),
        (Closure::Fg(_), Closure::WholeField) => Ok(None), // colon is zero
        (Closure::WholeField, Closure::Fg(_)) => Ok(Some(Closure::WholeField)),
        (Closure::Fg(a), Closure::Fg(b)) => {
            // (A : B) = ∩_{b} b⁻¹·A over the generators of B
            let mut acc: Option<FractionalIdeal> = None;
            for g in b.canonical_gens() {
                let inv = g.inverse()?;
                let t = a.scale(&inv)?;
                acc = Some(match acc {
                    None => t,
                    Some(v) => v.intersect(&t)?,
                });
            }
            Ok(Some(Closure::fg(acc.expect("nonzero ideal has generators"))))
        }
    }
}

fn closure_sum(a: &Closure, b: &Closure) -> Result<Closure> {
    match (a, b) {
        (Closure::WholeField, _) | (_, Closure::WholeField) => Ok(Closure::WholeField),
        (Closure::Fg(x), Closure::Fg(y)) => {
            if x.domain() == y.domain() {
                Ok(Closure::fg(x.sum(y)?))
            } else if a.le(b) {
                Ok(b.clone())
            } else if b.le(a) {
                Ok(a.clone())
            } else {
                // represent the sum over the finer common localization
                let mut gens = x.canonical_gens();
                gens.extend(y.canonical_gens());
                let dom = common_overring(x.domain(), y.domain())?;
                Ok(Closure::fg(FractionalIdeal::from_gens(&dom, &gens)?))
            }
        }
    }
}

fn common_overring(a: &Domain, b: &Domain) -> Result<Domain> {
    if a.is_overring_of(b) {
        return Ok(a.clone());
    }
    if b.is_overring_of(a) {
        return Ok(b.clone());
    }
    Err(Error::NotFgRepresentable(format!(
        "no finite common overring representation for {a} and {b}"
    )))
}

/// Is P a quasi-★-prime: P^★ ∩ D = P?
///
/// Exact via three routes: structurally for spectral-type operations
/// (P must lie below a member of the family), via the unit test 1 ∈ P^★ for
/// maximal P, and via the contracted value otherwise.
pub fn is_quasi_star_prime(star: &StarOp, p: &PrimeIdeal) -> Result<bool> {
    if p.is_zero() {
        // (0)^★ ∩ D = (0) iff ★ never inflates (0)... the zero module is
        // outside F̄(D); convention: the zero prime is quasi for every ★.
        return Ok(true);
    }
    let root = star.root().clone();
    match star {
        StarOp::Spectral { primes, .. } | StarOp::ValuationFamily { primes, .. } => {
            Ok(primes.iter().any(|q| q.contains_prime(p)))
        }
        StarOp::Trivial { .. } => Ok(false),
        StarOp::Identity { .. } => Ok(true),
        _ => {
            let pid = p.ideal().clone();
            let pid = if &root == p.domain() {
                pid
            } else {
                pid.extend_to(&root)?
            };
            if p_is_maximal(p) && p.domain() == &root {
                let one = Value::one(field_kind(&root));
                return Ok(!star.contains(&pid, &one)?);
            }
            let ev = star.evaluate(&pid)?;
            let contracted = ev.value.contract_to_ring(&root)?;
            Ok(contracted == pid)
        }
    }
}

fn p_is_maximal(p: &PrimeIdeal) -> bool {
    match p.domain() {
        Domain::Int | Domain::Quad { .. } | Domain::RatPoly => !p.is_zero(),
        Domain::IntPoly => p.height() == 2,
        _ => false,
    }
}

/// ★ ↦ ★_P with the spectral localization materialized when available.
pub fn localize_op(star: &StarOp, p: &PrimeIdeal) -> Result<StarOp> {
    StarOp::ascend(star.clone(), p.clone())
}

/// For ★ = ★_Δ, the finite spectral operation on D_P over
/// Δ_P = {Q ∈ Δ : Q ⊆ P}: the candidate the ascended operation is compared
/// against in the local–global checks.
pub fn materialized_localization(star: &StarOp, p: &PrimeIdeal) -> Result<Option<StarOp>> {
    let StarOp::Spectral { primes, .. } = star else {
        return Ok(None);
    };
    if p.is_zero() {
        return Ok(None);
    }
    let below: Vec<PrimeIdeal> = primes
        .iter()
        .filter(|q| !q.is_zero() && p.contains_prime(q))
        .cloned()
        .collect();
    let root = Domain::localized(star.root().base().clone(), vec![p.clone()])?;
    if below.is_empty() {
        return Ok(Some(StarOp::Trivial { root }));
    }
    Ok(Some(StarOp::spectral(&root, below)?))
}

fn fmt_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for StarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StarOp::Identity { .. } => write!(f, "d"),
            StarOp::Trivial { .. } => write!(f, "e"),
            StarOp::Divisorial { .. } => write!(f, "v"),
            StarOp::OverringExt { target, .. } => write!(f, "ext({target})"),
            StarOp::Spectral { primes, .. } => {
                write!(f, "spectral(")?;
                fmt_list(f, primes)?;
                write!(f, ")")
            }
            StarOp::Ascend { inner, p, .. } => write!(f, "ascend({inner}, {p})"),
            StarOp::Glue { parts, .. } => {
                write!(f, "glue(")?;
                for (i, (p, s)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({p}, {s})")?;
                }
                write!(f, ")")
            }
            StarOp::EabClosure { inner, candidates } => {
                write!(f, "eab({inner}; ")?;
                fmt_list(f, candidates)?;
                write!(f, ")")
            }
            StarOp::SpectralClosureOf { inner, candidates } => {
                write!(f, "tilde({inner}; ")?;
                fmt_list(f, candidates)?;
                write!(f, ")")
            }
            StarOp::ValuationFamily { primes, .. } => {
                write!(f, "vfam(")?;
                fmt_list(f, primes)?;
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::parse_value;

    fn val(d: &Domain, s: &str) -> Value {
        parse_value(s, d).unwrap()
    }

    fn ideal(d: &Domain, gens: &[&str]) -> FractionalIdeal {
        let vals: Vec<Value> = gens.iter().map(|g| val(d, g)).collect();
        FractionalIdeal::from_gens(d, &vals).unwrap()
    }

    fn prime(d: &Domain, gens: &[&str]) -> PrimeIdeal {
        let vals: Vec<Value> = gens.iter().map(|g| val(d, g)).collect();
        PrimeIdeal::new(d, &vals).unwrap()
    }

    #[test]
    fn identity_and_trivial() {
        let z = Domain::Int;
        let e = ideal(&z, &["4", "6"]);
        let d = StarOp::identity(&z);
        let ev = d.evaluate(&e).unwrap();
        assert!(ev.value.eq_module(&Closure::Fg(e.clone())));
        assert_eq!(ev.exactness, Exactness::Exact);

        let t = StarOp::trivial(&z);
        assert!(matches!(t.evaluate(&e).unwrap().value, Closure::WholeField));
        assert!(t.contains(&e, &val(&z, "1/7")).unwrap());
    }

    #[test]
    fn spectral_over_integers() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let star = StarOp::spectral(&z, vec![p2, p3]).unwrap();
        let one = FractionalIdeal::one(&z);
        let ev = star.evaluate(&one).unwrap();
        // ℤ^{★_Δ} = ℤ_(2) ∩ ℤ_(3): contains 1/5 but not 1/2.
        assert!(ev.value.contains_value(&val(&z, "1/5")));
        assert!(!ev.value.contains_value(&val(&z, "1/2")));

        let six = ideal(&z, &["6"]);
        let ev6 = star.evaluate(&six).unwrap();
        assert!(ev6.value.contains_value(&val(&z, "6/35")));
        assert!(!ev6.value.contains_value(&val(&z, "2")));
    }

    #[test]
    fn divisorial_over_int_poly() {
        let zy = Domain::IntPoly;
        let m = ideal(&zy, &["Y", "3"]);
        let v = StarOp::divisorial(&zy);
        let ev = v.evaluate(&m).unwrap();
        // (3, Y) is divisorially closed to the whole ring: (D : (3,Y)) = D.
        assert!(ev.value.eq_module(&Closure::Fg(FractionalIdeal::one(&zy))));

        // principal ideals are divisorial
        let p = ideal(&zy, &["2*Y"]);
        assert!(v.evaluate(&p).unwrap().value.eq_module(&Closure::Fg(p.clone())));
    }

    #[test]
    fn overring_extension() {
        let zy = Domain::IntPoly;
        let qy = Domain::RatPoly;
        let star = StarOp::overring_ext(&zy, &qy).unwrap();
        let m = ideal(&zy, &["Y", "3"]);
        let ev = star.evaluate(&m).unwrap();
        // 3 is a unit in ℚ[Y], so (3, Y)·ℚ[Y] is the unit ideal of ℚ[Y]
        assert!(ev.value.eq_module(&Closure::Fg(FractionalIdeal::one(&qy))));

        let m2 = ideal(&zy, &["2*Y", "Y*Y"]);
        let ev2 = star.evaluate(&m2).unwrap();
        assert!(ev2.value.contains_value(&val(&qy, "Y")));
        assert!(!ev2.value.contains_value(&val(&qy, "1")));

        assert!(StarOp::overring_ext(&qy, &zy).is_err());
    }

    #[test]
    fn ascend_to_localization() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let star = StarOp::spectral(&z, vec![p2.clone(), p3.clone()]).unwrap();
        let up = StarOp::ascend(star, p2.clone()).unwrap();
        let loc = Domain::localized(z.clone(), vec![p2]).unwrap();
        assert_eq!(up.root(), &loc);

        // on D_(2)-modules the (3)-term is the whole field: ★ acts as d.
        let e = FractionalIdeal::from_gens(&loc, &[val(&z, "6")]).unwrap();
        let ev = up.evaluate(&e).unwrap();
        assert!(ev.value.eq_module(&Closure::Fg(e.clone())));

        // ascending the divisorial operation collapses to K (zero conductor)
        let v = StarOp::divisorial(&z);
        let vp = StarOp::ascend(v, prime(&z, &["3"])).unwrap();
        let loc3 = Domain::localized(z.clone(), vec![prime(&z, &["3"])]).unwrap();
        let e3 = FractionalIdeal::from_gens(&loc3, &[val(&z, "3")]).unwrap();
        assert!(matches!(vp.evaluate(&e3).unwrap().value, Closure::WholeField));
    }

    #[test]
    fn glue_identity_components() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let l2 = Domain::localized(z.clone(), vec![p2.clone()]).unwrap();
        let l3 = Domain::localized(z.clone(), vec![p3.clone()]).unwrap();
        let star = StarOp::glue(
            &z,
            vec![
                (p2, StarOp::identity(&l2)),
                (p3, StarOp::identity(&l3)),
            ],
        )
        .unwrap();
        let e = ideal(&z, &["6"]);
        let ev = star.evaluate(&e).unwrap();
        assert_eq!(ev.exactness, Exactness::Exact);
        // 6·(ℤ_(2) ∩ ℤ_(3)): contains 6/5, misses 2 and 3.
        assert!(ev.value.contains_value(&val(&z, "6/5")));
        assert!(!ev.value.contains_value(&val(&z, "2")));
        assert!(!ev.value.contains_value(&val(&z, "3")));
    }

    #[test]
    fn eab_closure_lower_bound() {
        let z = Domain::Int;
        // over a PID everything is already cancellative: ★_a for d is d on
        // integral ideals, and the fixpoint should stabilize immediately.
        let d = StarOp::identity(&z);
        let h = ideal(&z, &["2", "3"]);
        let star = StarOp::eab_closure(d, vec![h]).unwrap();
        let e = ideal(&z, &["4"]);
        let ev = star.evaluate(&e).unwrap();
        assert_eq!(ev.exactness, Exactness::LowerBound);
        assert!(ev.value.eq_module(&Closure::Fg(e.clone())));
    }

    #[test]
    fn eab_exact_over_valuation_family() {
        let zw = Domain::quadratic(-5).unwrap();
        let p = prime(&zw, &["2", "1+w"]);
        let star_v = StarOp::valuation_family(&zw, vec![p.clone()]).unwrap();
        let e = ideal(&zw, &["2", "1+w"]);
        let inner = StarOp::eab_closure(star_v, vec![e.clone()]).unwrap();
        let ev = inner.evaluate(&e).unwrap();
        assert_eq!(ev.exactness, Exactness::Exact);
        // E·V_P = P·D_P
        assert!(ev.value.contains_value(&val(&zw, "1+w")));
        assert!(!ev.value.contains_value(&val(&zw, "1")));
    }

    #[test]
    fn valuation_family_rejects_non_dvr() {
        let zy = Domain::IntPoly;
        let m = prime(&zy, &["2", "Y"]);
        assert!(StarOp::valuation_family(&zy, vec![m]).is_err());
        let h1 = prime(&zy, &["Y"]);
        assert!(StarOp::valuation_family(&zy, vec![h1]).is_ok());
    }

    #[test]
    fn quasi_star_primes_spectral() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let p5 = prime(&z, &["5"]);
        let star = StarOp::spectral(&z, vec![p2.clone(), p3.clone()]).unwrap();
        assert!(is_quasi_star_prime(&star, &p2).unwrap());
        assert!(is_quasi_star_prime(&star, &p3).unwrap());
        assert!(!is_quasi_star_prime(&star, &p5).unwrap());
    }

    #[test]
    fn quasi_star_primes_divisorial() {
        let zw = Domain::quadratic(-5).unwrap();
        let p = prime(&zw, &["2", "1+w"]);
        let v = StarOp::divisorial(&zw);
        // P = (2, 1+w) is divisorial in ℤ[√−5], hence quasi-v-prime.
        assert!(is_quasi_star_prime(&v, &p).unwrap());

        // over ℤ[Y] the height-two maximal (2, Y) has (2,Y)^v = D: not quasi.
        let zy = Domain::IntPoly;
        let m = prime(&zy, &["2", "Y"]);
        let vzy = StarOp::divisorial(&zy);
        assert!(!is_quasi_star_prime(&vzy, &m).unwrap());
        let h = prime(&zy, &["Y"]);
        assert!(is_quasi_star_prime(&vzy, &h).unwrap());
    }

    #[test]
    fn tilde_closure_uses_verified_candidates() {
        let zy = Domain::IntPoly;
        let m = prime(&zy, &["2", "Y"]);
        let h = prime(&zy, &["Y"]);
        let v = StarOp::divisorial(&zy);
        // (2,Y) fails quasi-v-primality, (Y) passes: ★̃ sees only (Y).
        let tilde = StarOp::spectral_closure_of(v, vec![m, h.clone()]).unwrap();
        let e = ideal(&zy, &["2*Y", "Y*Y"]);
        let ev = tilde.evaluate(&e).unwrap();
        assert_eq!(ev.exactness, Exactness::FiniteApproximation);
        // E·D_(Y) = Y·D_(Y) ∋ Y/2 (2 is a unit at (Y))
        assert!(ev.value.contains_value(&val(&zy, "Y/2")));
        assert!(!ev.value.contains_value(&val(&zy, "1")));
    }

    #[test]
    fn ascended_spectral_products_refused_when_infinite() {
        let zy = Domain::IntPoly;
        let p1 = prime(&zy, &["2", "Y"]);
        let p2 = prime(&zy, &["3", "Y"]);
        let star = StarOp::spectral(&zy, vec![p1.clone(), p2.clone()]).unwrap();
        let up = StarOp::ascend(star, p1.clone()).unwrap();
        let loc = Domain::localized(zy.clone(), vec![p1]).unwrap();
        let e = FractionalIdeal::from_gens(&loc, &[val(&zy, "Y")]).unwrap();
        assert!(matches!(
            up.evaluate(&e),
            Err(Error::NotFgRepresentable(_))
        ));
        // membership stays exact: Y/5 ∈ Y·D_{P₁}D_{P₂}-term (5 a unit), and
        // is in every other term, so it lies in the ascended closure.
        assert!(up.contains(&e, &val(&zy, "Y/5")).unwrap());
        // 1 does not: (Y : 1) = (Y) is contained in the surviving prime (Y)...
        // rather: 1 ∉ Y·D_{(2,Y)} already.
        assert!(!up.contains(&e, &val(&zy, "1")).unwrap());
    }

    #[test]
    fn materialized_spectral_localization() {
        let zy = Domain::IntPoly;
        let p1 = prime(&zy, &["2", "Y"]);
        let p2 = prime(&zy, &["3", "Y"]);
        let hy = prime(&zy, &["Y"]);
        let star = StarOp::spectral(&zy, vec![p1.clone(), p2, hy]).unwrap();
        let mat = materialized_localization(&star, &p1).unwrap().unwrap();
        // Δ_{P₁} = {P₁, (Y)}
        match &mat {
            StarOp::Spectral { primes, .. } => assert_eq!(primes.len(), 2),
            other => panic!("expected a spectral operation, got {other}"),
        }
        let loc = Domain::localized(zy.clone(), vec![p1]).unwrap();
        let e = FractionalIdeal::from_gens(&loc, &[val(&zy, "Y")]).unwrap();
        let ev = mat.evaluate(&e).unwrap();
        assert!(ev.value.contains_value(&val(&zy, "Y/5")));
        assert!(ev.value.contains_value(&val(&zy, "Y/3")));
        assert!(!ev.value.contains_value(&val(&zy, "1/2")));
    }

    #[test]
    fn display_round_trip_shapes() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let star = StarOp::spectral(&z, vec![p2.clone()]).unwrap();
        assert_eq!(star.to_string(), "spectral((2))");
        let up = StarOp::ascend(star, p2).unwrap();
        assert_eq!(up.to_string(), "ascend(spectral((2)), (2))");
        assert_eq!(StarOp::divisorial(&z).to_string(), "v");
    }
}
