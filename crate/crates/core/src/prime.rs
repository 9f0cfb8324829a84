//! Certified prime ideals. A `PrimeIdeal` carries a proof sketch of
//! primality appropriate to its backend: a prime element over a PID, a
//! residue-field check over a quadratic order (index-prime or inert), or a
//! triangular check over ℤ[Y] (prime constant, primitive irreducible, or a
//! maximal pair (p, g) with g irreducible mod p). User-asserted primes are
//! accepted but flagged, and every report that relies on one says so.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::ints;
use crate::arith::upoly::{self, UPoly};
use crate::domain::Domain;
use crate::element::Value;
use crate::ideal::{FractionalIdeal, Repr};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The zero ideal of a domain.
    Zero,
    /// Generated by a prime element of a PID backend.
    PidPrimeElement,
    /// Quadratic order: residue ring is a finite field (index a prime, or
    /// the inert case (q) with w²−d irreducible mod q).
    QuadResidualFieldCheck,
    /// ℤ[Y]: (p), (f) primitive irreducible, or (p, g) with g irreducible
    /// modulo p.
    PolyTriangularCheck,
    /// Taken on faith from the caller; reports must surface this.
    UserAsserted,
}

#[derive(Debug, Clone)]
pub struct PrimeIdeal {
    domain: Domain,
    /// None exactly for the zero prime.
    ideal: Option<FractionalIdeal>,
    cert: Certificate,
    height: u32,
}

impl PrimeIdeal {
    pub fn zero(domain: &Domain) -> PrimeIdeal {
        PrimeIdeal {
            domain: domain.clone(),
            ideal: None,
            cert: Certificate::Zero,
            height: 0,
        }
    }

    /// Build and certify a nonzero prime from generators.
    pub fn new(domain: &Domain, gens: &[Value]) -> Result<PrimeIdeal> {
        Self::build(domain, gens, false)
    }

    /// Accept a proper integral ideal as prime on the caller's word.
    pub fn asserted(domain: &Domain, gens: &[Value]) -> Result<PrimeIdeal> {
        Self::build(domain, gens, true)
    }

    fn build(domain: &Domain, gens: &[Value], asserted: bool) -> Result<PrimeIdeal> {
        if matches!(domain, Domain::Localized(_)) {
            return Err(Error::UnsupportedBackend(
                "primes of a localized ring are represented by base primes below the localizing set"
                    .into(),
            ));
        }
        if gens.iter().all(|g| g.is_zero()) {
            return Ok(PrimeIdeal::zero(domain));
        }
        let ideal = FractionalIdeal::from_gens(domain, gens)?;
        if !ideal.is_integral() {
            return Err(Error::NotPrimeCertified(format!(
                "{ideal} is not contained in {domain}"
            )));
        }
        if ideal.is_whole_ring() {
            return Err(Error::NotPrimeCertified(format!(
                "{ideal} is the whole ring"
            )));
        }
        if asserted {
            let height = Self::height_guess(domain, &ideal);
            return Ok(PrimeIdeal {
                domain: domain.clone(),
                ideal: Some(ideal),
                cert: Certificate::UserAsserted,
                height,
            });
        }
        let (cert, height) = Self::certify(domain, &ideal)?;
        Ok(PrimeIdeal {
            domain: domain.clone(),
            ideal: Some(ideal),
            cert,
            height,
        })
    }

    fn certify(domain: &Domain, ideal: &FractionalIdeal) -> Result<(Certificate, u32)> {
        match (domain, ideal.repr()) {
            (Domain::Int, Repr::Principal(g)) => {
                let q = match g {
                    Value::Rat(q) => q,
                    _ => unreachable!(),
                };
                debug_assert!(q.is_integer());
                if ints::is_prime(q.numer()) {
                    Ok((Certificate::PidPrimeElement, 1))
                } else {
                    Err(Error::NotPrimeCertified(format!(
                        "{} is not a prime integer",
                        q.numer()
                    )))
                }
            }
            (Domain::RatPoly, Repr::Principal(g)) => {
                let (num, den) = match g {
                    Value::Fun { num, den } => (num.clone(), den.clone()),
                    _ => unreachable!(),
                };
                debug_assert!(den.is_one());
                let prim = num.primitive_part();
                if prim.degree().unwrap_or(0) >= 1 && upoly::irreducible_zy(&prim) {
                    Ok((Certificate::PidPrimeElement, 1))
                } else {
                    Err(Error::NotPrimeCertified(format!(
                        "{ideal} has a reducible generator over the rationals"
                    )))
                }
            }
            (Domain::Quad { d }, Repr::QuadLat { den, lat }) => {
                debug_assert!(den.is_one());
                let idx = lat.det();
                if ints::is_prime(&idx) {
                    return Ok((Certificate::QuadResidualFieldCheck, 1));
                }
                let q = idx.sqrt();
                if &q * &q == idx && ints::is_prime(&q) && lat.a == q && lat.b.is_zero() && lat.c == q {
                    // residues form F_q[w]/(w²−d); field iff w²−d irreducible
                    let wpoly = UPoly::from_ints(&[-d, 0, 1]);
                    if upoly::irreducible_mod_p(&wpoly, &q) {
                        return Ok((Certificate::QuadResidualFieldCheck, 1));
                    }
                }
                Err(Error::NotPrimeCertified(format!(
                    "{ideal} has composite residue index {idx} in {domain}"
                )))
            }
            (Domain::IntPoly, Repr::Poly { num, den, stairs }) => {
                debug_assert!(den.is_one());
                let steps: Vec<UPoly> = stairs
                    .steps()
                    .iter()
                    .map(|s| s.mul(num))
                    .collect();
                match steps.len() {
                    1 => {
                        let f = &steps[0];
                        match f.degree() {
                            None => unreachable!("zero step"),
                            Some(0) => {
                                let c = f.coeff(0).numer().clone();
                                if ints::is_prime(&c) {
                                    Ok((Certificate::PolyTriangularCheck, 1))
                                } else {
                                    Err(Error::NotPrimeCertified(format!(
                                        "{c} is not a prime integer"
                                    )))
                                }
                            }
                            Some(_) => {
                                if f.content_int().is_one() && upoly::irreducible_zy(f) {
                                    Ok((Certificate::PolyTriangularCheck, 1))
                                } else {
                                    Err(Error::NotPrimeCertified(format!(
                                        "{ideal} is not generated by a primitive irreducible"
                                    )))
                                }
                            }
                        }
                    }
                    2 => {
                        let (c, g) = (&steps[0], &steps[1]);
                        if c.degree() != Some(0) {
                            return Err(Error::NotPrimeCertified(format!(
                                "{ideal} is not triangular"
                            )));
                        }
                        let p = c.coeff(0).numer().clone();
                        if ints::is_prime(&p) && upoly::irreducible_mod_p(g, &p) {
                            Ok((Certificate::PolyTriangularCheck, 2))
                        } else {
                            Err(Error::NotPrimeCertified(format!(
                                "({p}, {g:?}) fails the residue irreducibility check"
                            )))
                        }
                    }
                    _ => Err(Error::NotPrimeCertified(format!(
                        "{ideal} needs more than two staircase steps, so it is not prime"
                    ))),
                }
            }
            (Domain::Rat | Domain::QuadField { .. } | Domain::RatFunc, _) => {
                Err(Error::NotPrimeCertified(format!(
                    "{domain} is a field: its only prime is (0)"
                )))
            }
            _ => unreachable!("representation mismatch"),
        }
    }

    fn height_guess(domain: &Domain, ideal: &FractionalIdeal) -> u32 {
        match (domain, ideal.repr()) {
            (Domain::IntPoly, Repr::Poly { stairs, .. }) => {
                if stairs.steps().len() >= 2 {
                    2
                } else {
                    1
                }
            }
            _ => 1,
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn certificate(&self) -> &Certificate {
        &self.cert
    }

    pub fn is_asserted(&self) -> bool {
        self.cert == Certificate::UserAsserted
    }

    pub fn is_zero(&self) -> bool {
        self.ideal.is_none()
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// The underlying integral ideal; panics on the zero prime.
    pub fn ideal(&self) -> &FractionalIdeal {
        self.ideal
            .as_ref()
            .expect("the zero prime has no finitely generated representation")
    }

    pub fn contains(&self, v: &Value) -> bool {
        match &self.ideal {
            None => v.is_zero(),
            Some(i) => i.contains_value(v),
        }
    }

    pub fn contains_prime(&self, other: &PrimeIdeal) -> bool {
        if self.domain != other.domain {
            return false;
        }
        match (&self.ideal, &other.ideal) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.contains_ideal(b),
        }
    }

    /// Deterministic ordering key: height, then canonical printing.
    pub fn sort_key(&self) -> String {
        format!("{:02}|{}", self.height, self)
    }

    /// Is x in the local ring D_P? Exact: the conductor (D : x) must not
    /// be contained in P.
    pub fn element_in_local_ring(&self, x: &Value) -> Result<bool> {
        if x.is_zero() {
            return Ok(true);
        }
        let one = FractionalIdeal::one(&self.domain);
        let xi = FractionalIdeal::from_gens(&self.domain, std::slice::from_ref(x))?;
        let cond = one.colon(&xi)?.intersect(&one)?;
        match &self.ideal {
            None => Ok(true), // D_(0) = K contains everything
            Some(p) => Ok(!p.contains_ideal(&cond)),
        }
    }

    /// Discrete valuation of a field element at a height-one prime of a
    /// Dedekind or factorial backend. Height-two primes of ℤ[Y] do not give
    /// valuations and are rejected.
    pub fn valuation(&self, x: &Value) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal("valuation of zero".into()));
        }
        let p = self
            .ideal
            .as_ref()
            .ok_or_else(|| Error::UnsupportedBackend("zero prime has no valuation".into()))?;
        match &self.domain {
            Domain::Int => {
                let q = match x {
                    Value::Rat(q) => q.clone(),
                    _ => unreachable!(),
                };
                let pg = match &p.canonical_gens()[0] {
                    Value::Rat(r) => r.numer().clone(),
                    _ => unreachable!(),
                };
                Ok(int_multiplicity(q.numer(), &pg) - int_multiplicity(q.denom(), &pg))
            }
            Domain::RatPoly | Domain::IntPoly => {
                let (num, den) = match x {
                    Value::Fun { num, den } => (num.clone(), den.clone()),
                    _ => unreachable!(),
                };
                if self.height != 1 {
                    return Err(Error::UnsupportedBackend(
                        "height-two primes of ZY do not define discrete valuations".into(),
                    ));
                }
                let pg = prime_generator_poly(p);
                Ok(poly_multiplicity(&num, &pg) - poly_multiplicity(&den, &pg))
            }
            Domain::Quad { .. } => {
                let (xi, den) = quad_clear(x, &self.domain);
                let vnum = self.quad_valuation_of_ideal(&xi)?;
                let vden = if den.is_one() {
                    0
                } else {
                    let di = FractionalIdeal::from_gens(
                        &self.domain,
                        &[Value::from_rational(
                            crate::element::field_kind(&self.domain),
                            BigRational::from(den),
                        )],
                    )?;
                    self.quad_valuation_of_ideal(&di)?
                };
                Ok(vnum - vden)
            }
            _ => Err(Error::UnsupportedBackend(format!(
                "valuations are not defined over {}",
                self.domain
            ))),
        }
    }

    fn quad_valuation_of_ideal(&self, j: &FractionalIdeal) -> Result<i64> {
        let p = self.ideal();
        let mut k: i64 = 0;
        let mut pk = FractionalIdeal::one(&self.domain);
        loop {
            let next = pk.product(p)?;
            if next.contains_ideal(j) {
                k += 1;
                pk = next;
                if k > 10_000 {
                    return Err(Error::UnsupportedBackend("valuation runaway".into()));
                }
            } else {
                return Ok(k);
            }
        }
    }
}

fn int_multiplicity(n: &num_bigint::BigInt, p: &num_bigint::BigInt) -> i64 {
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

fn poly_multiplicity(f: &UPoly, g: &UPoly) -> i64 {
    if g.degree() == Some(0) {
        // constant prime p: multiplicity of p in the integer content
        let p = g.coeff(0).numer().abs();
        return int_multiplicity(&f.content_int(), &p);
    }
    // g primitive of positive degree: quotients stay integral (Gauss) and
    // each division drops the degree, so this terminates.
    let mut f = f.clone();
    let mut v = 0;
    while let Some(q) = f.exact_div(g) {
        f = q;
        v += 1;
    }
    v
}

/// Generator of a height-one prime of ℤ[Y] or ℚ[Y] as an integer polynomial.
fn prime_generator_poly(p: &FractionalIdeal) -> UPoly {
    match p.repr() {
        Repr::Principal(Value::Fun { num, .. }) => num.clone(),
        Repr::Poly { num, stairs, .. } => stairs.steps()[0].mul(num),
        _ => unreachable!("height-one polynomial prime"),
    }
}

fn quad_clear(x: &Value, domain: &Domain) -> (FractionalIdeal, num_bigint::BigInt) {
    let (num, den) = x.split_fraction(domain);
    let xi = FractionalIdeal::from_gens(domain, &[num]).expect("nonzero");
    let d = match den {
        Value::Quad { x, .. } => x.numer().clone(),
        _ => unreachable!("quadratic denominators are rational integers"),
    };
    (xi, d)
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain
            && match (&self.ideal, &other.ideal) {
                (None, None) => true,
                (Some(a), Some(b)) => a == b,
                _ => false,
            }
    }
}

impl Eq for PrimeIdeal {}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ideal {
            None => write!(f, "(0)"),
            Some(i) => {
                write!(f, "(")?;
                for (k, g) in i.canonical_gens().iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

// Needed so primes can live in sorted/deduped domain descriptors.
impl std::hash::Hash for PrimeIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.domain.hash(state);
        self.sort_key().hash(state);
    }
}
