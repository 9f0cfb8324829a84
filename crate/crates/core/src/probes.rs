//! Seeded probe generation: finite stand-ins for "for every module E".
//!
//! Every suite that quantifies over modules draws its probes from here, so
//! a recorded (domain, seed, count) triple reproduces the verdicts exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::upoly::UPoly;
use crate::domain::Domain;
use crate::element::{field_kind, fun_make, FieldKind, Value};
use crate::ideal::FractionalIdeal;
use crate::Result;

#[derive(Debug, Clone)]
pub struct ProbeSet {
    pub domain: Domain,
    pub probes: Vec<FractionalIdeal>,
    pub seed: u64,
    pub recipe: String,
}

impl ProbeSet {
    /// `count` nonzero finitely generated ideals with 1–3 small generators.
    pub fn generate(domain: &Domain, seed: u64, count: usize) -> Result<ProbeSet> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut probes = Vec::with_capacity(count);
        while probes.len() < count {
            let ngens = rng.gen_range(1..=3);
            let gens: Vec<Value> = (0..ngens)
                .map(|_| random_nonzero_value(&mut rng, domain, 9))
                .collect();
            match FractionalIdeal::from_gens(domain, &gens) {
                Ok(i) => probes.push(i),
                Err(_) => continue,
            }
        }
        Ok(ProbeSet {
            domain: domain.clone(),
            probes,
            seed,
            recipe: format!("seeded({seed}) x{count}, 1-3 gens, height<=9"),
        })
    }

    /// Seeded nonzero scalars of the quotient field, for the scaling axiom.
    pub fn scalars(domain: &Domain, seed: u64, count: usize) -> Vec<Value> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ca1a5);
        (0..count)
            .map(|_| random_nonzero_value(&mut rng, domain, 7))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

fn small_rational(rng: &mut ChaCha8Rng, height: i64, allow_fraction: bool) -> BigRational {
    let num = rng.gen_range(-height..=height);
    let den = if allow_fraction && rng.gen_bool(0.3) {
        rng.gen_range(2..=height.max(2))
    } else {
        1
    };
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn small_nonzero_rational(rng: &mut ChaCha8Rng, height: i64, allow_fraction: bool) -> BigRational {
    loop {
        let q = small_rational(rng, height, allow_fraction);
        if q != BigRational::from(BigInt::from(0)) {
            return q;
        }
    }
}

/// A random nonzero element of the domain's quotient field, biased towards
/// integral elements of the base ring.
pub fn random_nonzero_value(rng: &mut ChaCha8Rng, domain: &Domain, height: i64) -> Value {
    match field_kind(domain) {
        FieldKind::Rat => Value::Rat(small_nonzero_rational(rng, height, true)),
        FieldKind::Quad(d) => loop {
            let frac = rng.gen_bool(0.25);
            let x = small_rational(rng, height, frac);
            let y = small_rational(rng, height, frac);
            let v = Value::Quad { d, x, y };
            if !v.is_zero() {
                return v;
            }
        },
        FieldKind::Fun => {
            let deg = rng.gen_range(0..=2);
            let num = loop {
                let coeffs: Vec<BigRational> = (0..=deg)
                    .map(|_| BigRational::from(BigInt::from(rng.gen_range(-height..=height))))
                    .collect();
                let p = UPoly::from_coeffs(coeffs);
                if !p.is_zero() {
                    break p;
                }
            };
            let den = if rng.gen_bool(0.2) {
                // small nonzero denominator: a constant or Y + c
                if rng.gen_bool(0.5) {
                    UPoly::constant(BigRational::from(BigInt::from(
                        rng.gen_range(2..=height.max(2)),
                    )))
                } else {
                    UPoly::from_coeffs(vec![
                        BigRational::from(BigInt::from(rng.gen_range(-3..=3i64))),
                        BigRational::from(BigInt::from(1)),
                    ])
                }
            } else {
                UPoly::one()
            };
            fun_make(num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let z = Domain::Int;
        let a = ProbeSet::generate(&z, 42, 16).unwrap();
        let b = ProbeSet::generate(&z, 42, 16).unwrap();
        assert_eq!(a.probes, b.probes);
        let c = ProbeSet::generate(&z, 43, 16).unwrap();
        assert_ne!(a.probes, c.probes);
    }

    #[test]
    fn probes_cover_all_backends() {
        for d in [
            Domain::Int,
            Domain::quadratic(-5).unwrap(),
            Domain::IntPoly,
            Domain::RatPoly,
        ] {
            let ps = ProbeSet::generate(&d, 7, 8).unwrap();
            assert_eq!(ps.len(), 8);
            for p in &ps.probes {
                assert_eq!(p.domain(), &d);
            }
        }
    }
}
