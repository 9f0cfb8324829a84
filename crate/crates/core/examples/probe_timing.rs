//! Throwaway timing probe for the slow ℤ[Y] intersection path.

use std::time::Instant;

use semistar_core::arith::staircase::Staircase;
use semistar_core::arith::upoly::UPoly;

fn p(cs: &[i64]) -> UPoly {
    UPoly::from_ints(cs)
}

fn main() {
    // probe0 = ideal(1/2 Y^2 + 1/8 Y - 9/8) -> stairs(4Y^2 + Y - 9), den 8
    // probe1 = ideal(5, 4Y + 2)             -> stairs(5, 4Y+2), den 1
    // intersect: a = s1 * (n1*d2) = stairs(4Y^2+Y-9), b = s2 * (n2*d1) = stairs(40, 32Y+16)
    let s1 = Staircase::from_gens(&[p(&[-9, 1, 4])]).unwrap();
    let s2 = Staircase::from_gens(&[p(&[40]), p(&[16, 32])]).unwrap();

    let t0 = Instant::now();
    let meet = s1.intersect(&s2);
    eprintln!("intersect in {:?}", t0.elapsed());
    for s in meet.steps() {
        eprintln!("  step: {s:?}");
    }

    // Sanity: members of the meet lie in both.
    for s in meet.steps() {
        assert!(s1.contains(s) && s2.contains(s), "meet member not in both");
    }

    // Colon through the same path.
    let t0 = Instant::now();
    let c = s2.colon(&s1);
    eprintln!("colon in {:?}: {} steps", t0.elapsed(), c.steps().len());
}
