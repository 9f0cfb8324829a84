//! Integer number theory on arbitrary-precision integers: extended gcd,
//! factorization by trial division (desk-scale inputs), primality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Extended gcd: returns (g, u, v) with u*a + v*b = g = gcd(a, b), g >= 0.
pub fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// gcd of a slice; 0 for an empty slice.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    let mut g = BigInt::zero();
    for x in xs {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a * b).abs() / a.gcd(b)
}

/// Deterministic primality for desk-scale integers: trial division.
pub fn is_prime(n: &BigInt) -> bool {
    let n = n.abs();
    if n < BigInt::from(2) {
        return false;
    }
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    if n == two || n == three {
        return true;
    }
    if (&n % &two).is_zero() {
        return false;
    }
    let mut d = three;
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization with multiplicities, ascending. Sign is dropped;
/// |n| must be nonzero. Factoring 1 yields an empty list.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "factor(0)");
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0u32;
    let two = BigInt::from(2);
    while (&n % &two).is_zero() {
        n /= &two;
        e += 1;
    }
    push(two, e, &mut out);
    let mut d = BigInt::from(3);
    while &d * &d <= n {
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        push(d.clone(), e, &mut out);
        d += 2;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Chinese remainder: the class x with x = r1 mod m1, x = r2 mod m2,
/// as (x mod lcm, lcm); None if the congruences conflict. Moduli positive.
pub fn crt(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    assert!(m1.is_positive() && m2.is_positive());
    let (g, u, _) = xgcd(m1, m2);
    let diff = r2 - r1;
    if !(&diff % &g).is_zero() {
        return None;
    }
    let l = lcm(m1, m2);
    // x = r1 + m1 * u * (diff / g)  satisfies both congruences.
    let x = r1 + m1 * u * (diff / &g);
    Some((x.mod_floor(&l), l))
}

/// All positive divisors of |n|, ascending. Intended for small inputs.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        let mut pk = BigInt::one();
        for _ in 0..=e {
            for d in &ds {
                next.push(d * &pk);
            }
            pk *= &p;
        }
        ds = next;
    }
    ds.sort();
    ds
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn xgcd_bezout_identity() {
        for (a, bb) in [(12, 18), (-5, 7), (0, 4), (9, 0), (270, 192)] {
            let (g, u, v) = xgcd(&b(a), &b(bb));
            assert_eq!(g, b(a).gcd(&b(bb)));
            assert_eq!(u * b(a) + v * b(bb), g);
        }
    }

    #[test]
    fn factor_twelve() {
        assert_eq!(factor(&b(12)), vec![(b(2), 2), (b(3), 1)]);
    }

    #[test]
    fn primality_small() {
        let primes: Vec<i64> = (2..60).filter(|n| is_prime(&b(*n))).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn crt_basics() {
        let (x, m) = crt(&b(2), &b(3), &b(3), &b(5)).unwrap();
        assert_eq!((x, m), (b(8), b(15)));
        let (x, m) = crt(&b(1), &b(4), &b(3), &b(6)).unwrap();
        assert_eq!(m, b(12));
        assert_eq!(&x % 4, b(1));
        assert_eq!(&x % 6, b(3));
        assert!(crt(&b(0), &b(4), &b(1), &b(6)).is_none());
    }

    #[test]
    fn divisors_of_36() {
        let ds: Vec<i64> = divisors(&b(36)).iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }
}
