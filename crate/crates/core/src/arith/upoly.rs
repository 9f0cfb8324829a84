//! Dense univariate polynomials over ℚ, with the ℤ[Y]-specific operations the
//! ideal layer needs: integer content, primitive parts, gcd in ℤ[Y], exact
//! division, and factorization into irreducibles by Kronecker interpolation.
//! Also minimal F_p polynomial arithmetic for residue-field certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ints;

/// Dense coefficient list, ascending degree, no trailing zeros.
/// The empty list is the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly(pub Vec<BigRational>);

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = UPoly(vec![c]);
        p.trim();
        p
    }

    pub fn var() -> Self {
        UPoly(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(cs: Vec<BigRational>) -> Self {
        let mut p = UPoly(cs);
        p.trim();
        p
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let mut cs = Vec::with_capacity(n);
        for i in 0..n {
            cs.push(self.coeff(i) + other.coeff(i));
        }
        UPoly::from_coeffs(cs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut cs = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                cs[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(cs)
    }

    pub fn scale(&self, c: &BigRational) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|a| a * c).collect())
    }

    /// Multiply by Y^k.
    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut cs = vec![BigRational::zero(); k];
        cs.extend(self.0.iter().cloned());
        UPoly(cs)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Quotient and remainder over ℚ (field division).
    pub fn divrem(&self, den: &UPoly) -> (UPoly, UPoly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.degree().unwrap();
        let lead = den.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = UPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap() / &lead;
            let t = UPoly::constant(c).shift(rd - dd);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(den));
        }
        (quo, rem)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    /// All coefficients integers?
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// lcm of coefficient denominators (1 for the zero polynomial).
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in &self.0 {
            l = ints::lcm(&l, c.denom());
        }
        l
    }

    /// gcd of the integer coefficients; requires an integral polynomial.
    /// Zero polynomial has content 0.
    pub fn content_int(&self) -> BigInt {
        debug_assert!(self.is_integral());
        ints::gcd_all(self.0.iter().map(|c| c.numer()))
    }

    /// Content over ℤ of an arbitrary rational-coefficient polynomial:
    /// the positive rational c with self = c * primitive-integral.
    pub fn content_rat(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let l = self.denominator_lcm();
        let scaled = self.scale(&BigRational::from(l.clone()));
        BigRational::new(scaled.content_int(), l)
    }

    /// Primitive integral part with positive leading coefficient
    /// (self = content_rat * sign * primitive). Zero maps to zero.
    pub fn primitive_part(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let c = self.content_rat();
        let p = self.scale(&c.recip());
        if p.leading().unwrap().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    /// Monic gcd over ℚ[Y]; gcd(0,0) = 0.
    pub fn gcd_q(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = std::mem::replace(&mut b, r);
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading().unwrap().clone();
        a.scale(&lead.recip())
    }

    /// gcd in ℤ[Y] of integral polynomials: gcd of contents times the
    /// primitive gcd. Positive leading coefficient.
    pub fn gcd_zy(&self, other: &UPoly) -> UPoly {
        debug_assert!(self.is_integral() && other.is_integral());
        if self.is_zero() {
            return other.primitive_part().scale(&BigRational::from(other.content_int()));
        }
        if other.is_zero() {
            return self.primitive_part().scale(&BigRational::from(self.content_int()));
        }
        let c = self.content_int().gcd(&other.content_int());
        let g = self.gcd_q(other).primitive_part();
        g.scale(&BigRational::from(c))
    }

    /// Exact division in ℚ[Y]; None if the remainder is nonzero.
    pub fn exact_div(&self, den: &UPoly) -> Option<UPoly> {
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        let (q, r) = self.divrem(den);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Derivative.
    pub fn derivative(&self) -> UPoly {
        if self.0.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from(BigInt::from(i)))
                .collect(),
        )
    }
}

/// Helper: convert an integral UPoly into BigInt coefficients.
pub fn int_coeffs(p: &UPoly) -> Vec<BigInt> {
    debug_assert!(p.is_integral());
    p.0.iter().map(|c| c.numer().clone()).collect()
}

/// Lagrange interpolation through (x_i, y_i); points must be distinct.
fn interpolate(points: &[(BigRational, BigRational)]) -> UPoly {
    let mut acc = UPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = UPoly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            // (Y - xj) / (xi - xj)
            let denom = xi - xj;
            let lin = UPoly::from_coeffs(vec![-xj.clone(), BigRational::one()]);
            term = term.mul(&lin).scale(&denom.recip());
        }
        acc = acc.add(&term);
    }
    acc
}

/// Factor a *primitive* integral polynomial of degree >= 1 into primitive
/// irreducible factors (positive leading coefficients), by Kronecker's
/// interpolation method. Exact and complete; intended for small degrees.
pub fn factor_primitive(f: &UPoly) -> Vec<UPoly> {
    debug_assert!(f.is_integral());
    debug_assert_eq!(f.content_int(), BigInt::one(), "factor_primitive wants primitive input");
    let n = f.degree().expect("nonzero");
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![f.primitive_part()];
    }
    // Sample points 0, 1, -1, 2, -2, ... If f has a rational root among them
    // we split off the linear factor immediately.
    let sample = |k: usize| -> BigRational {
        let m = (k + 1) / 2;
        if k % 2 == 1 {
            rat(m as i64)
        } else {
            rat(-(m as i64))
        }
    };
    for d in 1..=n / 2 {
        let mut pts: Vec<BigRational> = Vec::new();
        let mut vals: Vec<BigInt> = Vec::new();
        let mut k = 0usize;
        while pts.len() < d + 1 {
            let x = sample(k);
            k += 1;
            let v = f.eval(&x);
            if v.is_zero() {
                // root: (Y - x) over ℚ; clear denominators.
                let lin = UPoly::from_coeffs(vec![-x.clone(), BigRational::one()]).primitive_part();
                // x integral here, so lin is integral and primitive.
                let rest = f.exact_div(&lin).expect("root divides").primitive_part();
                let mut out = vec![lin];
                out.extend(factor_primitive(&rest));
                out.sort();
                return out;
            }
            pts.push(x);
            vals.push(v.numer().clone());
        }
        // Enumerate candidate value tuples: g(pts[i]) must divide f(pts[i]).
        let divlists: Vec<Vec<BigInt>> = vals
            .iter()
            .map(|v| {
                let ds = ints::divisors(v);
                let mut full = Vec::with_capacity(ds.len() * 2);
                for d in ds {
                    full.push(d.clone());
                    full.push(-d);
                }
                full
            })
            .collect();
        let mut idx = vec![0usize; d + 1];
        'outer: loop {
            // First coordinate positive only (g vs -g symmetry).
            if divlists[0][idx[0]].is_positive() {
                let points: Vec<(BigRational, BigRational)> = (0..=d)
                    .map(|i| (pts[i].clone(), BigRational::from(divlists[i][idx[i]].clone())))
                    .collect();
                let g = interpolate(&points);
                if g.degree() == Some(d) && g.is_integral() {
                    let g = g.primitive_part();
                    if g.degree() == Some(d) {
                        if let Some(h) = f.exact_div(&g) {
                            let h = h.primitive_part();
                            let mut out = factor_primitive(&g);
                            out.extend(factor_primitive(&h));
                            out.sort();
                            return out;
                        }
                    }
                }
            }
            // next tuple
            for i in 0..=d {
                idx[i] += 1;
                if idx[i] < divlists[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    vec![f.primitive_part()]
}

/// Full factorization over ℤ[Y] of a nonzero integral polynomial:
/// (unit sign, integer prime factors with multiplicity, primitive
/// irreducible polynomial factors with multiplicity).
pub fn factor_zy(f: &UPoly) -> (i8, Vec<(BigInt, u32)>, Vec<(UPoly, u32)>) {
    assert!(!f.is_zero());
    debug_assert!(f.is_integral());
    let content = f.content_int();
    let sign = if f.leading().unwrap().is_negative() { -1i8 } else { 1 };
    let prim = f.primitive_part();
    let int_factors = if content.is_one() { Vec::new() } else { ints::factor(&content) };
    let mut poly_factors: Vec<(UPoly, u32)> = Vec::new();
    if prim.degree() != Some(0) {
        let mut fs = factor_primitive(&prim);
        fs.sort();
        for g in fs {
            match poly_factors.iter_mut().find(|(h, _)| *h == g) {
                Some((_, e)) => *e += 1,
                None => poly_factors.push((g, 1)),
            }
        }
    }
    (sign, int_factors, poly_factors)
}

/// Irreducibility in ℤ[Y] for a primitive polynomial of degree >= 1.
pub fn irreducible_zy(f: &UPoly) -> bool {
    if !f.is_integral() || f.degree().map_or(true, |d| d == 0) {
        return false;
    }
    if !f.content_int().is_one() {
        return false;
    }
    factor_primitive(f).len() == 1
}

// ---------------------------------------------------------------------------
// F_p polynomial arithmetic (for certificates "g irreducible mod p").
// ---------------------------------------------------------------------------

/// Coefficients reduced into [0, p), ascending, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpPoly(pub Vec<BigInt>);

impl FpPoly {
    pub fn reduce(coeffs: &[BigInt], p: &BigInt) -> FpPoly {
        let mut cs: Vec<BigInt> = coeffs.iter().map(|c| c.mod_floor(p)).collect();
        while cs.last().is_some_and(|c| c.is_zero()) {
            cs.pop();
        }
        FpPoly(cs)
    }

    pub fn from_upoly(f: &UPoly, p: &BigInt) -> FpPoly {
        FpPoly::reduce(&int_coeffs(f), p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    fn mul(&self, other: &FpPoly, p: &BigInt) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly(Vec::new());
        }
        let mut cs = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                cs[i + j] += a * b;
            }
        }
        FpPoly::reduce(&cs, p)
    }

    fn rem(&self, m: &FpPoly, p: &BigInt) -> FpPoly {
        let md = m.degree().expect("nonzero modulus");
        let inv = mod_inverse(m.0.last().unwrap(), p);
        let mut r = self.0.clone();
        while r.len() > md {
            let lead = r.last().unwrap().clone();
            if lead.is_zero() {
                r.pop();
                continue;
            }
            let c = (lead * &inv).mod_floor(p);
            let off = r.len() - 1 - md;
            for (i, mc) in m.0.iter().enumerate() {
                let v = (&r[off + i] - &c * mc).mod_floor(p);
                r[off + i] = v;
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        FpPoly::reduce(&r, p)
    }

    fn gcd(&self, other: &FpPoly, p: &BigInt) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = std::mem::replace(&mut b, r);
        }
        a
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let (g, u, _) = ints::xgcd(&a.mod_floor(p), p);
    assert!(g.is_one(), "not invertible mod p");
    u.mod_floor(p)
}

/// x^(p^reps) mod m, starting from x (the variable), iterating Frobenius.
fn frobenius_iterate(m: &FpPoly, p: &BigInt, reps: usize) -> FpPoly {
    let mut x = FpPoly::reduce(&[BigInt::zero(), BigInt::one()], p).rem(m, p);
    for _ in 0..reps {
        x = fp_powmod(&x, p, m, p);
    }
    x
}

fn fp_powmod(base: &FpPoly, exp: &BigInt, m: &FpPoly, p: &BigInt) -> FpPoly {
    let mut result = FpPoly::reduce(&[BigInt::one()], p);
    let mut b = base.clone();
    let mut e = exp.clone();
    let two = BigInt::from(2);
    while e.is_positive() {
        if (&e % &two).is_one() {
            result = result.mul(&b, p).rem(m, p);
        }
        b = b.mul(&b, p).rem(m, p);
        e /= &two;
    }
    result
}

/// Rabin irreducibility over F_p for a polynomial of degree >= 1.
pub fn irreducible_mod_p(f: &UPoly, p: &BigInt) -> bool {
    let g = FpPoly::from_upoly(f, p);
    let n = match g.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    let xvar = FpPoly::reduce(&[BigInt::zero(), BigInt::one()], p).rem(&g, p);
    // x^(p^n) == x mod g
    let frob_n = frobenius_iterate(&g, p, n);
    if frob_n != xvar {
        return false;
    }
    // gcd(x^(p^(n/q)) - x, g) == 1 for each prime q | n
    let mut qs: Vec<usize> = Vec::new();
    let mut nn = n;
    let mut q = 2;
    while q * q <= nn {
        if nn % q == 0 {
            qs.push(q);
            while nn % q == 0 {
                nn /= q;
            }
        }
        q += 1;
    }
    if nn > 1 {
        qs.push(nn);
    }
    for q in qs {
        let fr = frobenius_iterate(&g, p, n / q);
        let mut cs = fr.0.clone();
        while cs.len() < 2 {
            cs.push(BigInt::zero());
        }
        cs[1] -= BigInt::one();
        let diff = FpPoly::reduce(&cs, p);
        let gg = diff.gcd(&g, p);
        if gg.degree() != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_ints(cs)
    }

    #[test]
    fn divrem_roundtrip() {
        let f = p(&[3, 0, 1, 2]); // 2Y^3 + Y^2 + 3
        let g = p(&[1, 1]); // Y + 1
        let (q, r) = f.divrem(&g);
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree());
    }

    #[test]
    fn gcd_zy_primitive_and_content() {
        // gcd(6Y+6, 4Y^2-4) = 2(Y+1)
        let a = p(&[6, 6]);
        let b = p(&[-4, 0, 4]);
        assert_eq!(a.gcd_zy(&b), p(&[2, 2]));
        // gcd(Y, 3) = 1: coprime despite (Y,3) being a proper ideal
        assert_eq!(p(&[0, 1]).gcd_zy(&p(&[3])), p(&[1]));
    }

    #[test]
    fn kronecker_factors_quadratic() {
        // Y^2 - 1 = (Y-1)(Y+1)
        let f = p(&[-1, 0, 1]);
        let fs = factor_primitive(&f);
        assert_eq!(fs, vec![p(&[-1, 1]), p(&[1, 1])]);
    }

    #[test]
    fn kronecker_keeps_irreducible() {
        assert!(irreducible_zy(&p(&[1, 0, 1]))); // Y^2 + 1
        assert!(irreducible_zy(&p(&[-2, 0, 1]))); // Y^2 - 2
        assert!(irreducible_zy(&p(&[6, 1]))); // Y + 6
        assert!(!irreducible_zy(&p(&[0, 2]))); // 2Y not primitive
        assert!(!irreducible_zy(&p(&[-1, 0, 0, 0, 1]))); // Y^4 - 1
    }

    #[test]
    fn factor_zy_full() {
        // 12Y^2 - 12 = (+1) * 2^2 * 3 * (Y-1)(Y+1)
        let (s, ints_, polys) = factor_zy(&p(&[-12, 0, 12]));
        assert_eq!(s, 1);
        assert_eq!(
            ints_,
            vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]
        );
        assert_eq!(polys, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn cubic_with_higher_degree_factor() {
        // (Y^2+1)(2Y-3) = 2Y^3 - 3Y^2 + 2Y - 3
        let f = p(&[-3, 2, -3, 2]);
        let fs = factor_primitive(&f);
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&p(&[1, 0, 1])));
        assert!(fs.contains(&p(&[-3, 2])));
    }

    #[test]
    fn irreducible_mod_p_examples() {
        let two = BigInt::from(2);
        let three = BigInt::from(3);
        // Y^2 + Y + 1 irreducible mod 2
        assert!(irreducible_mod_p(&p(&[1, 1, 1]), &two));
        // Y^2 + 1 = (Y+1)^2 mod 2
        assert!(!irreducible_mod_p(&p(&[1, 0, 1]), &two));
        // Y^2 + 1 irreducible mod 3
        assert!(irreducible_mod_p(&p(&[1, 0, 1]), &three));
        // Y irreducible mod 3
        assert!(irreducible_mod_p(&p(&[0, 1]), &three));
        // w^2 + 5 mod 3 = w^2 + 2: irreducible mod 3? roots: 0->2, 1->0 ... 1 is a root.
        assert!(!irreducible_mod_p(&p(&[5, 0, 1]), &three));
        // w^2 + 5 mod 11: -5 = 6; squares mod 11: 1,4,9,5,3 -> 6 not a square, irreducible
        assert!(irreducible_mod_p(&p(&[5, 0, 1]), &BigInt::from(11)));
    }
}
