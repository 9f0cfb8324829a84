//! Canonical strong bases for nonzero finitely generated ideals of ℤ[Y].
//!
//! A basis is a "staircase": polynomials of strictly increasing degree, one
//! per degree at which the leading-coefficient ideal properly grows, with
//! positive leading coefficients, each leading coefficient dividing the ones
//! below it, and all tails reduced to canonical range. Completion inserts
//! both cancellation (S) and gcd (G) combinations of basis pairs, which is
//! what makes reduction-to-zero decide membership: leading-coefficient
//! elimination alone misses consequences like Y ∈ (4, 2Y² + Y).
//!
//! Two ideals are equal iff their staircases are equal, so the basis doubles
//! as a canonical form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::lattice;
use super::upoly::{int_coeffs, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Staircase {
    steps: Vec<UPoly>,
}

fn lc_int(f: &UPoly) -> BigInt {
    f.leading().expect("nonzero").numer().clone()
}

fn normalize_sign(f: UPoly) -> UPoly {
    if f.leading().is_some_and(|c| c.is_negative()) {
        f.neg()
    } else {
        f
    }
}

impl Staircase {
    /// Canonical basis from arbitrary integral generators; None if the ideal
    /// is zero.
    pub fn from_gens(gens: &[UPoly]) -> Option<Staircase> {
        let mut work: Vec<UPoly> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                debug_assert!(g.is_integral(), "staircase wants integral generators");
                normalize_sign(g.clone())
            })
            .collect();
        if work.is_empty() {
            return None;
        }
        let mut basis: Vec<UPoly> = Vec::new();
        let mut guard = 0usize;
        while let Some(f) = work.pop() {
            guard += 1;
            assert!(guard < 100_000, "staircase completion runaway");
            let r = remainder_against(&f, &basis, None);
            if r.is_zero() {
                continue;
            }
            let r = normalize_sign(r);
            // Pair combinations with the existing basis keep the basis strong.
            for g in &basis {
                let (s, gc) = pair_polys(&r, g);
                if !s.is_zero() {
                    work.push(s);
                }
                if let Some(gc) = gc {
                    work.push(gc);
                }
            }
            basis.push(r);
            basis.sort_by_key(|g| (g.degree().unwrap(), lc_int(g)));
        }
        // Minimize: drop members that reduce to zero against the others.
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..basis.len() {
                let r = remainder_against(&basis[i], &basis, Some(i));
                if r != basis[i] {
                    changed = true;
                    if r.is_zero() {
                        basis.remove(i);
                    } else {
                        basis[i] = normalize_sign(r);
                        basis.sort_by_key(|g| (g.degree().unwrap(), lc_int(g)));
                    }
                    break;
                }
            }
        }
        basis.sort_by_key(|g| g.degree().unwrap());
        Some(Staircase { steps: basis })
    }

    pub fn principal(f: &UPoly) -> Option<Staircase> {
        Staircase::from_gens(std::slice::from_ref(f))
    }

    pub fn steps(&self) -> &[UPoly] {
        &self.steps
    }

    pub fn max_step_degree(&self) -> usize {
        self.steps.last().unwrap().degree().unwrap()
    }

    /// Leading coefficient of the top step: the stable leading-coefficient
    /// ideal generator for all large degrees.
    pub fn stable_lc(&self) -> BigInt {
        lc_int(self.steps.last().unwrap())
    }

    /// gcd of the contents of all members (= gcd of contents of the steps).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for s in &self.steps {
            g = g.gcd(&s.content_int());
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.steps.len() == 1 && self.steps[0].is_one()
    }

    /// Canonical remainder; zero iff the (integral) polynomial is a member.
    pub fn remainder(&self, f: &UPoly) -> UPoly {
        remainder_against(f, &self.steps, None)
    }

    pub fn contains(&self, f: &UPoly) -> bool {
        self.remainder(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Staircase) -> bool {
        other.steps.iter().all(|g| self.contains(g))
    }

    pub fn sum(&self, other: &Staircase) -> Staircase {
        let mut gens = self.steps.clone();
        gens.extend(other.steps.iter().cloned());
        Staircase::from_gens(&gens).expect("sum of nonzero ideals")
    }

    pub fn mul(&self, other: &Staircase) -> Staircase {
        let mut gens = Vec::with_capacity(self.steps.len() * other.steps.len());
        for a in &self.steps {
            for b in &other.steps {
                gens.push(a.mul(b));
            }
        }
        Staircase::from_gens(&gens).expect("product of nonzero ideals")
    }

    pub fn mul_elem(&self, f: &UPoly) -> Option<Staircase> {
        if f.is_zero() {
            return None;
        }
        Staircase::from_gens(&self.steps.iter().map(|s| s.mul(f)).collect::<Vec<_>>())
    }

    /// ℤ-lattice of members of degree <= n, as coefficient rows (ascending).
    pub fn slice_rows(&self, n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = Vec::new();
        for g in &self.steps {
            let d = g.degree().unwrap();
            if d > n {
                continue;
            }
            let cs = int_coeffs(g);
            for k in 0..=(n - d) {
                let mut row = vec![BigInt::zero(); n + 1];
                for (i, c) in cs.iter().enumerate() {
                    row[k + i] = c.clone();
                }
                rows.push(row);
            }
        }
        rows
    }

    /// Ideal intersection via degree-sliced lattice intersections, raised
    /// until the generated ideal stabilizes past the combined step degrees.
    /// Slices are exact at every degree; the cutoff is sized for the small
    /// degrees this workbench handles.
    pub fn intersect(&self, other: &Staircase) -> Staircase {
        let base = self.max_step_degree().max(other.max_step_degree());
        let cap = self.max_step_degree() + other.max_step_degree() + 2;
        let mut best: Option<Staircase> = None;
        let mut n = base;
        loop {
            let rows_l = self.slice_rows(n);
            let rows_m = other.slice_rows(n);
            let meet = lattice::intersect_rows(&rows_l, &rows_m, n + 1);
            // Echelonize before reconstructing: one small generator per
            // degree, instead of many rows concentrated at the top degree,
            // which the completion would pay for exponentially.
            let meet = lattice::echelon_rows(&meet, n + 1);
            let gens: Vec<UPoly> = meet
                .iter()
                .map(|row| {
                    UPoly::from_coeffs(
                        row.iter().map(|c| BigRational::from(c.clone())).collect(),
                    )
                })
                .collect();
            let cand = Staircase::from_gens(&gens);
            match (&best, &cand) {
                (Some(b), Some(c)) if b == c && n >= cap => return c.clone(),
                _ => {}
            }
            best = cand;
            n += 1;
            assert!(
                n <= cap + 16,
                "intersection slices failed to stabilize at desk scale"
            );
        }
    }

    /// (self : g) = {f : f·g in self}, for nonzero integral g.
    pub fn colon_elem(&self, g: &UPoly) -> Staircase {
        assert!(!g.is_zero());
        let principal = Staircase::principal(g).unwrap();
        let meet = self.intersect(&principal);
        let quotients: Vec<UPoly> = meet
            .steps
            .iter()
            .map(|s| s.exact_div(g).expect("members of (g) divide by g"))
            .collect();
        Staircase::from_gens(&quotients).expect("colon nonzero")
    }

    /// (self : other) for a nonzero ideal.
    pub fn colon(&self, other: &Staircase) -> Staircase {
        let mut acc: Option<Staircase> = None;
        for g in &other.steps {
            let c = self.colon_elem(g);
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c),
            });
        }
        acc.expect("nonzero ideal has steps")
    }
}

/// S- and G-combinations of a pair: the cancellation combination (leading
/// terms eliminated through their lcm) and, when neither leading coefficient
/// divides the other, the gcd combination carrying a new leading coefficient.
fn pair_polys(f: &UPoly, g: &UPoly) -> (UPoly, Option<UPoly>) {
    let (df, dg) = (f.degree().unwrap(), g.degree().unwrap());
    let d = df.max(dg);
    let (lf, lg) = (lc_int(f), lc_int(g));
    let l = super::ints::lcm(&lf, &lg);
    let s = f
        .shift(d - df)
        .scale(&BigRational::from(&l / &lf))
        .sub(&g.shift(d - dg).scale(&BigRational::from(&l / &lg)));
    let gcomb = {
        let (gg, u, v) = super::ints::xgcd(&lf, &lg);
        if gg == lf || gg == lg {
            None
        } else {
            Some(
                f.shift(d - df)
                    .scale(&BigRational::from(u))
                    .add(&g.shift(d - dg).scale(&BigRational::from(v))),
            )
        }
    };
    (s, gcomb)
}

/// Canonical remainder of f against a basis (optionally skipping one member).
/// Top-reduces each degree by the best gcd combination available; residues
/// that cannot be cleared are moved into the remainder and reduction
/// continues below them.
fn remainder_against(f: &UPoly, basis: &[UPoly], skip: Option<usize>) -> UPoly {
    let mut rem = UPoly::zero();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let e = cur.degree().unwrap();
        let mut comb: Option<UPoly> = None;
        for (i, g) in basis.iter().enumerate() {
            if skip == Some(i) {
                continue;
            }
            let dg = g.degree().unwrap();
            if dg > e {
                continue;
            }
            let shifted = g.shift(e - dg);
            comb = Some(match comb {
                None => shifted,
                Some(h) => {
                    let (lh, lg) = (lc_int(&h), lc_int(&shifted));
                    if (&lh % &lg).is_zero() {
                        shifted
                    } else if (&lg % &lh).is_zero() {
                        h
                    } else {
                        let (_, u, v) = super::ints::xgcd(&lh, &lg);
                        h.scale(&BigRational::from(u))
                            .add(&shifted.scale(&BigRational::from(v)))
                    }
                }
            });
        }
        let Some(h) = comb else {
            rem = rem.add(&cur);
            break;
        };
        let m = lc_int(&h);
        let lf = lc_int(&cur);
        let (q, r) = lf.div_mod_floor(&m);
        cur = cur.sub(&h.scale(&BigRational::from(q)));
        if !r.is_zero() {
            let head = UPoly::constant(BigRational::from(r)).shift(e);
            rem = rem.add(&head);
            cur = cur.sub(&head);
        }
        debug_assert!(cur.degree().map_or(true, |d| d < e));
    }
    rem
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_ints(cs)
    }

    fn stairs(gens: &[&[i64]]) -> Staircase {
        let gs: Vec<UPoly> = gens.iter().map(|c| p(c)).collect();
        Staircase::from_gens(&gs).unwrap()
    }

    #[test]
    fn completion_finds_hidden_low_degree_member() {
        // (4, 2Y² + Y) contains Y: pair combinations must surface it.
        let a = stairs(&[&[4], &[0, 1, 2]]);
        let b = stairs(&[&[4], &[0, 1]]);
        assert_eq!(a, b);
        assert_eq!(a.steps(), &[p(&[4]), p(&[0, 1])]);
    }

    #[test]
    fn gcd_combination_needed() {
        // (2Y, 3Y) = (Y)
        let a = stairs(&[&[0, 2], &[0, 3]]);
        assert_eq!(a.steps(), &[p(&[0, 1])]);
    }

    #[test]
    fn membership() {
        let a = stairs(&[&[4], &[0, 1]]);
        assert!(a.contains(&p(&[0, 1, 2]))); // 2Y² + Y
        assert!(a.contains(&p(&[4, 1])));
        assert!(!a.contains(&p(&[2])));
        assert!(!a.contains(&p(&[1, 1])));
        let two_y = stairs(&[&[2], &[0, 1]]);
        assert!(two_y.contains(&p(&[2, 1])));
        assert!(!two_y.contains(&p(&[1])));
    }

    #[test]
    fn tails_are_canonical() {
        // (2, Y+5) = (2, Y+1) = (2, Y-1)
        let a = stairs(&[&[2], &[5, 1]]);
        let b = stairs(&[&[2], &[1, 1]]);
        let c = stairs(&[&[2], &[-1, 1]]);
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.steps(), &[p(&[2]), p(&[1, 1])]);
    }

    #[test]
    fn sums_and_products() {
        let four_y = stairs(&[&[4], &[0, 1]]);
        let six = stairs(&[&[6]]);
        assert_eq!(four_y.sum(&six), stairs(&[&[2], &[0, 1]]));
        let two_y = stairs(&[&[2], &[0, 1]]);
        let three_y = stairs(&[&[3], &[0, 1]]);
        // (2,Y)(3,Y) = (6, 2Y, 3Y, Y²) = (6, Y)
        assert_eq!(two_y.mul(&three_y), stairs(&[&[6], &[0, 1]]));
    }

    #[test]
    fn intersections() {
        assert_eq!(
            stairs(&[&[2]]).intersect(&stairs(&[&[3]])),
            stairs(&[&[6]])
        );
        let two_y = stairs(&[&[2], &[0, 1]]);
        let three_y = stairs(&[&[3], &[0, 1]]);
        assert_eq!(two_y.intersect(&three_y), stairs(&[&[6], &[0, 1]]));
        // (4, Y) ∩ (Y) = (Y)
        let four_y = stairs(&[&[4], &[0, 1]]);
        let yy = stairs(&[&[0, 1]]);
        assert_eq!(four_y.intersect(&yy), yy);
        // (2, Y) ∩ (Y+1): cross-check membership against definition on a box
        let m = two_y.intersect(&stairs(&[&[1, 1]]));
        for c0 in -4..=4i64 {
            for c1 in -4..=4i64 {
                for c2 in -2..=2i64 {
                    let f = p(&[c0, c1, c2]);
                    let lhs = m.contains(&f);
                    let rhs = two_y.contains(&f) && stairs(&[&[1, 1]]).contains(&f);
                    assert_eq!(lhs, rhs, "{c0} {c1} {c2}");
                }
            }
        }
    }

    #[test]
    fn colons() {
        // ((4, 2Y) : 2) = (2, Y)
        let a = stairs(&[&[4], &[0, 2]]);
        assert_eq!(a.colon_elem(&p(&[2])), stairs(&[&[2], &[0, 1]]));
        // ((Y²) : Y) = (Y)
        assert_eq!(
            stairs(&[&[0, 0, 1]]).colon_elem(&p(&[0, 1])),
            stairs(&[&[0, 1]])
        );
        // ((4, Y) : (2, Y)) = {f : 2f, Yf in (4,Y)} = (2, Y)
        let four_y = stairs(&[&[4], &[0, 1]]);
        let two_y = stairs(&[&[2], &[0, 1]]);
        assert_eq!(four_y.colon(&two_y), two_y);
    }

    #[test]
    fn content_and_stable_lc() {
        let a = stairs(&[&[4], &[0, 2]]);
        assert_eq!(a.content(), BigInt::from(2));
        assert_eq!(a.stable_lc(), BigInt::from(2));
        assert_eq!(a.max_step_degree(), 1);
        assert!(stairs(&[&[1]]).is_unit_ideal());
        assert!(!stairs(&[&[2], &[1, 1]]).contains(&p(&[1])));
    }
}
