//! Full-rank sublattices of ℤ², in the canonical basis {(a, 0), (b, c)} with
//! a, c > 0 and 0 <= b < a. Coordinates are (x, y) for x + y·w in a quadratic
//! order; everything here is purely additive (ℤ-module level).
//!
//! Membership has a closed form: (x, y) lies in the lattice iff c | y and
//! a | x - (y/c)·b. Intersections reduce to two congruences and a CRT step,
//! so they are exact, with no iterative stabilization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ints;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

/// 2x2 integer matrix acting on column vectors (x, y).
pub type Mat2 = [[BigInt; 2]; 2];

pub fn mat_apply(m: &Mat2, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    (&m[0][0] * x + &m[0][1] * y, &m[1][0] * x + &m[1][1] * y)
}

pub fn mat_det(m: &Mat2) -> BigInt {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

pub fn mat_adjugate(m: &Mat2) -> Mat2 {
    [
        [m[1][1].clone(), -m[0][1].clone()],
        [-m[1][0].clone(), m[0][0].clone()],
    ]
}

impl Lat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Lat2 {
        assert!(a.is_positive() && c.is_positive());
        let b = b.mod_floor(&a);
        Lat2 { a, b, c }
    }

    /// The standard lattice ℤ².
    pub fn unit() -> Lat2 {
        Lat2::new(BigInt::one(), BigInt::zero(), BigInt::one())
    }

    /// Hermite basis of the span of arbitrary generators; None if the span
    /// has rank < 2.
    pub fn from_rows(rows: &[(BigInt, BigInt)]) -> Option<Lat2> {
        let mut pool: Vec<BigInt> = Vec::new();
        let mut rep: Option<(BigInt, BigInt)> = None;
        for (x, y) in rows {
            if y.is_zero() {
                pool.push(x.clone());
                continue;
            }
            match rep.take() {
                None => {
                    rep = Some(if y.is_negative() {
                        (-x, -y)
                    } else {
                        (x.clone(), y.clone())
                    });
                }
                Some((b, c)) => {
                    let (g, u, v) = ints::xgcd(&c, y);
                    let leftover = (&c / &g) * x - (y / &g) * &b;
                    pool.push(leftover);
                    rep = Some((&u * &b + &v * x, g));
                }
            }
        }
        let (b, c) = rep?;
        let a = ints::gcd_all(pool.iter());
        if a.is_zero() {
            return None;
        }
        Some(Lat2::new(a, b, c))
    }

    pub fn rows(&self) -> [(BigInt, BigInt); 2] {
        [
            (self.a.clone(), BigInt::zero()),
            (self.b.clone(), self.c.clone()),
        ]
    }

    /// Index in ℤ² (= absolute determinant of the basis).
    pub fn det(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        if !(y % &self.c).is_zero() {
            return false;
        }
        let t = y / &self.c;
        ((x - t * &self.b) % &self.a).is_zero()
    }

    pub fn contains_lat(&self, other: &Lat2) -> bool {
        other
            .rows()
            .iter()
            .all(|(x, y)| self.contains(x, y))
    }

    pub fn sum(&self, other: &Lat2) -> Lat2 {
        let mut rows = self.rows().to_vec();
        rows.extend(other.rows());
        Lat2::from_rows(&rows).expect("sum of full-rank lattices")
    }

    pub fn intersect(&self, other: &Lat2) -> Lat2 {
        let lcm_c = ints::lcm(&self.c, &other.c);
        let g = self.a.gcd(&other.a);
        let delta = ((&lcm_c / &self.c) * &self.b - (&lcm_c / &other.c) * &other.b).mod_floor(&g);
        let t0 = &g / g.gcd(&delta);
        let c_new = &t0 * &lcm_c;
        let r1 = ((&c_new / &self.c) * &self.b).mod_floor(&self.a);
        let r2 = ((&c_new / &other.c) * &other.b).mod_floor(&other.a);
        let (x0, a_new) =
            ints::crt(&r1, &self.a, &r2, &other.a).expect("congruences consistent by construction");
        Lat2::new(a_new, x0, c_new)
    }

    /// Multiply every vector by a nonzero integer.
    pub fn scale(&self, k: &BigInt) -> Lat2 {
        assert!(!k.is_zero());
        let k = k.abs();
        Lat2::new(&self.a * &k, &self.b * &k, &self.c * &k)
    }

    /// Divide every vector by an integer that exactly divides the basis.
    pub fn unscale(&self, k: &BigInt) -> Lat2 {
        let k = k.abs();
        assert!(
            (&self.a % &k).is_zero() && (&self.b % &k).is_zero() && (&self.c % &k).is_zero(),
            "lattice not divisible by {k}"
        );
        Lat2::new(&self.a / &k, &self.b / &k, &self.c / &k)
    }

    /// Image under an injective integer matrix.
    pub fn apply(&self, m: &Mat2) -> Lat2 {
        let rows: Vec<(BigInt, BigInt)> = self
            .rows()
            .iter()
            .map(|(x, y)| mat_apply(m, x, y))
            .collect();
        Lat2::from_rows(&rows).expect("injective image of full-rank lattice")
    }

    /// {v in ℤ² : M v in self}, for an injective integer matrix M.
    /// Computed as (1/|det M|) · (adj(M)·self ∩ |det M|·ℤ²).
    pub fn preimage(&self, m: &Mat2) -> Lat2 {
        let d = mat_det(m).abs();
        assert!(!d.is_zero(), "preimage of singular matrix");
        let adj = mat_adjugate(m);
        let mapped = self.apply(&adj);
        let box_d = Lat2::new(d.clone(), BigInt::zero(), d.clone());
        mapped.intersect(&box_d).unscale(&d)
    }
}

// ---------------------------------------------------------------------------
// General-dimension helpers on row-generated lattices in ℤ^n.
// ---------------------------------------------------------------------------

/// Basis of the left kernel {z : z·A = 0} of an integer matrix given by rows.
pub fn kernel_rows(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let k = a.len();
    if k == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut rows: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivot = 0usize;
    for col in 0..n {
        if pivot >= k {
            break;
        }
        // Clear the column below `pivot` by gcd row operations.
        loop {
            // Pick the row with the smallest nonzero |entry| in this column.
            let mut best: Option<usize> = None;
            for r in pivot..k {
                if rows[r][col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(bst) => {
                        if rows[r][col].abs() < rows[bst][col].abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(bst) = best else { break };
            rows.swap(pivot, bst);
            u.swap(pivot, bst);
            let mut done = true;
            for r in pivot + 1..k {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[pivot][col]);
                for j in 0..n {
                    let v = &rows[r][j] - &q * &rows[pivot][j];
                    rows[r][j] = v;
                }
                for j in 0..k {
                    let v = &u[r][j] - &q * &u[pivot][j];
                    u[r][j] = v;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !rows[pivot][col].is_zero() {
            pivot += 1;
        }
    }
    (pivot..k)
        .filter(|&r| rows[r].iter().all(|x| x.is_zero()))
        .map(|r| u[r].clone())
        .collect()
}

/// Echelon basis of a row-generated lattice in ℤ^n, with pivots on the
/// highest nonzero coordinate: at most one row per pivot position, positive
/// pivots, and entries above each pivot reduced to canonical range. Rows come
/// out ordered from highest pivot to lowest. Read as polynomial coefficient
/// vectors (ascending), this yields one small generator per degree instead of
/// many overlapping ones, which keeps downstream basis completion cheap.
pub fn echelon_rows(a: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = a
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut out: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for col in (0..n).rev() {
        let mut pivot_row: Option<Vec<BigInt>> = None;
        let mut rest: Vec<Vec<BigInt>> = Vec::new();
        for r in rows.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            pivot_row = Some(match pivot_row.take() {
                None => r,
                Some(p) => {
                    // Combine to the gcd in this column; the complementary
                    // combination drops out of the column and goes back in.
                    let (g, u, v) = ints::xgcd(&p[col], &r[col]);
                    let (q1, q2) = (&p[col] / &g, &r[col] / &g);
                    let leftover: Vec<BigInt> =
                        (0..n).map(|j| &q2 * &p[j] - &q1 * &r[j]).collect();
                    if leftover.iter().any(|x| !x.is_zero()) {
                        rest.push(leftover);
                    }
                    (0..n).map(|j| &u * &p[j] + &v * &r[j]).collect()
                }
            });
        }
        rows = rest;
        if let Some(p) = pivot_row {
            let p: Vec<BigInt> = if p[col].is_negative() {
                p.iter().map(|x| -x).collect()
            } else {
                p
            };
            out.push((col, p));
        }
    }
    // Reduce each row's entries at the later (lower) pivot columns.
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            let (col_j, q) = {
                let (col_j, rj) = &out[j];
                (*col_j, out[i].1[*col_j].div_floor(&rj[*col_j]))
            };
            if q.is_zero() {
                continue;
            }
            let rj = out[j].1.clone();
            for (x, y) in out[i].1.iter_mut().zip(rj.iter()).take(col_j + 1) {
                *x -= &q * y;
            }
        }
    }
    out.into_iter().map(|(_, r)| r).collect()
}

/// Generators of the intersection of two row-generated lattices in ℤ^n.
pub fn intersect_rows(l: &[Vec<BigInt>], m: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut stacked: Vec<Vec<BigInt>> = Vec::with_capacity(l.len() + m.len());
    stacked.extend(l.iter().cloned());
    stacked.extend(m.iter().cloned());
    let ker = kernel_rows(&stacked);
    ker.iter()
        .map(|z| {
            let mut v = vec![BigInt::zero(); n];
            for (i, li) in l.iter().enumerate() {
                for j in 0..n {
                    v[j] += &z[i] * &li[j];
                }
            }
            v
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn lat(a: i64, bb: i64, c: i64) -> Lat2 {
        Lat2::new(b(a), b(bb), b(c))
    }

    /// Brute-force membership from generators, for cross-checking.
    fn brute_contains(rows: &[(i64, i64)], x: i64, y: i64) -> bool {
        // Search small coefficient boxes; enough for the test inputs used.
        let r = 30i64;
        match rows.len() {
            1 => (-r..=r).any(|s| s * rows[0].0 == x && s * rows[0].1 == y),
            2 => (-r..=r).any(|s| {
                (-r..=r).any(|t| {
                    s * rows[0].0 + t * rows[1].0 == x && s * rows[0].1 + t * rows[1].1 == y
                })
            }),
            _ => panic!("unsupported"),
        }
    }

    #[test]
    fn hermite_form_from_rows() {
        // span{(2, 1), (0, 3)}
        let l = Lat2::from_rows(&[(b(2), b(1)), (b(0), b(3))]).unwrap();
        for x in -6..=6i64 {
            for y in -6..=6i64 {
                assert_eq!(
                    l.contains(&b(x), &b(y)),
                    brute_contains(&[(2, 1), (0, 3)], x, y),
                    "({x},{y})"
                );
            }
        }
        assert_eq!(l.det(), b(6));
    }

    #[test]
    fn rank_deficient_rejected() {
        assert!(Lat2::from_rows(&[(b(2), b(0)), (b(5), b(0))]).is_none());
        assert!(Lat2::from_rows(&[(b(1), b(2)), (b(2), b(4))]).is_none());
        assert!(Lat2::from_rows(&[]).is_none());
    }

    #[test]
    fn intersect_matches_brute_force() {
        let l = lat(2, 0, 1); // {(x,y): 2 | x}
        let m = lat(3, 1, 1); // {(x,y): x = y mod 3}
        let i = l.intersect(&m);
        assert_eq!(i, lat(6, 4, 1));
        for x in -9..=9i64 {
            for y in -9..=9i64 {
                assert_eq!(
                    i.contains(&b(x), &b(y)),
                    l.contains(&b(x), &b(y)) && m.contains(&b(x), &b(y))
                );
            }
        }
    }

    #[test]
    fn intersect_with_projection_constraint() {
        let l = lat(1, 0, 2); // y even
        let m = lat(4, 2, 3); // y = 3t, x = 2t mod 4
        let i = l.intersect(&m);
        for x in -14..=14i64 {
            for y in -14..=14i64 {
                assert_eq!(
                    i.contains(&b(x), &b(y)),
                    l.contains(&b(x), &b(y)) && m.contains(&b(x), &b(y)),
                    "({x},{y})"
                );
            }
        }
    }

    #[test]
    fn preimage_of_multiplication_by_w() {
        // Multiplication by w on x + y·w with w² = -5: matrix [[0,-5],[1,0]].
        let mw: Mat2 = [[b(0), b(-5)], [b(1), b(0)]];
        assert_eq!(Lat2::unit().preimage(&mw), Lat2::unit());
        // {v : w·v in 2ℤ[w]}: w·(x+yw) = -5y + xw, need 2 | x and 2 | 5y.
        let two = lat(2, 0, 2);
        assert_eq!(two.preimage(&mw), lat(2, 0, 2));
    }

    #[test]
    fn preimage_diagonal() {
        let m: Mat2 = [[b(1), b(0)], [b(0), b(2)]];
        assert_eq!(Lat2::unit().preimage(&m), Lat2::unit());
        let four = lat(4, 0, 4);
        // need x in 4ℤ, 2y in 4ℤ
        assert_eq!(four.preimage(&m), lat(4, 0, 2));
    }

    #[test]
    fn kernel_of_stacked_rows() {
        // rows (2,4) and (1,2): kernel spanned by (1,-2)
        let a = vec![vec![b(2), b(4)], vec![b(1), b(2)]];
        let k = kernel_rows(&a);
        assert_eq!(k.len(), 1);
        let z = &k[0];
        assert_eq!(&z[0] * 2 + &z[1] * 1, b(0));
        assert_eq!(&z[0] * 4 + &z[1] * 2, b(0));
        assert!(!z[0].is_zero());
    }

    #[test]
    fn intersect_rows_principal_ideals() {
        // In ℤ^1: 2ℤ ∩ 3ℤ = 6ℤ.
        let l = vec![vec![b(2)]];
        let m = vec![vec![b(3)]];
        let out = intersect_rows(&l, &m, 1);
        let g = out
            .iter()
            .map(|v| v[0].clone())
            .fold(b(0), |acc, x| acc.gcd(&x));
        assert_eq!(g, b(6));
    }

    #[test]
    fn sum_and_containment() {
        let l = lat(4, 0, 2);
        let m = lat(6, 3, 3);
        let s = l.sum(&m);
        assert!(s.contains_lat(&l) && s.contains_lat(&m));
        assert!(l.intersect(&m).det() >= l.det());
    }
}
