//! Polynomials in the function-ring indeterminate X, with content ideals.

use std::fmt;

use semistar_core::domain::Domain;
use semistar_core::element::{field_kind, parse_poly_x, Value};
use semistar_core::ideal::FractionalIdeal;
use semistar_core::{Error, Result};

/// A nonzero polynomial in X with coefficients in the quotient field of a
/// backend domain. Coefficients are stored ascending and the leading one is
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyX {
    domain: Domain,
    coeffs: Vec<Value>,
}

impl PolyX {
    pub fn new(domain: &Domain, coeffs: Vec<Value>) -> Result<PolyX> {
        let mut coeffs = coeffs;
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial(
                "PolyX requires a nonzero polynomial".into(),
            ));
        }
        Ok(PolyX {
            domain: domain.clone(),
            coeffs,
        })
    }

    pub fn parse(input: &str, domain: &Domain) -> Result<PolyX> {
        PolyX::new(domain, parse_poly_x(input, domain)?)
    }

    pub fn constant(domain: &Domain, c: Value) -> Result<PolyX> {
        PolyX::new(domain, vec![c])
    }

    pub fn one(domain: &Domain) -> PolyX {
        PolyX {
            domain: domain.clone(),
            coeffs: vec![Value::one(field_kind(domain))],
        }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Value {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// The content ideal c(f), generated by the coefficients.
    pub fn content(&self) -> FractionalIdeal {
        FractionalIdeal::from_gens(&self.domain, &self.coeffs)
            .expect("nonzero coefficients generate a fractional ideal")
    }

    /// True when every coefficient lies in the base ring itself.
    pub fn is_integral(&self) -> bool {
        let one = FractionalIdeal::one(&self.domain);
        self.coeffs.iter().all(|c| one.contains_value(c))
    }

    pub fn mul(&self, other: &PolyX) -> Result<PolyX> {
        if self.domain != other.domain {
            return Err(Error::MixedDomains(format!(
                "polynomial product over {} and {}",
                self.domain, other.domain
            )));
        }
        let kind = field_kind(&self.domain);
        let mut out = vec![Value::zero(kind); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        PolyX::new(&self.domain, out)
    }

    /// Multiply every coefficient by a nonzero scalar.
    pub fn scale(&self, by: &Value) -> Result<PolyX> {
        if by.is_zero() {
            return Err(Error::ZeroPolynomial("scaling a polynomial by zero".into()));
        }
        let coeffs = self.coeffs.iter().map(|c| c.mul(by)).collect();
        PolyX::new(&self.domain, coeffs)
    }

    /// Divide every coefficient by `by`, requiring the quotient to stay in
    /// the base ring.
    pub fn div_exact_in_ring(&self, by: &Value) -> Result<PolyX> {
        let one = FractionalIdeal::one(&self.domain);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let q = c.div(by)?;
            if !one.contains_value(&q) {
                return Err(Error::InexactDivision(format!(
                    "{c} / {by} leaves the base ring"
                )));
            }
            out.push(q);
        }
        PolyX::new(&self.domain, out)
    }

    /// Reinterpret the same coefficients over another domain with the same
    /// quotient field (e.g. a localization of the base ring).
    pub fn over(&self, domain: &Domain) -> Result<PolyX> {
        if field_kind(domain) != field_kind(&self.domain) {
            return Err(Error::MixedDomains(format!(
                "cannot move a polynomial from {} to {}",
                self.domain, domain
            )));
        }
        PolyX::new(domain, self.coeffs.clone())
    }
}

impl fmt::Display for PolyX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let atomic = !cs.contains('+') && !cs.contains('-');
            match i {
                0 => {
                    if atomic {
                        write!(f, "{cs}")?
                    } else {
                        write!(f, "({cs})")?
                    }
                }
                _ => {
                    if c.is_one() {
                        write!(f, "X")?;
                    } else if atomic {
                        write!(f, "{cs}*X")?;
                    } else {
                        write!(f, "({cs})*X")?;
                    }
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use semistar_core::element::parse_value;

    #[test]
    fn content_matches_worked_examples() {
        let zy = Domain::IntPoly;
        let f = PolyX::parse("Y*X + 3", &zy).unwrap();
        assert_eq!(f.degree(), 1);
        let c = f.content();
        let expected = FractionalIdeal::from_gens(
            &zy,
            &[
                parse_value("Y", &zy).unwrap(),
                parse_value("3", &zy).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(c, expected);

        let zw = Domain::quadratic(-5).unwrap();
        let f = PolyX::parse("(1+w) + (1-w)*X", &zw).unwrap();
        // (1+w, 1−w) = (2, 1+w): 2 = (1+w)+(1−w) and 1−w = 2−(1+w)
        let canon = FractionalIdeal::from_gens(
            &zw,
            &[
                parse_value("2", &zw).unwrap(),
                parse_value("1+w", &zw).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(f.content(), canon);

        let five = PolyX::parse("5", &Domain::Int).unwrap();
        let principal =
            FractionalIdeal::from_gens(&Domain::Int, &[parse_value("5", &Domain::Int).unwrap()])
                .unwrap();
        assert_eq!(five.content(), principal);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let z = Domain::Int;
        assert!(matches!(
            PolyX::parse("0", &z),
            Err(Error::ZeroPolynomial(_))
        ));
        assert!(matches!(
            PolyX::parse("X - X", &z),
            Err(Error::ZeroPolynomial(_))
        ));
    }

    #[test]
    fn display_parses_back() {
        let zw = Domain::quadratic(-5).unwrap();
        for s in ["(1+w) + (1-w)*X", "2 + 3*X + w*X^2", "X^3"] {
            let f = PolyX::parse(s, &zw).unwrap();
            let g = PolyX::parse(&f.to_string(), &zw).unwrap();
            assert_eq!(f, g, "round-trip of {s} printed as {f}");
        }
        let zy = Domain::IntPoly;
        for s in ["Y*X + 3", "(Y^2-1) + (2*Y)*X^2", "(Y+1)/2 + X"] {
            let f = PolyX::parse(s, &zy).unwrap();
            let g = PolyX::parse(&f.to_string(), &zy).unwrap();
            assert_eq!(f, g, "round-trip of {s} printed as {f}");
        }
    }

    #[test]
    fn dedekind_mertens_on_all_backends() {
        // c(f)·c(g)^{m+1} = c(fg)·c(g)^m with m = deg f
        let cases: Vec<(Domain, &str, &str)> = vec![
            (Domain::Int, "6 + 10*X", "15 + 4*X^2"),
            (Domain::quadratic(-5).unwrap(), "(1+w) + 2*X", "3 + (1-w)*X"),
            (Domain::RatPoly, "Y + Y^2*X", "(Y+1) + X"),
            (Domain::IntPoly, "Y + 3*X", "2 + Y*X + Y^2*X^2"),
        ];
        for (d, fs, gs) in cases {
            let f = PolyX::parse(fs, &d).unwrap();
            let g = PolyX::parse(gs, &d).unwrap();
            let m = f.degree() as u32;
            let lhs = f.content().product(&g.content().power(m + 1).unwrap()).unwrap();
            let rhs = f
                .mul(&g)
                .unwrap()
                .content()
                .product(&g.content().power(m).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "Dedekind–Mertens over {d} for f={fs}, g={gs}");
        }
    }

    #[test]
    fn gauss_multiplicativity_on_dedekind_backends() {
        let backends = [Domain::Int, Domain::quadratic(-5).unwrap()];
        let polys = ["2 + 3*X", "5 + 7*X + 11*X^2", "4 + 6*X"];
        for d in &backends {
            for fs in &polys {
                for gs in &polys {
                    let f = PolyX::parse(fs, d).unwrap();
                    let g = PolyX::parse(gs, d).unwrap();
                    let lhs = f.mul(&g).unwrap().content();
                    let rhs = f.content().product(&g.content()).unwrap();
                    assert_eq!(lhs, rhs, "c(fg) = c(f)c(g) over {d}");
                }
            }
        }
        // and a genuinely non-principal-content pair over ℤ[√−5]
        let zw = Domain::quadratic(-5).unwrap();
        let f = PolyX::parse("(1+w) + (1-w)*X", &zw).unwrap();
        let g = PolyX::parse("3 + (1+w)*X", &zw).unwrap();
        let lhs = f.mul(&g).unwrap().content();
        let rhs = f.content().product(&g.content()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauss_fails_over_int_poly_as_expected() {
        // ideal contents are only sub-multiplicative over ℤ[Y]:
        // f = YX+3, g = YX−3: c(f)c(g) = (Y,3)² ⊋ c(fg) = (Y², 9, ...)
        let zy = Domain::IntPoly;
        let f = PolyX::parse("3 + Y*X", &zy).unwrap();
        let g = PolyX::parse("-3 + Y*X", &zy).unwrap();
        let prod = f.mul(&g).unwrap().content();
        let sq = f.content().product(&g.content()).unwrap();
        assert_ne!(prod, sq);
        // containment direction: c(fg) ⊆ c(f)c(g)
        for gen in prod.canonical_gens() {
            assert!(sq.contains_value(&gen));
        }
    }
}
