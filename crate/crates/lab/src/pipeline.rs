//! A replayable derivation that a finitely generated ideal is ★-invertible,
//! for operations defined by a family of certified valuation primes.
//!
//! The derivation proceeds in three steps, each leaving its canonical
//! intermediate form in the report trace:
//!
//! 1. (I ∩ aD)^★ is computed with a finitely generated witness;
//! 2. I⁻¹ is rebuilt as the chain ∩ xᵢ⁻¹D over the generators and
//!    cross-checked against the engine's own inverse;
//! 3. (I⁻¹)^★ is computed with a finitely generated witness, and the final
//!    equality (I·I⁻¹)^★ = D^★ is decided.
//!
//! Hypotheses are certified *structurally*, never assumed: a prime is
//! accepted as a valuation prime only when the backend guarantees D_P is a
//! valuation ring (nonzero primes of Dedekind backends; height-one primes of
//! a factorial backend, where the prime is principal). Anything else is
//! refused with `ValuationHypothesisUnverified` rather than silently trusted.

use std::time::Instant;

use semistar_core::element::Value;
use semistar_core::ideal::FractionalIdeal;
use semistar_core::prime::PrimeIdeal;
use semistar_core::report::Report;
use semistar_core::star::StarOp;
use semistar_core::{Error, Result};

/// Accept P only when D_P is structurally a valuation ring.
pub fn certify_valuation_prime(p: &PrimeIdeal) -> Result<()> {
    let d = p.domain();
    // D_(0) = K carries the trivial valuation
    if p.is_zero() || d.is_field() {
        return Ok(());
    }
    // nonzero local rings of Dedekind backends are DVRs
    if d.is_dedekind() {
        return Ok(());
    }
    // a factorial backend localized at a height-one (hence principal) prime
    // is a DVR
    if d.base().is_ufd() && p.height() == 1 {
        return Ok(());
    }
    Err(Error::ValuationHypothesisUnverified(format!(
        "D_P is not structurally a valuation ring at P = {p} (height {}) over {d}",
        p.height()
    )))
}

fn family_of(star: &StarOp) -> Result<&[PrimeIdeal]> {
    match star {
        StarOp::Spectral { primes, .. } | StarOp::ValuationFamily { primes, .. } => Ok(primes),
        other => Err(Error::ValuationHypothesisUnverified(format!(
            "the pipeline needs an operation defined by a family of primes; got {other}"
        ))),
    }
}

/// Derive (I·I⁻¹)^★ = D^★ for I generated by `generators`, with every
/// intermediate canonical form recorded so the run can be replayed by hand.
pub fn invertibility_pipeline(
    generators: &[Value],
    a: &Value,
    star: &StarOp,
) -> Result<Report> {
    let t0 = Instant::now();
    let d = star.root().clone();
    for p in family_of(star)? {
        certify_valuation_prime(p)?;
    }
    if a.is_zero() {
        return Err(Error::ZeroIdeal("pipeline scalar a must be nonzero".into()));
    }
    let ideal = FractionalIdeal::from_gens(&d, generators)?;
    let statement = format!("pipeline ★-invertibility of I = {ideal} with a = {a} under {star}");
    let inputs = vec![ideal.to_string(), a.to_string(), star.to_string()];
    let mut trace = vec![format!("hypotheses: every prime of the family certified as a valuation prime")];

    // step 1: (I ∩ aD)^★ with a finitely generated witness
    let ad = FractionalIdeal::from_gens(&d, std::slice::from_ref(a))?;
    let meet = ideal.intersect(&ad)?;
    let meet_closed = star.evaluate(&meet)?;
    let mut exactness = meet_closed.exactness;
    trace.push(format!("step 1: I ∩ aD = {meet}"));
    trace.push(format!(
        "step 1: (I ∩ aD)^★ = {} [{}]",
        meet_closed.value,
        meet_closed.exactness.as_str()
    ));

    // step 2: I⁻¹ as the chain ∩ xᵢ⁻¹D over the generators
    let gens = ideal.canonical_gens();
    let mut chain: Option<FractionalIdeal> = None;
    for x in &gens {
        if x.is_zero() {
            continue;
        }
        let term = FractionalIdeal::from_gens(&d, &[x.inverse()?])?;
        let next = match &chain {
            None => term,
            Some(acc) => acc.intersect(&term)?,
        };
        trace.push(format!("step 2: after x = {x}: ∩ xᵢ⁻¹D = {next}"));
        chain = Some(next);
    }
    let chained =
        chain.ok_or_else(|| Error::ZeroIdeal("no nonzero generators for the chain".into()))?;
    let engine_inverse = ideal.inverse()?;
    if chained != engine_inverse {
        return Ok(Report::fail(
            statement,
            format!("generator chain {chained} disagrees with engine inverse {engine_inverse}"),
        )
        .with_inputs(inputs)
        .with_trace(trace)
        .with_ms(t0.elapsed().as_millis()));
    }
    trace.push(format!("step 2: I⁻¹ = {chained} (matches engine inverse)"));

    // step 3: (I⁻¹)^★ witness, then the final equality
    let inv_closed = star.evaluate(&chained)?;
    exactness = exactness.combine(inv_closed.exactness);
    trace.push(format!(
        "step 3: (I⁻¹)^★ = {} [{}]",
        inv_closed.value,
        inv_closed.exactness.as_str()
    ));
    let product = ideal.product(&chained)?;
    let lhs = star.evaluate(&product)?;
    let rhs = star.evaluate(&FractionalIdeal::one(&d))?;
    exactness = exactness.combine(lhs.exactness).combine(rhs.exactness);
    trace.push(format!(
        "step 3: (I·I⁻¹)^★ = {} vs D^★ = {}",
        lhs.value, rhs.value
    ));

    let report = if lhs.value.eq_module(&rhs.value) {
        Report::pass(statement).with_witness(format!("(I·I⁻¹)^★ = {}", lhs.value))
    } else {
        Report::fail(
            statement,
            format!("(I·I⁻¹)^★ = {} ≠ {} = D^★", lhs.value, rhs.value),
        )
    };
    Ok(report
        .with_inputs(inputs)
        .with_exactness(exactness.as_str())
        .with_trace(trace)
        .with_ms(t0.elapsed().as_millis()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use semistar_core::domain::Domain;
    use semistar_core::element::parse_value;
    use semistar_core::report::Verdict;

    fn vals(d: &Domain, xs: &[&str]) -> Vec<Value> {
        xs.iter().map(|x| parse_value(x, d).unwrap()).collect()
    }

    fn prime(d: &Domain, gens: &[&str]) -> PrimeIdeal {
        PrimeIdeal::new(d, &vals(d, gens)).unwrap()
    }

    #[test]
    fn derivation_over_integers() {
        let z = Domain::Int;
        let star = StarOp::spectral(
            &z,
            vec![prime(&z, &["2"]), prime(&z, &["3"]), prime(&z, &["5"])],
        )
        .unwrap();
        let r = invertibility_pipeline(
            &vals(&z, &["4", "6"]),
            &parse_value("10", &z).unwrap(),
            &star,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
        assert_eq!(r.exactness.as_deref(), Some("exact"));
        assert!(r.trace.iter().any(|l| l.starts_with("step 1")));
        assert!(r.trace.iter().any(|l| l.contains("matches engine inverse")));
    }

    #[test]
    fn derivation_over_a_nonprincipal_prime() {
        let zw = Domain::quadratic(-5).unwrap();
        let star = StarOp::spectral(
            &zw,
            vec![prime(&zw, &["2", "1+w"]), prime(&zw, &["3", "1+w"])],
        )
        .unwrap();
        let r = invertibility_pipeline(
            &vals(&zw, &["2", "1+w"]),
            &parse_value("3", &zw).unwrap(),
            &star,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
        // the inverse of the prime above 2 is (1, (1+w)/2)
        assert!(r.trace.iter().any(|l| l.contains("I⁻¹")));
    }

    #[test]
    fn principal_input_degenerates_to_a_one_step_chain() {
        let z = Domain::Int;
        let star =
            StarOp::valuation_family(&z, vec![prime(&z, &["2"]), prime(&z, &["3"])]).unwrap();
        let r = invertibility_pipeline(
            &vals(&z, &["6"]),
            &parse_value("6", &z).unwrap(),
            &star,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let chain_steps = r
            .trace
            .iter()
            .filter(|l| l.contains("after x ="))
            .count();
        assert_eq!(chain_steps, 1);
    }

    #[test]
    fn height_two_primes_are_refused() {
        let zy = Domain::IntPoly;
        let maximal = prime(&zy, &["2", "Y"]);
        let star = StarOp::spectral(&zy, vec![maximal]).unwrap();
        let err = invertibility_pipeline(
            &vals(&zy, &["Y", "3"]),
            &parse_value("3", &zy).unwrap(),
            &star,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ValuationHypothesisUnverified(_)), "{err}");

        // height-one primes of the same backend are fine
        let star = StarOp::spectral(&zy, vec![prime(&zy, &["Y"]), prime(&zy, &["3"])]).unwrap();
        let r = invertibility_pipeline(
            &vals(&zy, &["Y", "3"]),
            &parse_value("3", &zy).unwrap(),
            &star,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }

    #[test]
    fn operations_without_a_prime_family_are_refused() {
        let z = Domain::Int;
        let err = invertibility_pipeline(
            &vals(&z, &["4", "6"]),
            &parse_value("2", &z).unwrap(),
            &StarOp::identity(&z),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ValuationHypothesisUnverified(_)));
    }

    #[test]
    fn generator_order_does_not_change_the_chain_result() {
        let z = Domain::Int;
        let star = StarOp::spectral(&z, vec![prime(&z, &["2"]), prime(&z, &["7"])]).unwrap();
        let a = parse_value("14", &z).unwrap();
        let fwd = invertibility_pipeline(&vals(&z, &["4", "14", "6"]), &a, &star).unwrap();
        let rev = invertibility_pipeline(&vals(&z, &["6", "14", "4"]), &a, &star).unwrap();
        assert_eq!(fwd.verdict, Verdict::Pass);
        assert_eq!(rev.verdict, Verdict::Pass);
        let inverse_line = |r: &Report| {
            r.trace
                .iter()
                .find(|l| l.contains("matches engine inverse"))
                .unwrap()
                .clone()
        };
        assert_eq!(inverse_line(&fwd), inverse_line(&rev));
    }
}
