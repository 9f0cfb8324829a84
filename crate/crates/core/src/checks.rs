//! Probe-based property checkers for semistar operations.
//!
//! Everything here is finite and explicit: a verdict is always relative to
//! the probe set it ran on, and failures carry a minimized concrete witness.
//! Undecided never means "false" — it means a value left the finitely
//! generated world or a bound ran out.

use std::time::Instant;

use crate::domain::Domain;
use crate::element::Value;
use crate::ideal::FractionalIdeal;
use crate::prime::PrimeIdeal;
use crate::probes::ProbeSet;
use crate::report::Report;
use crate::star::{is_quasi_star_prime, Closure, StarOp};
use crate::{Error, Result};

/// Probe-relative order verdict between two operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompareVerdict {
    /// star1 ≤ star2 on every probe (E^★¹ ⊆ E^★² throughout).
    LE,
    GE,
    EQ,
    Incomparable {
        not_le_witness: String,
        not_ge_witness: String,
    },
}

impl CompareVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompareVerdict::LE => "LE",
            CompareVerdict::GE => "GE",
            CompareVerdict::EQ => "EQ",
            CompareVerdict::Incomparable { .. } => "Incomparable",
        }
    }
}

enum ProbeOutcome {
    Ok,
    Violation(String),
    Undecided(String),
}

/// Verify the three semistar axioms on every probe (and probe pair for
/// monotonicity): x·E^★ = (xE)^★, E ⊆ F ⇒ E^★ ⊆ F^★, E ⊆ E^★ = (E^★)^★.
pub fn axioms_check(star: &StarOp, probes: &ProbeSet, scalars: &[Value]) -> Report {
    let t0 = Instant::now();
    let statement = format!(
        "check axioms {} over {} ({} probes, seed {})",
        star,
        star.root(),
        probes.len(),
        probes.seed
    );
    let mut undecided: Option<String> = None;
    let note = |o: ProbeOutcome, undecided: &mut Option<String>| -> Option<String> {
        match o {
            ProbeOutcome::Ok => None,
            ProbeOutcome::Violation(w) => Some(w),
            ProbeOutcome::Undecided(b) => {
                undecided.get_or_insert(b);
                None
            }
        }
    };

    for e in &probes.probes {
        if let Some(w) = note(check_extensive_idempotent(star, e), &mut undecided) {
            return finish_fail(statement, w, probes.seed, t0);
        }
        for x in scalars {
            if let Some(w) = note(check_scaling(star, e, x), &mut undecided) {
                return finish_fail(statement, w, probes.seed, t0);
            }
        }
    }
    for (i, e) in probes.probes.iter().enumerate() {
        for f in probes.probes.iter().skip(i + 1) {
            if let Some(w) = note(check_monotone(star, e, f), &mut undecided) {
                return finish_fail(statement, w, probes.seed, t0);
            }
        }
    }

    let report = match undecided {
        Some(b) => Report::undecided(statement, b),
        None => Report::pass(statement),
    };
    report
        .with_seed(probes.seed)
        .with_ms(t0.elapsed().as_millis())
}

fn finish_fail(statement: String, witness: String, seed: u64, t0: Instant) -> Report {
    Report::fail(statement, witness)
        .with_seed(seed)
        .with_ms(t0.elapsed().as_millis())
}

fn check_extensive_idempotent(star: &StarOp, e: &FractionalIdeal) -> ProbeOutcome {
    let ev = match star.evaluate(e) {
        Ok(ev) => ev,
        Err(Error::NotFgRepresentable(b)) => {
            // fall back to membership for extensivity, skip idempotence
            for g in e.canonical_gens() {
                match star.contains(e, &g) {
                    Ok(true) => {}
                    Ok(false) => {
                        let me = minimize(e, |sub| {
                            !star.contains(sub, &g).unwrap_or(true)
                        });
                        return ProbeOutcome::Violation(format!(
                            "extensivity: {g} ∈ E but not in E^★ for E = {me}"
                        ));
                    }
                    Err(_) => return ProbeOutcome::Undecided(b),
                }
            }
            return ProbeOutcome::Undecided(b);
        }
        Err(err) => return ProbeOutcome::Undecided(err.to_string()),
    };
    for g in e.canonical_gens() {
        if !ev.value.contains_value(&g) {
            let me = minimize(e, |sub| match star.evaluate(sub) {
                Ok(sev) => !sev.value.contains_value(&g),
                Err(_) => false,
            });
            return ProbeOutcome::Violation(format!(
                "extensivity: generator {g} of E = {me} missing from E^★"
            ));
        }
    }
    match &ev.value {
        Closure::WholeField => ProbeOutcome::Ok, // K^★ = K by the sentinel
        Closure::Fg(i) => match star.evaluate(i) {
            Ok(second) => {
                if second.value.eq_module(&ev.value) {
                    ProbeOutcome::Ok
                } else {
                    ProbeOutcome::Violation(format!(
                        "idempotence: (E^★)^★ ≠ E^★ for E = {e}, E^★ = {i}"
                    ))
                }
            }
            Err(Error::NotFgRepresentable(b)) => ProbeOutcome::Undecided(b),
            Err(err) => ProbeOutcome::Undecided(err.to_string()),
        },
    }
}

fn check_scaling(star: &StarOp, e: &FractionalIdeal, x: &Value) -> ProbeOutcome {
    let scaled = match e.scale(x) {
        Ok(s) => s,
        Err(err) => return ProbeOutcome::Undecided(err.to_string()),
    };
    match (star.evaluate(e), star.evaluate(&scaled)) {
        (Ok(ev), Ok(sv)) => match ev.value.scale(x) {
            Ok(expected) => {
                if sv.value.eq_module(&expected) {
                    ProbeOutcome::Ok
                } else {
                    ProbeOutcome::Violation(format!(
                        "scaling: (xE)^★ ≠ x·E^★ for x = {x}, E = {e}"
                    ))
                }
            }
            Err(err) => ProbeOutcome::Undecided(err.to_string()),
        },
        (Err(Error::NotFgRepresentable(b)), _) | (_, Err(Error::NotFgRepresentable(b))) => {
            ProbeOutcome::Undecided(b)
        }
        (Err(err), _) | (_, Err(err)) => ProbeOutcome::Undecided(err.to_string()),
    }
}

fn check_monotone(star: &StarOp, e: &FractionalIdeal, f: &FractionalIdeal) -> ProbeOutcome {
    // E ⊆ E + F gives a comparable pair from any two probes
    let big = match e.sum(f) {
        Ok(s) => s,
        Err(err) => return ProbeOutcome::Undecided(err.to_string()),
    };
    match (star.evaluate(e), star.evaluate(&big)) {
        (Ok(small), Ok(large)) => {
            if small.value.le(&large.value) {
                ProbeOutcome::Ok
            } else {
                ProbeOutcome::Violation(format!(
                    "monotonicity: E ⊆ F but E^★ ⊄ F^★ for E = {e}, F = {big}"
                ))
            }
        }
        (Err(Error::NotFgRepresentable(b)), _) | (_, Err(Error::NotFgRepresentable(b))) => {
            ProbeOutcome::Undecided(b)
        }
        (Err(err), _) | (_, Err(err)) => ProbeOutcome::Undecided(err.to_string()),
    }
}

/// Shrink a failing probe by dropping generators while `violates` stays true.
fn minimize<F: Fn(&FractionalIdeal) -> bool>(e: &FractionalIdeal, violates: F) -> FractionalIdeal {
    let mut current = e.clone();
    loop {
        let gens = current.canonical_gens();
        if gens.len() <= 1 {
            return current;
        }
        let mut shrunk = None;
        for skip in 0..gens.len() {
            let subset: Vec<Value> = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, g)| g.clone())
                .collect();
            if let Ok(sub) = FractionalIdeal::from_gens(current.domain(), &subset) {
                if violates(&sub) {
                    shrunk = Some(sub);
                    break;
                }
            }
        }
        match shrunk {
            Some(s) => current = s,
            None => return current,
        }
    }
}

pub struct CompareOutcome {
    pub verdict: CompareVerdict,
    pub report: Report,
}

/// Pointwise order of two operations restricted to the probe set.
pub fn compare(star1: &StarOp, star2: &StarOp, probes: &ProbeSet) -> Result<CompareOutcome> {
    let t0 = Instant::now();
    if star1.root() != star2.root() {
        return Err(Error::MixedDomains(format!(
            "comparing operations rooted at {} and {}",
            star1.root(),
            star2.root()
        )));
    }
    let mut not_le: Option<String> = None;
    let mut not_ge: Option<String> = None;
    for e in &probes.probes {
        let v1 = star1.evaluate(e)?.value;
        let v2 = star2.evaluate(e)?.value;
        if not_le.is_none() && !v1.le(&v2) {
            not_le = Some(format!("E = {e}: E^({star1}) ⊄ E^({star2})"));
        }
        if not_ge.is_none() && !v2.le(&v1) {
            not_ge = Some(format!("E = {e}: E^({star2}) ⊄ E^({star1})"));
        }
        if not_le.is_some() && not_ge.is_some() {
            break;
        }
    }
    let verdict = match (not_le, not_ge) {
        (None, None) => CompareVerdict::EQ,
        (None, Some(_)) => CompareVerdict::LE,
        (Some(_), None) => CompareVerdict::GE,
        (Some(l), Some(g)) => CompareVerdict::Incomparable {
            not_le_witness: l,
            not_ge_witness: g,
        },
    };
    let statement = format!(
        "compare {} vs {} over {} ({} probes, seed {}): {} (probe-relative)",
        star1,
        star2,
        star1.root(),
        probes.len(),
        probes.seed,
        verdict.as_str()
    );
    let mut report = Report::pass(statement)
        .with_seed(probes.seed)
        .with_ms(t0.elapsed().as_millis());
    if let CompareVerdict::Incomparable {
        not_le_witness,
        not_ge_witness,
    } = &verdict
    {
        report = report.with_witness(format!("{not_le_witness}; {not_ge_witness}"));
    }
    Ok(CompareOutcome { verdict, report })
}

/// Check (E ∩ F)^★ = E^★ ∩ F^★ on all probe pairs.
pub fn stability_check(star: &StarOp, probes: &ProbeSet) -> Report {
    let t0 = Instant::now();
    let statement = format!(
        "check stability {} over {} ({} probes, seed {})",
        star,
        star.root(),
        probes.len(),
        probes.seed
    );
    let mut undecided: Option<String> = None;
    for (i, e) in probes.probes.iter().enumerate() {
        for f in probes.probes.iter().skip(i + 1) {
            match stability_pair(star, e, f) {
                ProbeOutcome::Ok => {}
                ProbeOutcome::Violation(w) => {
                    return finish_fail(statement, w, probes.seed, t0)
                }
                ProbeOutcome::Undecided(b) => {
                    undecided.get_or_insert(b);
                }
            }
        }
    }
    match undecided {
        Some(b) => Report::undecided(statement, b),
        None => Report::pass(statement),
    }
    .with_seed(probes.seed)
    .with_ms(t0.elapsed().as_millis())
}

fn stability_pair(star: &StarOp, e: &FractionalIdeal, f: &FractionalIdeal) -> ProbeOutcome {
    let meet = match e.intersect(f) {
        Ok(m) => m,
        Err(err) => return ProbeOutcome::Undecided(err.to_string()),
    };
    let lhs = match star.evaluate(&meet) {
        Ok(v) => v.value,
        Err(err) => return ProbeOutcome::Undecided(err.to_string()),
    };
    let (ve, vf) = match (star.evaluate(e), star.evaluate(f)) {
        (Ok(a), Ok(b)) => (a.value, b.value),
        (Err(err), _) | (_, Err(err)) => return ProbeOutcome::Undecided(err.to_string()),
    };
    let rhs = match ve.intersect(&vf) {
        Ok(r) => r,
        Err(err) => return ProbeOutcome::Undecided(err.to_string()),
    };
    if lhs.eq_module(&rhs) {
        ProbeOutcome::Ok
    } else {
        ProbeOutcome::Violation(format!(
            "stability: (E∩F)^★ ≠ E^★∩F^★ for E = {e}, F = {f}"
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CancellationMode {
    /// E, F, G all finitely generated.
    Eab,
    /// only E required finitely generated (F, G are f.g. here anyway by
    /// representability).
    Ab,
}

/// For each triple with (EF)^★ ⊆ (EG)^★, check F^★ ⊆ G^★.
pub fn cancellation_check(
    star: &StarOp,
    triples: &[(FractionalIdeal, FractionalIdeal, FractionalIdeal)],
    mode: CancellationMode,
) -> Report {
    let t0 = Instant::now();
    let mode_name = match mode {
        CancellationMode::Eab => "eab",
        CancellationMode::Ab => "ab",
    };
    let statement = format!(
        "check cancellation[{mode_name}] {} over {} ({} triples)",
        star,
        star.root(),
        triples.len()
    );
    let mut undecided: Option<String> = None;
    let mut applicable = 0usize;
    for (e, f, g) in triples {
        let outcome = (|| -> Result<Option<String>> {
            let ef = star.evaluate(&e.product(f)?)?.value;
            let eg = star.evaluate(&e.product(g)?)?.value;
            if !ef.le(&eg) {
                return Ok(None); // hypothesis fails: triple not applicable
            }
            applicable += 1;
            let fs = star.evaluate(f)?.value;
            let gs = star.evaluate(g)?.value;
            if fs.le(&gs) {
                Ok(None)
            } else {
                Ok(Some(format!(
                    "cancellation: (EF)^★ ⊆ (EG)^★ but F^★ ⊄ G^★ for E = {e}, F = {f}, G = {g}"
                )))
            }
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => return finish_fail(statement, w, 0, t0),
            Err(err) => {
                undecided.get_or_insert(err.to_string());
            }
        }
    }
    let trace = vec![format!("{applicable} of {} triples satisfied the hypothesis", triples.len())];
    match undecided {
        Some(b) => Report::undecided(statement, b),
        None => Report::pass(statement),
    }
    .with_trace(trace)
    .with_ms(t0.elapsed().as_millis())
}

/// Condition (↓): for every pair P ≠ P′ in Θ and every Q ∈ deltas[P′] with
/// Q ⊆ P, membership Q ∈ deltas[P] must hold. Reports the violating triple.
pub fn check_down_arrow(
    theta: &[PrimeIdeal],
    deltas: &[(PrimeIdeal, Vec<PrimeIdeal>)],
) -> Report {
    let t0 = Instant::now();
    let statement = format!("check down-arrow over {} primes", theta.len());
    let lookup = |p: &PrimeIdeal| -> Option<&Vec<PrimeIdeal>> {
        deltas.iter().find(|(q, _)| q == p).map(|(_, d)| d)
    };
    for p_prime in theta {
        let Some(delta_prime) = lookup(p_prime) else {
            return finish_fail(
                statement,
                format!("no localized spectrum supplied for {p_prime}"),
                0,
                t0,
            );
        };
        for p in theta {
            if p == p_prime {
                continue;
            }
            let Some(delta_p) = lookup(p) else {
                return finish_fail(
                    statement,
                    format!("no localized spectrum supplied for {p}"),
                    0,
                    t0,
                );
            };
            for q in delta_prime {
                if p.contains_prime(q) && !delta_p.contains(q) {
                    return finish_fail(
                        statement,
                        format!("violating triple (P′, P, Q) = ({p_prime}, {p}, {q})"),
                        0,
                        t0,
                    );
                }
            }
        }
    }
    Report::pass(statement).with_ms(t0.elapsed().as_millis())
}

/// The three localization relations for the divisorial operation:
/// (FD_P)^{v_{D_P}} = (F^{v_D}·D_P)^{v_{D_P}} (must hold always),
/// (FD_P)^{v_{D_P}} = F^{v_D}·D_P (must hold over Dedekind/UFD backends),
/// and (FD_P)^{v_{D_P}} ⊆ (FD_P)^{v_P} for the ascended operation.
pub fn v_compare_local(f: &FractionalIdeal, p: &PrimeIdeal) -> Result<Report> {
    let t0 = Instant::now();
    let d = f.domain().clone();
    if p.domain() != &d {
        return Err(Error::MixedDomains(format!(
            "prime over {} against an ideal over {}",
            p.domain(),
            d
        )));
    }
    let statement = format!("check v-localization F = {f}, P = {p} over {d}");
    if p.is_zero() {
        return Ok(Report::pass(statement)
            .with_witness("vacuous at the zero prime: D_(0) = K")
            .with_ms(t0.elapsed().as_millis()));
    }
    let loc = Domain::localized(d.clone(), vec![p.clone()])?;
    let v_d = StarOp::divisorial(&d);
    let v_loc = StarOp::divisorial(&loc);

    let fp = f.extend_to(&loc)?;
    let lhs = v_loc.evaluate(&fp)?.value;

    let fv = v_d.evaluate(f)?.value;
    let fv_ideal = match &fv {
        Closure::Fg(i) => i.clone(),
        Closure::WholeField => {
            return Err(Error::NotFgRepresentable(
                "divisorial closure of a f.g. ideal left the f.g. world".into(),
            ))
        }
    };
    let fv_dp = fv_ideal.extend_to(&loc)?;
    let mid = v_loc.evaluate(&fv_dp)?.value;
    let rhs = Closure::fg(fv_dp.clone());

    let lemma31 = lhs.eq_module(&mid);
    let lemma32 = lhs.eq_module(&rhs);
    let ascended = StarOp::ascend(v_d.clone(), p.clone())?;
    let prop33 = match ascended.evaluate(&fp) {
        Ok(up) => lhs.le(&up.value),
        Err(_) => true, // the ascended value is all of K here
    };

    let coherent_backend = d.is_dedekind() || d.is_ufd();
    let must = lemma31 && prop33 && (!coherent_backend || lemma32);
    let trace = vec![
        format!("(FD_P)^v_loc computed; equality with (F^v D_P)^v_loc: {lemma31}"),
        format!("equality with F^v·D_P: {lemma32} (required here: {coherent_backend})"),
        format!("contained in the ascended closure: {prop33}"),
    ];
    let report = if must {
        Report::pass(statement)
    } else {
        Report::fail(
            statement,
            format!(
                "relations: local-v equality {lemma31}, extension equality {lemma32}, ascent inclusion {prop33}"
            ),
        )
    };
    Ok(report.with_trace(trace).with_ms(t0.elapsed().as_millis()))
}

/// Lemma-style agreement of t-primality under localization: P = P^t in D
/// iff PD_Q = (PD_Q)^{t_Q} in D_Q, for P ⊆ Q.
pub fn t_prime_local_test(p: &PrimeIdeal, q: &PrimeIdeal) -> Result<Report> {
    let t0 = Instant::now();
    if !q.contains_prime(p) {
        return Err(Error::MixedDomains(format!(
            "t-prime localization test needs P ⊆ Q, got P = {p}, Q = {q}"
        )));
    }
    let statement = format!("check t-prime localization P = {p} inside Q = {q}");
    if p.is_zero() {
        return Ok(Report::pass(statement)
            .with_witness("vacuous at the zero prime")
            .with_ms(t0.elapsed().as_millis()));
    }
    let d = p.domain().clone();
    let v_d = StarOp::divisorial(&d);
    let global = v_d
        .evaluate(p.ideal())?
        .value
        .eq_module(&Closure::Fg(p.ideal().clone()));

    let loc = Domain::localized(d, vec![q.clone()])?;
    let pdq = p.ideal().extend_to(&loc)?;
    let v_loc = StarOp::divisorial(&loc);
    let local = v_loc
        .evaluate(&pdq)?
        .value
        .eq_module(&Closure::Fg(pdq.clone()));

    let agree = global == local;
    let trace = vec![
        format!("P^t = P in D: {global}"),
        format!("(PD_Q)^t = PD_Q in D_Q: {local}"),
    ];
    let report = if agree {
        Report::pass(statement).with_witness(format!("both sides: {global}"))
    } else {
        Report::fail(
            statement,
            format!("verdicts disagree: global {global}, localized {local}"),
        )
    };
    Ok(report.with_trace(trace).with_ms(t0.elapsed().as_millis()))
}

/// Debug assertion for glued operations: (E^∧·D_P)^{*_P} = (E·D_P)^{*_P}
/// for each component P (the value of a wedge is already locally closed).
pub fn glue_locally_closed(glue: &StarOp, probes: &ProbeSet) -> Result<Report> {
    let t0 = Instant::now();
    let StarOp::Glue { root, parts } = glue else {
        return Err(Error::UnsupportedBackend(
            "glue_locally_closed takes a glued operation".into(),
        ));
    };
    let statement = format!(
        "check glue-local-closure {} ({} probes, seed {})",
        glue,
        probes.len(),
        probes.seed
    );
    for e in &probes.probes {
        let wedge = glue.evaluate(e)?.value;
        let Closure::Fg(wedge_ideal) = &wedge else {
            continue; // E^∧ = K: both sides K
        };
        for (p, s) in parts {
            if p.is_zero() {
                continue;
            }
            let loc = Domain::localized(root.base().clone(), vec![p.clone()])?;
            let e_dp = FractionalIdeal::from_gens(&loc, &e.canonical_gens())?;
            // D_{∪Γ} ⊆ D_P for every component, so the D_P-module generated
            // by the wedge's generators is exactly E^∧·D_P.
            let w_dp = FractionalIdeal::from_gens(&loc, &wedge_ideal.canonical_gens())?;
            let lhs = s.evaluate(&w_dp)?.value;
            let rhs = s.evaluate(&e_dp)?.value;
            if !lhs.eq_module(&rhs) {
                return Ok(Report::fail(
                    statement,
                    format!("component P = {p}, probe E = {e}: (E^∧D_P)^* ≠ (ED_P)^*"),
                )
                .with_seed(probes.seed)
                .with_ms(t0.elapsed().as_millis()));
            }
        }
    }
    Ok(Report::pass(statement)
        .with_seed(probes.seed)
        .with_ms(t0.elapsed().as_millis()))
}

/// Wrap the quasi-★-prime decision in a Report (used by script runners).
pub fn quasi_prime_report(star: &StarOp, p: &PrimeIdeal) -> Result<Report> {
    let t0 = Instant::now();
    let verdict = is_quasi_star_prime(star, p)?;
    let statement = format!("check quasi-star-prime {} under {}", p, star);
    let report = if verdict {
        Report::pass(statement).with_witness("P^★ ∩ D = P")
    } else {
        Report::fail(statement, "P^★ ∩ D ≠ P")
    };
    Ok(report.with_ms(t0.elapsed().as_millis()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::parse_value;
    use crate::report::Verdict;

    fn prime(d: &Domain, gens: &[&str]) -> PrimeIdeal {
        let vals: Vec<Value> = gens.iter().map(|g| parse_value(g, d).unwrap()).collect();
        PrimeIdeal::new(d, &vals).unwrap()
    }

    fn ideal(d: &Domain, gens: &[&str]) -> FractionalIdeal {
        let vals: Vec<Value> = gens.iter().map(|g| parse_value(g, d).unwrap()).collect();
        FractionalIdeal::from_gens(d, &vals).unwrap()
    }

    #[test]
    fn axioms_pass_for_identity_and_divisorial() {
        let z = Domain::Int;
        let probes = ProbeSet::generate(&z, 11, 12).unwrap();
        let scalars = ProbeSet::scalars(&z, 11, 3);
        let r = axioms_check(&StarOp::identity(&z), &probes, &scalars);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);

        let zw = Domain::quadratic(-5).unwrap();
        let probes = ProbeSet::generate(&zw, 11, 10).unwrap();
        let scalars = ProbeSet::scalars(&zw, 11, 3);
        let r = axioms_check(&StarOp::divisorial(&zw), &probes, &scalars);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }

    #[test]
    fn axioms_pass_for_spectral_on_quad() {
        let zw = Domain::quadratic(-5).unwrap();
        let p = prime(&zw, &["2", "1+w"]);
        let star = StarOp::spectral(&zw, vec![p]).unwrap();
        let probes = ProbeSet::generate(&zw, 5, 10).unwrap();
        let scalars = ProbeSet::scalars(&zw, 5, 3);
        let r = axioms_check(&star, &probes, &scalars);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }

    #[test]
    fn compare_identity_trivial_and_spectral() {
        let z = Domain::Int;
        let probes = ProbeSet::generate(&z, 3, 10).unwrap();
        let d = StarOp::identity(&z);
        let e = StarOp::trivial(&z);
        let out = compare(&d, &e, &probes).unwrap();
        assert_eq!(out.verdict, CompareVerdict::LE);

        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let big = StarOp::spectral(&z, vec![p2.clone(), p3.clone()]).unwrap();
        let small = StarOp::spectral(&z, vec![p2]).unwrap();
        let out = compare(&big, &small, &probes).unwrap();
        assert_eq!(out.verdict, CompareVerdict::LE);
    }

    #[test]
    fn spectral_is_stable() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let star = StarOp::spectral(&z, vec![p2, p3]).unwrap();
        let probes = ProbeSet::generate(&z, 9, 10).unwrap();
        let r = stability_check(&star, &probes);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }

    #[test]
    fn cancellation_holds_on_pid() {
        let z = Domain::Int;
        let probes = ProbeSet::generate(&z, 17, 9).unwrap();
        let triples: Vec<_> = probes
            .probes
            .chunks(3)
            .filter(|c| c.len() == 3)
            .map(|c| (c[0].clone(), c[1].clone(), c[2].clone()))
            .collect();
        let r = cancellation_check(&StarOp::identity(&z), &triples, CancellationMode::Eab);
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }

    #[test]
    fn down_arrow_counterexample_over_poly_ring() {
        let zy = Domain::IntPoly;
        let p1 = prime(&zy, &["2", "Y"]);
        let p2 = prime(&zy, &["3", "Y"]);
        let q = prime(&zy, &["Y"]);
        let zero = PrimeIdeal::zero(&zy);
        let theta = vec![p1.clone(), p2.clone()];
        // P₁'s spectrum has its full generization set; P₂'s only the zero
        // prime: Q = (Y) ⊆ P₂ witnesses the failure.
        let deltas = vec![
            (p1.clone(), vec![q.clone(), zero.clone()]),
            (p2.clone(), vec![zero.clone()]),
        ];
        let r = check_down_arrow(&theta, &deltas);
        assert_eq!(r.verdict, Verdict::Fail);
        let w = r.witness.unwrap();
        assert!(w.contains("(Y)"), "witness was: {w}");

        // completing the spectrum repairs it
        let deltas_ok = vec![
            (p1.clone(), vec![q.clone(), zero.clone()]),
            (p2.clone(), vec![q.clone(), zero.clone()]),
        ];
        let r2 = check_down_arrow(&theta, &deltas_ok);
        assert_eq!(r2.verdict, Verdict::Pass);
    }

    #[test]
    fn v_localization_relations_hold() {
        let zw = Domain::quadratic(-5).unwrap();
        let f = ideal(&zw, &["2", "1+w"]);
        let p = prime(&zw, &["3", "1+w"]);
        let r = v_compare_local(&f, &p).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);

        let zy = Domain::IntPoly;
        let f = ideal(&zy, &["Y", "3"]);
        let p = prime(&zy, &["2", "Y"]);
        let r = v_compare_local(&f, &p).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }

    #[test]
    fn t_prime_localization_agrees() {
        let zw = Domain::quadratic(-5).unwrap();
        let p = prime(&zw, &["2", "1+w"]);
        let r = t_prime_local_test(&p, &p).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);

        let zy = Domain::IntPoly;
        let m = prime(&zy, &["3", "Y"]);
        let r = t_prime_local_test(&m, &m).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
        // (3,Y) is not a t-prime and the report says both sides agree on that
        assert!(r.trace.iter().any(|l| l.contains("false")));
    }

    #[test]
    fn glue_is_locally_closed() {
        let z = Domain::Int;
        let p2 = prime(&z, &["2"]);
        let p3 = prime(&z, &["3"]);
        let l2 = Domain::localized(z.clone(), vec![p2.clone()]).unwrap();
        let l3 = Domain::localized(z.clone(), vec![p3.clone()]).unwrap();
        let glue = StarOp::glue(
            &z,
            vec![
                (p2, StarOp::identity(&l2)),
                (p3, StarOp::divisorial(&l3)),
            ],
        )
        .unwrap();
        let probes = ProbeSet::generate(&z, 23, 8).unwrap();
        let r = glue_locally_closed(&glue, &probes).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.witness);
    }
}
