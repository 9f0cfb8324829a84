//! Line-oriented script syntax: definitions, checks, suites, options.
//!
//! One statement per line; `#` starts a comment. Names must be defined
//! before use; the whole script is validated (names, kinds, option values)
//! before anything runs, and problems are reported with their line number.

use std::collections::HashMap;

use crate::starexpr::{parse_domain_arg, parse_star_expr, referenced_names, DomainArg, StarExpr};

#[derive(Debug, Clone)]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ScriptError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ScriptError> {
    Err(ScriptError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone)]
pub enum CheckKind {
    Axioms { star: String },
    Compare { left: String, right: String },
    Stability { star: String },
    Cancellation { star: String, mode: String },
    DownArrow { groups: Vec<(String, Vec<String>)> },
    VLocal { ideal: String, prime: String },
    TPrime { p: String, q: String },
    GlueLocal { star: String },
    Quasi { star: String, prime: String },
    InN { poly: String, star: String },
    NagataUnit { poly: String, star: String, prime: String },
    KrMember { num: String, den: String, star: String },
    NaKr { star: String, polys: Vec<String> },
    Pair { a: String, b: String, star: String },
    DualOracle { poly: String, prime: String },
}

#[derive(Debug, Clone)]
pub struct Check {
    pub kind: CheckKind,
    /// Expected outcome: `pass`/`fail` for report checks, an oracle label
    /// (`Unit`, `Member`, `true`, ...) for decision checks.
    pub expect: Option<String>,
    /// Parenthesized polynomial texts fed to witness searches.
    pub hints: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Suite {
    Pmd {
        star: String,
        primes: Vec<String>,
        probes: Vec<String>,
    },
    Pipeline {
        star: String,
        gens: Vec<String>,
        a: String,
    },
    PairIdentity {
        domain: String,
        count: usize,
    },
}

#[derive(Debug, Clone)]
pub enum Statement {
    Domain {
        name: String,
        arg: DomainArg,
    },
    Prime {
        name: String,
        gens: Vec<String>,
        over: String,
        asserted: bool,
    },
    Ideal {
        name: String,
        gens: Vec<String>,
        over: String,
    },
    Poly {
        name: String,
        text: String,
        over: String,
    },
    Star {
        name: String,
        expr: StarExpr,
        over: Option<String>,
    },
    Eval {
        star: String,
        ideal: String,
    },
    Check(Check),
    Suite(Suite),
    Set {
        option: String,
        value: String,
    },
}

#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    /// The statement as written (comments stripped), echoed in reports.
    pub text: String,
    pub statement: Statement,
}

#[derive(Debug, Clone)]
pub struct Script {
    pub lines: Vec<Line>,
}

const RESERVED: &[&str] = &[
    "domain", "prime", "ideal", "poly", "star", "eval", "check", "suite", "set", "over",
    "asserted", "expect", "hint", "primes", "probes", "d", "e", "v", "ext", "spectral", "ascend",
    "glue", "eab", "tilde", "vfam", "int", "rat", "intpoly", "ratpoly", "quad", "localize", "loc",
    "Z", "Q", "Zw", "ZY", "QY", "K", "X", "Y", "w", "pass", "fail", "true", "false",
];

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&s)
}

/// Split on top-level whitespace; parenthesized spans stay in one token.
fn split_tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Split on top-level commas.
fn split_commas(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    out.push(cur);
    out.iter()
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

pub(crate) fn strip_parens(s: &str) -> Option<&str> {
    let t = s.trim();
    if !t.starts_with('(') || !t.ends_with(')') {
        return None;
    }
    // the trailing ')' must close the leading '('
    let mut depth = 0usize;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return (i == t.len() - 1).then(|| t[1..t.len() - 1].trim());
                }
            }
            _ => {}
        }
    }
    None
}

pub fn parse_script(source: &str) -> Result<Script, ScriptError> {
    let mut lines = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let number = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim().to_string();
        if text.is_empty() {
            continue;
        }
        let statement = parse_statement(&text).map_err(|message| ScriptError { line: number, message })?;
        lines.push(Line {
            number,
            text,
            statement,
        });
    }
    Ok(Script { lines })
}

fn parse_statement(text: &str) -> Result<Statement, String> {
    let (head, rest) = match text.split_once(char::is_whitespace) {
        Some((h, r)) => (h, r.trim()),
        None => (text, ""),
    };
    match head {
        "domain" => {
            let (name, body) = named_def(rest)?;
            Ok(Statement::Domain {
                name,
                arg: parse_domain_arg(body)?,
            })
        }
        "prime" => {
            let (name, body) = named_def(rest)?;
            let (gens_text, mut tail) = split_over(body)?;
            let mut asserted = false;
            if let Some(t) = tail.strip_suffix(" asserted") {
                asserted = true;
                tail = t.trim().to_string();
            }
            Ok(Statement::Prime {
                name,
                gens: gen_list(&gens_text)?,
                over: ident_only(&tail)?,
                asserted,
            })
        }
        "ideal" => {
            let (name, body) = named_def(rest)?;
            let (gens_text, tail) = split_over(body)?;
            Ok(Statement::Ideal {
                name,
                gens: gen_list(&gens_text)?,
                over: ident_only(&tail)?,
            })
        }
        "poly" => {
            let (name, body) = named_def(rest)?;
            let (text, tail) = split_over(body)?;
            if text.is_empty() {
                return Err("empty polynomial".into());
            }
            Ok(Statement::Poly {
                name,
                text,
                over: ident_only(&tail)?,
            })
        }
        "star" => {
            let (name, body) = named_def(rest)?;
            let (expr_text, over) = match rsplit_over(body) {
                Some((e, o)) => (e, Some(ident_only(&o)?)),
                None => (body.to_string(), None),
            };
            Ok(Statement::Star {
                name,
                expr: parse_star_expr(&expr_text)?,
                over,
            })
        }
        "eval" => {
            let (star, arg) = rest
                .split_once('(')
                .ok_or("eval takes star(ideal)")?;
            let ideal = arg
                .trim()
                .strip_suffix(')')
                .ok_or("eval takes star(ideal)")?;
            Ok(Statement::Eval {
                star: ident_only(star)?,
                ideal: ident_only(ideal)?,
            })
        }
        "check" => parse_check(rest).map(Statement::Check),
        "suite" => parse_suite(rest).map(Statement::Suite),
        "set" => {
            let (option, value) = rest
                .split_once('=')
                .ok_or("set takes option = value")?;
            Ok(Statement::Set {
                option: ident_only(option)?,
                value: value.trim().to_string(),
            })
        }
        other => Err(format!("unknown statement '{other}'")),
    }
}

fn named_def(rest: &str) -> Result<(String, &str), String> {
    let (name, body) = rest.split_once('=').ok_or("definition takes name = ...")?;
    let name = name.trim();
    if !valid_name(name) {
        return Err(format!("'{name}' is not usable as a name"));
    }
    Ok((name.to_string(), body.trim()))
}

fn split_over(body: &str) -> Result<(String, String), String> {
    rsplit_over(body).ok_or_else(|| "missing `over <domain>` clause".into())
}

fn rsplit_over(body: &str) -> Option<(String, String)> {
    let idx = body.rfind(" over ")?;
    Some((
        body[..idx].trim().to_string(),
        body[idx + " over ".len()..].trim().to_string(),
    ))
}

fn ident_only(s: &str) -> Result<String, String> {
    let t = s.trim();
    if t.is_empty() || !t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("expected a name, got '{t}'"));
    }
    Ok(t.to_string())
}

fn gen_list(text: &str) -> Result<Vec<String>, String> {
    let inner = strip_parens(text).ok_or("generators must be parenthesized: (g1, g2)")?;
    let gens = split_commas(inner);
    if gens.is_empty() {
        return Err("at least one generator required".into());
    }
    Ok(gens)
}

/// Pull trailing `expect <word>` and `hint (<poly>)` off a token list.
fn take_trailers(tokens: &mut Vec<String>) -> Result<(Option<String>, Vec<String>), String> {
    let mut expect = None;
    let mut hints = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i].as_str() {
            "expect" => {
                let label = tokens
                    .get(i + 1)
                    .ok_or("expect needs a label")?
                    .clone();
                if expect.replace(label).is_some() {
                    return Err("duplicate expect".into());
                }
                tokens.drain(i..=i + 1);
            }
            "hint" => {
                let h = tokens.get(i + 1).ok_or("hint needs a (polynomial)")?;
                let inner = strip_parens(h).ok_or("hint takes a parenthesized polynomial")?;
                hints.push(inner.to_string());
                tokens.drain(i..=i + 1);
            }
            _ => i += 1,
        }
    }
    Ok((expect, hints))
}

fn arg(tokens: &[String], i: usize, what: &str) -> Result<String, String> {
    tokens
        .get(i)
        .cloned()
        .ok_or_else(|| format!("missing {what}"))
}

fn parse_check(rest: &str) -> Result<Check, String> {
    let mut tokens = split_tokens(rest);
    if tokens.is_empty() {
        return Err("check needs a kind".into());
    }
    let kind_name = tokens.remove(0);
    let (expect, hints) = take_trailers(&mut tokens)?;
    let kind = match kind_name.as_str() {
        "axioms" => CheckKind::Axioms {
            star: arg(&tokens, 0, "star")?,
        },
        "compare" => CheckKind::Compare {
            left: arg(&tokens, 0, "first star")?,
            right: arg(&tokens, 1, "second star")?,
        },
        "stability" => CheckKind::Stability {
            star: arg(&tokens, 0, "star")?,
        },
        "cancellation" => {
            let mode = tokens.get(1).cloned().unwrap_or_else(|| "eab".into());
            if mode != "eab" && mode != "ab" {
                return Err(format!("cancellation mode must be eab or ab, got '{mode}'"));
            }
            CheckKind::Cancellation {
                star: arg(&tokens, 0, "star")?,
                mode,
            }
        }
        "down_arrow" => {
            if tokens.is_empty() {
                return Err("down_arrow needs (P: Q1, Q2) groups".into());
            }
            let mut groups = Vec::new();
            for t in &tokens {
                let inner = strip_parens(t).ok_or("each down_arrow group is (P: Q1, Q2)")?;
                let (p, qs) = inner.split_once(':').ok_or("group needs P: ...")?;
                groups.push((ident_only(p)?, {
                    let qs = qs.trim();
                    if qs.is_empty() {
                        Vec::new()
                    } else {
                        split_commas(qs)
                            .iter()
                            .map(|q| ident_only(q))
                            .collect::<Result<Vec<_>, _>>()?
                    }
                }));
            }
            CheckKind::DownArrow { groups }
        }
        "v_local" => CheckKind::VLocal {
            ideal: arg(&tokens, 0, "ideal")?,
            prime: arg(&tokens, 1, "prime")?,
        },
        "t_prime" => CheckKind::TPrime {
            p: arg(&tokens, 0, "inner prime")?,
            q: arg(&tokens, 1, "outer prime")?,
        },
        "glue_local" => CheckKind::GlueLocal {
            star: arg(&tokens, 0, "glued star")?,
        },
        "quasi" => CheckKind::Quasi {
            star: arg(&tokens, 0, "star")?,
            prime: arg(&tokens, 1, "prime")?,
        },
        "in_n" => CheckKind::InN {
            poly: arg(&tokens, 0, "polynomial")?,
            star: arg(&tokens, 1, "star")?,
        },
        "nagata_unit" => CheckKind::NagataUnit {
            poly: arg(&tokens, 0, "polynomial")?,
            star: arg(&tokens, 1, "star")?,
            prime: arg(&tokens, 2, "prime")?,
        },
        "kr_member" => CheckKind::KrMember {
            num: arg(&tokens, 0, "numerator polynomial")?,
            den: arg(&tokens, 1, "denominator polynomial")?,
            star: arg(&tokens, 2, "star")?,
        },
        "na_kr" => {
            if tokens.len() < 2 {
                return Err("na_kr takes a star then polynomials".into());
            }
            CheckKind::NaKr {
                star: tokens[0].clone(),
                polys: tokens[1..].to_vec(),
            }
        }
        "pair" => CheckKind::Pair {
            a: arg(&tokens, 0, "first element")?,
            b: arg(&tokens, 1, "second element")?,
            star: arg(&tokens, 2, "star")?,
        },
        "dual_oracle" => CheckKind::DualOracle {
            poly: arg(&tokens, 0, "polynomial")?,
            prime: arg(&tokens, 1, "prime")?,
        },
        other => return Err(format!("unknown check '{other}'")),
    };
    Ok(Check {
        kind,
        expect,
        hints,
    })
}

fn parse_suite(rest: &str) -> Result<Suite, String> {
    let tokens = split_tokens(rest);
    if tokens.is_empty() {
        return Err("suite needs a name".into());
    }
    match tokens[0].as_str() {
        "pmd" => {
            let star = arg(&tokens, 1, "star")?;
            let mut primes = None;
            let mut probes = None;
            for t in &tokens[2..] {
                if let Some(inner) = t.strip_prefix("primes").and_then(strip_parens) {
                    primes = Some(split_commas(inner));
                } else if let Some(inner) = t.strip_prefix("probes").and_then(strip_parens) {
                    probes = Some(split_commas(inner));
                } else {
                    return Err(format!("unexpected pmd argument '{t}'"));
                }
            }
            Ok(Suite::Pmd {
                star,
                primes: primes.ok_or("pmd needs primes(P1, ...)")?,
                probes: probes.ok_or("pmd needs probes(I1, ...)")?,
            })
        }
        "pipeline" => {
            let star = arg(&tokens, 1, "star")?;
            let gens_tok = arg(&tokens, 2, "(generators)")?;
            let gens =
                split_commas(strip_parens(&gens_tok).ok_or("generators must be parenthesized")?);
            if gens.is_empty() {
                return Err("pipeline needs at least one generator".into());
            }
            let a = arg(&tokens, 3, "scalar a")?;
            Ok(Suite::Pipeline { star, gens, a })
        }
        "pair_identity" => {
            let domain = arg(&tokens, 1, "domain")?;
            let count: usize = arg(&tokens, 2, "pair count")?
                .parse()
                .map_err(|_| "pair count must be a number")?;
            if count == 0 {
                return Err("pair count must be positive".into());
            }
            Ok(Suite::PairIdentity { domain, count })
        }
        other => Err(format!("unknown suite '{other}'")),
    }
}

// ---------------------------------------------------------------------------
// static validation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Domain,
    Prime,
    Ideal,
    Poly,
    Star,
}

impl Kind {
    fn as_str(&self) -> &'static str {
        match self {
            Kind::Domain => "domain",
            Kind::Prime => "prime",
            Kind::Ideal => "ideal",
            Kind::Poly => "poly",
            Kind::Star => "star",
        }
    }
}

/// Reject undefined or wrongly typed references before anything executes.
pub fn validate(script: &Script) -> Result<(), ScriptError> {
    let mut table: HashMap<String, Kind> = HashMap::new();
    fn define(
        table: &mut HashMap<String, Kind>,
        name: &str,
        kind: Kind,
        line: usize,
    ) -> Result<(), ScriptError> {
        if table.contains_key(name) {
            return err(line, format!("'{name}' is already defined"));
        }
        table.insert(name.to_string(), kind);
        Ok(())
    }
    fn expect(
        table: &HashMap<String, Kind>,
        name: &str,
        kind: Kind,
        line: usize,
    ) -> Result<(), ScriptError> {
        match table.get(name) {
            None => err(line, format!("undefined name '{name}'")),
            Some(k) if *k != kind => err(
                line,
                format!("'{name}' is a {}, expected a {}", k.as_str(), kind.as_str()),
            ),
            Some(_) => Ok(()),
        }
    }

    for l in &script.lines {
        let line = l.number;
        match &l.statement {
            Statement::Domain { name, arg } => {
                let mut refs = Vec::new();
                crate::starexpr::referenced_domain_names(arg, &mut refs);
                for (n, kind) in refs {
                    expect(&table, &n, str_kind(kind), line)?;
                }
                define(&mut table, name, Kind::Domain, line)?;
            }
            Statement::Prime { name, over, .. } => {
                expect(&table, over, Kind::Domain, line)?;
                define(&mut table, name, Kind::Prime, line)?;
            }
            Statement::Ideal { name, over, .. } => {
                expect(&table, over, Kind::Domain, line)?;
                define(&mut table, name, Kind::Ideal, line)?;
            }
            Statement::Poly { name, over, .. } => {
                expect(&table, over, Kind::Domain, line)?;
                define(&mut table, name, Kind::Poly, line)?;
            }
            Statement::Star { name, expr, over } => {
                if let Some(o) = over {
                    expect(&table, o, Kind::Domain, line)?;
                }
                let mut refs = Vec::new();
                referenced_names(expr, &mut refs);
                for (n, kind) in refs {
                    expect(&table, &n, str_kind(kind), line)?;
                }
                define(&mut table, name, Kind::Star, line)?;
            }
            Statement::Eval { star, ideal } => {
                expect(&table, star, Kind::Star, line)?;
                expect(&table, ideal, Kind::Ideal, line)?;
            }
            Statement::Check(check) => {
                for (n, kind) in check_refs(&check.kind) {
                    expect(&table, &n, kind, line)?;
                }
                validate_expect(check, line)?;
            }
            Statement::Suite(suite) => match suite {
                Suite::Pmd {
                    star,
                    primes,
                    probes,
                } => {
                    expect(&table, star, Kind::Star, line)?;
                    for p in primes {
                        expect(&table, p, Kind::Prime, line)?;
                    }
                    for p in probes {
                        expect(&table, p, Kind::Ideal, line)?;
                    }
                }
                Suite::Pipeline { star, .. } => expect(&table, star, Kind::Star, line)?,
                Suite::PairIdentity { domain, .. } => expect(&table, domain, Kind::Domain, line)?,
            },
            Statement::Set { option, value } => {
                let ok = match option.as_str() {
                    "seed" => value.parse::<u64>().is_ok(),
                    "probes" | "trials" | "jobs" | "bound_degree" => value.parse::<usize>().is_ok(),
                    "bound_height" => value.parse::<i64>().is_ok(),
                    "strict" => value == "true" || value == "false",
                    other => return err(line, format!("unknown option '{other}'")),
                };
                if !ok {
                    return err(line, format!("bad value '{value}' for option {option}"));
                }
            }
        }
    }
    Ok(())
}

fn str_kind(s: &str) -> Kind {
    match s {
        "domain" => Kind::Domain,
        "prime" => Kind::Prime,
        "ideal" => Kind::Ideal,
        "star" => Kind::Star,
        _ => unreachable!("unknown reference kind {s}"),
    }
}

fn check_refs(kind: &CheckKind) -> Vec<(String, Kind)> {
    let mut out = Vec::new();
    match kind {
        CheckKind::Axioms { star }
        | CheckKind::Stability { star }
        | CheckKind::GlueLocal { star }
        | CheckKind::Cancellation { star, .. } => out.push((star.clone(), Kind::Star)),
        CheckKind::Compare { left, right } => {
            out.push((left.clone(), Kind::Star));
            out.push((right.clone(), Kind::Star));
        }
        CheckKind::DownArrow { groups } => {
            for (p, qs) in groups {
                out.push((p.clone(), Kind::Prime));
                for q in qs {
                    out.push((q.clone(), Kind::Prime));
                }
            }
        }
        CheckKind::VLocal { ideal, prime } => {
            out.push((ideal.clone(), Kind::Ideal));
            out.push((prime.clone(), Kind::Prime));
        }
        CheckKind::TPrime { p, q } => {
            out.push((p.clone(), Kind::Prime));
            out.push((q.clone(), Kind::Prime));
        }
        CheckKind::Quasi { star, prime } => {
            out.push((star.clone(), Kind::Star));
            out.push((prime.clone(), Kind::Prime));
        }
        CheckKind::InN { poly, star } => {
            out.push((poly.clone(), Kind::Poly));
            out.push((star.clone(), Kind::Star));
        }
        CheckKind::NagataUnit { poly, star, prime } => {
            out.push((poly.clone(), Kind::Poly));
            out.push((star.clone(), Kind::Star));
            out.push((prime.clone(), Kind::Prime));
        }
        CheckKind::KrMember { num, den, star } => {
            out.push((num.clone(), Kind::Poly));
            out.push((den.clone(), Kind::Poly));
            out.push((star.clone(), Kind::Star));
        }
        CheckKind::NaKr { star, polys } => {
            out.push((star.clone(), Kind::Star));
            for p in polys {
                out.push((p.clone(), Kind::Poly));
            }
        }
        CheckKind::Pair { star, .. } => out.push((star.clone(), Kind::Star)),
        CheckKind::DualOracle { poly, prime } => {
            out.push((poly.clone(), Kind::Poly));
            out.push((prime.clone(), Kind::Prime));
        }
    }
    out
}

fn validate_expect(check: &Check, line: usize) -> Result<(), ScriptError> {
    let allowed: &[&str] = match &check.kind {
        CheckKind::InN { .. } => &["true", "false"],
        CheckKind::NagataUnit { .. } => &["Unit", "NonUnit"],
        CheckKind::KrMember { .. } => &["Member", "NonMember"],
        CheckKind::DualOracle { .. } => &["Unit", "NonUnit"],
        // compare may pin the probe-relative order itself
        CheckKind::Compare { .. } => &["pass", "fail", "LE", "GE", "EQ", "Incomparable"],
        _ => &["pass", "fail"],
    };
    if let Some(e) = &check.expect {
        if !allowed.contains(&e.as_str()) {
            return err(
                line,
                format!("expect takes one of {allowed:?} here, got '{e}'"),
            );
        }
    }
    let hints_ok = matches!(
        check.kind,
        CheckKind::NagataUnit { .. } | CheckKind::DualOracle { .. }
    );
    if !check.hints.is_empty() && !hints_ok {
        return err(line, "hint only applies to witness searches");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements_parse_and_validate() {
        let src = "
# worked example setup
domain R = intpoly
prime P2 = (2) over R
ideal I = (Y, 3) over R
poly f = Y*X + 3 over R
star s = d over R
star sv = v over R
eval sv(I)
check axioms s
check compare s sv
check nagata_unit f s P2 expect NonUnit
suite pmd s primes(P2) probes(I)
suite pipeline s (4, 6) 10
suite pair_identity R 100
set seed = 7
";
        let script = parse_script(src).unwrap();
        assert_eq!(script.lines.len(), 14);
        validate(&script).unwrap();
    }

    #[test]
    fn undefined_names_are_rejected_with_the_line() {
        let src = "domain Z0 = int\ncheck axioms missing";
        let e = validate(&parse_script(src).unwrap()).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("missing"), "{}", e.message);
    }

    #[test]
    fn kind_mismatches_are_rejected() {
        let src = "domain Z0 = int\nideal I = (2) over Z0\ncheck axioms I";
        let e = validate(&parse_script(src).unwrap()).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("expected a star"), "{}", e.message);
    }

    #[test]
    fn duplicate_and_reserved_names_are_rejected() {
        let e = validate(&parse_script("domain A = int\ndomain A = rat").unwrap()).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_script("domain spectral = int").is_err());
    }

    #[test]
    fn bad_option_values_are_rejected() {
        let e = validate(&parse_script("set seed = soon").unwrap()).unwrap_err();
        assert!(e.message.contains("bad value"));
        assert!(validate(&parse_script("set nope = 1").unwrap()).is_err());
    }

    #[test]
    fn down_arrow_groups_parse() {
        let src = "
domain ZY0 = intpoly
prime PA = (2, Y) over ZY0
prime PB = (3, Y) over ZY0
prime Qy = (Y) over ZY0
check down_arrow (PA: Qy) (PB: Qy) expect fail
";
        let script = parse_script(src).unwrap();
        validate(&script).unwrap();
        let Statement::Check(c) = &script.lines.last().unwrap().statement else {
            panic!("not a check");
        };
        assert_eq!(c.expect.as_deref(), Some("fail"));
        let CheckKind::DownArrow { groups } = &c.kind else {
            panic!("wrong kind");
        };
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].0, "PA");
        assert_eq!(groups[0].1, vec!["Qy".to_string()]);
    }
}
