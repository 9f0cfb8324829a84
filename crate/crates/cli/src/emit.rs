//! Per-statement records and the versioned report envelope.
//!
//! A `Record` extends the core report shape with the script line it came
//! from, boolean flags (`asserted`, `error`, `approximation`,
//! `paper-discrepancy`), and an optional structured `details` payload
//! (oracle certificates, suite tables). Json emission zeroes every timing
//! field so identical (script, seed, bounds) runs are byte-identical.

use semistar_core::report::{Report, Verdict};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub line: usize,
    pub statement: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    pub ms: u128,
}

impl Record {
    pub fn new(line: usize, statement: impl Into<String>, verdict: Verdict) -> Record {
        Record {
            line,
            statement: statement.into(),
            inputs: Vec::new(),
            verdict,
            witness: None,
            trace: Vec::new(),
            exactness: None,
            seed: None,
            bound: None,
            flags: Vec::new(),
            details: None,
            ms: 0,
        }
    }

    pub fn pass(line: usize, statement: impl Into<String>) -> Record {
        Record::new(line, statement, Verdict::Pass)
    }

    /// An execution error: the statement could not be evaluated. Counts as
    /// a failure (the run is not clean) and carries the `error` flag.
    pub fn error(line: usize, statement: impl Into<String>, cause: impl Into<String>) -> Record {
        let mut r = Record::new(line, statement, Verdict::Fail);
        r.witness = Some(cause.into());
        r.flags.push("error".into());
        r
    }

    /// Adopt a core report under the script's own statement text; the
    /// engine's statement goes first in the trace so nothing is lost.
    pub fn from_report(line: usize, statement: impl Into<String>, report: Report) -> Record {
        let mut r = Record::new(line, statement, report.verdict);
        r.trace.push(report.statement);
        r.trace.extend(report.trace);
        r.witness = report.witness;
        r.exactness = report.exactness;
        r.seed = report.seed;
        r.bound = report.bound;
        r.ms = report.ms;
        r
    }

    pub fn with_inputs(mut self, inputs: Vec<String>) -> Record {
        self.inputs = inputs;
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Record {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_flag(mut self, flag: impl Into<String>) -> Record {
        self.flags.push(flag.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.flags.iter().any(|f| f == "error")
    }

    pub fn text_line(&self) -> String {
        let mut line = format!("{} {}", self.verdict.label(), self.statement);
        if let Some(w) = &self.witness {
            line.push_str(&format!(" — {w}"));
        }
        if let Some(b) = &self.bound {
            if self.verdict == Verdict::Undecided {
                line.push_str(&format!(" [bound: {b}]"));
            }
        }
        for f in &self.flags {
            line.push_str(&format!(" [{f}]"));
        }
        line
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub undecided: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub schema: &'static str,
    pub script: String,
    pub seed: u64,
    pub bounds: String,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Envelope {
    pub fn new(script: impl Into<String>, seed: u64, bounds: String, records: Vec<Record>) -> Envelope {
        let count = |v: Verdict| records.iter().filter(|r| r.verdict == v).count();
        let summary = Summary {
            pass: count(Verdict::Pass),
            fail: count(Verdict::Fail),
            undecided: count(Verdict::Undecided),
        };
        Envelope {
            schema: "semistar-report/1",
            script: script.into(),
            seed,
            bounds,
            records,
            summary,
        }
    }

    pub fn failed(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.text_line());
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} undecided\n",
            self.summary.pass, self.summary.fail, self.summary.undecided
        ));
        out
    }

    /// Pretty json with every `ms` zeroed: replaying the same script with
    /// the same seed and bounds gives a byte-identical report.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialization cannot fail");
        zero_ms(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

fn zero_ms(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map.iter_mut() {
                if k == "ms" && val.is_number() {
                    *val = serde_json::Value::from(0u64);
                } else {
                    zero_ms(val);
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                zero_ms(item);
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_lines_carry_witness_and_flags() {
        let r = Record::pass(3, "check axioms s1 (64 probes, seed 42)");
        assert_eq!(r.text_line(), "PASS check axioms s1 (64 probes, seed 42)");
        let e = Record::error(5, "eval s(I)", "unsupported backend");
        assert_eq!(e.text_line(), "FAIL eval s(I) — unsupported backend [error]");
    }

    #[test]
    fn json_is_ms_free_and_versioned() {
        let mut r = Record::pass(1, "s");
        r.ms = 99;
        r.details = Some(serde_json::json!({"ms": 17, "inner": [{"ms": 3}]}));
        let env = Envelope::new("x.ss", 42, "height ≤ 1000".into(), vec![r]);
        let text = env.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema"], "semistar-report/1");
        assert_eq!(v["records"][0]["ms"], 0);
        assert_eq!(v["records"][0]["details"]["ms"], 0);
        assert_eq!(v["records"][0]["details"]["inner"][0]["ms"], 0);
        assert_eq!(v["summary"]["pass"], 1);
    }
}
