//! Structured verdict records emitted by every checker and suite.
//!
//! A `Report` is the unit of output: what was checked, on which inputs,
//! what came of it, and enough metadata (seed, bounds, timing) to replay
//! the run. Serialization is plain serde; the CLI wraps records in a
//! versioned envelope.

use serde::Serialize;

/// Outcome of a check. `Undecided` means a bounded search was exhausted —
/// it never fails a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Undecided => "UNDECIDED",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// What was checked, human-readable.
    pub statement: String,
    /// Canonical serializations of the inputs.
    pub inputs: Vec<String>,
    pub verdict: Verdict,
    /// Minimized witness for failures, certificate text otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Replayable intermediate results (pipeline steps, per-probe notes).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
    /// exact | lower_bound | finite_approximation, when the computed value
    /// is not pinned to the mathematical definition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// The exhausted bound for Undecided verdicts, or the budget used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    pub ms: u128,
}

impl Report {
    pub fn new(statement: impl Into<String>, verdict: Verdict) -> Report {
        Report {
            statement: statement.into(),
            inputs: Vec::new(),
            verdict,
            witness: None,
            trace: Vec::new(),
            exactness: None,
            seed: None,
            bound: None,
            ms: 0,
        }
    }

    pub fn pass(statement: impl Into<String>) -> Report {
        Report::new(statement, Verdict::Pass)
    }

    pub fn fail(statement: impl Into<String>, witness: impl Into<String>) -> Report {
        let mut r = Report::new(statement, Verdict::Fail);
        r.witness = Some(witness.into());
        r
    }

    pub fn undecided(statement: impl Into<String>, bound: impl Into<String>) -> Report {
        let mut r = Report::new(statement, Verdict::Undecided);
        r.bound = Some(bound.into());
        r
    }

    pub fn with_inputs(mut self, inputs: Vec<String>) -> Report {
        self.inputs = inputs;
        self
    }

    pub fn with_witness(mut self, witness: impl Into<String>) -> Report {
        self.witness = Some(witness.into());
        self
    }

    pub fn with_trace(mut self, trace: Vec<String>) -> Report {
        self.trace = trace;
        self
    }

    pub fn with_exactness(mut self, exactness: impl Into<String>) -> Report {
        self.exactness = Some(exactness.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    pub fn with_bound(mut self, bound: impl Into<String>) -> Report {
        self.bound = Some(bound.into());
        self
    }

    pub fn with_ms(mut self, ms: u128) -> Report {
        self.ms = ms;
        self
    }

    /// One-line text rendering: `PASS check axioms s1 (128 probes, seed 42)`.
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
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_line_formats() {
        let r = Report::pass("check axioms s1 (128 probes, seed 42)");
        assert_eq!(r.text_line(), "PASS check axioms s1 (128 probes, seed 42)");
        let f = Report::fail("check stability v", "E=(2,1+w), F=(3,1+w)");
        assert_eq!(
            f.text_line(),
            "FAIL check stability v — E=(2,1+w), F=(3,1+w)"
        );
    }

    #[test]
    fn json_fields_are_stable() {
        let r = Report::pass("s").with_seed(7).with_ms(3);
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["verdict"], "pass");
        assert_eq!(j["seed"], 7);
        assert_eq!(j["ms"], 3);
        assert!(j.get("witness").is_none());
    }
}
