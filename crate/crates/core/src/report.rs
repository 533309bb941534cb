//! Machine-readable verdicts of verification runs.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One named check with what was measured and the threshold it was held to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub measured: Value,
    pub threshold: Value,
}

impl Verdict {
    pub fn new(
        check: impl Into<String>,
        pass: bool,
        measured: impl Into<Value>,
        threshold: impl Into<Value>,
    ) -> Self {
        Self {
            check: check.into(),
            pass,
            measured: measured.into(),
            threshold: threshold.into(),
        }
    }

    /// Passes when `measured <= tol`.
    pub fn at_most(check: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::new(check, measured <= tol, measured, tol)
    }

    /// Passes when `measured >= bound`.
    pub fn at_least(check: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(check, measured >= bound, measured, bound)
    }

    /// Passes when `|measured - expected| <= tol`; the threshold records both.
    pub fn close(check: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Self::new(
            check,
            (measured - expected).abs() <= tol,
            measured,
            serde_json::json!({ "expected": expected, "tol": tol }),
        )
    }

    /// Passes when `count == 0`.
    pub fn none(check: impl Into<String>, count: usize) -> Self {
        Self::new(check, count == 0, count, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub verdicts: Vec<Verdict>,
    #[serde(default)]
    pub data: Value,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        Self {
            command: command.into(),
            model: None,
            seed,
            trials: None,
            verdicts: Vec::new(),
            data: Value::Null,
            runtime_ms: 0,
        }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// JSON with the runtime zeroed, for comparing runs.
    pub fn canonical_json(&self) -> String {
        Self {
            runtime_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    /// One line per check, for humans.
    pub fn summary(&self) -> String {
        let mut out = format!("{} (seed {})\n", self.command, self.seed);
        for v in &self.verdicts {
            out.push_str(&format!(
                "  {} {}: measured {} threshold {}\n",
                if v.pass { "PASS" } else { "FAIL" },
                v.check,
                v.measured,
                v.threshold
            ));
        }
        out.push_str(&format!(
            "  {} in {} ms\n",
            if self.passed() {
                "all checks passed"
            } else {
                "VIOLATION"
            },
            self.runtime_ms
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_helpers() {
        assert!(Verdict::at_most("x", 1e-13, 1e-12).pass);
        assert!(!Verdict::at_least("x", -1e-8, -1e-9).pass);
        assert!(Verdict::close("x", 0.25, 0.25, 0.0).pass);
        assert!(!Verdict::none("x", 1).pass);
    }

    #[test]
    fn canonical_ignores_runtime() {
        let mut a = Report::new("verify", 7);
        a.push(Verdict::at_most("x", 0.0, 1.0));
        let mut b = a.clone();
        a.runtime_ms = 3;
        b.runtime_ms = 9;
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert_ne!(a.to_json(), b.to_json());
        let back: Report = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
        assert!(a.summary().contains("PASS x"));
    }
}
