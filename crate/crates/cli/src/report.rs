//! Machine-readable report tree and the text renderer.

use std::fmt::Write;

use gcverify_core::verdict::Condition;
use gcverify_core::Verdict;
use serde::Serialize;

pub const ENGINE: &str = concat!("gcverify ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub engine: String,
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseReport {
    pub id: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub clause: String,
    pub location: String,
    /// Pretty-printed first nonzero component, when the clause is equational.
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub structure: String,
    pub method: Option<String>,
    pub op: String,
    pub pass: bool,
    pub clauses: Vec<ClauseReport>,
    pub witnesses: Vec<WitnessReport>,
    pub diagnostics: Vec<ClauseReport>,
    pub diagnostic_witnesses: Vec<WitnessReport>,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
    /// Checker precondition failure; the check then counts as failed.
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

fn clauses(cs: &[Condition]) -> (Vec<ClauseReport>, Vec<WitnessReport>) {
    let list = cs
        .iter()
        .map(|c| ClauseReport {
            id: c.id.clone(),
            pass: c.pass(),
        })
        .collect();
    let witnesses = cs
        .iter()
        .filter_map(|c| {
            c.witness.as_ref().map(|w| WitnessReport {
                clause: c.id.clone(),
                location: w.location.clone(),
                value: w.value.as_ref().map(|v| v.to_string()),
            })
        })
        .collect();
    (list, witnesses)
}

impl CheckReport {
    pub fn new(
        id: &str,
        structure: &str,
        method: Option<&str>,
        op: &str,
        outcome: Result<Verdict, String>,
        elapsed_ms: u64,
    ) -> CheckReport {
        let mut r = CheckReport {
            id: id.to_string(),
            structure: structure.to_string(),
            method: method.map(str::to_string),
            op: op.to_string(),
            pass: false,
            clauses: vec![],
            witnesses: vec![],
            diagnostics: vec![],
            diagnostic_witnesses: vec![],
            assumptions: vec![],
            warnings: vec![],
            error: None,
            elapsed_ms,
        };
        match outcome {
            Ok(v) => {
                r.pass = v.pass();
                (r.clauses, r.witnesses) = clauses(&v.conditions);
                (r.diagnostics, r.diagnostic_witnesses) = clauses(&v.diagnostics);
                r.assumptions = v.assumptions;
                r.warnings = v.warnings;
            }
            Err(e) => r.error = Some(e),
        }
        r
    }
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn has_errors(&self) -> bool {
        self.checks.iter().any(|c| c.error.is_some())
    }

    /// 0 when every check passes, 1 when some check fails, 2 when a checker
    /// precondition failed.
    pub fn exit_code(&self) -> i32 {
        if self.has_errors() {
            2
        } else if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn find(&self, id: &str, structure: &str, method: Option<&str>) -> Option<&CheckReport> {
        self.checks
            .iter()
            .find(|c| c.id == id && c.structure == structure && c.method.as_deref() == method)
    }

    pub fn to_tree(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Human-readable rendering; timing is left out so output is stable.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match (&c.error, c.pass) {
                (Some(_), _) => "ERROR",
                (None, true) => "PASS",
                (None, false) => "FAIL",
            };
            let method = c
                .method
                .as_deref()
                .map(|m| format!(" [{m}]"))
                .unwrap_or_default();
            let _ = writeln!(out, "{} {}{}: {status}", c.id, c.structure, method);
            if let Some(e) = &c.error {
                let _ = writeln!(out, "  error: {e}");
            }
            for cl in &c.clauses {
                match c.witnesses.iter().find(|w| w.clause == cl.id) {
                    None => {
                        let _ = writeln!(out, "  [ok]   {}", cl.id);
                    }
                    Some(w) => {
                        let _ = match &w.value {
                            Some(v) => writeln!(out, "  [FAIL] {} at {}: {v}", cl.id, w.location),
                            None => writeln!(out, "  [FAIL] {} ({})", cl.id, w.location),
                        };
                    }
                }
            }
            for d in &c.diagnostics {
                let _ = writeln!(
                    out,
                    "  diagnostic {}: {}",
                    d.id,
                    if d.pass { "yes" } else { "no" }
                );
            }
            for a in &c.assumptions {
                let _ = writeln!(out, "  assumption: {a}");
            }
            for w in &c.warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}
