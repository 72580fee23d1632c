//! Named-condition reports returned by every checker.

use std::fmt;

use crate::scalar::ScalarField;

/// Where a condition failed: a component label and, for equational
/// conditions, the first nonzero scalar found there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub location: String,
    pub value: Option<ScalarField>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub id: String,
    pub witness: Option<Witness>,
}

impl Condition {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }

    /// Passes iff every listed component vanishes.
    pub fn vanishing<I>(id: impl Into<String>, components: I) -> Condition
    where
        I: IntoIterator<Item = (String, ScalarField)>,
    {
        let witness = components
            .into_iter()
            .find(|(_, v)| !v.is_zero())
            .map(|(location, v)| Witness {
                location,
                value: Some(v),
            });
        Condition {
            id: id.into(),
            witness,
        }
    }

    pub fn flag(id: impl Into<String>, ok: bool, location: impl Into<String>) -> Condition {
        Condition {
            id: id.into(),
            witness: (!ok).then(|| Witness {
                location: location.into(),
                value: None,
            }),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub conditions: Vec<Condition>,
    /// Facts taken on trust, e.g. positivity certified only at sample points.
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
    /// Cross-checks reported alongside the verdict; they do not affect `pass`.
    pub diagnostics: Vec<Condition>,
}

impl Verdict {
    pub fn new() -> Self {
        Verdict::default()
    }

    pub fn pass(&self) -> bool {
        self.conditions.iter().all(Condition::pass)
    }

    pub fn holds(&mut self, id: impl Into<String>) {
        self.conditions.push(Condition {
            id: id.into(),
            witness: None,
        });
    }

    pub fn fails(
        &mut self,
        id: impl Into<String>,
        location: impl Into<String>,
        value: Option<ScalarField>,
    ) {
        self.conditions.push(Condition {
            id: id.into(),
            witness: Some(Witness {
                location: location.into(),
                value,
            }),
        });
    }

    pub fn flag(&mut self, id: impl Into<String>, ok: bool, location: impl Into<String>) {
        if ok {
            self.holds(id);
        } else {
            self.fails(id, location, None);
        }
    }

    /// Records `id` as passing iff every listed component vanishes.
    pub fn zero_check<I>(&mut self, id: impl Into<String>, components: I)
    where
        I: IntoIterator<Item = (String, ScalarField)>,
    {
        self.conditions.push(Condition::vanishing(id, components));
    }

    pub fn push(&mut self, c: Condition) {
        self.conditions.push(c);
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }

    /// Pass state of condition `id`; panics if absent.
    pub fn passed(&self, id: &str) -> bool {
        self.condition(id)
            .unwrap_or_else(|| panic!("no condition `{id}`"))
            .pass()
    }

    /// Appends `other`, prefixing its condition ids with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: Verdict) {
        for mut c in other.conditions {
            c.id = if prefix.is_empty() {
                c.id
            } else {
                format!("{prefix}/{}", c.id)
            };
            self.conditions.push(c);
        }
        for mut c in other.diagnostics {
            if !prefix.is_empty() {
                c.id = format!("{prefix}/{}", c.id);
            }
            self.diagnostics.push(c);
        }
        for a in other.assumptions {
            if !self.assumptions.contains(&a) {
                self.assumptions.push(a);
            }
        }
        for w in other.warnings {
            if !self.warnings.contains(&w) {
                self.warnings.push(w);
            }
        }
    }

    /// Collapses `other` into one condition `id`, keeping the first failure.
    pub fn summarize(&mut self, id: impl Into<String>, other: &Verdict) {
        let id = id.into();
        match other.failing().next() {
            None => self.holds(id),
            Some(c) => {
                let w = c.witness.clone().expect("failing condition has a witness");
                self.fails(id, format!("{}: {}", c.id, w.location), w.value);
            }
        }
        for w in &other.warnings {
            if !self.warnings.contains(w) {
                self.warnings.push(w.clone());
            }
        }
    }

    pub fn diagnostic(&mut self, c: Condition) {
        self.diagnostics.push(c);
    }

    pub fn failing(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.pass())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })?;
        for c in &self.conditions {
            match &c.witness {
                None => writeln!(f, "  [ok]   {}", c.id)?,
                Some(w) => match &w.value {
                    Some(v) => writeln!(f, "  [FAIL] {} at {}: {}", c.id, w.location, v)?,
                    None => writeln!(f, "  [FAIL] {} ({})", c.id, w.location)?,
                },
            }
        }
        for c in &self.diagnostics {
            writeln!(
                f,
                "  diagnostic {}: {}",
                c.id,
                if c.pass() { "ok" } else { "FAIL" }
            )?;
        }
        for a in &self.assumptions {
            writeln!(f, "  assumption: {a}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        Ok(())
    }
}
