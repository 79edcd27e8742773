//! Pass/fail records produced by every scenario.

use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `measured ≤ bound`.
    AtMost,
    /// `measured ≥ bound`.
    AtLeast,
    /// `measured < bound`.
    Below,
    /// `measured > bound`.
    Above,
    /// `lo ≤ measured ≤ bound`.
    Band { lo: f64 },
    /// `measured == bound` exactly.
    Exactly,
}

impl Relation {
    fn holds(self, measured: f64, bound: f64) -> bool {
        match self {
            Self::AtMost => measured <= bound,
            Self::AtLeast => measured >= bound,
            Self::Below => measured < bound,
            Self::Above => measured > bound,
            Self::Band { lo } => lo <= measured && measured <= bound,
            Self::Exactly => measured == bound,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Self::AtMost => "<=",
            Self::AtLeast => ">=",
            Self::Below => "<",
            Self::Above => ">",
            Self::Band { .. } => "in",
            Self::Exactly => "==",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// The estimate being checked, stated as a formula.
    pub anchor: &'static str,
    pub measured: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str, measured: f64, relation: Relation, bound: f64) -> Self {
        let pass = relation.holds(measured, bound);
        Self { name: name.into(), anchor, measured, bound, relation, pass }
    }

    /// A yes/no property; measured is 1 when it holds.
    pub fn flag(name: impl Into<String>, anchor: &'static str, ok: bool) -> Self {
        Self::new(name, anchor, if ok { 1.0 } else { 0.0 }, Relation::Exactly, 1.0)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::Band { lo } => write!(
                f,
                "{status}  {}: {:.6e} in [{:.6e}, {:.6e}]",
                self.name, self.measured, lo, self.bound
            ),
            r => write!(f, "{status}  {}: {:.6e} {} {:.6e}", self.name, self.measured, r.symbol(), self.bound),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Verdict {
    pub scenario: String,
    pub checks: Vec<Check>,
    pub artifacts: Vec<PathBuf>,
    /// Measurements reported without a pass condition.
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(scenario: &str) -> Self {
        Self { scenario: scenario.to_string(), ..Self::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks whose name starts with `prefix`.
    pub fn matching<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        writeln!(f, "== {} ({} checks, {} failed)", self.scenario, self.checks.len(), failed)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note  {n}")?;
        }
        for a in &self.artifacts {
            writeln!(f, "  wrote {}", a.display())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::new("a", "", 1.0, Relation::AtMost, 1.0).pass);
        assert!(!Check::new("a", "", 1.0, Relation::Below, 1.0).pass);
        assert!(Check::new("a", "", 0.5, Relation::Band { lo: 0.25 }, 1.0).pass);
        assert!(!Check::new("a", "", 0.1, Relation::Band { lo: 0.25 }, 1.0).pass);
        assert!(!Check::new("a", "", f64::NAN, Relation::AtMost, 1.0).pass);
        assert!(!Check::flag("a", "", false).pass);
    }
}
