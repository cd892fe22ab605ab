//! Pass/fail tables produced by the checking routines.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when `value <= threshold`.
    AtMost,
    /// Passes when `value >= threshold`.
    AtLeast,
    /// Boolean outcome; `value` is 1 for true.
    Holds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    /// Records a residual; NaN never passes.
    pub fn at_most(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        let passed = value <= threshold;
        self.push(name, value, threshold, Bound::AtMost, passed)
    }

    pub fn at_least(&mut self, name: impl Into<String>, value: f64, threshold: f64) -> bool {
        let passed = value >= threshold;
        self.push(name, value, threshold, Bound::AtLeast, passed)
    }

    pub fn holds(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.push(name, if ok { 1.0 } else { 0.0 }, 1.0, Bound::Holds, ok)
    }

    fn push(&mut self, name: impl Into<String>, value: f64, threshold: f64, bound: Bound, passed: bool) -> bool {
        self.checks.push(Check {
            name: name.into(),
            value,
            threshold,
            bound,
            passed,
        });
        passed
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  {:>14}  {:>2} {:>10}  status", "check", "value", "", "threshold")?;
        for c in &self.checks {
            let op = match c.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
                Bound::Holds => "==",
            };
            writeln!(
                f,
                "{:<width$}  {:>14.6e}  {:>2} {:>10.1e}  {}",
                c.name,
                c.value,
                op,
                c.threshold,
                if c.passed { "PASS" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "result: {} ({} checks, {} failed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures().count()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails_bounds() {
        let mut r = Report::new("t");
        assert!(!r.at_most("nan", f64::NAN, 1.0));
        assert!(!r.at_least("nan", f64::NAN, 1.0));
        assert!(r.at_most("ok", 0.5, 1.0));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 2);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut inner = Report::new("inner");
        inner.holds("x", true);
        let mut outer = Report::new("outer");
        outer.absorb("z6/", inner);
        assert!(outer.find("z6/x").is_some());
    }
}
