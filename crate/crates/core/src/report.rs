//! Named pass/fail results shared by every verification suite.

use serde::Serialize;

use crate::graded::GradedLinearMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            detail: Some(detail.into()),
        }
    }

    pub fn from_result(name: impl Into<String>, r: Result<(), String>) -> Self {
        match r {
            Ok(()) => Check::pass(name),
            Err(e) => Check::fail(name, e),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

/// `Ok` when `f = g`; otherwise names the first basis vector on which they differ.
pub fn same_map(f: &GradedLinearMap, g: &GradedLinearMap) -> Result<(), String> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err("maps have different source or target".into());
    }
    if f.shift() != g.shift() {
        return Err(format!("shifts differ: {} vs {}", f.shift(), g.shift()));
    }
    for c in 0..f.source().dim() {
        if f.image_of_basis(c) != g.image_of_basis(c) {
            return Err(format!("maps differ on {}", f.source().label(c)));
        }
    }
    Ok(())
}

/// `Ok` when `f` is the identity of its source.
pub fn is_identity(f: &GradedLinearMap) -> Result<(), String> {
    if f.source() != f.target() {
        return Err("source and target differ".into());
    }
    same_map(f, &GradedLinearMap::identity(f.source().clone()))
}
