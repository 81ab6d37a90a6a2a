//! Named pass/fail checks shared by the verification reports.

use serde::Serialize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this input (for instance, no printed data to
    /// compare against).
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Check {
            name,
            status: Status::Skipped,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// True when no check failed.
pub fn all_passed(checks: &[Check]) -> bool {
    !checks.iter().any(Check::failed)
}
