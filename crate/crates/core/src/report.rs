//! Structured pass/fail records shared by every verification.

use serde::Serialize;

/// One hypothesis or conclusion check: pass flag, worst slack and where it occurred.
///
/// Slack is signed so that `slack >= -tol` means the inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub worst_slack: f64,
    pub location: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn from_slack(name: impl Into<String>, worst_slack: f64, location: Option<f64>, tol: f64) -> Self {
        Self {
            name: name.into(),
            pass: worst_slack >= -tol,
            worst_slack,
            location,
            note: None,
        }
    }

    pub fn failed(name: impl Into<String>, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: false,
            worst_slack: f64::NEG_INFINITY,
            location: None,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Running minimum of a slack profile.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Worst {
    pub slack: f64,
    pub location: Option<f64>,
}

impl Default for Worst {
    fn default() -> Self {
        Self {
            slack: f64::INFINITY,
            location: None,
        }
    }
}

impl Worst {
    pub fn update(&mut self, slack: f64, s: f64) {
        if slack < self.slack || slack.is_nan() {
            self.slack = slack;
            self.location = Some(s);
        }
    }

    pub fn check(&self, name: &str, tol: f64) -> Check {
        let slack = if self.location.is_none() { 0.0 } else { self.slack };
        Check::from_slack(name, slack, self.location, tol)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
