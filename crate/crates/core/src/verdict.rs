use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome of a check or of a bound comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The upper confidence limit lies below the bound.
    Dominated,
    /// The upper confidence limit exceeds the bound.
    Violated,
}

impl Verdict {
    pub fn from_pass(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn from_domination(ok: bool) -> Self {
        if ok {
            Verdict::Dominated
        } else {
            Verdict::Violated
        }
    }

    /// `PASS` or `DOMINATED`.
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Dominated)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Dominated => "DOMINATED",
            Verdict::Violated => "VIOLATED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
