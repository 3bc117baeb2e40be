//! Pass/fail records shared by every verification routine.

use serde::Serialize;

/// One identity measured against a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub bound: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, deviation: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            deviation,
            bound,
        }
    }

    /// NaN deviations fail.
    pub fn passed(&self) -> bool {
        self.deviation <= self.bound
    }
}

/// A printed closed form that the oracle contradicts (or that had to be
/// corrected before it could be checked), with the measured gap.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub identity: String,
    #[serde(rename = "paper_variant")]
    pub printed_form: String,
    pub measured_deviation: f64,
    pub dim: usize,
    pub margin: usize,
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}

/// Largest deviation in a list, NaN-propagating.
pub fn worst(checks: &[Check]) -> f64 {
    checks.iter().fold(0.0, |m, c| {
        if c.deviation.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(c.deviation)
        }
    })
}
