//! Verdicts for checks of stated structure results against computed data.
//!
//! A check never aborts a computation: reports carry the verdicts, and the
//! CLI maps `counterexample-candidate` to its own exit code.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Hypotheses held and the stated conclusion matched the computation.
    Confirmed,
    /// The instance does not satisfy the hypotheses; nothing was asserted.
    HypothesesNotMet,
    /// Hypotheses held but the stated conclusion disagreed with the
    /// computation in a way that is understood and expected at this scale.
    PaperClaimMismatch,
    /// Hypotheses held and a conclusion believed unconditional failed;
    /// the instance deserves manual inspection.
    CounterexampleCandidate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "confirmed",
            Verdict::HypothesesNotMet => "hypotheses_not_met",
            Verdict::PaperClaimMismatch => "paper-claim mismatch",
            Verdict::CounterexampleCandidate => "counterexample-candidate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimCheck {
    /// Stable identifier, e.g. `component_count_bound`.
    pub name: &'static str,
    pub verdict: Verdict,
    pub details: String,
}

impl ClaimCheck {
    pub fn new(name: &'static str, verdict: Verdict, details: impl Into<String>) -> Self {
        ClaimCheck { name, verdict, details: details.into() }
    }
}
