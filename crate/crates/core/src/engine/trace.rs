use std::fmt;

use serde::{Deserialize, Serialize};

use super::drivers::select_rule;
use super::identity::Identity;
use super::rules::{apply_rule, RuleId};
use super::term::{Expr, Term};
use super::Family;
use crate::error::{Error, Result};

/// One rule application: `before` was replaced by `after` (scaled by its coefficient).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleId,
    pub before: Term,
    pub after: Expr,
    pub guard: String,
}

/// A replayable derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub family: Family,
    pub start: Expr,
    pub steps: Vec<TraceStep>,
    pub result: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Identity>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-executes every step from `start`; see [`replay_trace`].
    pub fn replay(&self) -> Result<Expr> {
        replay_trace(self)
    }
}

/// Re-executes a trace: for every step the family's rule selection is evaluated
/// afresh on `before`, the rule is re-applied, and its output must match the
/// recorded replacement. The final expression must equal `result`.
pub fn replay_trace(t: &Trace) -> Result<Expr> {
    let mut cur = t.start.clone();
    for (i, step) in t.steps.iter().enumerate() {
        let fail = |reason: String| Error::Replay { step: i, reason };
        if cur.coeff(&step.before) == num_traits::Zero::zero() {
            return Err(fail(format!("{} does not occur in the running expression", step.before)));
        }
        match select_rule(t.family, &step.before) {
            Ok(Some(r)) if r == step.rule => {}
            Ok(Some(r)) => return Err(fail(format!("guards select {r}, trace records {}", step.rule))),
            Ok(None) => return Err(fail(format!("{} is terminal, no rule applies", step.before))),
            Err(e) => return Err(fail(e.to_string())),
        }
        let (after, _) = apply_rule(&step.before, step.rule).map_err(|e| fail(e.to_string()))?;
        if after != step.after {
            return Err(fail(format!("{} yields {after}, trace records {}", step.rule, step.after)));
        }
        cur.substitute(&step.before, &after);
    }
    if cur != t.result {
        return Err(Error::Replay {
            step: t.steps.len(),
            reason: format!("replayed result {cur} differs from recorded {}", t.result),
        });
    }
    Ok(cur)
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ={}= {}", self.before, self.rule, self.after)
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "  {:>3}. [{}] {} = {}", i + 1, s.rule, s.before, s.after)?;
        }
        write!(f, "result: {}", self.result)
    }
}
