//! Symbolic connected sums, the guarded transport rules, and the algorithm drivers.

mod drivers;
mod identity;
mod rules;
mod term;
mod trace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use drivers::{
    derive_cyclic_identity, derive_cyclic_identity_mod_p, derive_dual, derive_harmonic, derive_hoffman_dual,
    derive_hoffman_relation, derive_shuffle, expand_h, expand_s, select_rule, step_bound,
};
pub use identity::{Factor, Identity, ZetaFn, ZetaPoly};
pub use rules::{apply_rule, RuleId, Validity};
pub use term::{Expr, Level, Tails, Term};
pub use trace::{replay_trace, Trace, TraceStep};

/// The six rule systems; the cyclic sum formula has a limit and a mod-p variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "shuffle")]
    Shuffle,
    #[serde(rename = "harmonic")]
    Harmonic,
    #[serde(rename = "dual")]
    Dual,
    #[serde(rename = "hdual")]
    HoffmanDual,
    #[serde(rename = "cyclic")]
    Cyclic,
    #[serde(rename = "cyclic-modp")]
    CyclicModP,
    #[serde(rename = "hoffman")]
    Hoffman,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Shuffle,
        Family::Harmonic,
        Family::Dual,
        Family::HoffmanDual,
        Family::Cyclic,
        Family::CyclicModP,
        Family::Hoffman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Shuffle => "shuffle",
            Family::Harmonic => "harmonic",
            Family::Dual => "dual",
            Family::HoffmanDual => "hdual",
            Family::Cyclic => "cyclic",
            Family::CyclicModP => "cyclic-modp",
            Family::Hoffman => "hoffman",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown family {s:?}")))
    }
}
