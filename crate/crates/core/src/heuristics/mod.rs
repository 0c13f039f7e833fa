//! Constructive heuristics behind a common [`Heuristic`] trait.
//!
//! Built-in rules are addressed by [`HeuristicId`]; a [`HeuristicRegistry`]
//! maps names to trait objects so benchmark baselines implemented elsewhere
//! (PSK, Panneerselvam, ...) can be plugged in at runtime.

mod augmented;
mod eddc;
mod mddc;
mod registry;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::problem::{Instance, Schedule};

pub use augmented::{augmented_mdd, augmented_mddc, move_to_end_pass};
pub use eddc::{eddc, eddc_pass};
pub use mddc::{mddc, MddcScore, MddcStepState, MDDC_MULTIPLIER, TIE_EPSILON};
pub use registry::{run_heuristic, HeuristicRegistry, HeuristicRun};
pub use rules::{edd, mdd, spt};

/// A constructive scheduling rule.
pub trait Heuristic: Send + Sync {
    fn name(&self) -> &str;

    /// Must return a permutation of `0..inst.n()`.
    fn schedule(&self, inst: &Instance) -> Schedule;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HeuristicId {
    Edd,
    Spt,
    Mdd,
    Eddc,
    Mddc,
    AugMdd,
    AugMddc,
}

impl HeuristicId {
    pub const ALL: [HeuristicId; 7] = [
        HeuristicId::Edd,
        HeuristicId::Spt,
        HeuristicId::Mdd,
        HeuristicId::Eddc,
        HeuristicId::Mddc,
        HeuristicId::AugMdd,
        HeuristicId::AugMddc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HeuristicId::Edd => "EDD",
            HeuristicId::Spt => "SPT",
            HeuristicId::Mdd => "MDD",
            HeuristicId::Eddc => "EDDC",
            HeuristicId::Mddc => "MDDC",
            HeuristicId::AugMdd => "AUG_MDD",
            HeuristicId::AugMddc => "AUG_MDDC",
        }
    }

    pub fn run(self, inst: &Instance) -> Schedule {
        match self {
            HeuristicId::Edd => edd(inst),
            HeuristicId::Spt => spt(inst),
            HeuristicId::Mdd => mdd(inst),
            HeuristicId::Eddc => eddc(inst),
            HeuristicId::Mddc => mddc(inst),
            HeuristicId::AugMdd => augmented_mdd(inst),
            HeuristicId::AugMddc => augmented_mddc(inst),
        }
    }
}

impl fmt::Display for HeuristicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Canonical registry key: upper case, `-` folded to `_`.
pub fn normalize_name(name: &str) -> String {
    name.trim().to_ascii_uppercase().replace('-', "_")
}

impl FromStr for HeuristicId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = normalize_name(s);
        HeuristicId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::UnknownHeuristic(s.to_string()))
    }
}

impl Heuristic for HeuristicId {
    fn name(&self) -> &str {
        HeuristicId::name(*self)
    }

    fn schedule(&self, inst: &Instance) -> Schedule {
        self.run(inst)
    }
}
