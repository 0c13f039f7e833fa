use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::problem::{total_tardiness, Instance, Schedule};

use super::{normalize_name, Heuristic, HeuristicId};

/// Name-keyed collection of heuristics, in registration order.
#[derive(Clone, Default)]
pub struct HeuristicRegistry {
    entries: Vec<(String, Arc<dyn Heuristic>)>,
}

impl HeuristicRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding every built-in rule.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        for id in HeuristicId::ALL {
            reg.register(Arc::new(id));
        }
        reg
    }

    /// Adds or replaces a heuristic under its own name.
    pub fn register(&mut self, heuristic: Arc<dyn Heuristic>) {
        let key = normalize_name(heuristic.name());
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = heuristic,
            None => self.entries.push((key, heuristic)),
        }
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Heuristic>> {
        let key = normalize_name(name);
        self.entries
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, h)| Arc::clone(h))
            .ok_or_else(|| Error::UnknownHeuristic(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _)| k.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct HeuristicRun {
    pub schedule: Schedule,
    pub total_tardiness: u64,
    pub elapsed: Duration,
}

/// Looks up `name`, times the call with a monotonic clock and recomputes the
/// objective from the returned schedule.
pub fn run_heuristic(registry: &HeuristicRegistry, name: &str, inst: &Instance) -> Result<HeuristicRun> {
    let h = registry.get(name)?;
    let start = Instant::now();
    let schedule = h.schedule(inst);
    let elapsed = start.elapsed();
    let schedule = Schedule::new(schedule.into_order(), inst.n())?;
    let total_tardiness = total_tardiness(inst, &schedule)?;
    Ok(HeuristicRun {
        schedule,
        total_tardiness,
        elapsed,
    })
}
