use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::DatasetEntry;
use crate::error::{Error, Result};
use crate::heuristics::{Heuristic, HeuristicRegistry};
use crate::problem::{optimality_gap_percent, total_tardiness, Schedule};

use super::oracle::Oracle;

/// One (instance, method) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_id: String,
    pub n: usize,
    pub rdd: f64,
    pub tf: f64,
    pub method: String,
    /// `true` for the oracle's own record.
    pub oracle: bool,
    pub objective: u64,
    pub optimal: Option<u64>,
    /// Present iff `optimal` is present and positive.
    pub gap_percent: Option<f64>,
    /// Zero-optimal instances are left out of every average.
    pub excluded: bool,
    /// Wall time of the method call alone (monotonic clock).
    pub elapsed_secs: f64,
}

fn gap_of(objective: u64, optimal: u64) -> Option<f64> {
    optimality_gap_percent(objective as f64, optimal as f64).ok()
}

fn evaluate_entry(
    entry: &DatasetEntry,
    heuristics: &[Arc<dyn Heuristic>],
    oracle: &dyn Oracle,
) -> Result<Vec<RunRecord>> {
    let start = Instant::now();
    let optimal = oracle.optimum(entry)?;
    let oracle_secs = start.elapsed().as_secs_f64();
    let record = |method: &str, is_oracle: bool, objective: u64, elapsed_secs: f64| RunRecord {
        instance_id: entry.id.clone(),
        n: entry.class.n,
        rdd: entry.class.rdd,
        tf: entry.class.tf,
        method: method.to_string(),
        oracle: is_oracle,
        objective,
        optimal: Some(optimal),
        gap_percent: gap_of(objective, optimal),
        excluded: optimal == 0,
        elapsed_secs,
    };

    let mut out = Vec::with_capacity(heuristics.len() + 1);
    for h in heuristics {
        let start = Instant::now();
        let schedule = h.schedule(&entry.instance);
        let elapsed = start.elapsed().as_secs_f64();
        let schedule = Schedule::new(schedule.into_order(), entry.instance.n())?;
        let objective = total_tardiness(&entry.instance, &schedule)?;
        if objective < optimal {
            return Err(Error::NegativeGap {
                instance: entry.id.clone(),
                method: h.name().to_string(),
                objective,
                optimal,
            });
        }
        out.push(record(h.name(), false, objective, elapsed));
    }
    out.push(record(oracle.tag(), true, optimal, oracle_secs));
    Ok(out)
}

/// Runs every named heuristic and the oracle on every entry. Records come
/// back grouped by instance in dataset order, heuristics first, oracle last.
///
/// A heuristic beating the oracle aborts the run with
/// [`Error::NegativeGap`]: that can only be an oracle defect.
pub fn run_suite(
    entries: &[DatasetEntry],
    registry: &HeuristicRegistry,
    heuristics: &[String],
    oracle: &dyn Oracle,
) -> Result<Vec<RunRecord>> {
    let resolved: Vec<Arc<dyn Heuristic>> = heuristics
        .iter()
        .map(|name| registry.get(name))
        .collect::<Result<_>>()?;
    // warm-up call per heuristic, not recorded
    if let Some(first) = entries.first() {
        for h in &resolved {
            let _ = h.schedule(&first.instance);
        }
    }
    let per_entry: Vec<Vec<RunRecord>> = entries
        .par_iter()
        .map(|e| evaluate_entry(e, &resolved, oracle))
        .collect::<Result<_>>()?;
    Ok(per_entry.into_iter().flatten().collect())
}

pub fn emit_records_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
