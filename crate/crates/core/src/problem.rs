//! Problem data model for `1 || sum T_j`: instances, schedules, tardiness
//! arithmetic, the penalizing candidate evaluator and the optimality gap.
//!
//! All objective arithmetic is exact integer arithmetic. Due dates are signed
//! because the instance generator can draw them below zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single-machine total tardiness instance.
///
/// Immutable once built: the only way to obtain one is through
/// [`Instance::new`], which validates the data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    processing: Vec<u64>,
    due: Vec<i64>,
}

impl Instance {
    pub fn new(processing: Vec<u64>, due: Vec<i64>) -> Result<Self> {
        if processing.is_empty() {
            return Err(Error::InvalidInstance("instance has no jobs".into()));
        }
        if processing.len() != due.len() {
            return Err(Error::InvalidInstance(format!(
                "{} processing times but {} due dates",
                processing.len(),
                due.len()
            )));
        }
        if let Some(j) = processing.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInstance(format!(
                "job {j} has a zero processing time"
            )));
        }
        Ok(Self { processing, due })
    }

    /// Number of jobs.
    pub fn n(&self) -> usize {
        self.processing.len()
    }

    pub fn processing(&self) -> &[u64] {
        &self.processing
    }

    pub fn due(&self) -> &[i64] {
        &self.due
    }

    pub fn p(&self, job: usize) -> u64 {
        self.processing[job]
    }

    pub fn d(&self, job: usize) -> i64 {
        self.due[job]
    }

    /// Total processing time `P`.
    pub fn total_processing(&self) -> u64 {
        self.processing.iter().sum()
    }

    /// Score assigned by [`evaluate_candidate`] to an invalid order.
    ///
    /// Each job finishes by `P`, so its tardiness is at most
    /// `P + max(0, -min d)`; `n` times that bound plus one is strictly above
    /// any feasible objective. Equals `n * P + 1` when no due date is negative.
    pub fn penalty(&self) -> u64 {
        let min_due = self.due.iter().copied().min().unwrap_or(0);
        let per_job = self.total_processing() + (-min_due).max(0) as u64;
        self.n() as u64 * per_job + 1
    }
}

/// A processing sequence: `order[k]` is the job at position `k` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    order: Vec<usize>,
}

impl Schedule {
    /// Builds a schedule for `n` jobs, rejecting anything that is not a
    /// permutation of `0..n`.
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self> {
        if order.len() != n {
            return Err(Error::InvalidSchedule(format!(
                "order has {} entries, instance has {n} jobs",
                order.len()
            )));
        }
        if !is_permutation(&order, n) {
            return Err(Error::InvalidSchedule(
                "order is not a permutation of the job indices".into(),
            ));
        }
        Ok(Self { order })
    }

    /// Wraps an order the caller has already proven to be a permutation.
    pub(crate) fn from_permutation(order: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&order, order.len()));
        Self { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for job in &self.order {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{job}")?;
            first = false;
        }
        Ok(())
    }
}

pub fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in order {
        if j >= n || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

fn check_len(inst: &Instance, sched: &Schedule) -> Result<()> {
    if sched.len() != inst.n() {
        return Err(Error::InvalidSchedule(format!(
            "schedule has {} jobs, instance has {}",
            sched.len(),
            inst.n()
        )));
    }
    Ok(())
}

/// Completion time of every job, indexed by job.
pub fn completion_times(inst: &Instance, sched: &Schedule) -> Result<Vec<u64>> {
    check_len(inst, sched)?;
    let mut out = vec![0; inst.n()];
    let mut t = 0;
    for &j in sched.order() {
        t += inst.p(j);
        out[j] = t;
    }
    Ok(out)
}

pub fn total_tardiness(inst: &Instance, sched: &Schedule) -> Result<u64> {
    check_len(inst, sched)?;
    Ok(sequence_tardiness(inst, sched.order()))
}

/// Tardiness of processing `jobs` back to back from time zero. `jobs` may be
/// a partial sequence; no permutation check is done.
pub fn sequence_tardiness(inst: &Instance, jobs: &[usize]) -> u64 {
    let mut t: i64 = 0;
    let mut total = 0u64;
    for &j in jobs {
        t += inst.p(j) as i64;
        total += tardiness_at(t, inst.d(j));
    }
    total
}

/// `max(0, completion - due)`.
#[inline]
pub fn tardiness_at(completion: i64, due: i64) -> u64 {
    (completion - due).max(0) as u64
}

/// Result of scoring an arbitrary proposed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOutcome {
    pub feasible: bool,
    /// Defined only when `feasible`.
    pub total_tardiness: Option<u64>,
    pub score: u64,
}

/// Sandbox evaluator: never fails, never touches the instance. Orders that
/// skip or repeat jobs get [`Instance::penalty`].
pub fn evaluate_candidate(inst: &Instance, proposed: &[i64]) -> EvalOutcome {
    let n = inst.n();
    let valid = proposed.len() == n && {
        let mut seen = vec![false; n];
        proposed.iter().all(|&j| {
            if j < 0 || j as usize >= n || seen[j as usize] {
                false
            } else {
                seen[j as usize] = true;
                true
            }
        })
    };
    if !valid {
        return EvalOutcome {
            feasible: false,
            total_tardiness: None,
            score: inst.penalty(),
        };
    }
    let order: Vec<usize> = proposed.iter().map(|&j| j as usize).collect();
    let tt = sequence_tardiness(inst, &order);
    EvalOutcome {
        feasible: true,
        total_tardiness: Some(tt),
        score: tt,
    }
}

/// `(heuristic - optimal) / optimal * 100`.
pub fn optimality_gap_percent(heuristic_value: f64, optimal_value: f64) -> Result<f64> {
    if optimal_value <= 0.0 {
        return Err(Error::ZeroOptimal);
    }
    Ok((heuristic_value - optimal_value) / optimal_value * 100.0)
}
