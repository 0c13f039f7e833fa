//! Classical dispatch rules.

use crate::problem::{Instance, Schedule};

/// Earliest due date; ties by processing time, then job index.
pub fn edd(inst: &Instance) -> Schedule {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by_key(|&j| (inst.d(j), inst.p(j), j));
    Schedule::from_permutation(order)
}

/// Shortest processing time; ties by due date, then job index.
pub fn spt(inst: &Instance) -> Schedule {
    Schedule::from_permutation(spt_order(inst))
}

pub(crate) fn spt_order(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by_key(|&j| (inst.p(j), inst.d(j), j));
    order
}

/// MDD priority `max(d_j, t + p_j)`.
#[inline]
pub(crate) fn mdd_score(inst: &Instance, job: usize, t: i64) -> i64 {
    inst.d(job).max(t + inst.p(job) as i64)
}

/// Index into `unscheduled` of the MDD choice: minimum score, lowest job
/// index on ties. `unscheduled` is kept in job-index order by the callers.
pub(crate) fn mdd_select(inst: &Instance, unscheduled: &[usize], t: i64) -> usize {
    let mut best = 0;
    let mut best_score = i64::MAX;
    for (pos, &j) in unscheduled.iter().enumerate() {
        let s = mdd_score(inst, j, t);
        if s < best_score {
            best_score = s;
            best = pos;
        }
    }
    best
}

/// Modified due date: at time `t` schedule the job minimizing
/// `max(d_j, t + p_j)`, lowest index first on ties.
pub fn mdd(inst: &Instance) -> Schedule {
    let mut unscheduled: Vec<usize> = (0..inst.n()).collect();
    let mut order = Vec::with_capacity(inst.n());
    let mut t = 0i64;
    while !unscheduled.is_empty() {
        let pos = mdd_select(inst, &unscheduled, t);
        let job = unscheduled.remove(pos);
        t += inst.p(job) as i64;
        order.push(job);
    }
    Schedule::from_permutation(order)
}
