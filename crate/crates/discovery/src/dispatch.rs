//! Turning a priority expression into a job order.

use smtt_core::heuristics::TIE_EPSILON;
use smtt_core::Instance;

use crate::expr::{Features, PriorityExpr};

/// Produces a candidate order for an instance. The order is untrusted: the
/// sandbox checks it before scoring.
pub trait Dispatcher: Send + Sync {
    fn propose(&self, expr: &PriorityExpr, inst: &Instance) -> Vec<i64>;
}

/// Greedy list scheduling: keep the unscheduled jobs sorted by
/// `(p, d, index)` and repeatedly take the first job with the smallest
/// priority value (ties within `TIE_EPSILON`).
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyDispatcher;

impl Dispatcher for GreedyDispatcher {
    fn propose(&self, expr: &PriorityExpr, inst: &Instance) -> Vec<i64> {
        dispatch(expr, inst).into_iter().map(|j| j as i64).collect()
    }
}

/// Always a permutation of `0..n`.
pub fn dispatch(expr: &PriorityExpr, inst: &Instance) -> Vec<usize> {
    let mut unscheduled: Vec<usize> = (0..inst.n()).collect();
    unscheduled.sort_by_key(|&j| (inst.p(j), inst.d(j), j));
    let mut sum_p = inst.total_processing();
    let mut t = 0u64;
    let mut order = Vec::with_capacity(inst.n());

    while !unscheduled.is_empty() {
        let max_p = unscheduled.iter().map(|&j| inst.p(j)).max().unwrap_or(0);
        let remaining = unscheduled.len() as f64;
        let mut best_pos = 0;
        let mut best = f64::INFINITY;
        for (pos, &j) in unscheduled.iter().enumerate() {
            let features = Features {
                p: inst.p(j) as f64,
                d: inst.d(j) as f64,
                t: t as f64,
                max_p: max_p as f64,
                sum_p: sum_p as f64,
                mean_p: sum_p as f64 / remaining,
                remaining,
            };
            let v = expr.eval(&features);
            if v < best - TIE_EPSILON {
                best = v;
                best_pos = pos;
            }
        }
        let job = unscheduled.remove(best_pos);
        t += inst.p(job);
        sum_p -= inst.p(job);
        order.push(job);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use smtt_core::heuristics::{edd, spt};
    use smtt_core::problem::sequence_tardiness;

    fn six_jobs() -> Instance {
        Instance::new(vec![10, 11, 10, 10, 11, 10], vec![15, 11, 13, 11, 12, 11]).unwrap()
    }

    #[test]
    fn mdd_expression_on_six_jobs() {
        // the (p, d) pre-sort lets job 3 win the t = 0 tie that plain MDD
        // hands to job 1; every later step is a tie resolved the same way
        let order = dispatch(&PriorityExpr::mdd(), &six_jobs());
        assert_eq!(order, vec![3, 5, 2, 0, 1, 4]);
        assert_eq!(sequence_tardiness(&six_jobs(), &order), 141);
    }

    #[test]
    fn mddc_expression_reaches_141() {
        let inst = six_jobs();
        let order = dispatch(&PriorityExpr::mddc(), &inst);
        assert_eq!(order, vec![3, 5, 2, 0, 1, 4]);
        assert_eq!(sequence_tardiness(&inst, &order), 141);
    }

    #[test]
    fn single_terminals_reproduce_sort_rules() {
        let inst = Instance::new(vec![4, 2, 4, 1, 7], vec![9, 9, 3, 20, 3]).unwrap();
        let by_d = dispatch(&"D".parse().unwrap(), &inst);
        // pre-sort (p, d, index) breaks due-date ties by processing time,
        // which is exactly EDD's own tie rule
        assert_eq!(by_d, edd(&inst).into_order());
        let by_p = dispatch(&"P".parse().unwrap(), &inst);
        assert_eq!(by_p, spt(&inst).into_order());
    }

    #[test]
    fn constant_expression_keeps_presort() {
        let inst = six_jobs();
        assert_eq!(dispatch(&"7".parse().unwrap(), &inst), spt(&inst).into_order());
    }
}
