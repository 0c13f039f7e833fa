//! EDD Challenger: the EDD sort followed by a conditional swap of the last
//! two positions.

use crate::problem::{Instance, Schedule};

use super::rules::edd;

/// EDDC. The scan only swaps when it reaches the final position, the
/// second-to-last job has the later due date, and that due date exceeds the
/// second-to-last job's completion time.
pub fn eddc(inst: &Instance) -> Schedule {
    let mut order = edd(inst).into_order();
    eddc_pass(inst, &mut order);
    Schedule::from_permutation(order)
}

/// The EDDC scan over an arbitrary starting order, written with 1-based
/// positions (`pos(k)` is `order[k - 1]`).
pub fn eddc_pass(inst: &Instance, order: &mut [usize]) {
    let len = order.len();
    for i in 1..=len {
        let mut j = i;
        while j > 1 && inst.d(order[j - 1]) < inst.d(order[j - 2]) {
            // completion time of the job at position j - 1
            let completion: u64 = order[..j - 1].iter().map(|&k| inst.p(k)).sum();
            if j == len && inst.d(order[j - 2]) > completion as i64 {
                order.swap(j - 1, j - 2);
            }
            j -= 1;
        }
    }
}
