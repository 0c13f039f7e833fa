//! Augmented variants: after each greedy append, try moving every earlier
//! job to the end of the partial schedule and keep strict improvements.

use crate::problem::{sequence_tardiness, Instance, Schedule};

use super::mddc::MddcStepState;
use super::rules::mdd_select;

/// One local-search sweep over the partial schedule `seq`, whose last entry
/// is the job just appended. Jobs are visited in their order at the start of
/// the sweep; each trial moves the visited job to the end of the current
/// sequence and is accepted only on a strict tardiness decrease.
pub fn move_to_end_pass(inst: &Instance, seq: &mut Vec<usize>) {
    let Some((&newest, earlier)) = seq.split_last() else {
        return;
    };
    let visit: Vec<usize> = earlier.to_vec();
    let mut trial = Vec::with_capacity(seq.len());
    for job in visit {
        if job == newest {
            continue;
        }
        let incumbent = sequence_tardiness(inst, seq);
        trial.clear();
        trial.extend(seq.iter().copied().filter(|&k| k != job));
        trial.push(job);
        if sequence_tardiness(inst, &trial) < incumbent {
            std::mem::swap(seq, &mut trial);
        }
    }
}

/// Augmented MDD: plain MDD selection (lowest index on ties) plus the
/// move-to-end sweep.
pub fn augmented_mdd(inst: &Instance) -> Schedule {
    let mut unscheduled: Vec<usize> = (0..inst.n()).collect();
    let mut seq = Vec::with_capacity(inst.n());
    let mut t = 0i64;
    while !unscheduled.is_empty() {
        let pos = mdd_select(inst, &unscheduled, t);
        let job = unscheduled.remove(pos);
        t += inst.p(job) as i64;
        seq.push(job);
        move_to_end_pass(inst, &mut seq);
    }
    Schedule::from_permutation(seq)
}

/// Augmented MDDC: MDDC selection plus the move-to-end sweep. The clock
/// advances by the chosen job's processing time, which equals the makespan
/// of the partial schedule whatever the sweep did.
pub fn augmented_mddc(inst: &Instance) -> Schedule {
    let mut state = MddcStepState::new(inst);
    let mut seq = Vec::with_capacity(inst.n());
    while !state.is_done() {
        let pos = state.select(inst);
        seq.push(state.advance(inst, pos));
        move_to_end_pass(inst, &mut seq);
    }
    Schedule::from_permutation(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{mdd, mddc};
    use crate::problem::tests::six_jobs;
    use crate::problem::total_tardiness;

    fn tt(inst: &Instance, s: &Schedule) -> u64 {
        total_tardiness(inst, s).unwrap()
    }

    #[test]
    fn worked_example_not_worse_than_mddc() {
        let inst = six_jobs();
        let aug = augmented_mddc(&inst);
        assert_eq!(tt(&inst, &aug), 141);
        assert!(tt(&inst, &augmented_mdd(&inst)) <= tt(&inst, &mdd(&inst)));
        assert_eq!(tt(&inst, &mddc(&inst)), 141);
    }

    #[test]
    fn single_job() {
        let inst = Instance::new(vec![3], vec![1]).unwrap();
        assert_eq!(augmented_mdd(&inst).order(), &[0]);
        assert_eq!(augmented_mddc(&inst).order(), &[0]);
    }

    #[test]
    fn two_jobs_reach_the_better_order() {
        // exhaustive over a small grid of two-job instances
        for p0 in 1..6u64 {
            for p1 in 1..6u64 {
                for d0 in -2..8i64 {
                    for d1 in -2..8i64 {
                        let inst = Instance::new(vec![p0, p1], vec![d0, d1]).unwrap();
                        let best = sequence_tardiness(&inst, &[0, 1])
                            .min(sequence_tardiness(&inst, &[1, 0]));
                        assert_eq!(tt(&inst, &augmented_mdd(&inst)), best, "{inst:?}");
                        assert_eq!(tt(&inst, &augmented_mddc(&inst)), best, "{inst:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn sweep_accepts_only_strict_improvements() {
        // moving job 0 to the end takes tardiness from 20 to 0
        let inst = Instance::new(vec![10, 1, 1], vec![20, 1, 2]).unwrap();
        let mut seq = vec![0, 1, 2];
        let before = sequence_tardiness(&inst, &seq);
        move_to_end_pass(&inst, &mut seq);
        assert_eq!(seq, vec![1, 2, 0]);
        assert!(sequence_tardiness(&inst, &seq) < before);

        let mut unchanged = vec![1, 2, 0];
        move_to_end_pass(&inst, &mut unchanged);
        assert_eq!(unchanged, vec![1, 2, 0]);
    }
}
