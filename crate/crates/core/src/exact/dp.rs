//! Subset dynamic program over job sets `J`:
//! `V(J) = min_{j in J} V(J \ {j}) + max(0, C(J) - d_j)`, `C(J) = sum_{i in J} p_i`.
//!
//! Only the value table is stored; the schedule is recovered afterwards by
//! re-deriving an argmin for each subset on the way back from the full set.

use crate::error::{Error, Result};
use crate::problem::{tardiness_at, Instance, Schedule};

pub const DEFAULT_DP_CAP: usize = 22;

/// Bytes needed by the value table for `n` jobs.
pub fn dp_table_bytes(n: usize) -> u128 {
    (1u128 << n) * std::mem::size_of::<u64>() as u128
}

/// `V` for every subset of jobs, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    n: usize,
    values: Vec<u64>,
}

impl DpTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, subset: u32) -> u64 {
        self.values[subset as usize]
    }

    pub fn full_set(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn optimum(&self) -> u64 {
        self.value(self.full_set())
    }

    /// Total processing time of a subset.
    pub fn completion(inst: &Instance, subset: u32) -> i64 {
        bits(subset).map(|j| inst.p(j) as i64).sum()
    }

    /// Rebuilds an optimal order. At each subset the last job is the lowest
    /// index attaining the recursion's minimum.
    pub fn schedule(&self, inst: &Instance) -> Schedule {
        let mut order = vec![0; self.n];
        let mut set = self.full_set();
        for slot in (0..self.n).rev() {
            let c = Self::completion(inst, set);
            let target = self.value(set);
            let last = bits(set)
                .find(|&j| self.value(set & !(1 << j)) + tardiness_at(c, inst.d(j)) == target)
                .expect("value table is consistent");
            order[slot] = last;
            set &= !(1 << last);
        }
        Schedule::from_permutation(order)
    }
}

fn bits(mut set: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let j = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(j)
        }
    })
}

#[derive(Debug, Clone, Copy)]
pub struct DpSolver {
    pub cap: usize,
}

impl Default for DpSolver {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DP_CAP,
        }
    }
}

impl DpSolver {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap: cap.min(31) }
    }

    pub fn table(&self, inst: &Instance) -> Result<DpTable> {
        let n = inst.n();
        if n > self.cap {
            return Err(Error::DpTooLarge {
                n,
                cap: self.cap,
                bytes: dp_table_bytes(n),
            });
        }
        let size = 1usize << n;
        let mut values = vec![0u64; size];
        for set in 1..size as u32 {
            let c = DpTable::completion(inst, set);
            values[set as usize] = bits(set)
                .map(|j| values[(set & !(1 << j)) as usize] + tardiness_at(c, inst.d(j)))
                .min()
                .expect("non-empty subset");
        }
        Ok(DpTable { n, values })
    }

    pub fn solve(&self, inst: &Instance) -> Result<(u64, Schedule)> {
        let table = self.table(inst)?;
        Ok((table.optimum(), table.schedule(inst)))
    }
}

/// Optimal value and one optimal schedule under the default size cap.
pub fn dp_optimal(inst: &Instance) -> Result<(u64, Schedule)> {
    DpSolver::default().solve(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::tests::six_jobs;
    use crate::problem::total_tardiness;

    #[test]
    fn worked_example() {
        let inst = six_jobs();
        let (v, s) = dp_optimal(&inst).unwrap();
        assert_eq!(v, 141);
        assert_eq!(total_tardiness(&inst, &s).unwrap(), 141);
    }

    #[test]
    fn loose_due_dates() {
        let inst = Instance::new(vec![3, 9, 4, 4], vec![20, 20, 20, 25]).unwrap();
        assert_eq!(dp_optimal(&inst).unwrap().0, 0);
    }

    #[test]
    fn table_invariants() {
        let inst = Instance::new(vec![5, 3, 8, 2, 7], vec![6, 4, 20, 3, 9]).unwrap();
        let table = DpSolver::default().table(&inst).unwrap();
        assert_eq!(table.value(0), 0);
        for set in 1..=table.full_set() {
            let c = DpTable::completion(&inst, set);
            for j in bits(set) {
                let without = table.value(set & !(1 << j));
                assert!(table.value(set) <= without + tardiness_at(c, inst.d(j)));
            }
        }
    }

    #[test]
    fn cap_rejection_reports_memory() {
        let inst = Instance::new(vec![1; 12], vec![0; 12]).unwrap();
        match DpSolver::with_cap(10).solve(&inst) {
            Err(Error::DpTooLarge { n, cap, bytes }) => {
                assert_eq!((n, cap, bytes), (12, 10, 4096 * 8));
            }
            other => panic!("unexpected {other:?}"),
        }
        let msg = DpSolver::with_cap(10).solve(&inst).unwrap_err().to_string();
        assert!(msg.contains("32768 bytes"), "{msg}");
    }
}
