use crate::error::{Error, Result};
use crate::problem::{sequence_tardiness, Instance, Schedule};

pub const BRUTE_FORCE_MAX_JOBS: usize = 10;

/// Exhaustive minimum over all `n!` orders. Orders are visited in
/// lexicographic order and only strict improvements replace the incumbent,
/// so the lexicographically smallest optimal order is returned.
pub fn brute_force_optimal(inst: &Instance) -> Result<(Schedule, u64)> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_JOBS {
        return Err(Error::BruteForceTooLarge {
            n,
            max: BRUTE_FORCE_MAX_JOBS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = order.clone();
    let mut best_value = sequence_tardiness(inst, &order);
    while next_permutation(&mut order) {
        let v = sequence_tardiness(inst, &order);
        if v < best_value {
            best_value = v;
            best.copy_from_slice(&order);
        }
    }
    Ok((Schedule::from_permutation(best), best_value))
}

/// Advances to the next lexicographic permutation; `false` after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::tests::six_jobs;

    #[test]
    fn permutations_are_enumerated_once_each() {
        let mut v = vec![0, 1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 24);
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(sorted, seen);
    }

    #[test]
    fn small_examples() {
        let inst = Instance::new(vec![3, 2, 4], vec![2, 5, 7]).unwrap();
        let (s, v) = brute_force_optimal(&inst).unwrap();
        assert_eq!(v, 3);
        assert_eq!(s.order(), &[0, 1, 2]);

        let one = Instance::new(vec![8], vec![3]).unwrap();
        assert_eq!(brute_force_optimal(&one).unwrap().1, 5);

        assert_eq!(brute_force_optimal(&six_jobs()).unwrap().1, 141);
    }

    #[test]
    fn rejects_large_instances() {
        let inst = Instance::new(vec![1; 11], vec![0; 11]).unwrap();
        assert!(matches!(
            brute_force_optimal(&inst),
            Err(Error::BruteForceTooLarge { n: 11, .. })
        ));
    }
}
