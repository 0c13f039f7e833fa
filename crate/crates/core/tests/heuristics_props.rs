use proptest::prelude::*;

use smtt_core::heuristics::{
    augmented_mdd, augmented_mddc, mdd, mddc, run_heuristic, HeuristicId, HeuristicRegistry, MddcStepState,
};
use smtt_core::problem::is_permutation;
use smtt_core::{total_tardiness, Instance};

fn instance(max_n: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1u64..=100, n),
            prop::collection::vec(-500i64..=3000, n),
        )
            .prop_map(|(p, d)| Instance::new(p, d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_heuristic_returns_a_permutation(inst in instance(50)) {
        for id in HeuristicId::ALL {
            let sched = id.run(&inst);
            prop_assert!(is_permutation(sched.order(), inst.n()), "{}", id);
        }
    }

    #[test]
    fn heuristics_are_deterministic(inst in instance(30)) {
        for id in HeuristicId::ALL {
            prop_assert_eq!(id.run(&inst), id.run(&inst));
        }
    }

    #[test]
    fn loose_due_dates_give_zero(
        p in prop::collection::vec(1u64..=100, 1..40),
        slack in prop::collection::vec(0i64..=100, 40),
    ) {
        let total: u64 = p.iter().sum();
        let d: Vec<i64> = slack[..p.len()].iter().map(|s| total as i64 + s).collect();
        let inst = Instance::new(p, d).unwrap();
        for id in HeuristicId::ALL {
            prop_assert_eq!(total_tardiness(&inst, &id.run(&inst)).unwrap(), 0);
        }
    }

    #[test]
    fn mddc_rho_stays_in_range(inst in instance(40)) {
        let mut state = MddcStepState::new(&inst);
        while !state.is_done() {
            for s in state.scores(&inst) {
                prop_assert!(s.raw_rho <= 1.0 + 1e-12);
                prop_assert!(s.theta >= 0.0 && s.theta <= 0.5);
            }
            let pos = state.select(&inst);
            state.advance(&inst, pos);
        }
    }

    #[test]
    fn registry_reports_recomputed_tardiness(inst in instance(20)) {
        let registry = HeuristicRegistry::with_builtins();
        for id in HeuristicId::ALL {
            let run = run_heuristic(&registry, id.name(), &inst).unwrap();
            prop_assert_eq!(run.total_tardiness, total_tardiness(&inst, &run.schedule).unwrap());
        }
    }
}

#[test]
fn augmented_variants_are_no_worse_on_small_cases() {
    // two-job instances: the move-to-end pass alone reaches the optimum
    for p0 in 1..6u64 {
        for p1 in 1..6u64 {
            for d0 in -2..8i64 {
                for d1 in -2..8i64 {
                    let inst = Instance::new(vec![p0, p1], vec![d0, d1]).unwrap();
                    let best = [vec![0, 1], vec![1, 0]]
                        .iter()
                        .map(|o| smtt_core::problem::sequence_tardiness(&inst, o))
                        .min()
                        .unwrap();
                    let aug = total_tardiness(&inst, &augmented_mdd(&inst)).unwrap();
                    let augc = total_tardiness(&inst, &augmented_mddc(&inst)).unwrap();
                    assert_eq!(aug, best);
                    assert_eq!(augc, best);
                    assert!(aug <= total_tardiness(&inst, &mdd(&inst)).unwrap());
                    assert!(augc <= total_tardiness(&inst, &mddc(&inst)).unwrap());
                }
            }
        }
    }
}
