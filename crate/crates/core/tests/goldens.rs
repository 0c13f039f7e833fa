use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use smtt_core::bench::{aggregate, format_table_csv, run_suite, BruteForceOracle, DpOracle};
use smtt_core::datagen::{format_instance, generate_dataset, generate_instance, test_grid, ClassParams, ProcessingDist};
use smtt_core::heuristics::{HeuristicId, HeuristicRegistry};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn assert_golden(name: &str, actual: &str) {
    let path = fixture(name);
    if !path.exists() && std::env::var_os("SMTT_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()));
    assert_eq!(expected, actual, "{name} differs from its golden file");
}

#[test]
fn seed_42_instance() {
    let params = ClassParams::new(5, 0.4, 0.4, ProcessingDist::Uniform).unwrap();
    let inst = generate_instance(&params, &mut ChaCha8Rng::seed_from_u64(42));
    assert_golden("seed42_n5_rdd0.4_tf0.4_uniform.txt", &format_instance(&inst));
}

fn micro_suite_classes() -> Vec<ClassParams> {
    (6..=9).flat_map(|n| test_grid(n, ProcessingDist::Uniform)).collect()
}

fn all_methods() -> Vec<String> {
    HeuristicId::ALL.iter().map(|h| h.name().to_string()).collect()
}

#[test]
fn micro_suite_gap_table() {
    let dataset = generate_dataset(&micro_suite_classes(), 3, 42).unwrap();
    let registry = HeuristicRegistry::with_builtins();
    let records = run_suite(&dataset.entries(), &registry, &all_methods(), &DpOracle::default()).unwrap();
    assert_eq!(records.len(), 80 * 3 * 8);
    let table = aggregate(&records).unwrap();
    assert_golden("micro_suite_table.csv", &format_table_csv(&table));
}

#[test]
fn micro_suite_oracles_agree() {
    let dataset = generate_dataset(&micro_suite_classes(), 1, 42).unwrap();
    let registry = HeuristicRegistry::with_builtins();
    let methods = all_methods();
    let dp = run_suite(&dataset.entries(), &registry, &methods, &DpOracle::default()).unwrap();
    let bf = run_suite(&dataset.entries(), &registry, &methods, &BruteForceOracle).unwrap();
    let values = |rs: &[smtt_core::bench::RunRecord]| {
        rs.iter().map(|r| (r.instance_id.clone(), r.objective, r.gap_percent)).collect::<Vec<_>>()
    };
    assert_eq!(values(&dp), values(&bf));
}
