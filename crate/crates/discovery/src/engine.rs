//! The sequential discovery loop.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{DiscoveryConfig, ResetPolicy};
use crate::database::{IslandDatabase, ResetEvent};
use crate::error::{DiscoveryError, Result};
use crate::expr::PriorityExpr;
use crate::mutator::Mutator;
use crate::prompt::render_prompt;
use crate::sandbox::{Sandbox, ScoredProgram};

/// One line of the discovery log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRow {
    pub iteration: u64,
    /// Absent when the mutator produced nothing usable.
    pub candidate_score: Option<f64>,
    pub best_score: f64,
    /// Island the prompt was drawn from; absent for the initial program.
    pub island: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResetRecord {
    pub iteration: u64,
    pub event: ResetEvent,
    pub best_before: ScoredProgram,
    pub best_after: ScoredProgram,
}

#[derive(Debug, Clone)]
pub struct DiscoveryOutcome {
    pub best: ScoredProgram,
    pub log: Vec<LogRow>,
    pub resets: Vec<ResetRecord>,
    pub database: IslandDatabase,
    /// Iterations whose mutator output was unusable.
    pub rejected: u64,
    /// Candidates that produced an invalid order on some instance.
    pub infeasible: u64,
}

fn parse_candidate(text: &str, max_depth: usize) -> Result<PriorityExpr> {
    let expr: PriorityExpr = text.parse()?;
    if expr.depth() > max_depth {
        return Err(DiscoveryError::TooDeep {
            depth: expr.depth(),
            max: max_depth,
        });
    }
    Ok(expr)
}

/// Generates the configured training set and runs the loop on it.
pub fn run_discovery(config: &DiscoveryConfig, mutator: &mut dyn Mutator) -> Result<DiscoveryOutcome> {
    config.validate()?;
    let sandbox = Sandbox::new(config.training.generate()?)?;
    run_with_sandbox(config, &sandbox, mutator)
}

/// Sample a prompt, ask the mutator, score the answer, register it. Stops
/// after `max_iterations` or the wall-clock limit; the best program ever
/// scored is returned, whatever the last iterations produced.
pub fn run_with_sandbox(
    config: &DiscoveryConfig,
    sandbox: &Sandbox,
    mutator: &mut dyn Mutator,
) -> Result<DiscoveryOutcome> {
    config.validate()?;
    let started = Instant::now();
    let limit = Duration::from_secs(config.wall_clock_limit_secs);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let initial = parse_candidate(&config.initial_program, config.max_depth)?;
    let (report, seeded) = sandbox.admit(initial, 0, 0);
    let seeded = seeded.ok_or_else(|| {
        DiscoveryError::Config(format!(
            "initial program is infeasible on {} instances",
            report.infeasible
        ))
    })?;
    let mut db = IslandDatabase::new(config.islands, config.island_capacity);
    for island in 0..config.islands {
        db.register(seeded.moved_to(island));
    }
    let mut best = seeded.clone();
    let mut log = vec![LogRow {
        iteration: 0,
        candidate_score: Some(best.score()),
        best_score: best.score(),
        island: None,
    }];
    let mut resets = Vec::new();
    let (mut rejected, mut infeasible) = (0, 0);
    let mut last_reset = Instant::now();

    for iteration in 1..=config.max_iterations {
        if started.elapsed() >= limit {
            log::info!("wall-clock limit reached after {} iterations", iteration - 1);
            break;
        }
        let (island, sample) = db.sample_prompt(config.sample_k, &mut rng)?;
        let prompt = render_prompt(&sample);
        let candidate = mutator
            .propose(&prompt)
            .and_then(|text| parse_candidate(&text, config.max_depth));

        let candidate_score = match candidate {
            Ok(expr) => {
                let (report, program) = sandbox.admit(expr, island, iteration);
                match program {
                    Some(program) => {
                        if program.score() < best.score() {
                            log::info!("iteration {iteration}: new best {:.4} {}", program.score(), program.text());
                            best = program.clone();
                        }
                        db.register(program);
                    }
                    None => {
                        infeasible += 1;
                        log::warn!("iteration {iteration}: candidate produced invalid orders, not registered");
                    }
                }
                Some(report.mean_score)
            }
            Err(e) => {
                rejected += 1;
                log::warn!("iteration {iteration}: {} proposal skipped: {e}", mutator.name());
                None
            }
        };
        log.push(LogRow {
            iteration,
            candidate_score,
            best_score: best.score(),
            island: Some(island),
        });

        let due = match config.reset {
            ResetPolicy::EveryIterations(k) => iteration % k == 0,
            ResetPolicy::EverySeconds(s) => last_reset.elapsed() >= Duration::from_secs(s),
            ResetPolicy::Never => false,
        };
        if due {
            let best_before = db.global_best().expect("seeded").clone();
            let event = db.reset_weaker_half(&mut rng);
            let best_after = db.global_best().expect("seeded").clone();
            log::info!("iteration {iteration}: reset islands {:?}", event.reset);
            resets.push(ResetRecord {
                iteration,
                event,
                best_before,
                best_after,
            });
            last_reset = Instant::now();
        }
    }

    Ok(DiscoveryOutcome {
        best,
        log,
        resets,
        database: db,
        rejected,
        infeasible,
    })
}

/// Writes `iteration,candidate_score,best_score,island`.
pub fn write_log(rows: &[LogRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutator::StubMutator;
    use crate::sandbox::TrainingSpec;

    struct Failing;

    impl Mutator for Failing {
        fn name(&self) -> &str {
            "failing"
        }

        fn propose(&mut self, _: &str) -> Result<String> {
            Err(DiscoveryError::Mutator("offline".into()))
        }
    }

    struct Garbage;

    impl Mutator for Garbage {
        fn name(&self) -> &str {
            "garbage"
        }

        fn propose(&mut self, _: &str) -> Result<String> {
            Ok("max(P".into())
        }
    }

    fn small() -> DiscoveryConfig {
        DiscoveryConfig {
            max_iterations: 12,
            islands: 3,
            reset: ResetPolicy::EveryIterations(4),
            training: TrainingSpec {
                n: 8,
                per_class: 1,
                seed: 3,
            },
            ..DiscoveryConfig::default()
        }
    }

    #[test]
    fn zero_iterations_return_the_seed() {
        let config = DiscoveryConfig {
            max_iterations: 0,
            ..small()
        };
        let out = run_discovery(&config, &mut StubMutator::new(1, 10)).unwrap();
        assert_eq!(out.best.text(), "max(P + T, D)");
        assert_eq!(out.log.len(), 1);
        assert_eq!(out.database.len(), 3);
    }

    #[test]
    fn failing_mutators_do_not_stop_the_loop() {
        for m in [&mut Failing as &mut dyn Mutator, &mut Garbage] {
            let out = run_discovery(&small(), m).unwrap();
            assert_eq!(out.rejected, 12);
            assert_eq!(out.log.len(), 13);
            assert!(out.log[1..].iter().all(|r| r.candidate_score.is_none()));
            assert_eq!(out.resets.len(), 3);
        }
    }

    #[test]
    fn best_is_monotone_and_resets_keep_it() {
        let out = run_discovery(&small(), &mut StubMutator::new(2, 10)).unwrap();
        assert!(out.log.windows(2).all(|w| w[1].best_score <= w[0].best_score));
        for r in &out.resets {
            assert_eq!(r.best_before.text(), r.best_after.text());
        }
        assert_eq!(out.best.score(), out.log.last().unwrap().best_score);
    }

    #[test]
    fn log_file_has_the_documented_columns() {
        let out = run_discovery(&small(), &mut StubMutator::new(2, 10)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.csv");
        write_log(&out.log, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("iteration,candidate_score,best_score,island\n0,"));
        assert_eq!(text.lines().count(), 14);
    }
}
