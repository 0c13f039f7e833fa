use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use smtt_core::bench::{
    aggregate, emit_csv, emit_records_csv, format_table_csv, load_provided_optima, run_suite, Oracle, OracleKind,
};
use smtt_core::datagen::{generate_dataset, read_dataset, read_instance, test_grid, training_grid, write_dataset, ProcessingDist};
use smtt_core::exact::{brute_force_optimal, build_mip, export_lp, DpSolver, DEFAULT_DP_CAP};
use smtt_core::heuristics::{run_heuristic, HeuristicRegistry};
use smtt_core::optimality_gap_percent;
use smtt_discovery::{
    run_discovery, write_log, DiscoveryConfig, DiscoveryError, HttpMutator, Mutator, MutatorKind, StubMutator,
};

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(name = "smtt", version, about = "Single-machine total tardiness toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    /// RDD x TF with TF up to 0.8 (20 classes).
    Test,
    /// RDD x TF with TF up to 1.0 (25 classes).
    Training,
}

#[derive(Clone, Copy, ValueEnum)]
enum Exact {
    Dp,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset of random instances plus a manifest.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        per_class: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "uniform")]
        dist: ProcessingDist,
        #[arg(long, value_enum, default_value = "test")]
        grid: Grid,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one heuristic on one instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "MDDC")]
        heuristic: String,
        /// Also compute the optimum and the gap.
        #[arg(long, value_enum)]
        exact: Option<Exact>,
        #[arg(long, default_value_t = DEFAULT_DP_CAP)]
        dp_cap: usize,
    },
    /// Run heuristics over a dataset and write the gap table.
    Bench {
        #[arg(long)]
        dataset: PathBuf,
        /// Comma-separated names, or `all`.
        #[arg(long, default_value = "all")]
        heuristics: String,
        /// `dp`, `brute` or `file:PATH` (CSV with instance_path,optimal).
        #[arg(long, default_value = "dp")]
        oracle: String,
        #[arg(long)]
        out: PathBuf,
        /// Also write one row per (instance, method).
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DP_CAP)]
        dp_cap: usize,
    },
    /// Write the positional MIP of an instance in LP format.
    ExportLp {
        #[arg(long)]
        instance: PathBuf,
        /// Add the valid inequalities.
        #[arg(long)]
        vi: bool,
        /// Output file, `-` for stdout.
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a priority rule with the island-model loop.
    Discover {
        /// TOML configuration; desk-scale defaults when omitted.
        #[arg(long, conflicts_with = "full_scale")]
        config: Option<PathBuf>,
        /// Use the full-size training set, iteration budget and reset clock.
        #[arg(long)]
        full_scale: bool,
        #[arg(long, default_value = "stub")]
        mutator: MutatorKind,
        /// File for the best expression.
        #[arg(long)]
        out: PathBuf,
        /// CSV log of every iteration.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn heuristic_list(spec: &str, registry: &HeuristicRegistry) -> Vec<String> {
    if spec.eq_ignore_ascii_case("all") {
        registry.names().map(str::to_string).collect()
    } else {
        spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen {
            n,
            per_class,
            seed,
            dist,
            grid,
            out,
        } => {
            let classes = match grid {
                Grid::Test => test_grid(n, dist),
                Grid::Training => training_grid(n, dist),
            };
            let dataset = generate_dataset(&classes, per_class, seed)?;
            let manifest = write_dataset(&dataset, &out)?;
            println!("wrote {} instances, manifest {}", dataset.len(), manifest.display());
        }
        Command::Solve {
            instance,
            heuristic,
            exact,
            dp_cap,
        } => {
            let inst = read_instance(&instance)?;
            let registry = HeuristicRegistry::with_builtins();
            let result = run_heuristic(&registry, &heuristic, &inst)?;
            println!("heuristic: {}", heuristic.to_ascii_uppercase().replace('-', "_"));
            println!("order: {}", result.schedule);
            println!("total_tardiness: {}", result.total_tardiness);
            println!("elapsed_secs: {:.6}", result.elapsed.as_secs_f64());
            if let Some(exact) = exact {
                let (optimal, schedule) = match exact {
                    Exact::Dp => DpSolver::with_cap(dp_cap).solve(&inst)?,
                    Exact::Brute => {
                        let (s, v) = brute_force_optimal(&inst)?;
                        (v, s)
                    }
                };
                println!("optimal: {optimal}");
                println!("optimal_order: {schedule}");
                match optimality_gap_percent(result.total_tardiness as f64, optimal as f64) {
                    Ok(gap) => println!("gap_percent: {gap:.4}"),
                    Err(_) => println!("gap_percent: n/a (zero optimum)"),
                }
            }
        }
        Command::Bench {
            dataset,
            heuristics,
            oracle,
            out,
            records,
            dp_cap,
        } => {
            let entries = read_dataset(&dataset)?;
            let registry = HeuristicRegistry::with_builtins();
            let methods = heuristic_list(&heuristics, &registry);
            if methods.is_empty() {
                bail!(smtt_core::Error::UnknownHeuristic(heuristics));
            }
            let kind: OracleKind = oracle.parse()?;
            let oracle: Box<dyn Oracle> = match &kind {
                OracleKind::ProvidedOptima(path) => {
                    let optima = load_provided_optima(path)?;
                    optima.check_known(entries.iter().map(|e| e.id.as_str()))?;
                    Box::new(optima)
                }
                other => other.build(dp_cap)?,
            };
            let recs = run_suite(&entries, &registry, &methods, oracle.as_ref())?;
            let table = aggregate(&recs)?;
            emit_csv(&table, &out)?;
            if let Some(path) = records {
                emit_records_csv(&recs, &path)?;
            }
            print!("{}", format_table_csv(&table));
        }
        Command::ExportLp { instance, vi, out } => {
            let inst = read_instance(&instance)?;
            write_text(&out, &export_lp(&build_mip(&inst, vi)))?;
        }
        Command::Discover {
            config,
            full_scale,
            mutator,
            out,
            log,
        } => {
            let config = match (config, full_scale) {
                (Some(path), _) => DiscoveryConfig::load(&path)?,
                (None, true) => DiscoveryConfig::full_scale(),
                (None, false) => DiscoveryConfig::default(),
            };
            let mut mutator: Box<dyn Mutator> = match mutator {
                MutatorKind::Stub => Box::new(StubMutator::new(config.seed, config.max_depth)),
                MutatorKind::Http => Box::new(HttpMutator::new(config.http.clone())),
            };
            let outcome = run_discovery(&config, mutator.as_mut())?;
            let best = &outcome.best;
            let text = format!(
                "# mean total tardiness {:.4} over {} training instances, iteration {}, island {}\n{}\n",
                best.score(),
                config.training.len(),
                best.iteration(),
                best.island(),
                best.text()
            );
            write_text(&out, &text)?;
            if let Some(path) = log {
                write_log(&outcome.log, &path)?;
            }
            println!(
                "best {:.4} after {} iterations ({} rejected, {} infeasible, {} resets): {}",
                best.score(),
                outcome.log.len() - 1,
                outcome.rejected,
                outcome.infeasible,
                outcome.resets.len(),
                best.text()
            );
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use smtt_core::Error as E;
    let core = err
        .downcast_ref::<E>()
        .or_else(|| match err.downcast_ref::<DiscoveryError>() {
            Some(DiscoveryError::Core(e)) => Some(e),
            _ => None,
        });
    match core {
        Some(E::UnknownHeuristic(_) | E::UnknownOracle(_)) => EXIT_USAGE,
        Some(
            E::NegativeGap { .. }
            | E::MissingOptimum(_)
            | E::Optima(_)
            | E::DpTooLarge { .. }
            | E::BruteForceTooLarge { .. }
            | E::InvalidSchedule(_),
        ) => EXIT_ORACLE,
        _ => match err.downcast_ref::<DiscoveryError>() {
            Some(DiscoveryError::Config(_)) => EXIT_USAGE,
            _ => EXIT_OTHER,
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
