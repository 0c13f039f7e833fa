//! Scoring candidate programs on a fixed training set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use smtt_core::datagen::{generate_dataset, training_grid, ProcessingDist};
use smtt_core::{evaluate_candidate, Instance};

use crate::dispatch::{Dispatcher, GreedyDispatcher};
use crate::error::{DiscoveryError, Result};
use crate::expr::PriorityExpr;

/// How to regenerate the training instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSpec {
    pub n: usize,
    /// Instances per (RDD, TF) class; the grid has 25 classes.
    pub per_class: usize,
    pub seed: u64,
}

impl Default for TrainingSpec {
    fn default() -> Self {
        Self {
            n: 25,
            per_class: 4,
            seed: 42,
        }
    }
}

impl TrainingSpec {
    pub fn len(&self) -> usize {
        self.per_class * 25
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generate(&self) -> Result<Vec<Instance>> {
        let dataset = generate_dataset(&training_grid(self.n, ProcessingDist::Uniform), self.per_class, self.seed)?;
        Ok(dataset.entries().into_iter().map(|e| e.instance).collect())
    }
}

/// A program together with the score the sandbox gave it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredProgram {
    expr: PriorityExpr,
    text: String,
    score: f64,
    island: usize,
    iteration: u64,
}

impl ScoredProgram {
    pub(crate) fn new(expr: PriorityExpr, score: f64, island: usize, iteration: u64) -> Self {
        let text = expr.to_string();
        Self {
            expr,
            text,
            score,
            island,
            iteration,
        }
    }

    pub fn expr(&self) -> &PriorityExpr {
        &self.expr
    }

    /// Rendered expression.
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Mean total tardiness over the training set; lower is better.
    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn island(&self) -> usize {
        self.island
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub(crate) fn moved_to(&self, island: usize) -> Self {
        Self {
            island,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandboxReport {
    pub mean_score: f64,
    /// Instances whose proposed order was not a permutation.
    pub infeasible: usize,
}

impl SandboxReport {
    pub fn feasible(&self) -> bool {
        self.infeasible == 0
    }
}

pub struct Sandbox {
    instances: Vec<Instance>,
    dispatcher: Box<dyn Dispatcher>,
}

impl Sandbox {
    pub fn new(instances: Vec<Instance>) -> Result<Self> {
        Self::with_dispatcher(instances, Box::new(GreedyDispatcher))
    }

    pub fn with_dispatcher(instances: Vec<Instance>, dispatcher: Box<dyn Dispatcher>) -> Result<Self> {
        if instances.is_empty() {
            return Err(DiscoveryError::EmptyTrainingSet);
        }
        Ok(Self { instances, dispatcher })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    /// Evaluates every training instance through the penalizing evaluator.
    /// Per-instance scores are summed in instance order, so the mean does
    /// not depend on thread scheduling.
    pub fn run(&self, expr: &PriorityExpr) -> SandboxReport {
        let outcomes: Vec<(u64, bool)> = self
            .instances
            .par_iter()
            .map(|inst| {
                let out = evaluate_candidate(inst, &self.dispatcher.propose(expr, inst));
                (out.score, out.feasible)
            })
            .collect();
        let total: f64 = outcomes.iter().map(|&(s, _)| s as f64).sum();
        SandboxReport {
            mean_score: total / outcomes.len() as f64,
            infeasible: outcomes.iter().filter(|&&(_, ok)| !ok).count(),
        }
    }

    /// A database-ready program, or `None` when any proposed order failed
    /// the permutation check.
    pub fn admit(&self, expr: PriorityExpr, island: usize, iteration: u64) -> (SandboxReport, Option<ScoredProgram>) {
        let report = self.run(&expr);
        let program = report
            .feasible()
            .then(|| ScoredProgram::new(expr, report.mean_score, island, iteration));
        (report, program)
    }
}

/// Mean penalized score of `expr` under the greedy dispatcher.
pub fn score_program(expr: &PriorityExpr, training: &[Instance]) -> Result<f64> {
    if training.is_empty() {
        return Err(DiscoveryError::EmptyTrainingSet);
    }
    Ok(Sandbox::new(training.to_vec())?.run(expr).mean_score)
}
