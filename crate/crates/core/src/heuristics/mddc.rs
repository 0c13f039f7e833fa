//! MDD Challenger: the MDD priority with a 1.1 processing-time weight,
//! reshaped by the `rho`/`theta`/`sigma` sub-scores.

use crate::heuristics::rules::spt_order;
use crate::problem::{Instance, Schedule};

pub const MDDC_MULTIPLIER: f64 = 1.1;

/// Two scores closer than this are a tie; the earlier job in `U` wins.
pub const TIE_EPSILON: f64 = 1e-9;

/// Sub-scores of one unscheduled job at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MddcScore {
    /// `p_j / (t + max p_U)` before the `min(., 1)` clamp.
    pub raw_rho: f64,
    pub rho: f64,
    pub theta: f64,
    pub sigma: f64,
    /// Final priority; lower is scheduled first.
    pub mu: f64,
}

/// Loop state of MDDC. `unscheduled` stays in SPT order (p, d, index).
#[derive(Debug, Clone)]
pub struct MddcStepState {
    pub current_time: u64,
    pub unscheduled: Vec<usize>,
    sum_p: u64,
}

impl MddcStepState {
    pub fn new(inst: &Instance) -> Self {
        Self {
            current_time: 0,
            unscheduled: spt_order(inst),
            sum_p: inst.total_processing(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.unscheduled.is_empty()
    }

    fn max_p(&self, inst: &Instance) -> u64 {
        self.unscheduled.iter().map(|&j| inst.p(j)).max().unwrap_or(0)
    }

    fn mean_p(&self) -> f64 {
        self.sum_p as f64 / self.unscheduled.len() as f64
    }

    pub fn score(&self, inst: &Instance, job: usize) -> MddcScore {
        self.score_with(inst, job, self.max_p(inst) as f64, self.mean_p())
    }

    fn score_with(&self, inst: &Instance, job: usize, max_p: f64, mean_p: f64) -> MddcScore {
        let t = self.current_time as f64;
        let p = inst.p(job) as f64;
        let d = inst.d(job) as f64;
        let mut mu = (p * MDDC_MULTIPLIER + t).max(d);
        let raw_rho = p / (t + max_p);
        let rho = raw_rho.min(1.0);
        let theta = rho * rho / (1.0 + rho * rho);
        mu *= 1.0 + theta;
        let sigma = p / (t + mean_p);
        mu += sigma;
        MddcScore {
            raw_rho,
            rho,
            theta,
            sigma,
            mu,
        }
    }

    /// All scores for the current step, in `unscheduled` order.
    pub fn scores(&self, inst: &Instance) -> Vec<MddcScore> {
        let max_p = self.max_p(inst) as f64;
        let mean_p = self.mean_p();
        self.unscheduled
            .iter()
            .map(|&j| self.score_with(inst, j, max_p, mean_p))
            .collect()
    }

    /// Position in `unscheduled` of the first job attaining the minimum `mu`.
    pub fn select(&self, inst: &Instance) -> usize {
        let max_p = self.max_p(inst) as f64;
        let mean_p = self.mean_p();
        let mut best = 0;
        let mut best_mu = f64::INFINITY;
        for (pos, &j) in self.unscheduled.iter().enumerate() {
            let s = self.score_with(inst, j, max_p, mean_p);
            debug_assert!(s.raw_rho <= 1.0);
            if s.mu < best_mu - TIE_EPSILON {
                best_mu = s.mu;
                best = pos;
            }
        }
        best
    }

    /// Schedules the job at `pos` and returns it.
    pub fn advance(&mut self, inst: &Instance, pos: usize) -> usize {
        let job = self.unscheduled.remove(pos);
        self.current_time += inst.p(job);
        self.sum_p -= inst.p(job);
        job
    }
}

pub fn mddc(inst: &Instance) -> Schedule {
    let mut state = MddcStepState::new(inst);
    let mut order = Vec::with_capacity(inst.n());
    while !state.is_done() {
        let pos = state.select(inst);
        order.push(state.advance(inst, pos));
    }
    Schedule::from_permutation(order)
}
