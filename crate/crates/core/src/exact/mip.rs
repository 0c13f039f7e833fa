//! Positional-assignment MIP for `1 || sum T_j`.
//!
//! Variables (1-based): `u_{j,k}` is 1 when job `j` takes position `k`,
//! `c_k` is the completion time of position `k`, `C_j` and `T_j` are the
//! completion time and tardiness of job `j`. Rows:
//!
//! ```text
//! asg_j       sum_k u_jk = 1
//! pos_k       sum_j u_jk = 1
//! cdef_1      c_1 = sum_j p_j u_j1
//! chain_k     c_k >= c_{k-1} + sum_j p_j u_jk            (k >= 2)
//! link_j_k    C_j >= c_k - M (1 - u_jk)                  (M = sum p)
//! tard_j      T_j >= C_j - d_j
//! vi_j        C_j >= p_j + sum_{k>=2} pi_jk u_jk          (optional)
//! ```
//!
//! With valid inequalities enabled the jobs are first renumbered by
//! non-decreasing processing time (ties: lower original index first), and
//! `pi_jk` is computed over that renumbered sequence. Under this numbering
//! `pi_jk` is the sum of the `k - 1` shortest jobs other than `j`, i.e. a
//! true lower bound on the work ahead of `j`; any other numbering can cut
//! off optimal schedules.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::problem::{completion_times, tardiness_at, Instance, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Job `j` at position `k` (both 1-based, model numbering).
    Assign(usize, usize),
    /// Completion time of position `k`.
    PosCompletion(usize),
    /// Completion time of job `j`.
    JobCompletion(usize),
    Tardiness(usize),
}

impl Var {
    /// LP identifier.
    pub fn lp_name(&self) -> String {
        match *self {
            Var::Assign(j, k) => format!("u_{j}_{k}"),
            Var::PosCompletion(k) => format!("cp_{k}"),
            Var::JobCompletion(j) => format!("cj_{j}"),
            Var::Tardiness(j) => format!("t_{j}"),
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(self, Var::Assign(..))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Ge,
}

/// `sum(coef * var) sense rhs`, with every constant moved to the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(i64, Var)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    pub fn lhs(&self, values: &MipSolution) -> i64 {
        self.terms.iter().map(|&(c, v)| c * values.get(v)).sum()
    }

    pub fn is_satisfied(&self, values: &MipSolution) -> bool {
        let lhs = self.lhs(values);
        match self.sense {
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }
}

/// An integral point of the model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MipSolution {
    values: HashMap<Var, i64>,
}

impl MipSolution {
    pub fn get(&self, var: Var) -> i64 {
        self.values.get(&var).copied().unwrap_or(0)
    }

    pub fn set(&mut self, var: Var, value: i64) {
        self.values.insert(var, value);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipModel {
    n: usize,
    /// `original_job[m]` is the input job behind model job `m + 1`.
    original_job: Vec<usize>,
    processing: Vec<u64>,
    due: Vec<i64>,
    big_m: i64,
    with_vi: bool,
    constraints: Vec<Constraint>,
}

impl MipModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_m(&self) -> i64 {
        self.big_m
    }

    pub fn with_vi(&self) -> bool {
        self.with_vi
    }

    pub fn original_job(&self, model_job: usize) -> usize {
        self.original_job[model_job - 1]
    }

    /// Model processing times in model job order.
    pub fn processing(&self) -> &[u64] {
        &self.processing
    }

    pub fn due(&self) -> &[i64] {
        &self.due
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Vec<(i64, Var)> {
        (1..=self.n).map(|j| (1, Var::Tardiness(j))).collect()
    }

    pub fn binaries(&self) -> Vec<Var> {
        (1..=self.n)
            .flat_map(|j| (1..=self.n).map(move |k| Var::Assign(j, k)))
            .collect()
    }

    pub fn continuous(&self) -> Vec<Var> {
        let n = self.n;
        (1..=n)
            .map(Var::PosCompletion)
            .chain((1..=n).map(Var::JobCompletion))
            .chain((1..=n).map(Var::Tardiness))
            .collect()
    }

    /// The point of the model corresponding to `sched` (original job ids).
    pub fn solution_from_schedule(&self, inst: &Instance, sched: &Schedule) -> Result<MipSolution> {
        let completion = completion_times(inst, sched)?;
        let mut model_of = vec![0; self.n];
        for (m, &orig) in self.original_job.iter().enumerate() {
            model_of[orig] = m + 1;
        }
        let mut sol = MipSolution::default();
        let mut t = 0i64;
        for (pos, &orig) in sched.order().iter().enumerate() {
            let (j, k) = (model_of[orig], pos + 1);
            sol.set(Var::Assign(j, k), 1);
            t += inst.p(orig) as i64;
            sol.set(Var::PosCompletion(k), t);
            let c = completion[orig] as i64;
            sol.set(Var::JobCompletion(j), c);
            sol.set(Var::Tardiness(j), tardiness_at(c, inst.d(orig)) as i64);
        }
        Ok(sol)
    }

    /// Names of the rows `sol` violates.
    pub fn violations(&self, sol: &MipSolution) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.is_satisfied(sol))
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn objective_value(&self, sol: &MipSolution) -> i64 {
        self.objective().iter().map(|&(c, v)| c * sol.get(v)).sum()
    }
}

/// `pi_jk` over `sorted_p` (1-based `j`, `k >= 2`): the least work that must
/// finish before job `j` when it sits at position `k`.
pub fn pi_coefficient(sorted_p: &[u64], j: usize, k: usize) -> Result<u64> {
    let n = sorted_p.len();
    if j == 0 || j > n {
        return Err(Error::Index(format!("job {j} outside 1..={n}")));
    }
    if k < 2 || k > n {
        return Err(Error::Index(format!("position {k} outside 2..={n}")));
    }
    let sum = |from: usize, to: usize| -> u64 {
        // inclusive 1-based range
        if from > to {
            0
        } else {
            sorted_p[from - 1..to].iter().sum()
        }
    };
    Ok(if k <= j {
        sum(1, k - 1)
    } else {
        sum(1, j - 1) + sum(j + 1, k)
    })
}

pub fn build_mip(inst: &Instance, with_vi: bool) -> MipModel {
    let n = inst.n();
    let mut original_job: Vec<usize> = (0..n).collect();
    if with_vi {
        original_job.sort_by_key(|&j| (inst.p(j), j));
    }
    let processing: Vec<u64> = original_job.iter().map(|&j| inst.p(j)).collect();
    let due: Vec<i64> = original_job.iter().map(|&j| inst.d(j)).collect();
    let p = |j: usize| processing[j - 1] as i64;
    let big_m = inst.total_processing() as i64;
    let jobs = 1..=n;
    let mut rows = Vec::new();

    for j in jobs.clone() {
        rows.push(Constraint {
            name: format!("asg_{j}"),
            terms: (1..=n).map(|k| (1, Var::Assign(j, k))).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    for k in 1..=n {
        rows.push(Constraint {
            name: format!("pos_{k}"),
            terms: jobs.clone().map(|j| (1, Var::Assign(j, k))).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    let mut cdef = vec![(1, Var::PosCompletion(1))];
    cdef.extend(jobs.clone().map(|j| (-p(j), Var::Assign(j, 1))));
    rows.push(Constraint {
        name: "cdef_1".into(),
        terms: cdef,
        sense: Sense::Eq,
        rhs: 0,
    });
    for k in 2..=n {
        let mut terms = vec![(1, Var::PosCompletion(k)), (-1, Var::PosCompletion(k - 1))];
        terms.extend(jobs.clone().map(|j| (-p(j), Var::Assign(j, k))));
        rows.push(Constraint {
            name: format!("chain_{k}"),
            terms,
            sense: Sense::Ge,
            rhs: 0,
        });
    }
    for j in jobs.clone() {
        for k in 1..=n {
            rows.push(Constraint {
                name: format!("link_{j}_{k}"),
                terms: vec![
                    (1, Var::JobCompletion(j)),
                    (-1, Var::PosCompletion(k)),
                    (-big_m, Var::Assign(j, k)),
                ],
                sense: Sense::Ge,
                rhs: -big_m,
            });
        }
    }
    for j in jobs.clone() {
        rows.push(Constraint {
            name: format!("tard_{j}"),
            terms: vec![(1, Var::Tardiness(j)), (-1, Var::JobCompletion(j))],
            sense: Sense::Ge,
            rhs: -due[j - 1],
        });
    }
    if with_vi {
        for j in jobs.clone() {
            let mut terms = vec![(1, Var::JobCompletion(j))];
            for k in 2..=n {
                let pi = pi_coefficient(&processing, j, k).expect("indices in range") as i64;
                terms.push((-pi, Var::Assign(j, k)));
            }
            rows.push(Constraint {
                name: format!("vi_{j}"),
                terms,
                sense: Sense::Ge,
                rhs: p(j),
            });
        }
    }

    MipModel {
        n,
        original_job,
        processing,
        due,
        big_m,
        with_vi,
        constraints: rows,
    }
}
