//! Reporting helpers for the acceptance checks in `tests/acceptance.rs`.

use std::fmt;
use std::time::{Duration, Instant};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Collects named sub-checks; the criterion passes only if all of them do.
#[derive(Debug, Default)]
pub struct Checks {
    items: Vec<(String, bool)>,
}

impl Checks {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool) -> &mut Self {
        self.items.push((label.into(), ok));
        self
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    /// Failed labels, or every label when all passed.
    pub fn summary(&self) -> String {
        let failed: Vec<&str> = self.items.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.as_str()).collect();
        if failed.is_empty() {
            self.items.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join("; ")
        } else {
            format!("failed: {}", failed.join("; "))
        }
    }
}

/// Runs `body`, adds a runtime check against `budget`, and builds the verdict.
pub fn run_criterion(
    id: u32,
    title: &'static str,
    budget: Duration,
    body: impl FnOnce(&mut Checks),
) -> Verdict {
    let start = Instant::now();
    let mut checks = Checks::new();
    body(&mut checks);
    let elapsed = start.elapsed();
    checks.check(
        format!("runtime {:.2} s < {} s", elapsed.as_secs_f64(), budget.as_secs()),
        elapsed < budget,
    );
    Verdict {
        id,
        title,
        passed: checks.passed(),
        detail: checks.summary(),
        elapsed,
    }
}
