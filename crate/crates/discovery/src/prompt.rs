//! Prompt text sent to a mutator.

use std::fmt::Write;

use crate::sandbox::ScoredProgram;

pub const PROBLEM_DESCRIPTION: &str = "Find the mathematical heuristic function for the single machine \
scheduling problem that returns indices of assigned jobs, given data on processing times, due dates of \
jobs. Note that each job is assigned to the machine exactly once (i.e., no job is left unassigned or have \
multiple assignment). Note that the due dates and the processing times should not be manipulated.";

const LANGUAGE_NOTE: &str = "Write the heuristic as a priority expression; the job with the smallest value \
is scheduled next. Terminals: P (processing time), D (due date), T (current time), MAXP, SUMP, MEANP \
(maximum, sum and mean processing time of unscheduled jobs), REMAINING (unscheduled job count), and \
numeric constants. Operators: + - * / max(a, b) min(a, b) sq(a). Lower average total tardiness is better.";

/// Label prefix of each program line.
pub const PROGRAM_LABEL: &str = "priority_v";

/// Problem description, then the sampled programs in the order given
/// (worst first), then a request for the next version.
pub fn render_prompt(programs: &[ScoredProgram]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{PROBLEM_DESCRIPTION}\n");
    let _ = writeln!(out, "{LANGUAGE_NOTE}\n");
    for (i, p) in programs.iter().enumerate() {
        let _ = writeln!(out, "# average total tardiness: {:.4}", p.score());
        let _ = writeln!(out, "{PROGRAM_LABEL}{i}: {}", p.text());
    }
    let next = programs.len();
    let _ = writeln!(
        out,
        "\nReply with a single line `{PROGRAM_LABEL}{next}: <expression>` that improves on {PROGRAM_LABEL}{}.",
        next.saturating_sub(1)
    );
    out
}

/// Expression text of the last program line in a prompt.
pub fn last_program(prompt: &str) -> Option<&str> {
    prompt.lines().rev().find_map(|line| {
        let rest = line.strip_prefix(PROGRAM_LABEL)?;
        let (index, body) = rest.split_once(':')?;
        index.chars().all(|c| c.is_ascii_digit()).then(|| body.trim())
    })
}
