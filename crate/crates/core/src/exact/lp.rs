//! CPLEX LP text for a [`MipModel`]. Output depends only on the model, so
//! identical instances export byte-identical files.

use std::fmt::Write;

use super::mip::{MipModel, Sense, Var};

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, terms: &[(i64, Var)]) {
    for (i, &(coef, var)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if coef < 0 { "-" } else { "+" };
        let mag = coef.unsigned_abs();
        let name = var.lp_name();
        match (i, mag) {
            (0, 1) if coef > 0 => write!(out, " {name}"),
            (0, _) if coef > 0 => write!(out, " {mag} {name}"),
            (_, 1) => write!(out, " {sign} {name}"),
            _ => write!(out, " {sign} {mag} {name}"),
        }
        .expect("writing to a String");
    }
}

pub fn export_lp(model: &MipModel) -> String {
    let n = model.n();
    let mut out = String::new();
    let _ = writeln!(out, "\\ single-machine total tardiness, positional assignment");
    let _ = writeln!(
        out,
        "\\ jobs: {n}, big-M: {}, valid inequalities: {}",
        model.big_m(),
        if model.with_vi() { "yes" } else { "no" }
    );
    for j in 1..=n {
        let _ = writeln!(
            out,
            "\\ job {j} = input job {} (p = {}, d = {})",
            model.original_job(j),
            model.processing()[j - 1],
            model.due()[j - 1]
        );
    }

    out.push_str("Minimize\n obj:");
    write_terms(&mut out, &model.objective());
    out.push_str("\nSubject To\n");
    for row in model.constraints() {
        let _ = write!(out, " {}:", row.name);
        write_terms(&mut out, &row.terms);
        let op = match row.sense {
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        let _ = writeln!(out, " {op} {}", row.rhs);
    }

    out.push_str("Bounds\n");
    for var in model.continuous() {
        let _ = writeln!(out, " {} >= 0", var.lp_name());
    }
    out.push_str("Binary\n");
    for var in model.binaries() {
        let _ = writeln!(out, " {}", var.lp_name());
    }
    out.push_str("End\n");
    out
}
