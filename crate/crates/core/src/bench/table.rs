use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::heuristics::HeuristicId;

use super::runner::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GapCell {
    pub mean: Option<f64>,
    pub count: usize,
}

/// One class row, or the pooled average row when `class` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub class: Option<(usize, f64, f64)>,
    /// One cell per entry of [`GapTable::methods`].
    pub cells: Vec<GapCell>,
    /// Mean optimum over the non-zero-optimal instances of the row.
    pub optimal_mean: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GapTable {
    pub methods: Vec<String>,
    pub rows: Vec<GapRow>,
    pub average: Option<GapRow>,
}

impl GapTable {
    pub fn cell(&self, class: (usize, f64, f64), method: &str) -> Option<GapCell> {
        let col = self.methods.iter().position(|m| m == method)?;
        self.rows
            .iter()
            .find(|r| r.class == Some(class))
            .map(|r| r.cells[col])
    }

    pub fn average_gap(&self, method: &str) -> Option<f64> {
        let col = self.methods.iter().position(|m| m == method)?;
        self.average.as_ref()?.cells[col].mean
    }
}

fn method_rank(name: &str) -> (usize, String) {
    let pos = name
        .parse::<HeuristicId>()
        .ok()
        .and_then(|id| HeuristicId::ALL.iter().position(|&x| x == id))
        .unwrap_or(HeuristicId::ALL.len());
    (pos, name.to_string())
}

fn cmp_records(a: &RunRecord, b: &RunRecord) -> Ordering {
    a.n.cmp(&b.n)
        .then(a.rdd.total_cmp(&b.rdd))
        .then(a.tf.total_cmp(&b.tf))
        .then_with(|| a.instance_id.cmp(&b.instance_id))
        .then_with(|| a.method.cmp(&b.method))
}

fn mean(sum: f64, count: usize) -> Option<f64> {
    (count > 0).then(|| sum / count as f64)
}

#[derive(Default)]
struct Acc {
    gap_sums: Vec<f64>,
    gap_counts: Vec<usize>,
    opt_sum: f64,
    opt_count: usize,
}

impl Acc {
    fn new(width: usize) -> Self {
        Self {
            gap_sums: vec![0.0; width],
            gap_counts: vec![0; width],
            ..Default::default()
        }
    }

    fn row(&self, class: Option<(usize, f64, f64)>) -> GapRow {
        GapRow {
            class,
            cells: self
                .gap_sums
                .iter()
                .zip(&self.gap_counts)
                .map(|(&s, &c)| GapCell {
                    mean: mean(s, c),
                    count: c,
                })
                .collect(),
            optimal_mean: mean(self.opt_sum, self.opt_count),
            count: self.opt_count,
        }
    }
}

/// Per-class mean gaps over non-excluded instances, plus a pooled average
/// over every non-excluded instance. Records are sorted first, so the
/// result does not depend on input order.
pub fn aggregate(records: &[RunRecord]) -> Result<GapTable> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| cmp_records(a, b));

    let mut methods: Vec<String> = sorted
        .iter()
        .filter(|r| !r.oracle)
        .map(|r| r.method.clone())
        .collect();
    methods.sort_by_key(|m| method_rank(m));
    methods.dedup();
    let width = methods.len();

    let mut rows = Vec::new();
    let mut total = Acc::new(width);
    let mut current: Option<((usize, f64, f64), Acc)> = None;
    let mut last_instance: Option<&str> = None;

    for r in sorted {
        let class = (r.n, r.rdd, r.tf);
        match &current {
            Some((c, _)) if *c == class => {}
            _ => {
                if let Some((c, acc)) = current.take() {
                    rows.push(acc.row(Some(c)));
                }
                current = Some((class, Acc::new(width)));
            }
        }
        let acc = &mut current.as_mut().expect("set above").1;
        if r.excluded {
            continue;
        }
        if last_instance != Some(r.instance_id.as_str()) {
            last_instance = Some(r.instance_id.as_str());
            if let Some(opt) = r.optimal {
                acc.opt_sum += opt as f64;
                acc.opt_count += 1;
                total.opt_sum += opt as f64;
                total.opt_count += 1;
            }
        }
        if r.oracle {
            continue;
        }
        if let Some(gap) = r.gap_percent {
            let col = methods.iter().position(|m| *m == r.method).expect("collected");
            acc.gap_sums[col] += gap;
            acc.gap_counts[col] += 1;
            total.gap_sums[col] += gap;
            total.gap_counts[col] += 1;
        }
    }
    if let Some((c, acc)) = current {
        rows.push(acc.row(Some(c)));
    }

    Ok(GapTable {
        methods,
        rows,
        average: Some(total.row(None)),
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_default()
}

/// CSV text: `n,rdd,tf,<method...>,optimal_mean,count`, one line per class,
/// then an `Average` line. Means use four decimals; empty cells mean no
/// instance contributed.
pub fn format_table_csv(table: &GapTable) -> String {
    let mut out = String::from("n,rdd,tf");
    for m in &table.methods {
        let _ = write!(out, ",{m}");
    }
    out.push_str(",optimal_mean,count\n");
    for row in table.rows.iter().chain(table.average.iter()) {
        match row.class {
            Some((n, rdd, tf)) => {
                let _ = write!(out, "{n},{rdd},{tf}");
            }
            None => out.push_str("Average,,"),
        }
        for cell in &row.cells {
            let _ = write!(out, ",{}", fmt_opt(cell.mean));
        }
        let _ = writeln!(out, ",{},{}", fmt_opt(row.optimal_mean), row.count);
    }
    out
}

pub fn emit_csv(table: &GapTable, path: &Path) -> Result<()> {
    fs::write(path, format_table_csv(table))?;
    Ok(())
}
