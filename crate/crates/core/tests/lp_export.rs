use std::collections::BTreeMap;
use std::path::PathBuf;

use smtt_core::exact::{build_mip, export_lp, Sense, Var};
use smtt_core::Instance;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// Compares against a frozen file. `SMTT_BLESS=1` writes missing fixtures.
fn assert_golden(name: &str, actual: &str) {
    let path = fixture(name);
    if !path.exists() && std::env::var_os("SMTT_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from its golden file");
}

fn six_jobs() -> Instance {
    Instance::new(vec![10, 11, 10, 10, 11, 10], vec![15, 11, 13, 11, 12, 11]).unwrap()
}

fn two_jobs() -> Instance {
    Instance::new(vec![3, 5], vec![4, 2]).unwrap()
}

#[test]
fn golden_one_job() {
    let inst = Instance::new(vec![4], vec![1]).unwrap();
    assert_golden("lp_n1.lp", &export_lp(&build_mip(&inst, false)));
}

#[test]
fn golden_two_jobs() {
    assert_golden("lp_n2.lp", &export_lp(&build_mip(&two_jobs(), false)));
    assert_golden("lp_n2_vi.lp", &export_lp(&build_mip(&two_jobs(), true)));
}

#[test]
fn golden_six_jobs() {
    assert_golden("lp_n6.lp", &export_lp(&build_mip(&six_jobs(), false)));
    assert_golden("lp_n6_vi.lp", &export_lp(&build_mip(&six_jobs(), true)));
}

#[test]
fn export_is_repeatable() {
    let a = export_lp(&build_mip(&six_jobs(), true));
    let b = export_lp(&build_mip(&six_jobs(), true));
    assert_eq!(a, b);
}

#[test]
fn vi_adds_exactly_n_rows() {
    let plain = build_mip(&six_jobs(), false);
    let vi = build_mip(&six_jobs(), true);
    assert_eq!(vi.constraints().len(), plain.constraints().len() + 6);
    let extra: Vec<&str> = vi
        .constraints()
        .iter()
        .map(|c| c.name.as_str())
        .filter(|n| n.starts_with("vi_"))
        .collect();
    assert_eq!(extra, ["vi_1", "vi_2", "vi_3", "vi_4", "vi_5", "vi_6"]);
}

#[derive(Debug, Default)]
struct ParsedLp {
    objective: BTreeMap<String, i64>,
    rows: Vec<(String, BTreeMap<String, i64>, String, i64)>,
    bounds: Vec<String>,
    binaries: Vec<String>,
}

/// A small LP-format reader that knows nothing about the exporter: it
/// joins continuation lines and tokenizes linear expressions.
fn parse_lp(text: &str) -> ParsedLp {
    let mut section = "";
    let mut statements: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        if line.starts_with('\\') || line.trim().is_empty() {
            continue;
        }
        if !line.starts_with(' ') {
            section = match line.trim() {
                "Minimize" => "min",
                "Subject To" => "st",
                "Bounds" => "bounds",
                "Binary" => "bin",
                "End" => "end",
                other => panic!("unknown section {other}"),
            };
            continue;
        }
        let has_label = line.trim_start().split_whitespace().next().is_some_and(|t| t.ends_with(':'));
        if has_label || section == "bounds" || section == "bin" {
            statements.push((section.to_string(), line.trim().to_string()));
        } else {
            let last = statements.last_mut().expect("continuation without statement");
            last.1.push(' ');
            last.1.push_str(line.trim());
        }
    }

    fn linear(tokens: &[&str]) -> BTreeMap<String, i64> {
        let mut out = BTreeMap::new();
        let mut sign = 1i64;
        let mut coef: Option<i64> = None;
        for tok in tokens {
            match *tok {
                "+" => sign = 1,
                "-" => sign = -1,
                t if t.parse::<i64>().is_ok() => coef = Some(t.parse().unwrap()),
                var => {
                    *out.entry(var.to_string()).or_insert(0) += sign * coef.unwrap_or(1);
                    sign = 1;
                    coef = None;
                }
            }
        }
        out
    }

    let mut lp = ParsedLp::default();
    for (section, stmt) in statements {
        let tokens: Vec<&str> = stmt.split_whitespace().collect();
        match section.as_str() {
            "min" => lp.objective = linear(&tokens[1..]),
            "st" => {
                let name = tokens[0].trim_end_matches(':').to_string();
                let n = tokens.len();
                let rhs: i64 = tokens[n - 1].parse().unwrap();
                lp.rows.push((name, linear(&tokens[1..n - 2]), tokens[n - 2].to_string(), rhs));
            }
            "bounds" => {
                assert_eq!(&tokens[1..], [">=", "0"]);
                lp.bounds.push(tokens[0].to_string());
            }
            "bin" => lp.binaries.push(tokens[0].to_string()),
            _ => panic!("statement after End"),
        }
    }
    lp
}

#[test]
fn exported_text_parses_back_to_the_model() {
    for with_vi in [false, true] {
        let model = build_mip(&six_jobs(), with_vi);
        let lp = parse_lp(&export_lp(&model));

        let objective: BTreeMap<String, i64> =
            model.objective().iter().map(|&(c, v)| (v.lp_name(), c)).collect();
        assert_eq!(lp.objective, objective);

        assert_eq!(lp.rows.len(), model.constraints().len());
        for (row, parsed) in model.constraints().iter().zip(&lp.rows) {
            assert_eq!(parsed.0, row.name);
            let mut terms = BTreeMap::new();
            for &(c, v) in &row.terms {
                *terms.entry(v.lp_name()).or_insert(0) += c;
            }
            terms.retain(|_, c| *c != 0);
            assert_eq!(parsed.1, terms, "row {}", row.name);
            let op = match row.sense {
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            assert_eq!(parsed.2, op);
            assert_eq!(parsed.3, row.rhs);
        }

        let names = |vars: Vec<Var>| vars.iter().map(Var::lp_name).collect::<Vec<_>>();
        assert_eq!(lp.bounds, names(model.continuous()));
        assert_eq!(lp.binaries, names(model.binaries()));
        assert_eq!(lp.binaries.len(), 36);
        assert_eq!(lp.bounds.len(), 18);
    }
}
