use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::datagen::DatasetEntry;
use crate::error::{Error, Result};
use crate::exact::{brute_force_optimal, DpSolver};

/// Source of optimal objective values.
pub trait Oracle: Send + Sync {
    /// Method label written into run records.
    fn tag(&self) -> &str;

    fn optimum(&self, entry: &DatasetEntry) -> Result<u64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DpOracle {
    pub solver: DpSolver,
}

impl Oracle for DpOracle {
    fn tag(&self) -> &str {
        "DP"
    }

    fn optimum(&self, entry: &DatasetEntry) -> Result<u64> {
        Ok(self.solver.table(&entry.instance)?.optimum())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BruteForceOracle;

impl Oracle for BruteForceOracle {
    fn tag(&self) -> &str {
        "BRUTE"
    }

    fn optimum(&self, entry: &DatasetEntry) -> Result<u64> {
        Ok(brute_force_optimal(&entry.instance)?.1)
    }
}

/// Optima read from a file, keyed by instance path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProvidedOptima {
    values: HashMap<String, u64>,
}

impl ProvidedOptima {
    pub fn from_map(values: HashMap<String, u64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<u64> {
        self.values.get(id).copied()
    }

    /// Rejects ids that do not name any dataset entry.
    pub fn check_known<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let known: std::collections::HashSet<&str> = ids.into_iter().collect();
        let mut unknown: Vec<&str> = self
            .values
            .keys()
            .map(String::as_str)
            .filter(|id| !known.contains(id))
            .collect();
        unknown.sort_unstable();
        match unknown.first() {
            Some(id) => Err(Error::Optima(format!("unknown instance id `{id}`"))),
            None => Ok(()),
        }
    }
}

impl Oracle for ProvidedOptima {
    fn tag(&self) -> &str {
        "PROVIDED"
    }

    fn optimum(&self, entry: &DatasetEntry) -> Result<u64> {
        self.get(&entry.id)
            .ok_or_else(|| Error::MissingOptimum(entry.id.clone()))
    }
}

#[derive(Deserialize)]
struct OptimaRow {
    instance_path: String,
    optimal: i64,
}

/// Reads a `instance_path,optimal` CSV.
pub fn load_provided_optima(path: &Path) -> Result<ProvidedOptima> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Optima(format!("cannot read {}: {e}", path.display())))?;
    let mut values = HashMap::new();
    for row in reader.deserialize() {
        let row: OptimaRow = row?;
        if row.optimal < 0 {
            return Err(Error::Optima(format!(
                "negative optimum {} for `{}`",
                row.optimal, row.instance_path
            )));
        }
        if values.insert(row.instance_path.clone(), row.optimal as u64).is_some() {
            return Err(Error::Optima(format!("duplicate id `{}`", row.instance_path)));
        }
    }
    Ok(ProvidedOptima { values })
}

/// Oracle selection as spelled on the command line: `dp`, `brute` or
/// `file:PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleKind {
    Dp,
    BruteForce,
    ProvidedOptima(PathBuf),
}

impl OracleKind {
    pub fn build(&self, dp_cap: usize) -> Result<Box<dyn Oracle>> {
        Ok(match self {
            OracleKind::Dp => Box::new(DpOracle {
                solver: DpSolver::with_cap(dp_cap),
            }),
            OracleKind::BruteForce => Box::new(BruteForceOracle),
            OracleKind::ProvidedOptima(path) => Box::new(load_provided_optima(path)?),
        })
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(OracleKind::Dp),
            "brute" => Ok(OracleKind::BruteForce),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(OracleKind::ProvidedOptima(PathBuf::from(p))),
                _ => Err(Error::UnknownOracle(s.to_string())),
            },
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleKind::Dp => f.write_str("dp"),
            OracleKind::BruteForce => f.write_str("brute"),
            OracleKind::ProvidedOptima(p) => write!(f, "file:{}", p.display()),
        }
    }
}
