//! Seeded random instances over (RDD, TF) classes and the on-disk instance/manifest formats.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), whose output stream is
//! specified independently of platform and word size. A dataset seeds one
//! ChaCha8 key from the master seed and gives every class its own stream
//! (`set_stream(class_id)`), so classes can be regenerated independently
//! and in any order.
//!
//! Instance file layout (ASCII, LF):
//!
//! ```text
//! n
//! p_0 p_1 ... p_{n-1}
//! d_0 d_1 ... d_{n-1}
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Instance;

pub const RDD_VALUES: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];
pub const TEST_TF_VALUES: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
pub const TRAINING_TF_VALUES: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

pub const MANIFEST_FILE: &str = "manifest.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessingDist {
    /// Integer uniform on `1..=100`.
    Uniform,
    /// `round(N(60, 20))`, clamped to at least 1.
    Normal,
}

impl fmt::Display for ProcessingDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcessingDist::Uniform => "uniform",
            ProcessingDist::Normal => "normal",
        })
    }
}

impl FromStr for ProcessingDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(ProcessingDist::Uniform),
            "normal" => Ok(ProcessingDist::Normal),
            other => Err(Error::InvalidClass(format!("unknown distribution `{other}`"))),
        }
    }
}

/// One instance class: size, relative due-date range, tardiness factor and
/// processing-time distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub n: usize,
    pub rdd: f64,
    pub tf: f64,
    pub distribution: ProcessingDist,
}

impl ClassParams {
    pub fn new(n: usize, rdd: f64, tf: f64, distribution: ProcessingDist) -> Result<Self> {
        let params = Self {
            n,
            rdd,
            tf,
            distribution,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidClass("n must be positive".into()));
        }
        for (name, v) in [("rdd", self.rdd), ("tf", self.tf)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidClass(format!("{name}={v} outside (0, 1]")));
            }
        }
        Ok(())
    }

    /// Continuous support of the due-date draw for a realized total
    /// processing time: `[P(1 - TF - RDD/2), P(1 - TF + RDD/2)]`.
    pub fn due_date_support(&self, total_processing: u64) -> (f64, f64) {
        let p = total_processing as f64;
        (
            p * (1.0 - self.tf - self.rdd / 2.0),
            p * (1.0 - self.tf + self.rdd / 2.0),
        )
    }
}

/// The 20 evaluation classes: every RDD against TF in {0.2, ..., 0.8}.
pub fn test_grid(n: usize, distribution: ProcessingDist) -> Vec<ClassParams> {
    grid(n, &TEST_TF_VALUES, distribution)
}

/// The 25 training classes, which also include TF = 1.0.
pub fn training_grid(n: usize, distribution: ProcessingDist) -> Vec<ClassParams> {
    grid(n, &TRAINING_TF_VALUES, distribution)
}

fn grid(n: usize, tfs: &[f64], distribution: ProcessingDist) -> Vec<ClassParams> {
    RDD_VALUES
        .iter()
        .flat_map(|&rdd| {
            tfs.iter().map(move |&tf| ClassParams {
                n,
                rdd,
                tf,
                distribution,
            })
        })
        .collect()
}

/// Draws one instance. Due dates are rounded to the nearest integer and may
/// be negative.
pub fn generate_instance<R: Rng + ?Sized>(params: &ClassParams, rng: &mut R) -> Instance {
    let processing: Vec<u64> = match params.distribution {
        ProcessingDist::Uniform => (0..params.n).map(|_| rng.random_range(1..=100)).collect(),
        ProcessingDist::Normal => {
            let normal = Normal::<f64>::new(60.0, 20.0).expect("valid normal parameters");
            (0..params.n)
                .map(|_| normal.sample(rng).round().max(1.0) as u64)
                .collect()
        }
    };
    let total: u64 = processing.iter().sum();
    let (lo, hi) = params.due_date_support(total);
    let due = (0..params.n)
        .map(|_| rng.random_range(lo..=hi).round() as i64)
        .collect();
    Instance::new(processing, due).expect("generated instance is valid")
}

/// Generator for one class: ChaCha8 keyed by `seed`, stream `class_id`.
pub fn class_rng(seed: u64, class_id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(class_id as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub classes: Vec<(ClassParams, Vec<Instance>)>,
    pub seed: u64,
    pub per_class: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.classes.iter().map(|(_, v)| v.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flattens the dataset into entries, in class order. Ids are the
    /// instance file names used by [`write_dataset`].
    pub fn entries(&self) -> Vec<DatasetEntry> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(c, (params, insts))| {
                insts.iter().enumerate().map(move |(i, inst)| DatasetEntry {
                    id: instance_file_name(c, params, i),
                    class_id: c,
                    class: *params,
                    instance: inst.clone(),
                })
            })
            .collect()
    }
}

pub fn generate_dataset(classes: &[ClassParams], per_class: usize, seed: u64) -> Result<Dataset> {
    for c in classes {
        c.validate()?;
    }
    let classes = classes
        .par_iter()
        .enumerate()
        .map(|(id, params)| {
            let mut rng = class_rng(seed, id);
            let insts = (0..per_class)
                .map(|_| generate_instance(params, &mut rng))
                .collect();
            (*params, insts)
        })
        .collect();
    Ok(Dataset {
        classes,
        seed,
        per_class,
    })
}

/// An instance together with its identity inside a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetEntry {
    /// Instance path relative to the dataset directory; doubles as the id.
    pub id: String,
    pub class_id: usize,
    pub class: ClassParams,
    pub instance: Instance,
}

fn instance_file_name(class_id: usize, params: &ClassParams, index: usize) -> String {
    format!(
        "n{}_rdd{}_tf{}_{}_c{class_id:02}_{index:04}.txt",
        params.n, params.rdd, params.tf, params.distribution
    )
}

pub fn format_instance(inst: &Instance) -> String {
    let join = |v: Vec<String>| v.join(" ");
    format!(
        "{}\n{}\n{}\n",
        inst.n(),
        join(inst.processing().iter().map(u64::to_string).collect()),
        join(inst.due().iter().map(i64::to_string).collect()),
    )
}

pub fn parse_instance(text: &str, path: &Path) -> Result<Instance> {
    let err = |reason: String| Error::Parse {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let n: usize = lines
        .next()
        .ok_or_else(|| err("empty file".into()))?
        .parse()
        .map_err(|e| err(format!("job count: {e}")))?;
    let p: Vec<u64> = parse_row(lines.next(), "processing times").map_err(err)?;
    let d: Vec<i64> = parse_row(lines.next(), "due dates").map_err(err)?;
    if let Some(extra) = lines.next() {
        return Err(err(format!("unexpected trailing line `{extra}`")));
    }
    if p.len() != n || d.len() != n {
        return Err(err(format!(
            "header says {n} jobs, found {} processing times and {} due dates",
            p.len(),
            d.len()
        )));
    }
    Instance::new(p, d).map_err(|e| err(e.to_string()))
}

fn parse_row<T: FromStr>(line: Option<&str>, what: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    let line = line.ok_or_else(|| format!("missing {what} line"))?;
    line.split_whitespace()
        .map(|tok| tok.parse().map_err(|e| format!("{what}: `{tok}`: {e}")))
        .collect()
}

pub fn write_instance(inst: &Instance, path: &Path) -> Result<()> {
    fs::write(path, format_instance(inst))?;
    Ok(())
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)?;
    parse_instance(&text, path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub class_id: usize,
    pub n: usize,
    pub rdd: f64,
    pub tf: f64,
    pub distribution: ProcessingDist,
    pub instance_path: String,
    pub seed: u64,
}

/// Writes every instance file plus `manifest.csv` into `dir`.
pub fn write_dataset(dataset: &Dataset, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let manifest = dir.join(MANIFEST_FILE);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(&manifest)?;
    for entry in dataset.entries() {
        write_instance(&entry.instance, &dir.join(&entry.id))?;
        w.serialize(ManifestRow {
            class_id: entry.class_id,
            n: entry.class.n,
            rdd: entry.class.rdd,
            tf: entry.class.tf,
            distribution: entry.class.distribution,
            instance_path: entry.id,
            seed: dataset.seed,
        })?;
    }
    w.flush()?;
    Ok(manifest)
}

/// Loads a dataset directory through its manifest. Instance paths are
/// resolved relative to `dir`.
pub fn read_dataset(dir: &Path) -> Result<Vec<DatasetEntry>> {
    let mut r = csv::Reader::from_path(dir.join(MANIFEST_FILE))?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        let row: ManifestRow = row?;
        let class = ClassParams::new(row.n, row.rdd, row.tf, row.distribution)?;
        let instance = read_instance(&dir.join(&row.instance_path))?;
        if instance.n() != class.n {
            return Err(Error::Parse {
                path: dir.join(&row.instance_path),
                reason: format!("manifest says n={}, file has {}", class.n, instance.n()),
            });
        }
        out.push(DatasetEntry {
            id: row.instance_path,
            class_id: row.class_id,
            class,
            instance,
        });
    }
    Ok(out)
}
