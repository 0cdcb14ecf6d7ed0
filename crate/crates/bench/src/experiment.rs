//! Batch runs over instances and algorithms, with CSV statistics and a
//! JSON lines log of every run.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use nrp_core::backbone::Backbone;
use nrp_core::bma::LevelSummary;
use nrp_core::instances::{generate_classic, read_instance, ClassicGenSpec};
use nrp_core::seed::derive_seed;
use nrp_core::{Instance, NrpError, Solution};

use crate::algorithm::Algorithm;
use crate::error::{BenchError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    File {
        path: PathBuf,
    },
    Preset {
        preset: String,
        #[serde(default = "half")]
        cost_ratio: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn half() -> f64 {
    0.5
}

impl InstanceSource {
    /// Loads or generates the instance, returning it with its name.
    pub fn load(&self) -> Result<(String, Instance)> {
        match self {
            InstanceSource::File { path } => {
                let inst = read_instance(path).map_err(|e| match e {
                    NrpError::Io(io) => BenchError::Config(format!("{}: {io}", path.display())),
                    other => other.into(),
                })?;
                let name = path.file_stem().map_or_else(
                    || path.display().to_string(),
                    |s| s.to_string_lossy().into_owned(),
                );
                Ok((name, inst))
            }
            InstanceSource::Preset { preset, cost_ratio, seed } => {
                let spec = ClassicGenSpec::preset(preset, *cost_ratio, *seed)?;
                Ok((spec.instance_name(), generate_classic(&spec)?))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    /// Label in the outputs; defaults to the algorithm kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub algorithm: Algorithm,
}

impl AlgorithmSpec {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.algorithm.label().to_string())
    }
}

impl From<Algorithm> for AlgorithmSpec {
    fn from(algorithm: Algorithm) -> Self {
        AlgorithmSpec { name: None, algorithm }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instances: Vec<InstanceSource>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    /// Labels the advantage columns are computed against.
    #[serde(default = "default_baselines")]
    pub baselines: Vec<String>,
}

fn default_repetitions() -> usize {
    10
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_baselines() -> Vec<String> {
    vec!["mssa".into(), "ga".into()]
}

impl ExperimentSpec {
    /// Reads a TOML spec. Relative paths inside it are taken relative to
    /// the spec's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?;
        let mut spec: ExperimentSpec =
            toml::from_str(&text).map_err(|e| BenchError::Config(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for source in &mut spec.instances {
            if let InstanceSource::File { path } = source {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
        if spec.output_dir.is_relative() {
            spec.output_dir = base.join(&spec.output_dir);
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 {
            return Err(BenchError::Config("repetitions must be at least 1".into()));
        }
        if self.instances.is_empty() || self.algorithms.is_empty() {
            return Err(BenchError::Config("at least one instance and one algorithm".into()));
        }
        for a in &self.algorithms {
            a.algorithm.validate()?;
        }
        Ok(())
    }

    /// Seed of repetition `rep` on instance `index`. Every algorithm sees
    /// the same seeds.
    pub fn run_seed(&self, index: usize, rep: usize) -> u64 {
        derive_seed(self.base_seed, &[index as u64, rep as u64])
    }
}

/// Multilevel details kept in the run log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmaSummary {
    pub delta: usize,
    pub levels: Vec<LevelSummary>,
    pub combined_backbone: Backbone,
}

/// One line of `runs.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub bound: u64,
    pub algorithm: String,
    pub repetition: usize,
    pub seed: u64,
    pub profit: u64,
    pub cost: u64,
    pub wall_time: f64,
    pub evaluations: u64,
    pub solution: Solution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bma: Option<BmaSummary>,
}

/// One line of `stats.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub instance: String,
    pub bound: u64,
    pub algorithm: String,
    pub best: u64,
    pub average: f64,
    pub avg_time_s: f64,
    pub profits: Vec<u64>,
    /// `(baseline, percent)` with percent `100 (avg - avg_baseline) / avg_baseline`.
    pub advantages: Vec<(String, f64)>,
}

impl StatRow {
    pub fn advantage(&self, baseline: &str) -> Option<f64> {
        self.advantages.iter().find(|(b, _)| b == baseline).map(|&(_, pct)| pct)
    }
}

pub const CSV_HEADER: [&str; 9] =
    ["instance", "bound", "algorithm", "runs", "best", "average", "avg_time_s", "profits", "advantages"];

pub struct ExperimentReport {
    pub rows: Vec<StatRow>,
    pub runs: Vec<RunRecord>,
}

/// Runs every (instance, algorithm, repetition) triple. Nothing is written.
pub fn execute(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let instances = spec.instances.iter().map(InstanceSource::load).collect::<Result<Vec<_>>>()?;

    let tasks: Vec<(usize, usize, usize)> = (0..instances.len())
        .flat_map(|i| {
            (0..spec.algorithms.len()).flat_map(move |a| (0..spec.repetitions).map(move |r| (i, a, r)))
        })
        .collect();
    let runs = tasks
        .par_iter()
        .map(|&(i, a, rep)| {
            let (name, inst) = &instances[i];
            let algo = &spec.algorithms[a];
            let seed = spec.run_seed(i, rep);
            run_one(name, inst, algo, rep, seed).map_err(|source| BenchError::Run {
                instance: name.clone(),
                algorithm: algo.label(),
                seed,
                source,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = summarize(&runs, &spec.baselines);
    Ok(ExperimentReport { rows, runs })
}

fn run_one(
    name: &str,
    inst: &Instance,
    algo: &AlgorithmSpec,
    repetition: usize,
    seed: u64,
) -> Result<RunRecord, NrpError> {
    let outcome = algo.algorithm.run(inst, seed)?;
    let run = outcome.run;
    let cost = inst.solution_cost(&run.solution)?;
    let profit = inst.solution_profit(&run.solution)?;
    if cost != run.cost || profit != run.profit || cost > inst.budget() {
        return Err(NrpError::Integrity(format!(
            "reported ({}, {}) but the solution evaluates to ({profit}, {cost}) under bound {}",
            run.profit,
            run.cost,
            inst.budget()
        )));
    }
    Ok(RunRecord {
        instance: name.to_string(),
        bound: inst.budget(),
        algorithm: algo.label(),
        repetition,
        seed,
        profit,
        cost,
        wall_time: run.wall_time,
        evaluations: run.evaluations,
        solution: run.solution,
        bma: outcome.bma.map(|b| BmaSummary {
            delta: b.delta,
            levels: b.levels.iter().map(|l| l.summary()).collect(),
            combined_backbone: b.combined_backbone,
        }),
    })
}

/// Groups runs by (instance, algorithm), keeping first appearance order.
pub fn summarize(runs: &[RunRecord], baselines: &[String]) -> Vec<StatRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<&RunRecord>> = BTreeMap::new();
    for run in runs {
        let key = (run.instance.clone(), run.algorithm.clone());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(run);
    }

    let mut rows: Vec<StatRow> = order
        .iter()
        .map(|key| {
            let mut group = groups[key].clone();
            group.sort_by_key(|r| r.repetition);
            let profits: Vec<u64> = group.iter().map(|r| r.profit).collect();
            let k = group.len() as f64;
            StatRow {
                instance: key.0.clone(),
                bound: group[0].bound,
                algorithm: key.1.clone(),
                best: profits.iter().copied().max().unwrap_or(0),
                average: profits.iter().sum::<u64>() as f64 / k,
                avg_time_s: group.iter().map(|r| r.wall_time).sum::<f64>() / k,
                profits,
                advantages: Vec::new(),
            }
        })
        .collect();

    let averages: BTreeMap<(String, String), f64> =
        rows.iter().map(|r| ((r.instance.clone(), r.algorithm.clone()), r.average)).collect();
    for row in &mut rows {
        for base in baselines {
            if *base == row.algorithm {
                continue;
            }
            if let Some(&avg) = averages.get(&(row.instance.clone(), base.clone())) {
                if avg > 0.0 {
                    row.advantages.push((base.clone(), 100.0 * (row.average - avg) / avg));
                }
            }
        }
    }
    rows
}

pub fn write_stats_csv(rows: &[StatRow], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let profits = row.profits.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let advantages = row
            .advantages
            .iter()
            .map(|(b, pct)| format!("{b}:{pct:+.2}"))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            row.instance.clone(),
            row.bound.to_string(),
            row.algorithm.clone(),
            row.profits.len().to_string(),
            row.best.to_string(),
            format!("{:.2}", row.average),
            format!("{:.3}", row.avg_time_s),
            profits,
            advantages,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_runs_jsonl(runs: &[RunRecord], writer: impl Write) -> Result<()> {
    let mut w = BufWriter::new(writer);
    for run in runs {
        serde_json::to_writer(&mut w, run)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the experiment and writes `stats.csv` and `runs.jsonl` into the
/// spec's output directory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<StatRow>> {
    let report = execute(spec)?;
    std::fs::create_dir_all(&spec.output_dir)?;
    write_stats_csv(&report.rows, File::create(spec.output_dir.join("stats.csv"))?)?;
    write_runs_jsonl(&report.runs, File::create(spec.output_dir.join("runs.jsonl"))?)?;
    Ok(report.rows)
}
