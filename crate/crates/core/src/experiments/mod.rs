//! Repeated seeded runs of both algorithms on one instance, aggregated
//! into per-setting samples, summaries and Mann-Whitney p-values.
//!
//! Run `k` of algorithm `a` uses the seed
//! `base_seed ^ splitmix64(((a + 1) << 32) | k)` with `a = 0` for GSEMO and
//! `a = 1` for SW-GSEMO. Runs execute on a rayon pool and are merged by
//! index, so a report depends only on its configuration.

pub mod stats;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, AlgorithmConfig, RunResult};
use crate::error::{Error, Result};
use crate::graph::{load_graph, CostModel};
use crate::operators::Mutation;
use crate::problems::{BudgetRule, CoverageInstance};

pub use stats::{mann_whitney_u, summarize, Summary, UTest, UTestMethod, SIGNIFICANCE_LEVEL};

/// Default number of runs per setting.
pub const DEFAULT_REPETITIONS: usize = 30;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "SWGSEMO_WORKERS";

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn run_seed(base_seed: u64, algorithm: Algorithm, run: usize) -> u64 {
    let a = match algorithm {
        Algorithm::Gsemo => 0u64,
        Algorithm::SwGsemo => 1,
    };
    base_seed ^ splitmix64(((a + 1) << 32) | run as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    /// Label used in reports; defaults to the file stem.
    pub name: Option<String>,
    pub cost: CostModel,
    pub budgets: Vec<BudgetRule>,
    pub t_max: Vec<u64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub mutation: Mutation,
    /// Worker threads; `None` means rayon's default.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(graph: impl Into<PathBuf>, cost: CostModel, budget: BudgetRule, t_max: u64) -> Self {
        Self {
            graph: graph.into(),
            name: None,
            cost,
            budgets: vec![budget],
            t_max: vec![t_max],
            repetitions: DEFAULT_REPETITIONS,
            base_seed: 0,
            algorithms: Algorithm::ALL.to_vec(),
            mutation: Mutation::default(),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be >= 1".into()));
        }
        if self.t_max.is_empty() || self.budgets.is_empty() || self.algorithms.is_empty() {
            return Err(Error::Config(
                "t_max, budgets and algorithms must be non-empty".into(),
            ));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be >= 1".into()));
        }
        self.cost.validate()
    }

    fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| graph_name(&self.graph))
    }

    /// Parses the TOML config format:
    ///
    /// ```toml
    /// graph = "data/ca-CSphd.mtx"
    /// name = "ca-CSphd"            # optional
    /// cost = "random"              # "uniform" | "random"
    /// cost_lo = 0.5                # random only, default 0.5
    /// cost_hi = 1.5                # random only, default 1.5
    /// cost_seed = 1                # random only, default 0
    /// budget = ["sqrtn", "n10"]    # or one value; rules log2n/sqrtn/n20/n10 or a number
    /// t_max = [100000, 500000]     # or one value
    /// repetitions = 30
    /// seed = 0
    /// algorithms = ["gsemo", "sw-gsemo"]
    /// mutation = "standard-plus"   # or "standard"
    /// workers = 8                  # optional
    /// ```
    ///
    /// A relative `graph` path is resolved against `base_dir`.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.into_config(base_dir)
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BudgetValue {
    Rule(String),
    Number(f64),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    graph: PathBuf,
    name: Option<String>,
    cost: Option<String>,
    cost_lo: Option<f64>,
    cost_hi: Option<f64>,
    cost_seed: Option<u64>,
    budget: OneOrMany<BudgetValue>,
    t_max: OneOrMany<u64>,
    repetitions: Option<usize>,
    seed: Option<u64>,
    algorithms: Option<Vec<String>>,
    mutation: Option<String>,
    workers: Option<usize>,
}

impl ConfigFile {
    fn into_config(self, base_dir: &Path) -> Result<ExperimentConfig> {
        let cost = match self.cost.as_deref().unwrap_or("uniform") {
            "uniform" => CostModel::Uniform,
            "random" => CostModel::RandomInterval {
                lo: self.cost_lo.unwrap_or(0.5),
                hi: self.cost_hi.unwrap_or(1.5),
                seed: self.cost_seed.unwrap_or(0),
            },
            other => return Err(Error::Config(format!("unknown cost model `{other}`"))),
        };
        let budgets = self
            .budget
            .into_vec()
            .into_iter()
            .map(|b| match b {
                BudgetValue::Rule(s) => s.parse(),
                BudgetValue::Number(x) => x.to_string().parse(),
            })
            .collect::<Result<Vec<BudgetRule>>>()?;
        let algorithms = match self.algorithms {
            Some(names) => names
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<Algorithm>>>()?,
            None => Algorithm::ALL.to_vec(),
        };
        let mutation = match self.mutation {
            Some(m) => m.parse()?,
            None => Mutation::default(),
        };
        let graph = if self.graph.is_relative() {
            base_dir.join(self.graph)
        } else {
            self.graph
        };
        let config = ExperimentConfig {
            graph,
            name: self.name,
            cost,
            budgets,
            t_max: self.t_max.into_vec(),
            repetitions: self.repetitions.unwrap_or(DEFAULT_REPETITIONS),
            base_seed: self.seed.unwrap_or(0),
            algorithms,
            mutation,
            workers: self.workers,
        };
        config.validate()?;
        Ok(config)
    }
}

pub fn graph_name(path: &Path) -> String {
    let file = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    file.split('.').next().unwrap_or(&file).to_string()
}

/// Samples and statistics for one `(algorithm, B, t_max)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingRecord {
    pub algorithm: Algorithm,
    pub budget: f64,
    pub t_max: u64,
    pub best_f: Vec<f64>,
    pub final_pop: Vec<usize>,
    pub mean: f64,
    pub std: f64,
    pub pop_mean: f64,
    pub pop_std: f64,
    /// Two-sided p-value against the other algorithm in the same cell.
    pub p_value: Option<f64>,
}

impl SettingRecord {
    pub fn significant(&self) -> Option<bool> {
        self.p_value.map(|p| p <= SIGNIFICANCE_LEVEL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub graph: String,
    pub nodes: usize,
    pub cost_model: CostModel,
    pub mutation: Mutation,
    pub repetitions: usize,
    pub base_seed: u64,
    pub records: Vec<SettingRecord>,
}

impl ExperimentReport {
    pub fn record(&self, algorithm: Algorithm, budget: f64, t_max: u64) -> Option<&SettingRecord> {
        self.records
            .iter()
            .find(|r| r.algorithm == algorithm && r.budget == budget && r.t_max == t_max)
    }

    /// One row per run: `graph,B,t_max,algorithm,run,best_f,final_pop`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("graph,B,t_max,algorithm,run,best_f,final_pop\n");
        for r in &self.records {
            for (k, (f, pop)) in r.best_f.iter().zip(&r.final_pop).enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    self.graph, r.budget, r.t_max, r.algorithm, k, f, pop
                );
            }
        }
        out
    }

    /// Means, standard deviations and p-values without the raw samples.
    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Row {
            algorithm: Algorithm,
            budget: f64,
            t_max: u64,
            mean: f64,
            std: f64,
            pop_mean: f64,
            pop_std: f64,
            p_value: Option<f64>,
            significant: Option<bool>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            graph: &'a str,
            nodes: usize,
            cost_model: &'a CostModel,
            mutation: Mutation,
            repetitions: usize,
            base_seed: u64,
            significance_level: f64,
            records: Vec<Row>,
        }
        let doc = Doc {
            graph: &self.graph,
            nodes: self.nodes,
            cost_model: &self.cost_model,
            mutation: self.mutation,
            repetitions: self.repetitions,
            base_seed: self.base_seed,
            significance_level: SIGNIFICANCE_LEVEL,
            records: self
                .records
                .iter()
                .map(|r| Row {
                    algorithm: r.algorithm,
                    budget: r.budget,
                    t_max: r.t_max,
                    mean: r.mean,
                    std: r.std,
                    pop_mean: r.pop_mean,
                    pop_std: r.pop_std,
                    p_value: r.p_value,
                    significant: r.significant(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

/// Settings for repeated runs on an already built instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub t_max: Vec<u64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub mutation: Mutation,
    pub workers: Option<usize>,
}

impl RunPlan {
    pub fn new(t_max: u64, repetitions: usize, base_seed: u64) -> Self {
        Self {
            t_max: vec![t_max],
            repetitions,
            base_seed,
            algorithms: Algorithm::ALL.to_vec(),
            mutation: Mutation::default(),
            workers: None,
        }
    }
}

/// Loads the graph and runs every `(budget, t_max, algorithm)` cell.
/// Random costs are drawn once and shared by all cells.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let graph = load_graph(&config.graph)?;
    let base = CoverageInstance::from_graph(&graph, &config.cost, 0.0)?;
    let plan = RunPlan {
        t_max: config.t_max.clone(),
        repetitions: config.repetitions,
        base_seed: config.base_seed,
        algorithms: config.algorithms.clone(),
        mutation: config.mutation,
        workers: config.workers,
    };
    let mut records = Vec::new();
    for rule in &config.budgets {
        let instance = base.with_budget(rule.resolve(base.node_count()))?;
        records.extend(run_cells(&instance, &plan)?);
    }
    Ok(ExperimentReport {
        graph: config.display_name(),
        nodes: base.node_count(),
        cost_model: config.cost,
        mutation: config.mutation,
        repetitions: config.repetitions,
        base_seed: config.base_seed,
        records,
    })
}

/// Runs all cells of `plan` on `instance` and returns the full report.
pub fn run_on_instance(
    graph: &str,
    cost_model: CostModel,
    instance: &CoverageInstance,
    plan: &RunPlan,
) -> Result<ExperimentReport> {
    Ok(ExperimentReport {
        graph: graph.to_string(),
        nodes: instance.node_count(),
        cost_model,
        mutation: plan.mutation,
        repetitions: plan.repetitions,
        base_seed: plan.base_seed,
        records: run_cells(instance, plan)?,
    })
}

fn run_cells(instance: &CoverageInstance, plan: &RunPlan) -> Result<Vec<SettingRecord>> {
    use crate::problems::Problem;

    if plan.repetitions == 0 || plan.algorithms.is_empty() || plan.t_max.is_empty() {
        return Err(Error::Config("empty run plan".into()));
    }
    let mut algorithms = plan.algorithms.clone();
    algorithms.sort();
    algorithms.dedup();

    let jobs: Vec<(u64, Algorithm, usize)> = plan
        .t_max
        .iter()
        .flat_map(|&t| {
            algorithms
                .iter()
                .flat_map(move |&a| (0..plan.repetitions).map(move |k| (t, a, k)))
        })
        .collect();

    let execute = || -> Result<Vec<(usize, f64)>> {
        jobs.par_iter()
            .map(|&(t_max, alg, k)| {
                let cfg = AlgorithmConfig::new(t_max, run_seed(plan.base_seed, alg, k))
                    .with_mutation(plan.mutation);
                let r = alg.run(instance, &cfg)?;
                Ok((r.final_archive.len(), r.best.objectives.f))
            })
            .collect()
    };
    let outcomes = match plan.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(execute)?,
        None => execute()?,
    };

    let mut cells: BTreeMap<(u64, Algorithm), (Vec<f64>, Vec<usize>)> = BTreeMap::new();
    for (&(t, a, _), (pop, f)) in jobs.iter().zip(outcomes) {
        let cell = cells.entry((t, a)).or_default();
        cell.0.push(f);
        cell.1.push(pop);
    }

    let budget = instance.budget();
    let mut records = Vec::new();
    for &t in &plan.t_max {
        for &a in &algorithms {
            let (best_f, final_pop) = cells[&(t, a)].clone();
            let s = summarize(&best_f)?;
            let pops: Vec<f64> = final_pop.iter().map(|&p| p as f64).collect();
            let ps = summarize(&pops)?;
            let p_value = match algorithms.as_slice() {
                [x, y] => {
                    let other = if a == *x { *y } else { *x };
                    Some(mann_whitney_u(&best_f, &cells[&(t, other)].0)?.p_value)
                }
                _ => None,
            };
            records.push(SettingRecord {
                algorithm: a,
                budget,
                t_max: t,
                best_f,
                final_pop,
                mean: s.mean,
                std: s.std,
                pop_mean: ps.mean,
                pop_std: ps.std,
                p_value,
            });
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontPoint {
    pub cost: f64,
    pub f: f64,
}

/// Final archive as `(cost, f)` pairs in ascending cost order.
pub fn export_front(result: &RunResult) -> Vec<FrontPoint> {
    let mut points: Vec<FrontPoint> = result
        .final_archive
        .objective_vectors()
        .map(|v| FrontPoint {
            cost: v.cost,
            f: v.f,
        })
        .collect();
    points.sort_by(|a, b| a.cost.total_cmp(&b.cost));
    points
}

pub fn front_csv(points: &[FrontPoint]) -> String {
    let mut out = String::from("cost,f\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.cost, p.f);
    }
    out
}
