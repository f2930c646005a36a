use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use swgsemo::experiments::{
    front_csv, graph_name, run_experiment, ExperimentConfig, FrontPoint, WORKERS_ENV,
};
use swgsemo::problems::diagnostics::{brute_force_optimum, min_marginal_gain};
use swgsemo::{
    export_front, load_graph, recommended_tmax_general, recommended_tmax_uniform, Algorithm,
    AlgorithmConfig, BudgetRule, CostModel, CoverageInstance, Error, Mutation, Problem, RunResult,
};

/// GSEMO and SW-GSEMO for budget-constrained maximum coverage.
#[derive(Parser)]
#[command(name = "swgsemo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run on one graph.
    Run(RunArgs),
    /// Repeated runs of both algorithms with statistics.
    Bench(BenchArgs),
    /// Final archive of a single run as a `cost,f` table.
    Front(RunArgs),
    /// Recommended iteration budgets.
    Tmax(TmaxArgs),
    /// Exhaustive optimum of a small instance.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CostKind {
    Uniform,
    Random,
}

#[derive(Args)]
struct InstanceArgs {
    /// Edge list or MatrixMarket file, optionally gzipped.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "uniform")]
    cost: CostKind,
    /// Seed of the random cost draw.
    #[arg(long, default_value_t = 0)]
    cost_seed: u64,
    #[arg(long, default_value_t = 0.5)]
    cost_lo: f64,
    #[arg(long, default_value_t = 1.5)]
    cost_hi: f64,
}

impl InstanceArgs {
    fn cost_model(&self) -> CostModel {
        match self.cost {
            CostKind::Uniform => CostModel::Uniform,
            CostKind::Random => CostModel::RandomInterval {
                lo: self.cost_lo,
                hi: self.cost_hi,
                seed: self.cost_seed,
            },
        }
    }
}

#[derive(Args)]
#[group(id = "budget_choice", required = true, multiple = false)]
struct BudgetArgs {
    /// Explicit budget B.
    #[arg(long, group = "budget_choice")]
    budget: Option<f64>,
    /// One of log2n, sqrtn, n20, n10.
    #[arg(long, group = "budget_choice")]
    budget_rule: Option<BudgetRule>,
}

impl BudgetArgs {
    fn rule(&self) -> BudgetRule {
        match (self.budget, self.budget_rule) {
            (Some(b), _) => BudgetRule::Explicit(b),
            (None, Some(r)) => r,
            (None, None) => unreachable!("clap enforces the budget group"),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value = "sw-gsemo")]
    algo: Algorithm,
    #[arg(long)]
    tmax: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "standard-plus")]
    mutation: Mutation,
    /// Record a snapshot every PERIOD iterations.
    #[arg(long, value_name = "PERIOD", default_value_t = 0)]
    trace: u64,
    /// Write the final front as CSV.
    #[arg(long)]
    front_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML experiment file; other instance flags are then ignored.
    #[arg(long, conflicts_with_all = ["graph", "budget_rule", "tmax"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "uniform")]
    cost: CostKind,
    #[arg(long, default_value_t = 0)]
    cost_seed: u64,
    #[arg(long, default_value_t = 0.5)]
    cost_lo: f64,
    #[arg(long, default_value_t = 1.5)]
    cost_hi: f64,
    /// Budget rules or explicit values, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    budget_rule: Vec<BudgetRule>,
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    tmax: Vec<u64>,
    #[arg(long, default_value_t = 30)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "gsemo,sw-gsemo")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value = "standard-plus")]
    mutation: Mutation,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Per-run CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON output.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("tmax_mode").required(true).args(["r", "budget"])))]
struct TmaxArgs {
    #[arg(long)]
    n: usize,
    /// Cardinality bound of a uniform constraint.
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, requires = "delta")]
    budget: Option<f64>,
    /// Minimum marginal cost gain.
    #[arg(long, requires = "budget", allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Config(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(&a, false),
        Command::Front(a) => cmd_run(&a, true),
        Command::Bench(a) => cmd_bench(&a),
        Command::Tmax(a) => cmd_tmax(&a),
        Command::Oracle(a) => cmd_oracle(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn build_instance(
    instance: &InstanceArgs,
    budget: &BudgetArgs,
) -> Result<(String, CoverageInstance), Failure> {
    let model = instance.cost_model();
    model.validate()?;
    if let BudgetRule::Explicit(b) = budget.rule() {
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Failure::Usage(format!(
                "budget must be a finite non-negative number, got {b}"
            )));
        }
    }
    let graph = load_graph(&instance.graph)?;
    let b = budget.rule().resolve(graph.node_count());
    let inst = CoverageInstance::from_graph(&graph, &model, b)?;
    Ok((graph_name(&instance.graph), inst))
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|source| {
        Failure::from(Error::Io {
            path: path.to_path_buf(),
            source,
        })
    })
}

fn cmd_run(a: &RunArgs, front_only: bool) -> CliResult {
    let (name, instance) = build_instance(&a.instance, &a.budget)?;
    let config = AlgorithmConfig::new(a.tmax, a.seed)
        .with_mutation(a.mutation)
        .with_trace(a.trace);
    let result = a.algo.run(&instance, &config)?;
    let front = export_front(&result);
    if let Some(path) = &a.front_out {
        write_file(path, &front_csv(&front))?;
    }
    if front_only {
        if a.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&front).map_err(Error::from)?
            );
        } else {
            print!("{}", front_csv(&front));
        }
        return Ok(());
    }
    let budget = instance.budget();
    if a.json {
        println!("{}", run_json(&name, a, budget, &result, &front));
    } else {
        println!("graph: {name} (n = {})", instance.node_count());
        println!("algorithm: {}", a.algo);
        println!("effective B = {budget}");
        println!("t_max: {}", a.tmax);
        println!("best f = {}", result.best.objectives.f);
        println!("cost = {}", result.best.objectives.cost);
        println!("evaluations = {}", result.evaluations);
        println!("archive size = {}", result.final_archive.len());
        for s in &result.trace {
            println!(
                "trace t={} best_f={} archive={}",
                s.iteration, s.best_f, s.archive_size
            );
        }
    }
    Ok(())
}

fn run_json(
    name: &str,
    a: &RunArgs,
    budget: f64,
    result: &RunResult,
    front: &[FrontPoint],
) -> String {
    let doc = json!({
        "graph": name,
        "algorithm": a.algo,
        "budget": budget,
        "t_max": a.tmax,
        "seed": a.seed,
        "mutation": a.mutation,
        "best_f": result.best.objectives.f,
        "cost": result.best.objectives.cost,
        "best_set": result.best.genotype.ones_iter().collect::<Vec<_>>(),
        "evaluations": result.evaluations,
        "archive_size": result.final_archive.len(),
        "front": front,
        "trace": result.trace,
    });
    serde_json::to_string_pretty(&doc).expect("json values serialize")
}

fn cmd_bench(a: &BenchArgs) -> CliResult {
    let config = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let base = path.parent().unwrap_or(Path::new("."));
            let mut cfg = ExperimentConfig::from_toml(&text, base)?;
            if cfg.workers.is_none() {
                cfg.workers = a.workers;
            }
            cfg
        }
        None => {
            let cost = match a.cost {
                CostKind::Uniform => CostModel::Uniform,
                CostKind::Random => CostModel::RandomInterval {
                    lo: a.cost_lo,
                    hi: a.cost_hi,
                    seed: a.cost_seed,
                },
            };
            let graph = a
                .graph
                .clone()
                .expect("clap requires --graph without --config");
            ExperimentConfig {
                graph,
                name: None,
                cost,
                budgets: a.budget_rule.clone(),
                t_max: a.tmax.clone(),
                repetitions: a.reps,
                base_seed: a.seed,
                algorithms: a.algos.clone(),
                mutation: a.mutation,
                workers: a.workers,
            }
        }
    };
    config.validate()?;
    let report = run_experiment(&config)?;
    let summary = report.summary_json()?;
    if let Some(path) = &a.out {
        write_file(path, &report.to_csv())?;
    }
    if let Some(path) = &a.json_out {
        write_file(path, &summary)?;
    }
    if a.json {
        println!("{summary}");
        return Ok(());
    }
    println!(
        "graph: {} (n = {}), cost: {}, runs: {}",
        report.graph,
        report.nodes,
        report.cost_model.name(),
        report.repetitions
    );
    println!(
        "{:<10} {:>10} {:>10} {:>12} {:>10} {:>10} {:>10} {:>10}",
        "algorithm", "B", "t_max", "mean", "std", "pop", "p", "sig"
    );
    for r in &report.records {
        let p = r.p_value.map_or("-".to_string(), |p| format!("{p:.3e}"));
        let sig = r
            .significant()
            .map_or("-", |s| if s { "yes" } else { "no" });
        println!(
            "{:<10} {:>10} {:>10} {:>12.2} {:>10.2} {:>10.2} {:>10} {:>10}",
            r.algorithm.name(),
            r.budget,
            r.t_max,
            r.mean,
            r.std,
            r.pop_mean,
            p,
            sig
        );
    }
    Ok(())
}

fn cmd_tmax(a: &TmaxArgs) -> CliResult {
    let doc = match (a.r, a.budget, a.delta) {
        (Some(r), _, _) => {
            let t = recommended_tmax_uniform(a.n, r)?;
            json!({ "n": a.n, "r": r, "t_max": t })
        }
        (None, Some(b), Some(d)) => {
            if d.is_nan() || d <= 0.0 {
                return Err(Failure::Usage(format!("delta must be positive, got {d}")));
            }
            let t = recommended_tmax_general(a.n, b, d)?;
            json!({ "n": a.n, "budget": b, "delta": d, "t_max": t })
        }
        _ => {
            return Err(Failure::Usage(
                "pass --r or both --budget and --delta".into(),
            ))
        }
    };
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).map_err(Error::from)?
        );
    } else {
        println!("t_max = {}", doc["t_max"]);
    }
    Ok(())
}

fn cmd_oracle(a: &OracleArgs) -> CliResult {
    let (name, instance) = build_instance(&a.instance, &a.budget)?;
    let opt = brute_force_optimum(&instance)?;
    let delta = min_marginal_gain(&instance, 0, 0)?;
    let set: Vec<usize> = opt.witness.ones_iter().collect();
    if a.json {
        let doc = json!({
            "graph": name,
            "budget": instance.budget(),
            "optimum": opt.value,
            "witness": set,
            "min_marginal_gain": delta.value,
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).map_err(Error::from)?
        );
    } else {
        println!("graph: {name} (n = {})", instance.node_count());
        println!("effective B = {}", instance.budget());
        println!("optimum = {}", opt.value);
        println!("witness = {set:?}");
        println!("min marginal gain = {}", delta.value);
    }
    Ok(())
}
