//! Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Criteria on the ca-CSphd and ca-GrQc graphs need local copies of the
//! files. Point `SWGSEMO_DATA_DIR` at a directory holding `ca-CSphd.mtx` and
//! `ca-GrQc.mtx` (any of `.mtx`, `.edges`, `.el`, `.txt`, optionally `.gz`).
//! Without it those criteria print SKIP.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use swgsemo::experiments::stats::{mann_whitney_exact, mann_whitney_normal, mann_whitney_u};
use swgsemo::experiments::{run_on_instance, RunPlan};
use swgsemo::problems::diagnostics::brute_force_optimum;
use swgsemo::{
    load_graph, random_source, recommended_tmax_uniform, run_with_selector, sliding_window,
    standard_bit_mutation, standard_bit_mutation_plus, sw_gsemo_run, Algorithm, AlgorithmConfig,
    BitVector, BudgetRule, CostModel, CoverageInstance, Graph, Individual, ObjectiveVector,
    OracleProblem, ParentSelector, ParetoArchive, Problem, RandomSource, SlidingSelection,
};

type Criterion = (&'static str, fn() -> Verdict);

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

const DATA_ENV: &str = "SWGSEMO_DATA_DIR";

fn find_graph(stem: &str) -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os(DATA_ENV)?);
    for ext in ["mtx", "edges", "el", "txt"] {
        for gz in ["", ".gz"] {
            let p = dir.join(format!("{stem}.{ext}{gz}"));
            if p.is_file() {
                return Some(p);
            }
        }
    }
    None
}

fn missing(stem: &str) -> Verdict {
    Verdict::Skip(format!("{stem} not found; set {DATA_ENV}"))
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x - target).abs() <= rel * target
}

fn csphd_report(
    path: &Path,
    cost: CostModel,
) -> swgsemo::Result<(f64, swgsemo::experiments::ExperimentReport)> {
    let graph = load_graph(path)?;
    let budget = BudgetRule::Sqrtn.resolve(graph.node_count());
    let instance = CoverageInstance::from_graph(&graph, &cost, budget)?;
    let report = run_on_instance("ca-CSphd", cost, &instance, &RunPlan::new(100_000, 30, 0))?;
    Ok((budget, report))
}

fn criterion_1() -> Verdict {
    let Some(path) = find_graph("ca-CSphd") else {
        return missing("ca-CSphd");
    };
    let (budget, rep) = match csphd_report(&path, CostModel::Uniform) {
        Ok(x) => x,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let sw = rep
        .record(Algorithm::SwGsemo, budget, 100_000)
        .expect("sw record");
    let gs = rep
        .record(Algorithm::Gsemo, budget, 100_000)
        .expect("gsemo record");
    let p = sw.p_value.unwrap_or(1.0);
    let msg = format!(
        "B={budget} sw mean={:.2} std={:.2} gsemo mean={:.2} p={p:.3e}",
        sw.mean, sw.std, gs.mean
    );
    let ok = budget == 43.0
        && within(sw.mean, 599.0, 0.01)
        && sw.std <= 3.0
        && within(gs.mean, 568.0, 0.02)
        && p <= 0.05
        && sw.mean > gs.mean;
    if ok {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_2() -> Verdict {
    let Some(path) = find_graph("ca-CSphd") else {
        return missing("ca-CSphd");
    };
    let (budget, rep) = match csphd_report(&path, CostModel::random_default(0)) {
        Ok(x) => x,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let sw = rep
        .record(Algorithm::SwGsemo, budget, 100_000)
        .expect("sw record");
    let gs = rep
        .record(Algorithm::Gsemo, budget, 100_000)
        .expect("gsemo record");
    let p = sw.p_value.unwrap_or(1.0);
    let msg = format!("sw mean={:.2} gsemo mean={:.2} p={p:.3e}", sw.mean, gs.mean);
    if within(sw.mean, 625.0, 0.03) && within(gs.mean, 539.0, 0.03) && p <= 0.05 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_3() -> Verdict {
    let Some(path) = find_graph("ca-CSphd") else {
        return missing("ca-CSphd");
    };
    let (budget, rep) = match csphd_report(&path, CostModel::Uniform) {
        Ok(x) => x,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let sw = rep
        .record(Algorithm::SwGsemo, budget, 100_000)
        .expect("sw record");
    let hits = sw.final_pop.iter().filter(|&&p| p == 44).count();
    let msg = format!("{hits}/30 runs with final archive size 44");
    if hits >= 29 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = random_source(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid edges")
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let t_max = match recommended_tmax_uniform(12, 3) {
        Ok(t) => t,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let mut hits = 0;
    for k in 0..30u64 {
        let graph = erdos_renyi(12, 0.3, 1000 + k);
        let inst =
            CoverageInstance::from_graph(&graph, &CostModel::Uniform, 3.0).expect("instance");
        let opt = brute_force_optimum(&inst).expect("small instance").value;
        let run = sw_gsemo_run(&inst, &AlgorithmConfig::new(t_max, k)).expect("run");
        if run.best.objectives.f >= (1.0 - (-1.0f64).exp()) * opt {
            hits += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("t_max={t_max}, {hits}/30 runs reach (1-1/e)*OPT in {secs:.2}s");
    if t_max == 973 && hits >= 28 && secs < 1.0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

/// Non-dominated vectors of the whole sequence; the genotype is the last one
/// seen with that vector.
fn brute_force_front(seq: &[Individual]) -> Vec<(f64, f64, String)> {
    let mut out: Vec<(f64, f64, String)> = Vec::new();
    for (i, y) in seq.iter().enumerate() {
        let v = &y.objectives;
        if seq.iter().any(|w| w.objectives.strictly_dominates(v)) {
            continue;
        }
        if seq[i + 1..].iter().any(|w| w.objectives.same_point(v)) {
            continue;
        }
        out.push((v.cost, v.f, y.genotype.to_string()));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn criterion_5() -> Verdict {
    let mut rng = random_source(5);
    let mut failures = 0;
    for _ in 0..1000 {
        let n = rng.random_range(1..=12usize);
        let len = rng.random_range(1..=200usize);
        let budget = rng.random_range(0..=n) as f64;
        let seq: Vec<Individual> = (0..len)
            .map(|_| {
                let mask = rng.random_range(0..1u64 << n);
                let genotype = BitVector::from_mask(n, mask);
                let cost = rng.random_range(0..=n) as f64;
                let f = rng.random_range(0..=2 * n) as f64;
                let obj = if cost <= budget {
                    ObjectiveVector::feasible(f, cost)
                } else {
                    ObjectiveVector::infeasible(cost)
                };
                Individual::new(genotype, obj)
            })
            .collect();
        let mut archive = ParetoArchive::new();
        for y in &seq {
            archive.insert(y.clone());
        }
        let got: Vec<(f64, f64, String)> = archive
            .members()
            .iter()
            .map(|m| (m.objectives.cost, m.objectives.f, m.genotype.to_string()))
            .collect();
        if got != brute_force_front(&seq) {
            failures += 1;
        }
    }
    let msg = format!(
        "{}/1000 sequences match the brute-force filter",
        1000 - failures
    );
    if failures == 0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

/// Sliding selection that audits every draw.
#[derive(Default)]
struct AuditedSelection {
    selections: u64,
    violations: u64,
}

impl ParentSelector for AuditedSelection {
    fn select(
        &mut self,
        archive: &ParetoArchive,
        t: u64,
        t_max: u64,
        budget: f64,
        rng: &mut RandomSource,
    ) -> usize {
        let idx = SlidingSelection.select(archive, t, t_max, budget, rng);
        self.selections += 1;
        if t <= t_max {
            let target = (t as f64 / t_max as f64) * budget;
            let (lo, hi) = (target.floor(), target.ceil());
            let in_window = |c: f64| lo <= c && c <= hi;
            let window_size = archive
                .members()
                .iter()
                .filter(|m| in_window(m.objectives.cost))
                .count();
            let fallback = sliding_window(archive, t, t_max, budget).fallback;
            if window_size > 2 || (window_size == 0) != fallback {
                self.violations += 1;
            }
            if !fallback && !in_window(archive.get(idx).objectives.cost) {
                self.violations += 1;
            }
        }
        idx
    }
}

fn criterion_6() -> Verdict {
    let mut audit = AuditedSelection::default();
    let mut rng = random_source(6);
    let mut run = 0u64;
    while audit.selections < 1_000_000 {
        let n = rng.random_range(8..=40usize);
        let t_max = rng.random_range(1_000..=20_000u64);
        let config = AlgorithmConfig::new(t_max, run);
        if run.is_multiple_of(2) {
            let graph = erdos_renyi(n, 0.15, run);
            let budget = rng.random_range(1..=n / 2) as f64;
            let inst = CoverageInstance::from_graph(&graph, &CostModel::Uniform, budget)
                .expect("instance");
            run_with_selector(&inst, &config, &mut audit).expect("run");
        } else {
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1..=4u32) as f64).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(1..=10u32) as f64).collect();
            let budget = rng.random_range(1..=2 * n) as f64;
            let problem = OracleProblem::with_linear_cost(budget, weights, move |x: &BitVector| {
                x.ones_iter().map(|i| values[i]).sum::<f64>().sqrt()
            });
            debug_assert!(problem.has_uniform_cost() || problem.linear_costs().is_some());
            run_with_selector(&problem, &config, &mut audit).expect("run");
        }
        run += 1;
    }
    let msg = format!(
        "{} violations over {} selections in {run} runs",
        audit.violations, audit.selections
    );
    if audit.violations == 0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_7() -> Verdict {
    let mut rng = random_source(7);
    let x = BitVector::from_mask(20, 0b1011_0010_1110_0001_0110);
    let mut unchanged = 0;
    for _ in 0..100_000 {
        if standard_bit_mutation(&x, &mut rng) == x {
            unchanged += 1;
        }
    }
    let freq = unchanged as f64 / 1e5;
    let expected = (1.0 - 1.0 / 20.0f64).powi(20);
    let mut plus_same = 0;
    for _ in 0..100_000 {
        match standard_bit_mutation_plus(&x, &mut rng) {
            Ok(y) if y != x => {}
            _ => plus_same += 1,
        }
    }
    let msg = format!(
        "no-change freq {freq:.4} vs {expected:.4}, plus returned its input {plus_same} times"
    );
    if (freq - expected).abs() <= 0.01 && plus_same == 0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_8() -> Verdict {
    let p1 = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0])
        .expect("test")
        .p_value;
    let p2 = mann_whitney_u(&[5.0; 6], &[5.0; 6]).expect("test").p_value;
    let mut rng = random_source(8);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a: Vec<f64> = (0..10).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..10).map(|_| rng.random::<f64>() + 0.3).collect();
        let exact = mann_whitney_exact(&a, &b).expect("exact").p_value;
        let approx = mann_whitney_normal(&a, &b).expect("normal").p_value;
        worst = worst.max((exact - approx).abs());
    }
    let msg = format!("p={p1:.12} and p={p2:.12}, max |normal - exact| = {worst:.5}");
    if (p1 - 0.1).abs() <= 1e-9 && (p2 - 1.0).abs() <= 1e-9 && worst <= 0.005 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_9() -> Verdict {
    let Some(path) = find_graph("ca-GrQc") else {
        return missing("ca-GrQc");
    };
    let run = || -> swgsemo::Result<(f64, f64, f64)> {
        let graph = load_graph(&path)?;
        let budget = BudgetRule::N10.resolve(graph.node_count());
        let cost = CostModel::random_default(0);
        let instance = CoverageInstance::from_graph(&graph, &cost, budget)?;
        let rep = run_on_instance("ca-GrQc", cost, &instance, &RunPlan::new(100_000, 30, 0))?;
        let sw = rep
            .record(Algorithm::SwGsemo, budget, 100_000)
            .expect("sw record");
        let gs = rep
            .record(Algorithm::Gsemo, budget, 100_000)
            .expect("gsemo record");
        Ok((sw.mean, gs.mean, sw.p_value.unwrap_or(1.0)))
    };
    match run() {
        Ok((sw, gs, p)) => {
            let msg = format!(
                "sw mean={sw:.1} gsemo mean={gs:.1} ratio={:.3} p={p:.3e}",
                sw / gs
            );
            if sw >= 1.3 * gs && p <= 0.05 {
                Verdict::Pass(msg)
            } else {
                Verdict::Fail(msg)
            }
        }
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 ca-CSphd uniform cell", criterion_1),
        ("2 ca-CSphd random-cost cell", criterion_2),
        ("3 ca-CSphd final archive size", criterion_3),
        ("4 approximation on small random graphs", criterion_4),
        ("5 archive vs brute-force filter", criterion_5),
        ("6 sliding-window invariant", criterion_6),
        ("7 mutation distribution", criterion_7),
        ("8 Mann-Whitney U", criterion_8),
        ("9 ca-GrQc random-cost dominance", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Verdict::Pass(m) => println!("PASS criterion {name}: {m}"),
            Verdict::Fail(m) => {
                failed += 1;
                println!("FAIL criterion {name}: {m}");
            }
            Verdict::Skip(m) => println!("SKIP criterion {name}: {m}"),
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
