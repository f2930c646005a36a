//! GSEMO and sliding-window GSEMO.
//!
//! Both start from `0^n` and run `t_max` iterations of: pick a parent from
//! the archive, mutate it, offer the offspring to the archive. They differ
//! only in parent selection:
//!
//! * GSEMO picks uniformly from the whole archive.
//! * SW-GSEMO at iteration `t` targets the cost `ĉ = (t / t_max) · B` and
//!   picks uniformly among members with `⌊ĉ⌋ ≤ c(x) ≤ ⌈ĉ⌉`, falling back
//!   to the whole archive when that window is empty.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::archive::ParetoArchive;
use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::objective::Individual;
use crate::operators::{random_source, Mutation, RandomSource};
use crate::problems::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    /// Number of iterations, i.e. offspring evaluations.
    pub t_max: u64,
    pub mutation: Mutation,
    pub seed: u64,
    /// Iterations between trace snapshots; 0 disables tracing.
    pub trace_period: u64,
}

impl AlgorithmConfig {
    pub fn new(t_max: u64, seed: u64) -> Self {
        Self {
            t_max,
            mutation: Mutation::default(),
            seed,
            trace_period: 0,
        }
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn with_trace(mut self, period: u64) -> Self {
        self.trace_period = period;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSnapshot {
    pub iteration: u64,
    pub best_f: f64,
    pub archive_size: usize,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_archive: ParetoArchive,
    /// Feasible archive member with the largest `f`.
    pub best: Individual,
    /// Offspring evaluations; the initial evaluation of `0^n` is not counted.
    pub evaluations: u64,
    pub trace: Vec<TraceSnapshot>,
}

/// Chooses the index of the next parent in the archive.
pub trait ParentSelector {
    fn select(
        &mut self,
        archive: &ParetoArchive,
        t: u64,
        t_max: u64,
        budget: f64,
        rng: &mut RandomSource,
    ) -> usize;
}

/// Uniform choice over the whole archive.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformSelection;

impl ParentSelector for UniformSelection {
    fn select(
        &mut self,
        archive: &ParetoArchive,
        _t: u64,
        _t_max: u64,
        _budget: f64,
        rng: &mut RandomSource,
    ) -> usize {
        rng.random_range(0..archive.len())
    }
}

/// Uniform choice inside the time-dependent cost window.
#[derive(Debug, Clone, Copy, Default)]
pub struct SlidingSelection;

impl ParentSelector for SlidingSelection {
    fn select(
        &mut self,
        archive: &ParetoArchive,
        t: u64,
        t_max: u64,
        budget: f64,
        rng: &mut RandomSource,
    ) -> usize {
        let window = sliding_window(archive, t, t_max, budget);
        if window.fallback {
            rng.random_range(0..archive.len())
        } else {
            window.members.start + rng.random_range(0..window.members.len())
        }
    }
}

/// The candidate set of one sliding selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingWindow {
    /// Target cost `(t / t_max) · B`, or `None` once `t > t_max`.
    pub target: Option<f64>,
    /// Archive indices eligible for selection.
    pub members: Range<usize>,
    /// True when the whole archive is eligible (past `t_max` or empty window).
    pub fallback: bool,
}

pub fn sliding_window(archive: &ParetoArchive, t: u64, t_max: u64, budget: f64) -> SlidingWindow {
    if t <= t_max {
        let target = (t as f64 / t_max as f64) * budget;
        let members = archive.cost_range(target.floor(), target.ceil());
        if !members.is_empty() {
            return SlidingWindow {
                target: Some(target),
                members,
                fallback: false,
            };
        }
        return SlidingWindow {
            target: Some(target),
            members: 0..archive.len(),
            fallback: true,
        };
    }
    SlidingWindow {
        target: None,
        members: 0..archive.len(),
        fallback: true,
    }
}

/// One sliding-selection draw.
pub fn sliding_selection<'a>(
    archive: &'a ParetoArchive,
    t: u64,
    t_max: u64,
    budget: f64,
    rng: &mut RandomSource,
) -> &'a Individual {
    archive.get(SlidingSelection.select(archive, t, t_max, budget, rng))
}

/// Runs the shared loop with an arbitrary parent selector.
pub fn run_with_selector<P, S>(
    problem: &P,
    config: &AlgorithmConfig,
    selector: &mut S,
) -> Result<RunResult>
where
    P: Problem + ?Sized,
    S: ParentSelector + ?Sized,
{
    let n = problem.dimension();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "problem dimension must be >= 1".into(),
        ));
    }
    let budget = problem.budget();
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "budget must be >= 0, got {budget}"
        )));
    }

    let mut rng = random_source(config.seed);
    let zero = BitVector::zeros(n);
    let zero_eval = problem.evaluate_unchecked(&zero);
    let mut archive = ParetoArchive::with_initial(Individual::new(zero, zero_eval));
    let mut trace = Vec::new();
    let mut evaluations = 0u64;

    for t in 1..=config.t_max {
        let idx = selector.select(&archive, t, config.t_max, budget, &mut rng);
        let child = config
            .mutation
            .apply(&archive.get(idx).genotype, &mut rng)?;
        let objectives = problem.evaluate_unchecked(&child);
        evaluations += 1;
        // Infeasible offspring carry f = -inf and are rejected by the
        // archive in O(log |P|) as soon as a cheaper feasible member exists.
        archive.insert(Individual::new(child, objectives));

        if config.trace_period > 0 && (t % config.trace_period == 0 || t == config.t_max) {
            trace.push(TraceSnapshot {
                iteration: t,
                best_f: archive
                    .best_feasible()
                    .map_or(f64::NEG_INFINITY, |b| b.objectives.f),
                archive_size: archive.len(),
            });
        }
    }

    let best = archive.best_feasible().cloned().ok_or_else(|| {
        Error::InvalidArgument("no feasible solution: 0^n exceeds the budget".into())
    })?;
    Ok(RunResult {
        final_archive: archive,
        best,
        evaluations,
        trace,
    })
}

pub fn gsemo_run<P: Problem + ?Sized>(problem: &P, config: &AlgorithmConfig) -> Result<RunResult> {
    run_with_selector(problem, config, &mut UniformSelection)
}

pub fn sw_gsemo_run<P: Problem + ?Sized>(
    problem: &P,
    config: &AlgorithmConfig,
) -> Result<RunResult> {
    run_with_selector(problem, config, &mut SlidingSelection)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "gsemo")]
    Gsemo,
    #[serde(rename = "sw-gsemo")]
    SwGsemo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Gsemo, Algorithm::SwGsemo];

    pub fn run<P: Problem + ?Sized>(
        self,
        problem: &P,
        config: &AlgorithmConfig,
    ) -> Result<RunResult> {
        match self {
            Algorithm::Gsemo => gsemo_run(problem, config),
            Algorithm::SwGsemo => sw_gsemo_run(problem, config),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gsemo => "gsemo",
            Algorithm::SwGsemo => "sw-gsemo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gsemo" => Ok(Algorithm::Gsemo),
            "sw-gsemo" | "swgsemo" => Ok(Algorithm::SwGsemo),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm `{other}`"
            ))),
        }
    }
}

/// `⌈4 e r n ln n⌉`: iterations after which SW-GSEMO holds a
/// `(1 − 1/e)`-approximation under a uniform constraint of size `r`, with
/// high probability.
pub fn recommended_tmax_uniform(n: usize, r: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    if r < 1 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let nf = n as f64;
    Ok((4.0 * std::f64::consts::E * r as f64 * nf * nf.ln()).ceil() as u64)
}

/// `⌈2 e n (B/δ) ln(n + B/δ)⌉` for a general cost with minimum marginal
/// gain `δ`.
pub fn recommended_tmax_general(n: usize, budget: f64, delta: f64) -> Result<u64> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(budget > 0.0 && budget.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "budget must be positive, got {budget}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let nf = n as f64;
    let steps = budget / delta;
    Ok((2.0 * std::f64::consts::E * nf * steps * (nf + steps).ln()).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CostModel, Graph};
    use crate::objective::ObjectiveVector;
    use crate::problems::{brute_force_optimum, CoverageInstance};

    fn star(budget: f64) -> CoverageInstance {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        CoverageInstance::from_graph(&g, &CostModel::Uniform, budget).unwrap()
    }

    fn archive_with_costs(costs: impl IntoIterator<Item = u32>) -> ParetoArchive {
        let mut a = ParetoArchive::new();
        for c in costs {
            let c = c as f64;
            a.insert(Individual::new(
                BitVector::zeros(11),
                ObjectiveVector::feasible(c, c),
            ));
        }
        a
    }

    #[test]
    fn star_is_solved_by_both() {
        let inst = star(1.0);
        let opt = brute_force_optimum(&inst).unwrap().value;
        for seed in 0..10 {
            let cfg = AlgorithmConfig::new(2000, seed);
            assert_eq!(gsemo_run(&inst, &cfg).unwrap().best.objectives.f, opt);
            assert_eq!(sw_gsemo_run(&inst, &cfg).unwrap().best.objectives.f, opt);
        }
    }

    #[test]
    fn zero_iterations_keep_initial_point() {
        let inst = star(1.0);
        for alg in Algorithm::ALL {
            let r = alg.run(&inst, &AlgorithmConfig::new(0, 1)).unwrap();
            assert_eq!(r.final_archive.len(), 1);
            assert_eq!(r.best.objectives, ObjectiveVector::feasible(0.0, 0.0));
            assert_eq!(r.evaluations, 0);
        }
    }

    #[test]
    fn window_at_integer_target() {
        let a = archive_with_costs(0..=10);
        let w = sliding_window(&a, 50, 100, 10.0);
        assert_eq!(w.target, Some(5.0));
        assert_eq!(w.members, 5..6);
        let mut rng = random_source(0);
        for _ in 0..100 {
            assert_eq!(
                sliding_selection(&a, 50, 100, 10.0, &mut rng)
                    .objectives
                    .cost,
                5.0
            );
        }
    }

    #[test]
    fn window_at_fractional_target_is_split_evenly() {
        let a = archive_with_costs(0..=10);
        let w = sliding_window(&a, 55, 100, 10.0);
        assert_eq!(w.target, Some(5.5));
        assert_eq!(w.members, 5..7);
        let mut rng = random_source(1);
        let draws = 100_000;
        let fives = (0..draws)
            .filter(|_| {
                sliding_selection(&a, 55, 100, 10.0, &mut rng)
                    .objectives
                    .cost
                    == 5.0
            })
            .count();
        assert!((fives as f64 / draws as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn empty_window_falls_back_to_everything() {
        let a = archive_with_costs([0]);
        let w = sliding_window(&a, 30, 100, 10.0);
        assert!(w.fallback);
        assert_eq!(w.members, 0..1);
        let mut rng = random_source(2);
        assert_eq!(
            sliding_selection(&a, 30, 100, 10.0, &mut rng)
                .objectives
                .cost,
            0.0
        );
    }

    #[test]
    fn past_horizon_uses_everything() {
        let a = archive_with_costs(0..=3);
        let w = sliding_window(&a, 101, 100, 10.0);
        assert_eq!(w.target, None);
        assert!(w.fallback);
        assert_eq!(w.members, 0..4);
    }

    #[test]
    fn tmax_uniform_values() {
        assert_eq!(recommended_tmax_uniform(100, 10).unwrap(), 50073);
        assert_eq!(recommended_tmax_uniform(2, 1).unwrap(), 16);
        assert_eq!(recommended_tmax_uniform(12, 3).unwrap(), 973);
        for r in 1..20 {
            assert!(
                recommended_tmax_uniform(50, r + 1).unwrap()
                    > recommended_tmax_uniform(50, r).unwrap()
            );
        }
        assert!(recommended_tmax_uniform(1, 1).is_err());
        assert!(recommended_tmax_uniform(10, 0).is_err());
    }

    #[test]
    fn tmax_general_values() {
        assert_eq!(recommended_tmax_general(100, 50.0, 1.0).unwrap(), 136204);
        let n = 37;
        let expected = (2.0 * std::f64::consts::E * n as f64 * (n as f64 + 1.0).ln()).ceil() as u64;
        assert_eq!(recommended_tmax_general(n, 4.0, 4.0).unwrap(), expected);
        assert_eq!(
            recommended_tmax_general(100, 50.0, 2.0).unwrap(),
            recommended_tmax_general(100, 25.0, 1.0).unwrap()
        );
        assert!(recommended_tmax_general(100, 50.0, 0.0).is_err());
        assert!(recommended_tmax_general(100, 50.0, -1.0).is_err());
        assert!(recommended_tmax_general(100, 0.0, 1.0).is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("nsga2".parse::<Algorithm>().is_err());
    }
}
