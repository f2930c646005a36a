//! Pareto optimization for budget-constrained monotone submodular
//! maximization.
//!
//! The crate provides the classical GSEMO and its sliding-window variant
//! SW-GSEMO, the maximum coverage benchmark on graphs, iteration budget
//! recommendations, and a seeded experiment harness with Mann-Whitney U
//! comparisons.
//!
//! ```
//! use swgsemo::{sw_gsemo_run, AlgorithmConfig, CostModel, CoverageInstance, Graph};
//!
//! let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
//! let instance = CoverageInstance::from_graph(&star, &CostModel::Uniform, 1.0).unwrap();
//! let result = sw_gsemo_run(&instance, &AlgorithmConfig::new(2000, 7)).unwrap();
//! assert_eq!(result.best.objectives.f, 4.0);
//! ```

pub mod algorithms;
pub mod archive;
pub mod bits;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod objective;
pub mod operators;
pub mod problems;

pub use algorithms::{
    gsemo_run, recommended_tmax_general, recommended_tmax_uniform, run_with_selector,
    sliding_selection, sliding_window, sw_gsemo_run, Algorithm, AlgorithmConfig, ParentSelector,
    RunResult, SlidingSelection, SlidingWindow, TraceSnapshot, UniformSelection,
};
pub use archive::{InsertOutcome, ParetoArchive};
pub use bits::BitVector;
pub use error::{Error, Result};
pub use experiments::{export_front, run_experiment, ExperimentConfig, ExperimentReport};
pub use graph::{
    assign_costs, closed_neighborhoods, load_graph, parse_edge_list, CostModel, Graph,
    Neighborhoods,
};
pub use objective::{best_feasible, dominates, Dominance, Individual, ObjectiveVector};
pub use operators::{
    random_source, standard_bit_mutation, standard_bit_mutation_plus, Mutation, RandomSource,
};
pub use problems::{evaluate, BudgetRule, CoverageInstance, OracleProblem, Problem};
