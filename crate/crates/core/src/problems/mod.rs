//! Budget-constrained maximization problems: `max f(x)` subject to
//! `c(x) ≤ B` with monotone `f` and `c`.

mod coverage;
pub mod diagnostics;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::objective::ObjectiveVector;

pub use coverage::CoverageInstance;
pub use diagnostics::{
    brute_force_optimum, min_marginal_gain, submodularity_ratio_bruteforce, MarginalGain, Optimum,
    BRUTE_FORCE_MAX_DIMENSION, BRUTE_FORCE_MAX_SUBSETS, SUBMODULARITY_RATIO_MAX_DIMENSION,
};

/// Objective and cost oracles with a budget.
///
/// The oracle methods may assume `x.len() == self.dimension()`; use
/// [`evaluate`] for a checked call.
pub trait Problem: Send + Sync {
    fn dimension(&self) -> usize;

    fn budget(&self) -> f64;

    fn objective(&self, x: &BitVector) -> f64;

    fn cost(&self, x: &BitVector) -> f64;

    /// Per-element coefficients when the cost is linear, `c(x) = Σ wᵢ xᵢ`.
    fn linear_costs(&self) -> Option<&[f64]> {
        None
    }

    /// `(f, c)` with the infeasibility sentinel when `c(x) > B`. The objective
    /// is not computed for infeasible points.
    fn evaluate_unchecked(&self, x: &BitVector) -> ObjectiveVector {
        let cost = self.cost(x);
        if cost <= self.budget() {
            ObjectiveVector::feasible(self.objective(x), cost)
        } else {
            ObjectiveVector::infeasible(cost)
        }
    }

    /// True when every element costs exactly 1.
    fn has_uniform_cost(&self) -> bool {
        self.linear_costs()
            .is_some_and(|w| w.iter().all(|&c| c == 1.0))
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn budget(&self) -> f64 {
        (**self).budget()
    }
    fn objective(&self, x: &BitVector) -> f64 {
        (**self).objective(x)
    }
    fn cost(&self, x: &BitVector) -> f64 {
        (**self).cost(x)
    }
    fn linear_costs(&self) -> Option<&[f64]> {
        (**self).linear_costs()
    }
}

pub(crate) fn check_dimension(expected: usize, x: &BitVector) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            actual: x.len(),
        });
    }
    Ok(())
}

/// Evaluates `x`, rejecting a dimension mismatch.
pub fn evaluate<P: Problem + ?Sized>(problem: &P, x: &BitVector) -> Result<ObjectiveVector> {
    check_dimension(problem.dimension(), x)?;
    Ok(problem.evaluate_unchecked(x))
}

type Oracle = Box<dyn Fn(&BitVector) -> f64 + Send + Sync>;

/// A problem given by closures, for generic monotone objectives and costs.
pub struct OracleProblem {
    n: usize,
    budget: f64,
    objective: Oracle,
    cost: Oracle,
    linear: Option<Vec<f64>>,
}

impl OracleProblem {
    pub fn new(
        n: usize,
        budget: f64,
        objective: impl Fn(&BitVector) -> f64 + Send + Sync + 'static,
        cost: impl Fn(&BitVector) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            n,
            budget,
            objective: Box::new(objective),
            cost: Box::new(cost),
            linear: None,
        }
    }

    /// Objective given by a closure, cost linear in the selected elements.
    pub fn with_linear_cost(
        budget: f64,
        weights: Vec<f64>,
        objective: impl Fn(&BitVector) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let w = weights.clone();
        let mut p = Self::new(weights.len(), budget, objective, move |x: &BitVector| {
            x.ones_iter().fold(0.0, |acc, i| acc + w[i])
        });
        p.linear = Some(weights);
        p
    }
}

impl fmt::Debug for OracleProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleProblem")
            .field("n", &self.n)
            .field("budget", &self.budget)
            .field("linear", &self.linear)
            .finish_non_exhaustive()
    }
}

impl Problem for OracleProblem {
    fn dimension(&self) -> usize {
        self.n
    }
    fn budget(&self) -> f64 {
        self.budget
    }
    fn objective(&self, x: &BitVector) -> f64 {
        (self.objective)(x)
    }
    fn cost(&self, x: &BitVector) -> f64 {
        (self.cost)(x)
    }
    fn linear_costs(&self) -> Option<&[f64]> {
        self.linear.as_deref()
    }
}

/// How the budget scales with the node count. Rule-based budgets are
/// rounded down to integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetRule {
    /// `⌊log₂ n⌋`
    Log2n,
    /// `⌊√n⌋`
    Sqrtn,
    /// `⌊n/20⌋`
    N20,
    /// `⌊n/10⌋`
    N10,
    /// A fixed value, used as given.
    Explicit(f64),
}

impl BudgetRule {
    pub fn resolve(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            BudgetRule::Log2n => nf.log2().floor(),
            BudgetRule::Sqrtn => (n.isqrt()) as f64,
            BudgetRule::N20 => (n / 20) as f64,
            BudgetRule::N10 => (n / 10) as f64,
            BudgetRule::Explicit(b) => b,
        }
    }

    /// The four rules of the benchmark grid.
    pub const GRID: [BudgetRule; 4] = [
        BudgetRule::Log2n,
        BudgetRule::Sqrtn,
        BudgetRule::N20,
        BudgetRule::N10,
    ];
}

impl fmt::Display for BudgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetRule::Log2n => f.write_str("log2n"),
            BudgetRule::Sqrtn => f.write_str("sqrtn"),
            BudgetRule::N20 => f.write_str("n20"),
            BudgetRule::N10 => f.write_str("n10"),
            BudgetRule::Explicit(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for BudgetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log2n" => Ok(BudgetRule::Log2n),
            "sqrtn" => Ok(BudgetRule::Sqrtn),
            "n20" | "n/20" => Ok(BudgetRule::N20),
            "n10" | "n/10" => Ok(BudgetRule::N10),
            other => match other.parse::<f64>() {
                Ok(b) if b.is_finite() && b >= 0.0 => Ok(BudgetRule::Explicit(b)),
                _ => Err(Error::InvalidArgument(format!(
                    "budget rule must be log2n, sqrtn, n20, n10 or a non-negative number, got `{other}`"
                ))),
            },
        }
    }
}
