use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::graph::{assign_costs, closed_neighborhoods, CostModel, Graph, Neighborhoods};

use super::{check_dimension, Problem};

/// Maximum coverage on a graph: `f(x) = |⋃_{xᵢ=1} N(vᵢ)|`, `c(x) = Σ c(vᵢ) xᵢ`.
#[derive(Debug, Clone)]
pub struct CoverageInstance {
    neighborhoods: Neighborhoods,
    node_costs: Vec<f64>,
    budget: f64,
}

impl CoverageInstance {
    pub fn new(neighborhoods: Neighborhoods, node_costs: Vec<f64>, budget: f64) -> Result<Self> {
        let n = neighborhoods.node_count();
        if node_costs.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} node costs for {n} nodes",
                node_costs.len()
            )));
        }
        if let Some((i, c)) = node_costs
            .iter()
            .enumerate()
            .find(|(_, &c)| !(c > 0.0 && c.is_finite()))
        {
            return Err(Error::InvalidArgument(format!(
                "node {i} has non-positive cost {c}"
            )));
        }
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "budget must be finite and >= 0, got {budget}"
            )));
        }
        Ok(Self {
            neighborhoods,
            node_costs,
            budget,
        })
    }

    pub fn from_graph(graph: &Graph, model: &CostModel, budget: f64) -> Result<Self> {
        Self::new(
            closed_neighborhoods(graph),
            assign_costs(graph, model)?,
            budget,
        )
    }

    pub fn node_count(&self) -> usize {
        self.node_costs.len()
    }

    pub fn neighborhoods(&self) -> &Neighborhoods {
        &self.neighborhoods
    }

    pub fn node_costs(&self) -> &[f64] {
        &self.node_costs
    }

    /// Same instance under a different budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        Self::new(self.neighborhoods.clone(), self.node_costs.clone(), budget)
    }

    pub fn coverage_value(&self, x: &BitVector) -> Result<usize> {
        check_dimension(self.node_count(), x)?;
        Ok(self.covered(x))
    }

    pub fn cost_value(&self, x: &BitVector) -> Result<f64> {
        check_dimension(self.node_count(), x)?;
        Ok(self.linear_cost(x))
    }

    fn covered(&self, x: &BitVector) -> usize {
        let mut union = vec![0u64; self.node_count().div_ceil(64)];
        for i in x.ones_iter() {
            for &u in self.neighborhoods.of(i) {
                union[u >> 6] |= 1u64 << (u & 63);
            }
        }
        union.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn linear_cost(&self, x: &BitVector) -> f64 {
        x.ones_iter().fold(0.0, |acc, i| acc + self.node_costs[i])
    }
}

impl Problem for CoverageInstance {
    fn dimension(&self) -> usize {
        self.node_count()
    }

    fn budget(&self) -> f64 {
        self.budget
    }

    fn objective(&self, x: &BitVector) -> f64 {
        debug_assert_eq!(x.len(), self.node_count());
        self.covered(x) as f64
    }

    fn cost(&self, x: &BitVector) -> f64 {
        debug_assert_eq!(x.len(), self.node_count());
        self.linear_cost(x)
    }

    fn linear_costs(&self) -> Option<&[f64]> {
        Some(&self.node_costs)
    }
}
