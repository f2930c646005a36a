//! Non-dominated population archive.
//!
//! Members are kept sorted by ascending cost. Because no member weakly
//! dominates another, costs are pairwise distinct and `f` is strictly
//! increasing along that order, which turns both the acceptance test and
//! the removal of dominated members into binary searches over a
//! contiguous range.

use std::ops::Range;

use crate::objective::{self, Individual, ObjectiveVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// Inserted; `removed` members were weakly dominated by the newcomer.
    Accepted { removed: usize },
    /// Some member strictly dominates the newcomer.
    Rejected,
}

impl InsertOutcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, InsertOutcome::Accepted { .. })
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParetoArchive {
    members: Vec<Individual>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Archive holding a single individual.
    pub fn with_initial(initial: Individual) -> Self {
        Self {
            members: vec![initial],
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending cost order.
    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn get(&self, idx: usize) -> &Individual {
        &self.members[idx]
    }

    pub fn into_members(self) -> Vec<Individual> {
        self.members
    }

    /// Accepts `y` unless a member strictly dominates it; on acceptance,
    /// every member weakly dominated by `y` (equal vectors included) is
    /// dropped.
    pub fn insert(&mut self, y: Individual) -> InsertOutcome {
        let yv = y.objectives;
        debug_assert!(!yv.f.is_nan() && !yv.cost.is_nan(), "NaN objective");

        // Best f among members no more expensive than y sits right before
        // this split point.
        let cheaper_end = self
            .members
            .partition_point(|m| m.objectives.cost <= yv.cost);
        if cheaper_end > 0 {
            let w = &self.members[cheaper_end - 1].objectives;
            if w.strictly_dominates(&yv) {
                return InsertOutcome::Rejected;
            }
        }

        let start = self
            .members
            .partition_point(|m| m.objectives.cost < yv.cost);
        let end = start + self.members[start..].partition_point(|m| m.objectives.f <= yv.f);
        let removed = end - start;
        self.members.splice(start..end, std::iter::once(y));
        InsertOutcome::Accepted { removed }
    }

    /// Index range of members with `lo ≤ cost ≤ hi`.
    pub fn cost_range(&self, lo: f64, hi: f64) -> Range<usize> {
        let start = self.members.partition_point(|m| m.objectives.cost < lo);
        let end = self.members.partition_point(|m| m.objectives.cost <= hi);
        start..end.max(start)
    }

    /// Member whose cost equals `cost` exactly, if any.
    pub fn find_by_cost(&self, cost: f64) -> Option<&Individual> {
        let r = self.cost_range(cost, cost);
        self.members[r].first()
    }

    pub fn best_feasible(&self) -> Option<&Individual> {
        // f increases with cost, so the most expensive feasible member wins.
        let best = self.members.iter().rev().find(|m| m.objectives.feasible);
        debug_assert_eq!(
            best.map(|b| b.objectives),
            objective::best_feasible(&self.members).map(|b| b.objectives)
        );
        best
    }

    pub fn objective_vectors(&self) -> impl Iterator<Item = ObjectiveVector> + '_ {
        self.members.iter().map(|m| m.objectives)
    }
}
