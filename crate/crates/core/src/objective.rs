//! Objective vectors, dominance, and individuals.
//!
//! The bi-objective formulation maximizes `f` and minimizes the cost `c`.
//! An infeasible point (cost above the budget) carries `f = -∞`, so it is
//! strictly dominated by any feasible point of no larger cost; in particular
//! by `0^n`.

use serde::Serialize;

use crate::bits::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObjectiveVector {
    /// Fitness, or `f64::NEG_INFINITY` when infeasible.
    pub f: f64,
    pub cost: f64,
    pub feasible: bool,
}

impl ObjectiveVector {
    pub fn feasible(f: f64, cost: f64) -> Self {
        Self {
            f,
            cost,
            feasible: true,
        }
    }

    pub fn infeasible(cost: f64) -> Self {
        Self {
            f: f64::NEG_INFINITY,
            cost,
            feasible: false,
        }
    }

    /// Encodes `(f, cost)` against `budget`.
    pub fn with_budget(f: f64, cost: f64, budget: f64) -> Self {
        if cost <= budget {
            Self::feasible(f, cost)
        } else {
            Self::infeasible(cost)
        }
    }

    /// `f ≥ other.f` and `cost ≤ other.cost`.
    #[inline]
    pub fn weakly_dominates(&self, other: &Self) -> bool {
        self.f >= other.f && self.cost <= other.cost
    }

    /// Weak dominance with differing vectors.
    #[inline]
    pub fn strictly_dominates(&self, other: &Self) -> bool {
        self.weakly_dominates(other) && (self.f != other.f || self.cost != other.cost)
    }

    #[inline]
    pub fn same_point(&self, other: &Self) -> bool {
        self.f == other.f && self.cost == other.cost
    }
}

/// Relation of `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// `a` strictly dominates `b`.
    Strict,
    /// Equal vectors.
    WeakOnly,
    Incomparable,
    /// `b` strictly dominates `a`.
    DominatedBy,
}

pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Dominance {
    if a.same_point(b) {
        Dominance::WeakOnly
    } else if a.weakly_dominates(b) {
        Dominance::Strict
    } else if b.weakly_dominates(a) {
        Dominance::DominatedBy
    } else {
        Dominance::Incomparable
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: BitVector,
    pub objectives: ObjectiveVector,
}

impl Individual {
    pub fn new(genotype: BitVector, objectives: ObjectiveVector) -> Self {
        Self {
            genotype,
            objectives,
        }
    }
}

/// Feasible member with maximal `f`; ties go to the lower cost, then to the
/// earlier position in `members`.
pub fn best_feasible(members: &[Individual]) -> Option<&Individual> {
    let mut best: Option<&Individual> = None;
    for m in members.iter().filter(|m| m.objectives.feasible) {
        best = match best {
            None => Some(m),
            Some(b) => {
                let (mo, bo) = (&m.objectives, &b.objectives);
                if mo.f > bo.f || (mo.f == bo.f && mo.cost < bo.cost) {
                    Some(m)
                } else {
                    Some(b)
                }
            }
        };
    }
    best
}
