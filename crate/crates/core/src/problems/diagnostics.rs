//! Small-instance diagnostics: exact optimum by enumeration, minimum
//! marginal cost gain, and submodularity ratio.

use std::cmp::Ordering;

use rand::Rng;
use serde::Serialize;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::operators::random_source;

use super::Problem;

/// Largest dimension enumerated over all `2^n` points.
pub const BRUTE_FORCE_MAX_DIMENSION: usize = 24;
/// Cap on subsets visited by the uniform-cost enumeration.
pub const BRUTE_FORCE_MAX_SUBSETS: u128 = 200_000_000;
pub const SUBMODULARITY_RATIO_MAX_DIMENSION: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub value: f64,
    #[serde(serialize_with = "serialize_bits")]
    pub witness: BitVector,
}

fn serialize_bits<S: serde::Serializer>(
    b: &BitVector,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(b.ones_iter())
}

/// Lexicographic order of the ascending index lists of selected elements
/// (`[0] < [0, 1] < [1]`).
fn lex_cmp(a: &BitVector, b: &BitVector) -> Ordering {
    let (mut ia, mut ib) = (a.ones_iter(), b.ones_iter());
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x != y => return x.cmp(&y),
            _ => {}
        }
    }
}

struct Best {
    value: f64,
    witness: Option<BitVector>,
}

impl Best {
    fn offer(&mut self, value: f64, x: &BitVector) {
        let better = match &self.witness {
            None => true,
            Some(w) => {
                value > self.value || (value == self.value && lex_cmp(x, w) == Ordering::Less)
            }
        };
        if better {
            self.value = value;
            self.witness = Some(x.clone());
        }
    }
}

/// Exact maximum of `f` over feasible points; among optimal points the
/// one with the lexicographically smallest index list is returned.
///
/// Enumerates all of `{0,1}^n` for `n ≤ 24`; otherwise only uniform-cost
/// instances with `⌊B⌋ ≤ 3` are accepted, enumerating all subsets of size
/// at most `⌊B⌋`.
pub fn brute_force_optimum<P: Problem + ?Sized>(problem: &P) -> Result<Optimum> {
    let n = problem.dimension();
    let budget = problem.budget();
    let mut best = Best {
        value: f64::NEG_INFINITY,
        witness: None,
    };

    if n <= BRUTE_FORCE_MAX_DIMENSION {
        for mask in 0u64..(1u64 << n) {
            let x = BitVector::from_mask(n, mask);
            if problem.cost(&x) <= budget {
                best.offer(problem.objective(&x), &x);
            }
        }
    } else if problem.has_uniform_cost() && budget.floor() <= 3.0 {
        let r = (budget.floor().max(0.0) as usize).min(n);
        let visits: u128 = (0..=r).map(|k| binomial(n, k)).sum();
        if visits > BRUTE_FORCE_MAX_SUBSETS {
            return Err(Error::TooLarge(format!(
                "{visits} subsets of size <= {r} out of {n}"
            )));
        }
        let mut x = BitVector::zeros(n);
        for_each_subset_up_to(n, r, 0, &mut x, &mut |x| {
            best.offer(problem.objective(x), x)
        });
    } else {
        return Err(Error::TooLarge(format!(
            "n = {n} exceeds {BRUTE_FORCE_MAX_DIMENSION} and the instance is not a uniform constraint with r <= 3"
        )));
    }

    match best.witness {
        Some(witness) => Ok(Optimum {
            value: best.value,
            witness,
        }),
        None => Err(Error::InvalidArgument(
            "no feasible point (cost of 0^n exceeds budget)".into(),
        )),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn for_each_subset_up_to(
    n: usize,
    r: usize,
    start: usize,
    x: &mut BitVector,
    visit: &mut impl FnMut(&BitVector),
) {
    visit(x);
    if r == 0 {
        return;
    }
    for i in start..n {
        x.set(i, true);
        for_each_subset_up_to(n, r - 1, i + 1, x, visit);
        x.set(i, false);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalGain {
    pub value: f64,
    /// False when `value` is a sampled upper estimate.
    pub exact: bool,
}

/// Smallest increase of the cost from adding one element.
///
/// Exact for linear costs (the minimum coefficient). For opaque costs the
/// minimum over `sample_budget` random `(x, i)` pairs with `xᵢ = 0`, which
/// can only overestimate the true minimum.
pub fn min_marginal_gain<P: Problem + ?Sized>(
    problem: &P,
    sample_budget: usize,
    seed: u64,
) -> Result<MarginalGain> {
    if let Some(w) = problem.linear_costs() {
        let value = w.iter().copied().fold(f64::INFINITY, f64::min);
        return Ok(MarginalGain { value, exact: true });
    }
    let n = problem.dimension();
    if n == 0 || sample_budget == 0 {
        return Err(Error::InvalidArgument(
            "sampling needs n >= 1 and a positive sample budget".into(),
        ));
    }
    let mut rng = random_source(seed);
    let mut value = f64::INFINITY;
    for _ in 0..sample_budget {
        let bools: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let mut x = BitVector::from_bools(&bools);
        let i = rng.random_range(0..n);
        x.set(i, false);
        let base = problem.cost(&x);
        x.set(i, true);
        value = value.min(problem.cost(&x) - base);
    }
    Ok(MarginalGain {
        value,
        exact: false,
    })
}

/// `min (f(x⊕eᵢ) − f(x)) / (c(y⊕eᵢ) − c(y))` over `x ≤ y`, `xᵢ = yᵢ = 0`.
pub fn submodularity_ratio_bruteforce<P: Problem + ?Sized>(problem: &P) -> Result<f64> {
    let n = problem.dimension();
    if n > SUBMODULARITY_RATIO_MAX_DIMENSION {
        return Err(Error::TooLarge(format!(
            "submodularity ratio enumeration needs n <= {SUBMODULARITY_RATIO_MAX_DIMENSION}, got {n}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "submodularity ratio needs n >= 1".into(),
        ));
    }
    let size = 1usize << n;
    let mut f = Vec::with_capacity(size);
    let mut c = Vec::with_capacity(size);
    for mask in 0..size as u64 {
        let x = BitVector::from_mask(n, mask);
        f.push(problem.objective(&x));
        c.push(problem.cost(&x));
    }

    let full = size - 1;
    let mut ratio = f64::INFINITY;
    for y in 0..full {
        for i in (0..n).filter(|i| y >> i & 1 == 0) {
            let bit = 1usize << i;
            let denom = c[y | bit] - c[y];
            if denom.is_nan() || denom <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "cost gain {denom} at y = {y:#b}, i = {i} is not positive"
                )));
            }
            // all submasks x of y, including y itself and 0
            let mut x = y;
            loop {
                ratio = ratio.min((f[x | bit] - f[x]) / denom);
                if x == 0 {
                    break;
                }
                x = (x - 1) & y;
            }
        }
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CostModel, Graph};
    use crate::problems::{CoverageInstance, OracleProblem};

    fn coverage(n: usize, edges: &[(usize, usize)], budget: f64) -> CoverageInstance {
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        CoverageInstance::from_graph(&g, &CostModel::Uniform, budget).unwrap()
    }

    #[test]
    fn star_optimum_is_the_hub() {
        let inst = coverage(4, &[(0, 1), (0, 2), (0, 3)], 1.0);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.value, 4.0);
        assert_eq!(opt.witness, BitVector::from_indices(4, [0]));
    }

    #[test]
    fn zero_budget_gives_empty_witness() {
        let inst = coverage(4, &[(0, 1), (0, 2), (0, 3)], 0.0);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.value, 0.0);
        assert!(opt.witness.is_zero());
    }

    #[test]
    fn path_optimum_is_the_middle() {
        let inst = coverage(3, &[(0, 1), (1, 2)], 1.0);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.value, 3.0);
        assert_eq!(opt.witness, BitVector::from_indices(3, [1]));
    }

    #[test]
    fn ties_pick_lexicographically_smallest() {
        // Two disjoint edges: {0} and {2} both cover 2 nodes.
        let inst = coverage(4, &[(0, 1), (2, 3)], 1.0);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.value, 2.0);
        assert_eq!(opt.witness, BitVector::from_indices(4, [0]));
    }

    #[test]
    fn large_uniform_instance_uses_subset_enumeration() {
        let n = 40;
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        let inst = coverage(n, &edges, 2.0);
        let opt = brute_force_optimum(&inst).unwrap();
        assert_eq!(opt.value, 40.0);
        assert_eq!(opt.witness, BitVector::from_indices(n, [0]));

        let big = coverage(n, &edges, 4.0);
        assert!(matches!(brute_force_optimum(&big), Err(Error::TooLarge(_))));
    }

    #[test]
    fn large_subset_counts_are_refused() {
        let n = 3000;
        let inst = coverage(n, &[(0, 1)], 3.0);
        assert!(matches!(
            brute_force_optimum(&inst),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn marginal_gain_linear() {
        let uniform = OracleProblem::with_linear_cost(1.0, vec![1.0; 5], |_| 0.0);
        assert_eq!(
            min_marginal_gain(&uniform, 0, 0).unwrap(),
            MarginalGain {
                value: 1.0,
                exact: true
            }
        );
        let w = OracleProblem::with_linear_cost(1.0, vec![0.6, 1.2, 0.9], |_| 0.0);
        assert_eq!(min_marginal_gain(&w, 0, 0).unwrap().value, 0.6);
        let ints = OracleProblem::with_linear_cost(1.0, vec![2.0, 3.0, 5.0], |_| 0.0);
        assert_eq!(min_marginal_gain(&ints, 0, 0).unwrap().value, 2.0);
    }

    #[test]
    fn marginal_gain_sampled_is_flagged() {
        // c(x) = 2|x| + [x₀]: true minimum 2
        let p = OracleProblem::new(
            6,
            3.0,
            |_| 0.0,
            |x| 2.0 * x.count_ones() as f64 + x.get(0) as u8 as f64,
        );
        let g = min_marginal_gain(&p, 500, 4).unwrap();
        assert!(!g.exact);
        assert_eq!(g.value, 2.0);
        assert!(min_marginal_gain(&p, 0, 4).is_err());
    }

    #[test]
    fn ratio_of_popcount_pairs() {
        let p = OracleProblem::new(6, 3.0, |x| x.count_ones() as f64, |x| x.count_ones() as f64);
        assert_eq!(submodularity_ratio_bruteforce(&p).unwrap(), 1.0);
        let p = OracleProblem::new(
            6,
            3.0,
            |x| 2.0 * x.count_ones() as f64,
            |x| x.count_ones() as f64,
        );
        assert_eq!(submodularity_ratio_bruteforce(&p).unwrap(), 2.0);
    }

    #[test]
    fn ratio_is_non_negative_for_monotone_f() {
        // f has a zero-gain element (node 3 is covered by the hub and adds nothing at x = {0})
        let inst = coverage(6, &[(0, 1), (0, 2), (0, 3), (4, 5)], 2.0);
        let r = submodularity_ratio_bruteforce(&inst).unwrap();
        assert!(r >= 0.0);
        // coverage is submodular w.r.t. uniform cost, yet some gain is 0 -> ratio 0
        assert_eq!(r, 0.0);
    }

    #[test]
    fn ratio_refuses_large_n() {
        let p = OracleProblem::new(13, 3.0, |_| 0.0, |x| x.count_ones() as f64);
        assert!(matches!(
            submodularity_ratio_bruteforce(&p),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn ratio_rejects_flat_cost() {
        let p = OracleProblem::new(3, 3.0, |_| 0.0, |_| 0.0);
        assert!(submodularity_ratio_bruteforce(&p).is_err());
    }

    #[test]
    fn lexicographic_order() {
        let v = |ix: &[usize]| BitVector::from_indices(70, ix.iter().copied());
        assert_eq!(lex_cmp(&v(&[1]), &v(&[69])), Ordering::Less);
        assert_eq!(lex_cmp(&v(&[0]), &v(&[0, 1])), Ordering::Less);
        assert_eq!(lex_cmp(&v(&[0, 1]), &v(&[1])), Ordering::Less);
        assert_eq!(lex_cmp(&v(&[]), &v(&[0])), Ordering::Less);
        assert_eq!(lex_cmp(&v(&[5, 69]), &v(&[5, 69])), Ordering::Equal);
    }
}
