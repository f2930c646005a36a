//! Summary statistics and the two-sided Mann-Whitney U test.
//!
//! Small samples (`min(|a|, |b|) < 8`) get the exact permutation
//! distribution of the rank sum, computed by dynamic programming over
//! midranks, so ties are handled exactly. Larger samples use the normal
//! approximation with tie-corrected variance and continuity correction,
//! refined by the first Edgeworth term (the permutation fourth cumulant of
//! the rank sum); the distribution is symmetric, so skewness vanishes.

use serde::Serialize;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Significance threshold for reported p-values.
pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Samples this small on either side use the exact distribution.
pub const EXACT_BELOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (k − 1 denominator); 0 for a single value.
    pub std: f64,
}

pub fn summarize(sample: &[f64]) -> Result<Summary> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let k = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / k;
    let std = if sample.len() < 2 {
        0.0
    } else {
        (sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    };
    Ok(Summary { mean, std })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UTestMethod {
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UTest {
    /// `U` of the first sample: pairs `(x, y)` with `x > y`, ties count ½.
    pub u: f64,
    pub p_value: f64,
    pub method: UTestMethod,
}

/// Two-sided Mann-Whitney U test; exact below [`EXACT_BELOW`], normal
/// approximation otherwise.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<UTest> {
    if a.len().min(b.len()) < EXACT_BELOW {
        mann_whitney_exact(a, b)
    } else {
        mann_whitney_normal(a, b)
    }
}

/// Midranks of `a ++ b`, doubled so they are integers.
fn doubled_midranks(a: &[f64], b: &[f64]) -> Result<Vec<u64>> {
    let mut idx: Vec<(f64, usize)> = a.iter().chain(b).copied().zip(0..).collect();
    if idx.iter().any(|(v, _)| v.is_nan()) {
        return Err(Error::InvalidArgument("NaN in sample".into()));
    }
    idx.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks = vec![0u64; idx.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && idx[j + 1].0 == idx[i].0 {
            j += 1;
        }
        // positions i..=j get ranks i+1..=j+1; doubled midrank is i+j+2
        for entry in &idx[i..=j] {
            ranks[entry.1] = (i + j + 2) as u64;
        }
        i = j + 1;
    }
    Ok(ranks)
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(())
}

/// U of `a` from doubled rank sum.
fn u_from_doubled(rank_sum2: u64, m: usize) -> f64 {
    rank_sum2 as f64 / 2.0 - (m * (m + 1)) as f64 / 2.0
}

pub fn mann_whitney_exact(a: &[f64], b: &[f64]) -> Result<UTest> {
    check_samples(a, b)?;
    let ranks = doubled_midranks(a, b)?;
    let (ra, rb) = ranks.split_at(a.len());
    let u = u_from_doubled(ra.iter().sum(), a.len());

    // Work with the smaller sample; its rank-sum distribution is over all
    // subsets of that size.
    let (m, observed) = if a.len() <= b.len() {
        (a.len(), ra.iter().sum::<u64>())
    } else {
        (b.len(), rb.iter().sum::<u64>())
    };
    let max_sum: u64 = {
        let mut sorted = ranks.clone();
        sorted.sort_unstable_by(|x, y| y.cmp(x));
        sorted[..m].iter().sum()
    };
    let width = max_sum as usize + 1;
    // counts[k][s]: subsets of size k with doubled rank sum s
    let mut counts = vec![vec![0f64; width]; m + 1];
    counts[0][0] = 1.0;
    for &r in &ranks {
        let r = r as usize;
        for k in (1..=m).rev() {
            let (lower, upper) = counts.split_at_mut(k);
            let prev = &lower[k - 1];
            let cur = &mut upper[0];
            for s in (r..width).rev() {
                if prev[s - r] != 0.0 {
                    cur[s] += prev[s - r];
                }
            }
        }
    }
    let dist = &counts[m];
    let total: f64 = dist.iter().sum();
    let obs = observed as usize;
    let lower: f64 = dist[..=obs].iter().sum();
    let upper: f64 = dist[obs..].iter().sum();
    let p_value = (2.0 * lower.min(upper) / total).min(1.0);
    Ok(UTest {
        u,
        p_value,
        method: UTestMethod::Exact,
    })
}

pub fn mann_whitney_normal(a: &[f64], b: &[f64]) -> Result<UTest> {
    check_samples(a, b)?;
    let ranks = doubled_midranks(a, b)?;
    let m = a.len();
    let big_n = ranks.len();
    let u = u_from_doubled(ranks[..m].iter().sum(), m);
    let mean = (m * b.len()) as f64 / 2.0;

    let (variance, kappa4) = rank_sum_cumulants(&ranks, m);
    if variance <= 0.0 {
        // every observation tied
        return Ok(UTest {
            u,
            p_value: 1.0,
            method: UTestMethod::Normal,
        });
    }
    let sd = variance.sqrt();
    let z = ((u - mean).abs() - 0.5) / sd;
    let normal = Normal::standard();
    let excess_kurtosis = if big_n >= 4 {
        kappa4 / (variance * variance)
    } else {
        0.0
    };
    let tail = normal.sf(z) + excess_kurtosis / 24.0 * (z.powi(3) - 3.0 * z) * normal.pdf(z);
    let p_value = (2.0 * tail).clamp(0.0, 1.0);
    Ok(UTest {
        u,
        p_value,
        method: UTestMethod::Normal,
    })
}

/// Variance and fourth cumulant of the sum of `m` scores drawn without
/// replacement from `ranks` (halved, i.e. actual midranks).
fn rank_sum_cumulants(ranks2: &[u64], m: usize) -> (f64, f64) {
    let n = ranks2.len() as f64;
    let scores: Vec<f64> = ranks2.iter().map(|&r| r as f64 / 2.0).collect();
    let centre = scores.iter().sum::<f64>() / n;
    let (s2, s4) = scores.iter().fold((0.0, 0.0), |(s2, s4), r| {
        let d = r - centre;
        (s2 + d * d, s4 + d.powi(4))
    });
    // p[k]: probability that k given distinct items are all drawn
    let falling = |x: f64, k: usize| (0..k).map(|i| x - i as f64).product::<f64>();
    let mf = m as f64;
    let p: Vec<f64> = (0..5)
        .map(|k| {
            if falling(n, k) == 0.0 {
                0.0
            } else {
                falling(mf, k) / falling(n, k)
            }
        })
        .collect();
    let second = s2 * (p[1] - p[2]);
    let fourth = s4 * p[1] - 4.0 * s4 * p[2]
        + 3.0 * (s2 * s2 - s4) * p[2]
        + 6.0 * (2.0 * s4 - s2 * s2) * p[3]
        + (3.0 * s2 * s2 - 6.0 * s4) * p[4];
    (second, fourth - 3.0 * second * second)
}
