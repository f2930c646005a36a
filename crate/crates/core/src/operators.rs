//! Mutation operators.
//!
//! Runs draw from [`RandomSource`], a ChaCha8 stream seeded through
//! `SeedableRng::seed_from_u64`; the same seed reproduces the same draws on
//! every platform.

use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::error::{Error, Result};

pub use rand::SeedableRng;

pub type RandomSource = ChaCha8Rng;

pub fn random_source(seed: u64) -> RandomSource {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Upper bound on resampling rounds in [`standard_bit_mutation_plus`].
pub const MAX_RESAMPLE_ROUNDS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flip each bit independently with probability `1/n`.
    Standard,
    /// Standard bit mutation, resampled until the offspring differs.
    #[default]
    StandardPlus,
}

impl Mutation {
    pub fn apply<R: Rng + ?Sized>(self, x: &BitVector, rng: &mut R) -> Result<BitVector> {
        match self {
            Mutation::Standard => Ok(standard_bit_mutation(x, rng)),
            Mutation::StandardPlus => standard_bit_mutation_plus(x, rng),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mutation::Standard => "standard",
            Mutation::StandardPlus => "standard-plus",
        }
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "sbm" => Ok(Mutation::Standard),
            "standard-plus" | "plus" | "sbm-plus" => Ok(Mutation::StandardPlus),
            other => Err(Error::InvalidArgument(format!(
                "unknown mutation operator `{other}`"
            ))),
        }
    }
}

/// Flips every bit of `x` independently with probability `1/n`.
///
/// Flip positions are generated by geometric skips (gap = number of
/// failures before the next success), which has the same law as `n`
/// independent coin tosses but costs O(#flips) draws.
pub fn standard_bit_mutation<R: Rng + ?Sized>(x: &BitVector, rng: &mut R) -> BitVector {
    let mut y = x.clone();
    flip_positions(x.len(), rng, |i| y.flip(i));
    y
}

/// Standard bit mutation conditioned on changing at least one bit.
pub fn standard_bit_mutation_plus<R: Rng + ?Sized>(
    x: &BitVector,
    rng: &mut R,
) -> Result<BitVector> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidArgument("mutation needs n >= 1".into()));
    }
    let mut y = x.clone();
    let mut flipped: Vec<usize> = Vec::new();
    for _ in 0..MAX_RESAMPLE_ROUNDS {
        flipped.clear();
        flip_positions(n, rng, |i| flipped.push(i));
        if !flipped.is_empty() {
            for &i in &flipped {
                y.flip(i);
            }
            return Ok(y);
        }
    }
    Err(Error::ResampleLimit(MAX_RESAMPLE_ROUNDS))
}

fn flip_positions<R: Rng + ?Sized>(n: usize, rng: &mut R, mut visit: impl FnMut(usize)) {
    if n == 0 {
        return;
    }
    let gap = Geometric::new(1.0 / n as f64).expect("1/n is a valid probability");
    let mut pos: u64 = 0;
    loop {
        pos += gap.sample(rng);
        if pos >= n as u64 {
            break;
        }
        visit(pos as usize);
        pos += 1;
    }
}
