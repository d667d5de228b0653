//! Nested level sets and the per-scale base samples, drawn from a seeded
//! counter-based generator so membership is reproducible regardless of
//! iteration order.

use crate::dist::Vertex;
use crate::error::{Error, Result};
use crate::rng::{domain, keyed_bernoulli_pow2};
use serde::Serialize;

/// Nested vertex sets `levels[0] ⊇ levels[1] ⊇ …`, with `levels[0]` the full
/// vertex set. Membership at level i has marginal rate 2^-2^i: the level-1
/// conditional rate is 1/4 and each later level keeps a survivor with
/// probability 2^-2^(i-1), which telescopes to the marginal rate.
#[derive(Clone, Debug, Serialize)]
pub struct SampleHierarchy {
    pub levels: Vec<Vec<Vertex>>,
    /// Highest level containing each vertex (0 = only the full set).
    pub level_of: Vec<u8>,
    pub seed: u64,
}

/// Number of levels for an n-vertex graph: max(1, floor(log2 log2 n)).
pub fn level_count(n: usize) -> usize {
    assert!(n >= 2);
    let log_n = (n as u64).ilog2();
    if log_n < 2 {
        1
    } else {
        (log_n.ilog2() as usize).max(1)
    }
}

/// Expected spacing scale of level i: 2^(2^i), the reciprocal of the
/// marginal sampling rate. Saturates for out-of-range exponents.
pub fn level_scale(i: usize) -> u64 {
    if i >= 6 {
        return u64::MAX;
    }
    1u64 << (1u32 << i)
}

fn conditional_bits(i: usize) -> u32 {
    // Marginal 2^-2^i at every level: 2 bits for level 1, then 2^(i-1) bits.
    if i == 1 {
        2
    } else {
        1 << (i - 1)
    }
}

pub fn build_hierarchy(n: usize, seed: u64) -> Result<SampleHierarchy> {
    if n < 2 {
        return Err(Error::GraphTooSmall { n, min: 2 });
    }
    let levels_n = level_count(n);
    let mut levels: Vec<Vec<Vertex>> = Vec::with_capacity(levels_n);
    levels.push((0..n as Vertex).collect());
    for i in 1..levels_n {
        let bits = conditional_bits(i);
        let kept: Vec<Vertex> = levels[i - 1]
            .iter()
            .copied()
            .filter(|&v| keyed_bernoulli_pow2(seed, domain::HIERARCHY, i as u64, v as u64, bits))
            .collect();
        levels.push(kept);
    }
    let mut level_of = vec![0u8; n];
    for (i, level) in levels.iter().enumerate().skip(1) {
        for &v in level {
            level_of[v as usize] = i as u8;
        }
    }
    Ok(SampleHierarchy {
        levels,
        level_of,
        seed,
    })
}

impl SampleHierarchy {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn contains(&self, level: usize, v: Vertex) -> bool {
        self.level_of[v as usize] as usize >= level
    }

    /// Debug/test dump: {"L":…, "levels":[[…],…], "seed":…}.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "L": self.level_count(),
            "levels": self.levels,
            "seed": self.seed,
        })
        .to_string()
    }
}

/// One Bernoulli(2^-scale) vertex sample per scale in `[lo, hi]`, where
/// hi = floor(log2 n) and lo = floor(hi / 2).
#[derive(Clone, Debug, Serialize)]
pub struct BaseSamples {
    pub lo: u32,
    pub hi: u32,
    /// samples[j] holds the sample at scale lo + j.
    pub samples: Vec<Vec<Vertex>>,
    pub seed: u64,
}

pub fn base_scale_range(n: usize) -> (u32, u32) {
    let hi = (n as u64).ilog2();
    (hi / 2, hi)
}

pub fn build_base_samples(n: usize, seed: u64) -> Result<BaseSamples> {
    if n < 4 {
        return Err(Error::GraphTooSmall { n, min: 4 });
    }
    let (lo, hi) = base_scale_range(n);
    let mut samples = Vec::with_capacity((hi - lo + 1) as usize);
    for scale in lo..=hi {
        let sample: Vec<Vertex> = (0..n as Vertex)
            .filter(|&v| {
                keyed_bernoulli_pow2(seed, domain::BASE_SAMPLE, scale as u64, v as u64, scale)
            })
            .collect();
        samples.push(sample);
    }
    Ok(BaseSamples {
        lo,
        hi,
        samples,
        seed,
    })
}

impl BaseSamples {
    pub fn scales(&self) -> impl Iterator<Item = (u32, &[Vertex])> {
        (self.lo..=self.hi).zip(self.samples.iter().map(|s| s.as_slice()))
    }
}
