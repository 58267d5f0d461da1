//! Random subsets of `{0, …, n}` and the fraction that satisfy a predicate.
//!
//! Trial `i` draws from ChaCha8 keyed by the seed on stream `i`, so every
//! trial is reproducible on its own and the estimate does not depend on how
//! trials are spread across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{iterated_sumdiff, PointSet, SumDiffSpec};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Included elements of `{0, …, n}`, each with probability 1/2.
fn sample_bits(n: u64, seed: u64, trial: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut out = Vec::with_capacity(n as usize / 2 + 1);
    let mut word = 0u64;
    for x in 0..=n {
        if x % 64 == 0 {
            word = rng.next_u64();
        }
        if word >> (x % 64) & 1 == 1 {
            out.push(x as i64);
        }
    }
    out
}

/// The subset drawn by trial `trial_index`.
pub fn sample_subset(n: u64, seed: u64, trial_index: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::arg("n must be at least 1"));
    }
    Ok(PointSet::from_ints(&sample_bits(n, seed, trial_index)))
}

/// What counts as a hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predicate {
    /// `|A + A| > |A − A|`.
    Mstd,
    /// `|s₁A − d₁A| > |s₂A − d₂A|`.
    Generalized(SumDiffSpec, SumDiffSpec),
    /// Never a hit.
    Never,
}

impl Predicate {
    pub fn holds(&self, a: &PointSet) -> Result<bool> {
        if a.is_empty() {
            return Ok(false);
        }
        match *self {
            Predicate::Mstd => Ok(mstd_1d(&a.to_ints()?)),
            Predicate::Generalized(s1, s2) => {
                Ok(iterated_sumdiff(a, s1)?.len() > iterated_sumdiff(a, s2)?.len())
            }
            Predicate::Never => Ok(false),
        }
    }
}

/// `|A + A| > |A − A|` for a sorted set of small non-negative integers,
/// with sumsets held as bit masks.
fn mstd_1d(xs: &[i64]) -> bool {
    let Some(&top) = xs.last() else { return false };
    let words = (2 * top as usize) / 64 + 1;
    let mut sums = vec![0u64; words];
    let mut diffs = vec![0u64; words];
    for (i, &a) in xs.iter().enumerate() {
        for &b in &xs[i..] {
            let s = (a + b) as usize;
            sums[s / 64] |= 1 << (s % 64);
            let d = (b - a) as usize;
            diffs[d / 64] |= 1 << (d % 64);
        }
    }
    let s: u32 = sums.iter().map(|w| w.count_ones()).sum();
    let d: u32 = diffs.iter().map(|w| w.count_ones()).sum();
    // Non-negative differences count once; the negatives mirror all but 0.
    s as i64 > 2 * d as i64 - 1
}

/// Proportion of hits with a 95% Wilson score interval.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate {
    pub n: u64,
    pub trials: u64,
    pub hits: u64,
    pub proportion: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

/// `(low, high)` Wilson interval for `hits` out of `trials`.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Runs `trials` independent samples. `workers = 0` uses the global pool;
/// the result is identical for every worker count.
pub fn estimate_density(n: u64, trials: u64, seed: u64, predicate: Predicate, workers: usize) -> Result<DensityEstimate> {
    let hit_list = trial_hits(n, trials, seed, predicate, workers)?;
    let hits = hit_list.len() as u64;
    let (ci_low, ci_high) = wilson_interval(hits, trials);
    Ok(DensityEstimate { n, trials, hits, proportion: hits as f64 / trials as f64, ci_low, ci_high, seed })
}

/// Indices of the trials that hit, in increasing order.
pub fn trial_hits(n: u64, trials: u64, seed: u64, predicate: Predicate, workers: usize) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::arg("n must be at least 1"));
    }
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let run = || -> Result<Vec<u64>> {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let xs = sample_bits(n, seed, i);
                let hit = match predicate {
                    Predicate::Mstd => Ok(mstd_1d(&xs)),
                    _ => predicate.holds(&PointSet::from_ints(&xs)),
                };
                hit.map(|h| h.then_some(i))
            })
            .filter_map(|r| r.transpose())
            .collect()
    };
    if workers == 0 {
        return run();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::arg(format!("thread pool: {e}")))?
        .install(run)
}
