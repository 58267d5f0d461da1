use rayon::prelude::*;

use super::{Expectation, VerificationReport};
use crate::error::{Error, Result};
use crate::lattice::{iterated_sumdiff, PointSet, SumDiffSpec};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Whether `v = c₁·a₁ + c₂·x` with `c₁ ≥ 1` and `0 ≤ c₂·x ≤ a₁`.
fn fits(v: i64, a1: i64, x: i64) -> bool {
    (0..=a1 / x).any(|c2| {
        let r = v - c2 * x;
        r >= a1 && r % a1 == 0
    })
}

/// Admissible elements above `a₁` and at most `a₁ · size_max`.
pub fn theorem_a1_pool(a1: i64, x: i64, size_max: i64) -> Vec<i64> {
    let hi = a1 * size_max;
    let mut pool: Vec<i64> = (a1 + 1..=hi).filter(|&v| fits(v, a1, x)).collect();
    pool.dedup();
    pool
}

/// `(a₁, x)` for the first `x` under which `A` has the shape; `None` otherwise.
pub fn is_a1_shape(a: &PointSet) -> Option<(i64, i64)> {
    let xs = a.to_ints().ok()?;
    if xs.len() < 2 || xs[0] != 0 {
        return None;
    }
    let a1 = xs[1];
    (2..a1).filter(|&x| gcd(a1, x) == 1).find(|&x| xs[2..].iter().all(|&v| fits(v, a1, x))).map(|x| (a1, x))
}

/// One scanned set and its comparison `|A − A|` against `|A + A|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A1Instance {
    pub a1: i64,
    pub x: i64,
    pub set: Vec<i64>,
    pub report: VerificationReport,
}

fn subsets(pool: &[i64], max_len: usize, prefix: &mut Vec<i64>, start: usize, out: &mut Vec<Vec<i64>>) {
    out.push(prefix.clone());
    if prefix.len() == max_len {
        return;
    }
    for i in start..pool.len() {
        prefix.push(pool[i]);
        subsets(pool, max_len, prefix, i + 1, out);
        prefix.pop();
    }
}

/// Every `A = {0, a₁, a₂, …, a_m}` of the shape with `a₁ ≤ a1_max`,
/// `1 < x < a₁` coprime to `a₁`, `x ≤ x_max`, `m ≤ size_max`, ordered by
/// `(a₁, x, elements)`.
pub fn theorem_a1_scan(a1_max: i64, x_max: i64, size_max: i64) -> Result<Vec<A1Instance>> {
    if a1_max < 1 || x_max < 1 || size_max < 1 {
        return Err(Error::arg("scan bounds must be positive"));
    }
    let mut jobs = Vec::new();
    for a1 in 3..=a1_max {
        for x in (2..a1.min(x_max + 1)).filter(|&x| gcd(a1, x) == 1) {
            let pool = theorem_a1_pool(a1, x, size_max);
            let mut sets = Vec::new();
            subsets(&pool, (size_max - 1) as usize, &mut Vec::new(), 0, &mut sets);
            for tail in sets {
                let mut set = vec![0, a1];
                set.extend(tail);
                jobs.push((a1, x, set));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(a1, x, set)| {
            let a = PointSet::from_ints(&set);
            let diff = iterated_sumdiff(&a, SumDiffSpec::DIFF)?.len() as u64;
            let sum = iterated_sumdiff(&a, SumDiffSpec::SUM)?.len() as u64;
            let report = VerificationReport::new(SumDiffSpec::DIFF, diff, SumDiffSpec::SUM, sum, Expectation::AtLeast);
            Ok(A1Instance { a1, x, set, report })
        })
        .collect()
}

/// Left window `kA ∩ [0, a₁a_m]` against the right windows
/// `kA ∩ [(k − a₁)a_m, ka_m]` and `kA ∩ [(k − 1)a_m, ka_m]`, each reflected
/// through `ka_m / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FringeWindows {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub right_short: Vec<i64>,
    pub mirrored: bool,
    pub short_mirrored: bool,
}

pub fn fringe_windows(a: &PointSet, k: u32) -> Result<FringeWindows> {
    let xs = a.to_ints()?;
    if xs.len() < 2 || xs[0] != 0 {
        return Err(Error::arg("need A = {0, a1, ..., am} with at least two elements"));
    }
    let (a1, am) = (xs[1], *xs.last().unwrap());
    let ka = iterated_sumdiff(a, SumDiffSpec::new(k, 0))?.to_ints()?;
    let top = k as i64 * am;
    let window = |lo: i64, hi: i64| -> Vec<i64> { ka.iter().copied().filter(|&v| lo <= v && v <= hi).collect() };
    let reflect = |w: &[i64]| -> Vec<i64> {
        let mut r: Vec<i64> = w.iter().map(|&v| top - v).collect();
        r.sort_unstable();
        r
    };
    let left = window(0, a1 * am);
    let right = reflect(&window((k as i64 - a1) * am, top));
    let right_short = reflect(&window((k as i64 - 1) * am, top));
    Ok(FringeWindows { mirrored: left == right, short_mirrored: left == right_short, left, right, right_short })
}
