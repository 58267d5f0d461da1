use super::{Expectation, VerificationReport};
use crate::error::{Error, Result};
use crate::lattice::{iterated_sumdiff, minkowski_sum, PointSet, SumDiffSpec};

/// The quantities `a, a′, b, b′` and threshold `N = max(2a′², 2b′²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthHypotheses {
    pub a: i64,
    pub a_prime: i64,
    pub b: i64,
    pub b_prime: i64,
    pub n: u64,
}

/// `μ(k) = (ka′+1)(kb′+1) − |kA| = alpha + beta·k` on `fit_range`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthProfile {
    pub hypotheses: GrowthHypotheses,
    pub alpha: i64,
    pub beta: i64,
    pub fit_range: (u64, u64),
    /// `μ(k)` for every `k` in `fit_range`.
    pub missing: Vec<i64>,
    /// Columns (resp. rows) of `NA` absent from the middle row (resp. column).
    pub missing_columns: u64,
    pub missing_rows: u64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl GrowthHypotheses {
    /// Smallest non-zero and largest coordinate on each axis; requires
    /// non-negative coordinates, coprime pairs, and the nine corner points.
    pub fn check(a: &PointSet) -> Result<GrowthHypotheses> {
        if a.dim() != 2 {
            return Err(Error::Dimension { expected: 2, found: a.dim() });
        }
        let (lo, hi) = a.bounding_box()?;
        if lo.coords().iter().any(|&x| x < 0) {
            return Err(Error::Hypothesis("coordinates must be non-negative".into()));
        }
        let mut ax = i64::MAX;
        let mut by = i64::MAX;
        a.for_each_point(|p| {
            if p[0] > 0 {
                ax = ax.min(p[0]);
            }
            if p[1] > 0 {
                by = by.min(p[1]);
            }
        });
        if ax == i64::MAX || by == i64::MAX {
            return Err(Error::Hypothesis("every coordinate axis needs a non-zero value".into()));
        }
        let (ap, bp) = (hi.coords()[0], hi.coords()[1]);
        if gcd(ax, ap) != 1 {
            return Err(Error::Hypothesis(format!("gcd(a, a') = gcd({ax}, {ap}) = {}", gcd(ax, ap))));
        }
        if gcd(by, bp) != 1 {
            return Err(Error::Hypothesis(format!("gcd(b, b') = gcd({by}, {bp}) = {}", gcd(by, bp))));
        }
        for p in [(0, 0), (ax, 0), (0, by), (ap, 0), (0, bp), (ax, by), (ax, bp), (ap, by), (ap, bp)] {
            if !a.contains_coords(&[p.0, p.1]) {
                return Err(Error::Hypothesis(format!("missing point ({},{})", p.0, p.1)));
            }
        }
        let n = (2 * ap * ap).max(2 * bp * bp) as u64;
        Ok(GrowthHypotheses { a: ax, a_prime: ap, b: by, b_prime: bp, n })
    }

    fn box_volume(&self, k: u64) -> i64 {
        (k as i64 * self.a_prime + 1) * (k as i64 * self.b_prime + 1)
    }
}

fn kfold(a: &PointSet, k: u64) -> Result<PointSet> {
    let k = u32::try_from(k).map_err(|_| Error::Overflow(format!("k = {k} is too large")))?;
    iterated_sumdiff(a, SumDiffSpec::new(k, 0))
}

/// Fits `μ` on `N, N+1, N+2` and checks the fit exactly on `N+3 … N+5`.
pub fn growth_profile(a: &PointSet) -> Result<GrowthProfile> {
    let h = GrowthHypotheses::check(a)?;
    growth_profile_through(a, h.n + 5)
}

/// As [`growth_profile`], checking every `k` up to `kmax ≥ N + 2`.
pub fn growth_profile_through(a: &PointSet, kmax: u64) -> Result<GrowthProfile> {
    let h = GrowthHypotheses::check(a)?;
    let first = h.n;
    if kmax < first + 2 {
        return Err(Error::arg(format!("kmax = {kmax} must be at least N + 2 = {}", first + 2)));
    }
    let last = kmax;
    let mut cur = kfold(a, first)?;
    let (mx, my) = ((first as i64 * h.a_prime) / 2, (first as i64 * h.b_prime) / 2);
    let missing_columns = (0..=first as i64 * h.a_prime).filter(|&x| !cur.contains_coords(&[x, my])).count() as u64;
    let missing_rows = (0..=first as i64 * h.b_prime).filter(|&y| !cur.contains_coords(&[mx, y])).count() as u64;
    let mut missing = Vec::with_capacity((last - first + 1) as usize);
    for k in first..=last {
        if k > first {
            cur = minkowski_sum(&cur, a)?;
        }
        missing.push(h.box_volume(k) - cur.len() as i64);
    }
    let beta = missing[1] - missing[0];
    let alpha = missing[0] - beta * first as i64;
    for (i, &mu) in missing.iter().enumerate() {
        let k = first + i as u64;
        let predicted = alpha + beta * k as i64;
        if mu != predicted {
            return Err(Error::Structure(format!("missing count at k = {k} is {mu}, the affine fit predicts {predicted}")));
        }
    }
    Ok(GrowthProfile { hypotheses: h, alpha, beta, fit_range: (first, last), missing, missing_columns, missing_rows })
}

/// `|kA − kA| ≥ |kA + kA|` for `k ≥ N`.
pub fn diff_dominance_check(a: &PointSet, k: u64) -> Result<VerificationReport> {
    let h = GrowthHypotheses::check(a)?;
    if k < h.n {
        return Err(Error::arg(format!("k = {k} is below the threshold N = {}", h.n)));
    }
    let ka = kfold(a, k)?;
    let (diff, sum) = rayon::join(
        || iterated_sumdiff(&ka, SumDiffSpec::DIFF),
        || iterated_sumdiff(&ka, SumDiffSpec::SUM),
    );
    let kk = u32::try_from(k).unwrap();
    Ok(VerificationReport::new(
        SumDiffSpec::new(kk, kk),
        diff?.len() as u64,
        SumDiffSpec::new(2 * kk, 0),
        sum?.len() as u64,
        Expectation::AtLeast,
    ))
}
