//! Classification and verification of sumset inequalities, Nathanson
//! stabilization, growth of missing points, and the appendix checks.

mod appendix;
mod growth;
mod stabilize;

use std::collections::BTreeMap;
use std::fmt;

pub use appendix::{
    fringe_windows, is_a1_shape, theorem_a1_scan, theorem_a1_pool, A1Instance, FringeWindows,
};
pub use growth::{diff_dominance_check, growth_profile, growth_profile_through, GrowthHypotheses, GrowthProfile};
pub use stabilize::{membership_in_kfold, nathanson_stabilize, StabilizationProfile};

use crate::combinators::{ChainSpec, SumDiffOracle};
use crate::error::{Error, Result};
use crate::lattice::{iterated_sumdiff, PointSet, SumDiffSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Mstd,
    Balanced,
    DifferenceDominant,
}

impl Verdict {
    pub fn of(sum: u64, diff: u64) -> Verdict {
        match sum.cmp(&diff) {
            std::cmp::Ordering::Greater => Verdict::Mstd,
            std::cmp::Ordering::Equal => Verdict::Balanced,
            std::cmp::Ordering::Less => Verdict::DifferenceDominant,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Mstd => "MSTD",
            Verdict::Balanced => "balanced",
            Verdict::DifferenceDominant => "difference_dominant",
        })
    }
}

/// `|A + A|`, `|A − A|` and which is larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub sum_size: u64,
    pub diff_size: u64,
    pub verdict: Verdict,
}

impl Classification {
    pub fn new(sum_size: u64, diff_size: u64) -> Classification {
        Classification { sum_size, diff_size, verdict: Verdict::of(sum_size, diff_size) }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.sum_size, self.diff_size, self.verdict)
    }
}

pub fn classify(a: &PointSet) -> Result<Classification> {
    classify_oracle(a)
}

pub fn classify_oracle<O: SumDiffOracle + ?Sized + Sync>(a: &O) -> Result<Classification> {
    let (s, d) = rayon::join(|| a.sumdiff_len(SumDiffSpec::SUM), || a.sumdiff_len(SumDiffSpec::DIFF));
    Ok(Classification::new(s?, d?))
}

/// How the two sides of a report must compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Expectation {
    Greater,
    Equal,
    AtLeast,
}

impl Expectation {
    pub fn holds(self, gap: i64) -> bool {
        match self {
            Expectation::Greater => gap > 0,
            Expectation::Equal => gap == 0,
            Expectation::AtLeast => gap >= 0,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Greater => ">",
            Expectation::Equal => "=",
            Expectation::AtLeast => ">=",
        })
    }
}

/// Result of comparing `|lhs|` with `|rhs|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub lhs_spec: SumDiffSpec,
    pub rhs_spec: SumDiffSpec,
    pub lhs_size: u64,
    pub rhs_size: u64,
    /// `lhs_size − rhs_size`.
    pub gap: i64,
    pub expect: Expectation,
    pub passed: bool,
    /// Points missing from each result's bounding box, keyed by side and
    /// orthant (`-` low half, `+` high half per axis).
    pub details: BTreeMap<String, u64>,
}

impl VerificationReport {
    pub fn new(lhs_spec: SumDiffSpec, lhs_size: u64, rhs_spec: SumDiffSpec, rhs_size: u64, expect: Expectation) -> Self {
        let gap = lhs_size as i64 - rhs_size as i64;
        VerificationReport {
            lhs_spec,
            rhs_spec,
            lhs_size,
            rhs_size,
            gap,
            expect,
            passed: expect.holds(gap),
            details: BTreeMap::new(),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|{}| = {} {} |{}| = {}: gap {:+} {}",
            self.lhs_spec,
            self.lhs_size,
            self.expect,
            self.rhs_spec,
            self.rhs_size,
            self.gap,
            if self.passed { "passed" } else { "FAILED" }
        )
    }
}

/// Missing points of `s` inside its bounding box, split into the `2^d`
/// half-box orthants.
pub fn missing_by_orthant(s: &PointSet) -> BTreeMap<String, u64> {
    let mut out = BTreeMap::new();
    let Ok((lo, hi)) = s.bounding_box() else { return out };
    let d = s.dim();
    let lo = lo.coords().to_vec();
    let hi = hi.coords().to_vec();
    let mid: Vec<i64> = (0..d).map(|i| lo[i] + (hi[i] - lo[i]) / 2).collect();
    let mut present = vec![0u64; 1 << d];
    s.for_each_point(|p| {
        let mut o = 0;
        for i in 0..d {
            o = o << 1 | usize::from(p[i] > mid[i]);
        }
        present[o] += 1;
    });
    for (o, &count) in present.iter().enumerate() {
        let mut vol: u64 = 1;
        let mut label = String::with_capacity(d);
        for i in 0..d {
            let high = o >> (d - 1 - i) & 1 == 1;
            let len = if high { hi[i] - mid[i] } else { mid[i] - lo[i] + 1 };
            vol = vol.saturating_mul(len as u64);
            label.push(if high { '+' } else { '-' });
        }
        out.insert(label, vol - count);
    }
    out
}

fn check_levels(spec1: SumDiffSpec, spec2: SumDiffSpec) -> Result<()> {
    if spec1.level() != spec2.level() {
        return Err(Error::arg(format!("{spec1} and {spec2} are at different levels")));
    }
    if spec1.level() < 2 {
        return Err(Error::arg("comparisons need level at least 2"));
    }
    Ok(())
}

fn compare_sets(a: &PointSet, spec1: SumDiffSpec, spec2: SumDiffSpec, expect: Expectation) -> Result<VerificationReport> {
    check_levels(spec1, spec2)?;
    let (x, y) = rayon::join(|| iterated_sumdiff(a, spec1), || iterated_sumdiff(a, spec2));
    let (x, y) = (x?, y?);
    let mut r = VerificationReport::new(spec1, x.len() as u64, spec2, y.len() as u64, expect);
    for (side, set) in [("lhs", &x), ("rhs", &y)] {
        for (orthant, missing) in missing_by_orthant(set) {
            r.details.insert(format!("{side} {orthant}"), missing);
        }
    }
    Ok(r)
}

/// `|s₁A − d₁A| > |s₂A − d₂A|`, with missing-point counts per orthant.
pub fn verify_generalized(a: &PointSet, spec1: SumDiffSpec, spec2: SumDiffSpec) -> Result<VerificationReport> {
    compare_sets(a, spec1, spec2, Expectation::Greater)
}

/// `|s₁A − d₁A| = |s₂A − d₂A|`.
pub fn verify_balance(a: &PointSet, spec1: SumDiffSpec, spec2: SumDiffSpec) -> Result<VerificationReport> {
    compare_sets(a, spec1, spec2, Expectation::Equal)
}

/// Strict comparison through any oracle; no orthant details.
pub fn verify_generalized_oracle<O: SumDiffOracle + ?Sized + Sync>(
    a: &O,
    spec1: SumDiffSpec,
    spec2: SumDiffSpec,
) -> Result<VerificationReport> {
    check_levels(spec1, spec2)?;
    let (x, y) = rayon::join(|| a.sumdiff_len(spec1), || a.sumdiff_len(spec2));
    Ok(VerificationReport::new(spec1, x?, spec2, y?, Expectation::Greater))
}

/// One strict comparison per chain level.
pub fn verify_chain<O: SumDiffOracle + ?Sized + Sync>(a: &O, spec: &ChainSpec) -> Result<Vec<VerificationReport>> {
    spec.levels().iter().map(|l| verify_generalized_oracle(a, l.larger(), l.smaller())).collect()
}

/// `|2cA|` against `|cA − cA|` for `c = 1, …, k`.
pub fn check_k_generational<O: SumDiffOracle + ?Sized + Sync>(a: &O, k: u32) -> Result<Vec<Classification>> {
    (1..=k)
        .map(|c| {
            let (s, d) =
                rayon::join(|| a.sumdiff_len(SumDiffSpec::new(2 * c, 0)), || a.sumdiff_len(SumDiffSpec::new(c, c)));
            Ok(Classification::new(s?, d?))
        })
        .collect()
}
