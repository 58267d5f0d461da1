//! Base expansion `C = A₁ + m·A₂ + ⋯ + m^{k−1}·A_k` and the chains and
//! k-generational sets built with it.
//!
//! When `m` exceeds the spread of every factor sumset, each point of
//! `sC − dC` splits uniquely into digits, so `|sC − dC|` is the product of
//! `|sAᵢ − dAᵢ|`. [`BaseExpansion`] keeps the parts and uses that product
//! whenever the digits provably separate, which makes chains far beyond
//! brute-force reach checkable.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::constructions::{build_2d, ConstructionParams};
use crate::error::{Error, Result};
use crate::lattice::{dilate, iterated_sumdiff, minkowski_sum, LatticePoint, PointSet, SumDiffSpec};

/// Anything whose iterated sumset sizes can be computed.
pub trait SumDiffOracle {
    fn dimension(&self) -> usize;
    /// `|sA − dA|`.
    fn sumdiff_len(&self, spec: SumDiffSpec) -> Result<u64>;
}

impl SumDiffOracle for PointSet {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn sumdiff_len(&self, spec: SumDiffSpec) -> Result<u64> {
        Ok(iterated_sumdiff(self, spec)?.len() as u64)
    }
}

/// The parts and multiplier of `A₁ + m·A₂ + ⋯ + m^{k−1}·A_k`.
#[derive(Clone, Debug)]
pub struct BaseExpansion {
    parts: Vec<PointSet>,
    m: i64,
}

fn max_coord(parts: &[PointSet]) -> Result<i64> {
    let mut max = 0i64;
    for p in parts {
        let (lo, hi) = p.bounding_box()?;
        if lo.coords().iter().any(|&x| x < 0) {
            return Err(Error::arg("base expansion parts need non-negative coordinates"));
        }
        max = max.max(*hi.coords().iter().max().unwrap());
    }
    Ok(max)
}

impl BaseExpansion {
    /// Validates `m > k · max coordinate`, which makes the product law hold
    /// for every `s + d ≤ k`.
    pub fn new(parts: Vec<PointSet>, m: i64, k: u32) -> Result<BaseExpansion> {
        if parts.is_empty() {
            return Err(Error::arg("base expansion needs at least one part"));
        }
        if k == 0 {
            return Err(Error::arg("k must be positive"));
        }
        let dim = parts[0].dim();
        if let Some(p) = parts.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension { expected: dim, found: p.dim() });
        }
        let bound = (k as i64)
            .checked_mul(max_coord(&parts)?)
            .ok_or_else(|| Error::Overflow("k * max coordinate".into()))?;
        if m <= bound {
            return Err(Error::arg(format!("m = {m} must exceed k * max coordinate = {bound}")));
        }
        let e = BaseExpansion { parts, m };
        e.coordinate_bound(k)?;
        Ok(e)
    }

    /// The smallest legal multiplier for the given parts.
    pub fn minimal_m(parts: &[PointSet], k: u32) -> Result<i64> {
        let max = max_coord(parts)?;
        Ok((k as i64).checked_mul(max).and_then(|v| v.checked_add(1)).ok_or_else(|| Error::Overflow("multiplier".into()))?.max(1))
    }

    pub fn with_minimal_m(parts: Vec<PointSet>, k: u32) -> Result<BaseExpansion> {
        let m = BaseExpansion::minimal_m(&parts, k)?;
        BaseExpansion::new(parts, m, k)
    }

    /// Largest coordinate of `kC`; refuses anything past 2^62.
    pub fn coordinate_bound(&self, k: u32) -> Result<i64> {
        let mut total: i128 = 0;
        let mut w: i128 = 1;
        for p in &self.parts {
            let (_, hi) = p.bounding_box()?;
            total += w * (*hi.coords().iter().max().unwrap() as i128);
            w *= self.m as i128;
            if w > 1 << 62 {
                w = 1 << 62;
            }
        }
        let bound = total * k as i128;
        if bound >= 1 << 62 {
            return Err(Error::Overflow(format!("expanded coordinates reach {bound}, above 2^62")));
        }
        Ok(bound as i64)
    }

    pub fn parts(&self) -> &[PointSet] {
        &self.parts
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Number of points, `∏ |Aᵢ|`, saturating at `u64::MAX`.
    pub fn len(&self) -> u64 {
        self.parts.iter().fold(1u64, |acc, p| acc.saturating_mul(p.len() as u64))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The expanded set itself.
    pub fn materialize(&self) -> Result<PointSet> {
        let mut acc: Option<PointSet> = None;
        let mut w = 1i64;
        for (i, p) in self.parts.iter().enumerate() {
            let term = if i == 0 { p.clone() } else { dilate(p, w)? };
            acc = Some(match acc {
                None => term,
                Some(a) => minkowski_sum(&a, &term)?,
            });
            if i + 1 < self.parts.len() {
                w = w.checked_mul(self.m).ok_or_else(|| Error::Overflow("m^i".into()))?;
            }
        }
        Ok(acc.unwrap())
    }

    /// Splits a point of `C` into its digits `(a₁, …, a_k)`; `None` when the
    /// point is not in `C`.
    pub fn decompose(&self, p: &LatticePoint) -> Option<Vec<LatticePoint>> {
        let mut rest: Vec<i64> = p.coords().to_vec();
        let mut out = Vec::with_capacity(self.parts.len());
        for (i, part) in self.parts.iter().enumerate() {
            let digit: Vec<i64> = if i + 1 == self.parts.len() {
                rest.clone()
            } else {
                rest.iter().map(|&x| x.rem_euclid(self.m)).collect()
            };
            if !part.contains_coords(&digit) {
                return None;
            }
            for (r, d) in rest.iter_mut().zip(&digit) {
                *r = (*r - d) / self.m;
            }
            out.push(LatticePoint::new(digit));
        }
        Some(out)
    }
}

impl SumDiffOracle for BaseExpansion {
    fn dimension(&self) -> usize {
        self.parts[0].dim()
    }

    /// Uses the digit product when every factor but the last spans less than
    /// `m` on each axis; brute force otherwise.
    fn sumdiff_len(&self, spec: SumDiffSpec) -> Result<u64> {
        let factors: Vec<PointSet> =
            self.parts.par_iter().map(|p| iterated_sumdiff(p, spec)).collect::<Result<_>>()?;
        let separated = factors[..factors.len() - 1].iter().all(|x| {
            let (lo, hi) = x.bounding_box().expect("non-empty");
            lo.coords().iter().zip(hi.coords()).all(|(l, h)| h - l < self.m)
        });
        if separated {
            return factors
                .iter()
                .try_fold(1u64, |acc, x| acc.checked_mul(x.len() as u64))
                .ok_or_else(|| Error::Overflow(format!("|{spec}| exceeds 2^64")));
        }
        Ok(iterated_sumdiff(&self.materialize()?, spec)?.len() as u64)
    }
}

/// `A₁ + m·A₂ + ⋯` after checking `m > k · max coordinate`.
pub fn base_expand(parts: &[PointSet], m: i64, k: u32) -> Result<PointSet> {
    BaseExpansion::new(parts.to_vec(), m, k)?.materialize()
}

/// Requirement at one level of a chain: `|xA − yA| > |wA − zA|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChainLevel {
    pub j: u32,
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub z: u32,
}

impl ChainLevel {
    pub fn new(j: u32, x: u32, y: u32, w: u32, z: u32) -> Result<ChainLevel> {
        let l = ChainLevel { j, x, y, w, z };
        l.validate()?;
        Ok(l)
    }

    pub fn larger(&self) -> SumDiffSpec {
        SumDiffSpec::new(self.x, self.y)
    }

    pub fn smaller(&self) -> SumDiffSpec {
        SumDiffSpec::new(self.w, self.z)
    }

    fn validate(&self) -> Result<()> {
        if self.j < 2 {
            return Err(Error::arg(format!("chain levels start at 2, got {}", self.j)));
        }
        if self.x + self.y != self.j || self.w + self.z != self.j {
            return Err(Error::arg(format!("level {}: both sides must sum to {}", self.j, self.j)));
        }
        if self.larger().normalized() == self.smaller().normalized() {
            return Err(Error::arg(format!("level {}: the two sides coincide up to sign", self.j)));
        }
        Ok(())
    }
}

impl fmt::Display for ChainLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {},{} > {},{}", self.j, self.x, self.y, self.w, self.z)
    }
}

/// One requirement per level `2, 3, …, k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    levels: Vec<ChainLevel>,
}

impl ChainSpec {
    /// Levels must be exactly `2, 3, …, k` in order.
    pub fn new(levels: Vec<ChainLevel>) -> Result<ChainSpec> {
        if levels.is_empty() {
            return Err(Error::arg("chain spec has no levels"));
        }
        for (i, l) in levels.iter().enumerate() {
            l.validate()?;
            if l.j as usize != i + 2 {
                return Err(Error::arg(format!("expected level {} but found level {}", i + 2, l.j)));
            }
        }
        Ok(ChainSpec { levels })
    }

    pub fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    /// Highest level.
    pub fn k(&self) -> u32 {
        self.levels.last().unwrap().j
    }

    /// Parses lines `j: x,y > w,z`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<ChainSpec> {
        let mut levels = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Parse { line, message: format!("{m}: {body:?}") };
            let (j, rest) = body.split_once(':').ok_or_else(|| bad("missing ':'"))?;
            let (lhs, rhs) = rest.split_once('>').ok_or_else(|| bad("missing '>'"))?;
            let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad("expected a non-negative integer"));
            let pair = |s: &str| -> Result<(u32, u32)> {
                let (a, b) = s.split_once(',').ok_or_else(|| bad("expected 'a,b'"))?;
                Ok((num(a)?, num(b)?))
            };
            let j = num(j)?;
            let (x, y) = pair(lhs)?;
            let (w, z) = pair(rhs)?;
            let level = ChainLevel::new(j, x, y, w, z).map_err(|e| Error::Parse { line, message: e.to_string() })?;
            if level.j as usize != levels.len() + 2 {
                return Err(Error::Parse { line, message: format!("expected level {}, found {}", levels.len() + 2, level.j) });
            }
            levels.push(level);
        }
        ChainSpec::new(levels)
    }
}

impl FromStr for ChainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<ChainSpec> {
        ChainSpec::parse(s)
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Planar component for one level, at the smallest side with a guarantee.
fn level_component(level: &ChainLevel) -> Result<PointSet> {
    let j = level.j as i64;
    let n = ConstructionParams::min_side(j);
    let params = ConstructionParams::cube(j, 2, n, level.larger(), level.smaller());
    Ok(build_2d(&params)?.set)
}

fn expand_levels(levels: &[ChainLevel], k: u32) -> Result<BaseExpansion> {
    let parts: Vec<PointSet> = levels.par_iter().map(level_component).collect::<Result<_>>()?;
    BaseExpansion::with_minimal_m(parts, k)
}

/// One planar component per level, base-expanded.
pub fn build_chain(spec: &ChainSpec) -> Result<BaseExpansion> {
    expand_levels(spec.levels(), spec.k())
}

/// A set with `|2cA| > |cA − cA|` for `1 ≤ c ≤ k`: components at the even
/// levels `2c` with `(2c, 0)` over `(c, c)`.
pub fn build_k_generational(k: u32) -> Result<BaseExpansion> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    let levels: Vec<ChainLevel> = (1..=k).map(|c| ChainLevel::new(2 * c, 2 * c, 0, c, c)).collect::<Result<_>>()?;
    expand_levels(&levels, 2 * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_expansion() {
        let z = PointSet::from_pairs(&[(0, 0)]);
        assert_eq!(base_expand(&[z.clone(), z.clone()], 1, 2).unwrap(), z);
    }

    #[test]
    fn small_product() {
        let a = PointSet::from_pairs(&[(0, 0), (1, 0), (0, 1)]);
        let b = PointSet::from_pairs(&[(0, 0), (2, 0)]);
        // m = 3 separates sums but not differences, so the checked
        // constructor refuses it; build C by hand for the sum count.
        assert!(matches!(base_expand(&[a.clone(), b.clone()], 3, 2), Err(Error::Argument(_))));
        let c = minkowski_sum(&a, &dilate(&b, 3).unwrap()).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.sumdiff_len(SumDiffSpec::SUM).unwrap(), 18);
        let e = BaseExpansion::new(vec![a, b], 5, 2).unwrap();
        assert_eq!(e.materialize().unwrap().sumdiff_len(SumDiffSpec::SUM).unwrap(), 18);
        assert_eq!(e.sumdiff_len(SumDiffSpec::SUM).unwrap(), 18);
    }

    #[test]
    fn conway_times_pair() {
        let a = PointSet::from_ints(&[0, 2, 3, 4, 7, 11, 12, 14]);
        let b = PointSet::from_ints(&[0, 1]);
        let e = BaseExpansion::new(vec![a, b], 29, 2).unwrap();
        let c = e.materialize().unwrap();
        assert_eq!(c.sumdiff_len(SumDiffSpec::SUM).unwrap(), 26 * 3);
        assert_eq!(c.sumdiff_len(SumDiffSpec::DIFF).unwrap(), 25 * 3);
        assert_eq!(e.sumdiff_len(SumDiffSpec::SUM).unwrap(), 26 * 3);
    }

    #[test]
    fn multiplier_bound_is_enforced() {
        let a = PointSet::from_ints(&[0, 14]);
        assert!(matches!(base_expand(&[a.clone(), a.clone()], 28, 2), Err(Error::Argument(_))));
        assert_eq!(BaseExpansion::minimal_m(&[a.clone(), a], 2).unwrap(), 29);
        let neg = PointSet::from_ints(&[-1, 0]);
        assert!(base_expand(&[neg.clone(), neg], 10, 2).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let a = PointSet::from_pairs(&[(0, 0), (1, 2), (3, 1)]);
        let b = PointSet::from_pairs(&[(0, 0), (2, 2)]);
        let e = BaseExpansion::with_minimal_m(vec![a.clone(), b.clone()], 2).unwrap();
        for p in e.materialize().unwrap().points() {
            let digits = e.decompose(&p).unwrap();
            assert!(a.contains(&digits[0]) && b.contains(&digits[1]));
        }
        assert!(e.decompose(&LatticePoint::from((2, 0))).is_none());
    }

    #[test]
    fn chain_spec_parsing() {
        let s = ChainSpec::parse("# demo\n2: 2,0 > 1,1\n\n3: 3,0 > 2,1\n").unwrap();
        assert_eq!(s.k(), 3);
        assert_eq!(s.levels()[1], ChainLevel::new(3, 3, 0, 2, 1).unwrap());
        assert_eq!(s.to_string().parse::<ChainSpec>().unwrap(), s);
        assert!(matches!(ChainSpec::parse("2: 2,0 > 1,1\n3 3,0 > 2,1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(ChainSpec::parse("2: 2,0 > 0,2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(ChainSpec::parse("3: 3,0 > 2,1"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(ChainSpec::parse("2: 2,1 > 1,1"), Err(Error::Parse { .. })));
        assert!(ChainSpec::parse("").is_err());
    }

    #[test]
    fn structured_count_overflow_is_reported() {
        let square = PointSet::full_box(&[0, 0], &[255, 255]).unwrap();
        let e = BaseExpansion::with_minimal_m(vec![square.clone(); 4], 2).unwrap();
        assert!(matches!(e.sumdiff_len(SumDiffSpec::SUM), Err(Error::Overflow(_))));
        let e = BaseExpansion::with_minimal_m(vec![square; 3], 2).unwrap();
        assert_eq!(e.sumdiff_len(SumDiffSpec::new(1, 0)).unwrap(), 256u64.pow(6));
    }

    #[test]
    fn generational_rejects_zero() {
        assert!(matches!(build_k_generational(0), Err(Error::Argument(_))));
    }

    #[test]
    fn level_two_chain_is_sum_dominant() {
        let spec = ChainSpec::parse("2: 2,0 > 1,1").unwrap();
        let c = build_chain(&spec).unwrap();
        assert_eq!(c.parts().len(), 1);
        let sum = c.sumdiff_len(SumDiffSpec::SUM).unwrap();
        let diff = c.sumdiff_len(SumDiffSpec::DIFF).unwrap();
        assert!(sum > diff, "{sum} vs {diff}");
    }
}
