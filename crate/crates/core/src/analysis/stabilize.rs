use crate::error::{Error, Result};
use crate::lattice::{iterated_sumdiff, PointSet, SumDiffSpec};

/// `kA = C ∪ [c, ka − d_r] ∪ (ka − D)` for every `k ≥ k_threshold`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationProfile {
    pub c_set: Vec<i64>,
    pub c: i64,
    pub d_r: i64,
    pub d_set: Vec<i64>,
    pub k_threshold: u64,
    /// `max A`.
    pub a: i64,
}

impl StabilizationProfile {
    /// The set the decomposition predicts for `kA`.
    pub fn predict(&self, k: u64) -> PointSet {
        let top = self.a * k as i64;
        let mut xs: Vec<i64> = self.c_set.clone();
        xs.extend(self.c..=top - self.d_r);
        xs.extend(self.d_set.iter().map(|&x| top - x));
        PointSet::from_ints(&xs)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Sorted elements after checking `0 ∈ A`, non-negativity and `gcd = 1`.
fn normalized_elements(a: &PointSet) -> Result<Vec<i64>> {
    let xs = a.to_ints()?;
    if xs.is_empty() {
        return Err(Error::EmptySet);
    }
    if xs[0] != 0 {
        return Err(Error::arg("the set must contain 0 and no negative elements"));
    }
    let g = xs.iter().fold(0, |g, &x| gcd(g, x));
    if g != 1 {
        return Err(Error::Gcd(g));
    }
    Ok(xs)
}

fn kfold(a: &PointSet, k: u64) -> Result<Vec<i64>> {
    let k = u32::try_from(k).map_err(|_| Error::Overflow(format!("k = {k} is too large")))?;
    iterated_sumdiff(a, SumDiffSpec::new(k, 0))?.to_ints()
}

/// Decomposes `kA` at `k = a²m` (`a = max A`, `m = |A| − 1`) around its
/// longest run of consecutive integers, then rechecks at `k + 1` and `k + 2`.
pub fn nathanson_stabilize(a: &PointSet) -> Result<StabilizationProfile> {
    let xs = normalized_elements(a)?;
    let amax = *xs.last().unwrap();
    let m = (xs.len() - 1) as u64;
    let k = (amax as u64).checked_mul(amax as u64).and_then(|v| v.checked_mul(m)).ok_or_else(|| Error::Overflow("a^2 m".into()))?;
    let ka = kfold(a, k)?;
    let top = amax * k as i64;

    // Maximal runs; the longest must be unique.
    let mut best: Option<(i64, i64)> = None;
    let mut tie = false;
    let mut start = ka[0];
    for w in 0..ka.len() {
        let end_of_run = w + 1 == ka.len() || ka[w + 1] != ka[w] + 1;
        if end_of_run {
            let len = ka[w] - start;
            match best {
                Some((s, e)) if e - s == len => tie = true,
                Some((s, e)) if e - s > len => {}
                _ => {
                    best = Some((start, ka[w]));
                    tie = false;
                }
            }
            if w + 1 < ka.len() {
                start = ka[w + 1];
            }
        }
    }
    if tie {
        return Err(Error::Structure(format!("kA at k = {k} has two longest runs")));
    }
    let (c, end) = best.unwrap();
    let profile = StabilizationProfile {
        c_set: ka.iter().copied().filter(|&x| x < c).collect(),
        c,
        d_r: top - end,
        d_set: ka.iter().copied().filter(|&x| x > end).map(|x| top - x).rev().collect(),
        k_threshold: k,
        a: amax,
    };
    for kk in [k + 1, k + 2] {
        if PointSet::from_ints(&kfold(a, kk)?) != profile.predict(kk) {
            return Err(Error::Structure(format!("decomposition found at k = {k} fails at k = {kk}")));
        }
    }
    Ok(profile)
}

/// Whether `value` is a sum of exactly `k` elements of `A` (repetition
/// allowed), by dynamic programming over the number of summands.
pub fn membership_in_kfold(a: &PointSet, value: i64, k: u64) -> Result<bool> {
    let xs = a.to_ints()?;
    if xs.is_empty() {
        return Err(Error::EmptySet);
    }
    if xs[0] < 0 {
        return Err(Error::arg("elements must be non-negative"));
    }
    if value < 0 {
        return Ok(false);
    }
    let v = value as usize;
    let mut reach = vec![false; v + 1];
    reach[0] = true;
    for _ in 0..k {
        let mut next = vec![false; v + 1];
        for (t, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
            for &x in &xs {
                let u = t + x as usize;
                if u <= v {
                    next[u] = true;
                }
            }
        }
        reach = next;
        if !reach.iter().any(|&r| r) {
            return Ok(false);
        }
    }
    Ok(reach[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_of_0_1_3() {
        let p = nathanson_stabilize(&PointSet::from_ints(&[0, 1, 3])).unwrap();
        assert_eq!((p.c_set.clone(), p.c, p.d_r, p.d_set.clone(), p.k_threshold), (vec![], 0, 2, vec![0], 18));
    }

    #[test]
    fn interval_profile() {
        let p = nathanson_stabilize(&PointSet::from_ints(&[0, 1])).unwrap();
        assert_eq!((p.c_set.len(), p.c, p.d_r, p.d_set.len()), (0, 0, 0, 0));
    }

    #[test]
    fn profile_of_0_5_8() {
        let a = PointSet::from_ints(&[0, 5, 8]);
        let p = nathanson_stabilize(&a).unwrap();
        assert_eq!(p.k_threshold, 128);
        assert!(p.c_set.iter().all(|&x| x <= p.c - 2));
        assert!(p.d_set.iter().all(|&x| x <= p.d_r - 2));
    }

    #[test]
    fn preconditions() {
        assert!(matches!(nathanson_stabilize(&PointSet::from_ints(&[1, 2])), Err(Error::Argument(_))));
        assert_eq!(nathanson_stabilize(&PointSet::from_ints(&[0, 2, 4])), Err(Error::Gcd(2)));
    }

    #[test]
    fn membership() {
        let a = PointSet::from_ints(&[0, 5, 8]);
        assert!(!membership_in_kfold(&a, 54, 8).unwrap());
        assert!(membership_in_kfold(&a, 54, 9).unwrap());
        let b = PointSet::from_ints(&[0, 1]);
        for k in 0..20 {
            assert!(membership_in_kfold(&b, k as i64, k).unwrap());
        }
        assert!(!membership_in_kfold(&PointSet::from_ints(&[3]), 3, 2).unwrap());
    }
}
