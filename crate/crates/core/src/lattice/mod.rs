//! Finite point sets in ℤ^d and their Minkowski arithmetic.
//!
//! Everything else in the crate is built from four primitives:
//! [`minkowski_sum`], [`negate`], [`dilate`] and [`iterated_sumdiff`].

mod affine;
mod grid;
mod point;
mod set;

use std::fmt;

pub use affine::{apply_affine, apply_injective, IntegerAffineMap};
pub use point::LatticePoint;
pub use set::{Backend, PointSet, SetBuilder};

pub(crate) use set::{Frame, DENSE_MAX_VOLUME};

use crate::error::{Error, Result};
use grid::Grid;

/// The pair `(s, d)` naming `sA − dA`: `s` added and `d` subtracted copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SumDiffSpec {
    pub s: u32,
    pub d: u32,
}

impl SumDiffSpec {
    pub const fn new(s: u32, d: u32) -> SumDiffSpec {
        SumDiffSpec { s, d }
    }

    /// `A + A`.
    pub const SUM: SumDiffSpec = SumDiffSpec::new(2, 0);
    /// `A − A`.
    pub const DIFF: SumDiffSpec = SumDiffSpec::new(1, 1);

    pub fn level(self) -> u32 {
        self.s + self.d
    }

    /// `(d, s)`; `|sA − dA| = |dA − sA|` because one is the negation of the other.
    pub fn mirrored(self) -> SumDiffSpec {
        SumDiffSpec::new(self.d, self.s)
    }

    /// The representative with `s ≥ d`.
    pub fn normalized(self) -> SumDiffSpec {
        if self.s >= self.d {
            self
        } else {
            self.mirrored()
        }
    }

    /// All specs with `s + d = level`, ordered by decreasing `s`.
    pub fn at_level(level: u32) -> impl Iterator<Item = SumDiffSpec> {
        (0..=level).rev().map(move |s| SumDiffSpec::new(s, level - s))
    }
}

impl fmt::Display for SumDiffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}A-{}A", self.s, self.d)
    }
}

fn check_pair(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: b.dim() });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(())
}

/// `{a + b : a ∈ A, b ∈ B}`.
///
/// Runs as a bit-grid convolution when the result box is small enough and the
/// operands are dense, and as a sort-and-dedup over pairwise sums otherwise.
pub fn minkowski_sum(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_pair(a, b)?;
    let fa = a.frame().unwrap();
    let fb = b.frame().unwrap();
    let dim = a.dim();
    let ha = fa.hi();
    let hb = fb.hi();
    let mut lo = vec![0i64; dim];
    let mut hi = vec![0i64; dim];
    for i in 0..dim {
        lo[i] = fa.lo[i]
            .checked_add(fb.lo[i])
            .ok_or_else(|| Error::Overflow("sumset leaves the 64-bit range".into()))?;
        hi[i] = ha[i]
            .checked_add(hb[i])
            .ok_or_else(|| Error::Overflow("sumset leaves the 64-bit range".into()))?;
    }
    let frame = Frame::new(&lo, &hi)?;

    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let fbig = big.frame().unwrap();
    let rows_big = fbig.volume / fbig.ext[dim - 1];
    let words_big = fbig.ext[dim - 1].div_ceil(64);
    let dense_cost = (small.len() as u128) * rows_big * words_big + frame.volume / 64;
    let pairs = (a.len() as u128) * (b.len() as u128);
    let sparse_cost = pairs.saturating_mul(8);

    if frame.volume <= DENSE_MAX_VOLUME && fbig.volume <= DENSE_MAX_VOLUME && dense_cost <= sparse_cost {
        let gs = small.to_grid();
        let gb = big.to_grid();
        let g = Grid::minkowski(&gs, &gb);
        return PointSet::from_grid(&lo, g);
    }

    // Keys are linear in offsets, so key(a + b) = key'(a) + key'(b) with the
    // result frame's strides applied to each operand's offsets.
    let offsets = |s: &PointSet| -> Vec<u128> {
        let f = s.frame().unwrap();
        let mut out = Vec::with_capacity(s.len());
        let mut q = vec![0u128; dim];
        s.for_each_point(|p| {
            for i in 0..dim {
                q[i] = (p[i] as i128 - f.lo[i] as i128) as u128;
            }
            out.push(frame.encode_offset(&q));
        });
        out
    };
    let ka = offsets(a);
    let kb = offsets(b);
    let cap = usize::try_from(pairs).map_err(|_| Error::Overflow("too many pairwise sums".into()))?;
    let mut keys = Vec::with_capacity(cap);
    for &x in &ka {
        for &y in &kb {
            keys.push(x + y);
        }
    }
    keys.sort_unstable();
    keys.dedup();
    Ok(PointSet::from_sorted_keys(dim, frame, keys))
}

/// `{−a : a ∈ A}`.
pub fn negate(a: &PointSet) -> Result<PointSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let f = a.frame().unwrap();
    let hi = f.hi();
    let lo: Vec<i64> = hi
        .iter()
        .map(|&h| h.checked_neg().ok_or_else(|| Error::Overflow("cannot negate i64::MIN".into())))
        .collect::<Result<_>>()?;
    let new_hi: Vec<i64> = f
        .lo
        .iter()
        .map(|&l| l.checked_neg().ok_or_else(|| Error::Overflow("cannot negate i64::MIN".into())))
        .collect::<Result<_>>()?;
    let frame = Frame::new(&lo, &new_hi)?;
    // Reflection through the box centre reverses the key order.
    let top = f.volume - 1;
    let keys: Vec<u128> = a.keys().into_iter().rev().map(|k| top - k).collect();
    Ok(PointSet::from_sorted_keys(a.dim(), frame, keys))
}

/// `{c·a : a ∈ A}` for a positive integer `c`.
pub fn dilate(a: &PointSet, c: i64) -> Result<PointSet> {
    if c <= 0 {
        return Err(Error::arg(format!("dilation factor must be positive, got {c}")));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if c == 1 {
        return Ok(a.clone());
    }
    let f = a.frame().unwrap();
    let hi = f.hi();
    let scale = |x: i64| x.checked_mul(c).ok_or_else(|| Error::Overflow("dilation leaves the 64-bit range".into()));
    let lo: Vec<i64> = f.lo.iter().map(|&x| scale(x)).collect::<Result<_>>()?;
    let new_hi: Vec<i64> = hi.iter().map(|&x| scale(x)).collect::<Result<_>>()?;
    let frame = Frame::new(&lo, &new_hi)?;
    // Scaling is monotone per axis, so lexicographic order is preserved.
    let dim = a.dim();
    let mut keys = Vec::with_capacity(a.len());
    let mut q = vec![0u128; dim];
    a.for_each_point(|p| {
        for i in 0..dim {
            q[i] = (p[i] as i128 - f.lo[i] as i128) as u128 * c as u128;
        }
        keys.push(frame.encode_offset(&q));
    });
    Ok(PointSet::from_sorted_keys(dim, frame, keys))
}

/// `t·A = A + ⋯ + A` (t ≥ 1 copies) by binary doubling.
fn multiple(a: &PointSet, t: u32) -> Result<PointSet> {
    debug_assert!(t >= 1);
    let mut acc: Option<PointSet> = None;
    let mut power = a.clone();
    let mut t = t;
    loop {
        if t & 1 == 1 {
            acc = Some(match acc {
                None => power.clone(),
                Some(x) => minkowski_sum(&x, &power)?,
            });
        }
        t >>= 1;
        if t == 0 {
            break;
        }
        power = minkowski_sum(&power, &power)?;
    }
    Ok(acc.unwrap())
}

/// `sA − dA` computed with `O(log(s + d))` Minkowski sums.
pub fn iterated_sumdiff(a: &PointSet, spec: SumDiffSpec) -> Result<PointSet> {
    if spec.s == 0 && spec.d == 0 {
        return Err(Error::arg("sumdiff needs s + d >= 1"));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let pos = if spec.s > 0 { Some(multiple(a, spec.s)?) } else { None };
    let neg = if spec.d > 0 { Some(negate(&multiple(a, spec.d)?)?) } else { None };
    match (pos, neg) {
        (Some(p), Some(n)) => minkowski_sum(&p, &n),
        (Some(p), None) => Ok(p),
        (None, Some(n)) => Ok(n),
        (None, None) => unreachable!(),
    }
}

/// Componentwise minimum and maximum.
pub fn bounding_box(a: &PointSet) -> Result<(LatticePoint, LatticePoint)> {
    a.bounding_box()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONWAY: [i64; 8] = [0, 2, 3, 4, 7, 11, 12, 14];

    /// Pairwise enumeration, independent of both backends.
    fn naive_sum(a: &PointSet, b: &PointSet) -> PointSet {
        let pa = a.points();
        let pb = b.points();
        let mut out = Vec::new();
        for x in &pa {
            for y in &pb {
                let c: Vec<i64> = x.coords().iter().zip(y.coords()).map(|(u, v)| u + v).collect();
                out.push(LatticePoint::new(c));
            }
        }
        PointSet::from_points(a.dim(), out).unwrap()
    }

    #[test]
    fn identity_element() {
        let a = PointSet::from_ints(&[0, 2]);
        let z = PointSet::from_ints(&[0]);
        assert_eq!(minkowski_sum(&a, &z).unwrap(), a);
    }

    #[test]
    fn conway_sumset_has_26_elements() {
        let a = PointSet::from_ints(&CONWAY);
        let s = minkowski_sum(&a, &a).unwrap();
        assert_eq!(s.len(), 26);
        assert_eq!(s, naive_sum(&a, &a));
    }

    #[test]
    fn unit_square_from_two_segments() {
        let a = PointSet::from_pairs(&[(0, 0), (1, 0)]);
        let b = PointSet::from_pairs(&[(0, 0), (0, 1)]);
        let s = minkowski_sum(&a, &b).unwrap();
        assert_eq!(s, PointSet::from_pairs(&[(0, 0), (1, 0), (0, 1), (1, 1)]));
    }

    #[test]
    fn minkowski_errors() {
        let a = PointSet::from_ints(&[0]);
        let b = PointSet::from_pairs(&[(0, 0)]);
        assert!(matches!(minkowski_sum(&a, &b), Err(Error::Dimension { .. })));
        assert_eq!(minkowski_sum(&a, &PointSet::empty(1)), Err(Error::EmptySet));
        let huge = PointSet::from_ints(&[i64::MAX]);
        assert!(matches!(minkowski_sum(&huge, &huge), Err(Error::Overflow(_))));
    }

    #[test]
    fn negate_examples() {
        assert_eq!(negate(&PointSet::from_ints(&[0])).unwrap(), PointSet::from_ints(&[0]));
        assert_eq!(negate(&PointSet::from_ints(&[0, 1, 3])).unwrap(), PointSet::from_ints(&[0, -1, -3]));
        assert_eq!(negate(&PointSet::from_pairs(&[(1, 2)])).unwrap(), PointSet::from_pairs(&[(-1, -2)]));
        assert_eq!(negate(&PointSet::empty(1)), Err(Error::EmptySet));
    }

    #[test]
    fn dilate_examples() {
        let a = PointSet::from_ints(&[0, 1, 3]);
        assert_eq!(dilate(&a, 1).unwrap(), a);
        assert_eq!(dilate(&PointSet::from_ints(&[0, 1]), 5).unwrap(), PointSet::from_ints(&[0, 5]));
        assert_eq!(dilate(&PointSet::from_pairs(&[(1, 1)]), 3).unwrap(), PointSet::from_pairs(&[(3, 3)]));
        assert!(matches!(dilate(&a, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn iterated_sumdiff_examples() {
        let a = PointSet::from_ints(&[0, 1]);
        assert_eq!(iterated_sumdiff(&a, SumDiffSpec::new(2, 0)).unwrap(), PointSet::from_ints(&[0, 1, 2]));

        let conway = PointSet::from_ints(&CONWAY);
        assert_eq!(iterated_sumdiff(&conway, SumDiffSpec::DIFF).unwrap().len(), 25);

        // Every 3-term sum of {0, 1, 3}: 0..=9 except 8.
        let b = PointSet::from_ints(&[0, 1, 3]);
        let expect: Vec<i64> = (0..=9).filter(|&x| x != 8).collect();
        assert_eq!(iterated_sumdiff(&b, SumDiffSpec::new(3, 0)).unwrap(), PointSet::from_ints(&expect));

        assert!(matches!(iterated_sumdiff(&a, SumDiffSpec::new(0, 0)), Err(Error::Argument(_))));
    }

    #[test]
    fn pure_difference_spec() {
        let a = PointSet::from_ints(&[0, 1, 3]);
        let got = iterated_sumdiff(&a, SumDiffSpec::new(0, 2)).unwrap();
        let expect = negate(&iterated_sumdiff(&a, SumDiffSpec::new(2, 0)).unwrap()).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn bounding_box_examples() {
        let (lo, hi) = bounding_box(&PointSet::from_ints(&[0, 5, 8])).unwrap();
        assert_eq!((lo, hi), (LatticePoint::from(0), LatticePoint::from(8)));
        let (lo, hi) = bounding_box(&PointSet::from_pairs(&[(1, 2), (3, 0)])).unwrap();
        assert_eq!((lo, hi), (LatticePoint::from((1, 0)), LatticePoint::from((3, 2))));
        let (lo, hi) = bounding_box(&PointSet::from_pairs(&[(0, 0)])).unwrap();
        assert_eq!((lo, hi), (LatticePoint::from((0, 0)), LatticePoint::from((0, 0))));
        assert_eq!(bounding_box(&PointSet::empty(2)), Err(Error::EmptySet));
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        // Spread-out points force the sparse path; the dense copies force the grid path.
        let a = PointSet::from_pairs(&[(0, 0), (100, 3), (7, 250), (64, 64), (63, 1)]);
        let b = PointSet::from_pairs(&[(0, 0), (1, 1), (2, 0), (130, 129)]);
        let sparse = minkowski_sum(&a.with_backend(Backend::Sparse).unwrap(), &b.with_backend(Backend::Sparse).unwrap()).unwrap();
        let grid = Grid::minkowski(&a.to_grid(), &b.to_grid());
        let lo = [0i64, 0];
        let dense = PointSet::from_grid(&lo, grid).unwrap();
        assert_eq!(sparse, dense);
        assert_eq!(sparse, naive_sum(&a, &b));
    }

    #[test]
    fn backends_compare_equal() {
        let a = PointSet::full_box(&[-3, 2], &[5, 9]).unwrap();
        assert_eq!(a.backend(), Backend::Dense);
        let s = a.with_backend(Backend::Sparse).unwrap();
        assert_eq!(s.backend(), Backend::Sparse);
        assert_eq!(a, s);
        assert!(s.contains_coords(&[-3, 9]));
        assert!(!s.contains_coords(&[-4, 9]));
        assert_eq!(a.points(), s.points());
    }

    #[test]
    fn builder_shrinks_to_tight_box() {
        let mut b = SetBuilder::new(&[0, 0], &[10, 10]).unwrap();
        b.insert(&[2, 3]);
        b.insert(&[4, 7]);
        let s = b.build().unwrap();
        let (lo, hi) = s.bounding_box().unwrap();
        assert_eq!(lo, LatticePoint::from((2, 3)));
        assert_eq!(hi, LatticePoint::from((4, 7)));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn insert_box_in_three_dimensions() {
        let mut b = SetBuilder::new(&[0, 0, 0], &[4, 4, 4]).unwrap();
        b.insert_box(&[1, 0, 2], &[2, 4, 3]);
        let s = b.build().unwrap();
        assert_eq!(s.len(), 2 * 5 * 2);
        assert!(s.contains_coords(&[2, 4, 3]));
        assert!(!s.contains_coords(&[0, 0, 2]));
    }
}
