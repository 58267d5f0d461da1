use std::fmt;

use super::grid::Grid;
use super::point::LatticePoint;
use crate::error::{Error, Result};

/// Largest box (in cells) the dense backend will allocate.
pub(crate) const DENSE_MAX_VOLUME: u128 = 1 << 32;
/// The dense backend is kept when at least one cell in this many is set.
pub(crate) const DENSE_MIN_FILL: u128 = 64;

/// Storage backend of a [`PointSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    /// Bit grid over the bounding box.
    Dense,
    /// Sorted list of points.
    Sparse,
}

/// Bounding box of a non-empty set together with the mixed-radix key layout
/// used by the sparse backend. Keys preserve lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Frame {
    pub(crate) lo: Vec<i64>,
    pub(crate) ext: Vec<u128>,
    pub(crate) strides: Vec<u128>,
    pub(crate) volume: u128,
}

impl Frame {
    pub(crate) fn new(lo: &[i64], hi: &[i64]) -> Result<Frame> {
        let d = lo.len();
        let ext: Vec<u128> = lo
            .iter()
            .zip(hi)
            .map(|(&l, &h)| (h as i128 - l as i128 + 1) as u128)
            .collect();
        let mut strides = vec![0u128; d];
        let mut acc: u128 = 1;
        for i in (0..d).rev() {
            strides[i] = acc;
            acc = acc
                .checked_mul(ext[i])
                .filter(|v| *v < (1u128 << 126))
                .ok_or_else(|| Error::Overflow("bounding box volume exceeds 2^126 cells".into()))?;
        }
        Ok(Frame { lo: lo.to_vec(), ext, strides, volume: acc })
    }

    pub(crate) fn hi(&self) -> Vec<i64> {
        self.lo
            .iter()
            .zip(&self.ext)
            .map(|(&l, &e)| (l as i128 + e as i128 - 1) as i64)
            .collect()
    }

    pub(crate) fn encode(&self, p: &[i64]) -> u128 {
        p.iter()
            .zip(&self.lo)
            .zip(&self.strides)
            .map(|((&x, &l), &s)| (x as i128 - l as i128) as u128 * s)
            .sum()
    }

    /// Key of a point given as offsets from `lo`.
    pub(crate) fn encode_offset(&self, q: &[u128]) -> u128 {
        q.iter().zip(&self.strides).map(|(&x, &s)| x * s).sum()
    }

    pub(crate) fn decode_into(&self, mut key: u128, out: &mut [i64]) {
        for i in 0..self.lo.len() {
            let q = key / self.strides[i];
            key %= self.strides[i];
            out[i] = (self.lo[i] as i128 + q as i128) as i64;
        }
    }

    pub(crate) fn contains(&self, p: &[i64]) -> bool {
        p.iter()
            .zip(&self.lo)
            .zip(&self.ext)
            .all(|((&x, &l), &e)| x >= l && ((x as i128 - l as i128) as u128) < e)
    }

    fn usize_ext(&self) -> Vec<usize> {
        self.ext.iter().map(|&e| e as usize).collect()
    }
}

#[derive(Clone)]
pub(crate) enum Repr {
    Dense(Grid),
    Sparse(Vec<u128>),
}

/// A finite subset of ℤ^d.
///
/// Values are immutable. The bounding box is always tight, and the backend
/// (dense bit grid or sorted key list) is chosen from the fill ratio; both
/// backends have identical set semantics.
#[derive(Clone)]
pub struct PointSet {
    dim: usize,
    len: usize,
    frame: Option<Frame>,
    repr: Repr,
}

impl PointSet {
    pub fn empty(dim: usize) -> PointSet {
        assert!(dim >= 1, "dimension must be at least 1");
        PointSet { dim, len: 0, frame: None, repr: Repr::Sparse(Vec::new()) }
    }

    /// Collects points into a set. Duplicates are merged.
    pub fn from_points<I, P>(dim: usize, points: I) -> Result<PointSet>
    where
        I: IntoIterator<Item = P>,
        P: Into<LatticePoint>,
    {
        let mut flat = Vec::new();
        for p in points {
            let p = p.into();
            if p.dim() != dim {
                return Err(Error::Dimension { expected: dim, found: p.dim() });
            }
            flat.extend_from_slice(p.coords());
        }
        PointSet::from_flat(dim, flat)
    }

    /// One-dimensional set from integers.
    pub fn from_ints(xs: &[i64]) -> PointSet {
        PointSet::from_flat(1, xs.to_vec()).expect("1-D sets of i64 always fit")
    }

    /// Two-dimensional set from coordinate pairs.
    pub fn from_pairs(ps: &[(i64, i64)]) -> PointSet {
        let flat = ps.iter().flat_map(|&(x, y)| [x, y]).collect();
        PointSet::from_flat(2, flat).expect("2-D sets of i64 always fit")
    }

    /// The full box `[lo, hi]` (inclusive on every axis).
    pub fn full_box(lo: &[i64], hi: &[i64]) -> Result<PointSet> {
        let mut b = SetBuilder::new(lo, hi)?;
        b.insert_box(lo, hi);
        b.build()
    }

    /// The 1-D interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: i64, hi: i64) -> PointSet {
        if lo > hi {
            return PointSet::empty(1);
        }
        PointSet::full_box(&[lo], &[hi]).expect("interval box")
    }

    /// Flat coordinate list (`dim` entries per point), duplicates merged.
    pub(crate) fn from_flat(dim: usize, flat: Vec<i64>) -> Result<PointSet> {
        assert!(dim >= 1, "dimension must be at least 1");
        if flat.is_empty() {
            return Ok(PointSet::empty(dim));
        }
        let mut lo = flat[..dim].to_vec();
        let mut hi = lo.clone();
        for p in flat.chunks_exact(dim) {
            for i in 0..dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        let frame = Frame::new(&lo, &hi)?;
        let mut keys: Vec<u128> = flat.chunks_exact(dim).map(|p| frame.encode(p)).collect();
        keys.sort_unstable();
        keys.dedup();
        Ok(PointSet::from_sorted_keys(dim, frame, keys))
    }

    /// `keys` must be sorted, unique, and must touch every face of `frame`.
    pub(crate) fn from_sorted_keys(dim: usize, frame: Frame, keys: Vec<u128>) -> PointSet {
        let len = keys.len();
        if len == 0 {
            return PointSet::empty(dim);
        }
        let mut s = PointSet { dim, len, frame: Some(frame), repr: Repr::Sparse(keys) };
        if s.prefers_dense() {
            s.repr = Repr::Dense(s.to_grid());
        }
        s
    }

    /// Wraps a grid whose origin sits at `lo`. The bounding box is shrunk to
    /// the set cells and the backend chosen by fill ratio.
    pub(crate) fn from_grid(lo: &[i64], grid: Grid) -> Result<PointSet> {
        let dim = lo.len();
        let len = grid.count();
        if len == 0 {
            return Ok(PointSet::empty(dim));
        }
        let ext = grid.ext().to_vec();
        // Tight box along every axis.
        let mut qmin = vec![usize::MAX; dim];
        let mut qmax = vec![0usize; dim];
        let mut lead = vec![0usize; dim - 1];
        for r in 0..grid.rows() {
            let row = grid.row(r);
            let first = row.iter().position(|&w| w != 0);
            let Some(fw) = first else { continue };
            let lw = row.iter().rposition(|&w| w != 0).unwrap();
            let bmin = fw * 64 + row[fw].trailing_zeros() as usize;
            let bmax = lw * 64 + 63 - row[lw].leading_zeros() as usize;
            grid.row_coords(r, &mut lead);
            for i in 0..dim - 1 {
                qmin[i] = qmin[i].min(lead[i]);
                qmax[i] = qmax[i].max(lead[i]);
            }
            qmin[dim - 1] = qmin[dim - 1].min(bmin);
            qmax[dim - 1] = qmax[dim - 1].max(bmax);
        }
        let tight = (0..dim).all(|i| qmin[i] == 0 && qmax[i] + 1 == ext[i]);
        let new_lo: Vec<i64> = (0..dim).map(|i| lo[i] + qmin[i] as i64).collect();
        let new_hi: Vec<i64> = (0..dim).map(|i| lo[i] + qmax[i] as i64).collect();
        let frame = Frame::new(&new_lo, &new_hi)?;
        if tight {
            let mut s = PointSet { dim, len, frame: Some(frame), repr: Repr::Dense(grid) };
            if !s.prefers_dense() {
                s.repr = Repr::Sparse(s.keys());
            }
            return Ok(s);
        }
        let mut keys = Vec::with_capacity(len);
        let mut q = vec![0u128; dim];
        grid.for_each_set(|r, b| {
            grid.row_coords(r, &mut lead);
            for i in 0..dim - 1 {
                q[i] = (lead[i] - qmin[i]) as u128;
            }
            q[dim - 1] = (b - qmin[dim - 1]) as u128;
            keys.push(frame.encode_offset(&q));
        });
        Ok(PointSet::from_sorted_keys(dim, frame, keys))
    }

    fn prefers_dense(&self) -> bool {
        match &self.frame {
            Some(f) => f.volume <= DENSE_MAX_VOLUME && (self.len as u128) * DENSE_MIN_FILL >= f.volume,
            None => false,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn backend(&self) -> Backend {
        match self.repr {
            Repr::Dense(_) => Backend::Dense,
            Repr::Sparse(_) => Backend::Sparse,
        }
    }

    /// Re-encodes the set in the requested backend. Set semantics are
    /// unchanged; this exists so both backends can be exercised directly.
    pub fn with_backend(&self, backend: Backend) -> Result<PointSet> {
        let mut s = self.clone();
        match (backend, &self.repr) {
            (Backend::Dense, Repr::Sparse(_)) if self.len > 0 => {
                let vol = self.frame.as_ref().unwrap().volume;
                if vol > DENSE_MAX_VOLUME {
                    return Err(Error::Overflow(format!("box of {vol} cells is too large for the dense backend")));
                }
                s.repr = Repr::Dense(self.to_grid());
            }
            (Backend::Sparse, Repr::Dense(_)) => s.repr = Repr::Sparse(self.keys()),
            _ => {}
        }
        Ok(s)
    }

    pub(crate) fn frame(&self) -> Option<&Frame> {
        self.frame.as_ref()
    }

    /// Componentwise minimum and maximum over all points.
    pub fn bounding_box(&self) -> Result<(LatticePoint, LatticePoint)> {
        let f = self.frame.as_ref().ok_or(Error::EmptySet)?;
        Ok((LatticePoint::new(f.lo.clone()), LatticePoint::new(f.hi())))
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.dim() == self.dim && self.contains_coords(p.coords())
    }

    pub fn contains_coords(&self, p: &[i64]) -> bool {
        let Some(f) = &self.frame else { return false };
        if p.len() != self.dim || !f.contains(p) {
            return false;
        }
        match &self.repr {
            Repr::Sparse(keys) => keys.binary_search(&f.encode(p)).is_ok(),
            Repr::Dense(g) => {
                let q: Vec<usize> = p.iter().zip(&f.lo).map(|(&x, &l)| (x - l) as usize).collect();
                g.get(&q)
            }
        }
    }

    /// Sorted keys relative to this set's frame.
    pub(crate) fn keys(&self) -> Vec<u128> {
        match &self.repr {
            Repr::Sparse(k) => k.clone(),
            Repr::Dense(g) => {
                let rl = g.row_len() as u128;
                let mut out = Vec::with_capacity(self.len);
                g.for_each_set(|r, b| out.push(r as u128 * rl + b as u128));
                out
            }
        }
    }

    /// Grid over this set's frame.
    pub(crate) fn to_grid(&self) -> Grid {
        match &self.repr {
            Repr::Dense(g) => g.clone(),
            Repr::Sparse(keys) => {
                let f = self.frame.as_ref().expect("non-empty");
                let ext = f.usize_ext();
                let mut g = Grid::zeros(&ext);
                let mut q = vec![0usize; self.dim];
                for &k in keys {
                    let mut rem = k;
                    for i in 0..self.dim {
                        q[i] = (rem / f.strides[i]) as usize;
                        rem %= f.strides[i];
                    }
                    g.set(&q);
                }
                g
            }
        }
    }

    /// Calls `f` with the coordinates of every point, in lexicographic order.
    pub fn for_each_point(&self, mut f: impl FnMut(&[i64])) {
        let Some(frame) = &self.frame else { return };
        let mut buf = vec![0i64; self.dim];
        match &self.repr {
            Repr::Sparse(keys) => {
                for &k in keys {
                    frame.decode_into(k, &mut buf);
                    f(&buf);
                }
            }
            Repr::Dense(g) => {
                let mut lead = vec![0usize; self.dim - 1];
                let mut last_row = usize::MAX;
                g.for_each_set(|r, b| {
                    if r != last_row {
                        g.row_coords(r, &mut lead);
                        for i in 0..self.dim - 1 {
                            buf[i] = frame.lo[i] + lead[i] as i64;
                        }
                        last_row = r;
                    }
                    buf[self.dim - 1] = frame.lo[self.dim - 1] + b as i64;
                    f(&buf);
                });
            }
        }
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.len);
        self.for_each_point(|p| out.push(LatticePoint::new(p.to_vec())));
        out
    }

    /// Coordinates of a 1-D set in increasing order.
    pub fn to_ints(&self) -> Result<Vec<i64>> {
        if self.dim != 1 {
            return Err(Error::Dimension { expected: 1, found: self.dim });
        }
        let mut out = Vec::with_capacity(self.len);
        self.for_each_point(|p| out.push(p[0]));
        Ok(out)
    }

    /// Flat coordinates (`dim` per point), lexicographic order.
    pub(crate) fn flat_coords(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.len * self.dim);
        self.for_each_point(|p| out.extend_from_slice(p));
        out
    }

    /// `{a + t : a ∈ A}`.
    pub fn translate(&self, t: &[i64]) -> Result<PointSet> {
        if t.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, found: t.len() });
        }
        let mut s = self.clone();
        if let Some(f) = &mut s.frame {
            let hi = f.hi();
            for i in 0..self.dim {
                f.lo[i] = f.lo[i]
                    .checked_add(t[i])
                    .filter(|_| hi[i].checked_add(t[i]).is_some())
                    .ok_or_else(|| Error::Overflow("translation leaves the 64-bit range".into()))?;
            }
        }
        Ok(s)
    }

    /// Set union. Both operands must share a dimension.
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, found: other.dim });
        }
        let mut flat = self.flat_coords();
        flat.extend(other.flat_coords());
        PointSet::from_flat(self.dim, flat)
    }

    /// Points of `self` that lie in the closed box `[lo, hi]`.
    pub fn restrict_to_box(&self, lo: &[i64], hi: &[i64]) -> PointSet {
        let mut flat = Vec::new();
        self.for_each_point(|p| {
            if p.iter().zip(lo).zip(hi).all(|((&x, &l), &h)| l <= x && x <= h) {
                flat.extend_from_slice(p);
            }
        });
        PointSet::from_flat(self.dim, flat).expect("subset of an existing frame")
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &PointSet) -> bool {
        if self.dim != other.dim || self.len != other.len {
            return false;
        }
        match (&self.frame, &other.frame) {
            (None, None) => true,
            (Some(a), Some(b)) if a == b => match (&self.repr, &other.repr) {
                (Repr::Dense(x), Repr::Dense(y)) => x == y,
                (Repr::Sparse(x), Repr::Sparse(y)) => x == y,
                _ => self.keys() == other.keys(),
            },
            _ => false,
        }
    }
}

impl Eq for PointSet {}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 32;
        write!(f, "PointSet(dim={}, len={}) {{", self.dim, self.len)?;
        let mut i = 0;
        self.for_each_point(|p| {
            if i < SHOWN {
                let _ = write!(f, "{}{:?}", if i == 0 { "" } else { ", " }, LatticePoint::new(p.to_vec()));
            }
            i += 1;
        });
        if self.len > SHOWN {
            write!(f, ", …")?;
        }
        write!(f, "}}")
    }
}

/// Incremental builder over a fixed box; used for the dense constructions.
pub struct SetBuilder {
    lo: Vec<i64>,
    hi: Vec<i64>,
    grid: Grid,
}

impl SetBuilder {
    pub fn new(lo: &[i64], hi: &[i64]) -> Result<SetBuilder> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::arg("builder box needs matching, non-empty corners"));
        }
        if lo.iter().zip(hi).any(|(l, h)| l > h) {
            return Err(Error::arg("builder box has lo > hi"));
        }
        let frame = Frame::new(lo, hi)?;
        if frame.volume > DENSE_MAX_VOLUME {
            return Err(Error::Overflow(format!("builder box of {} cells is too large", frame.volume)));
        }
        Ok(SetBuilder { lo: lo.to_vec(), hi: hi.to_vec(), grid: Grid::zeros(&frame.usize_ext()) })
    }

    fn offset(&self, p: &[i64]) -> Option<Vec<usize>> {
        if p.len() != self.lo.len() {
            return None;
        }
        let mut q = Vec::with_capacity(p.len());
        for ((&x, &l), &h) in p.iter().zip(&self.lo).zip(&self.hi) {
            if x < l || x > h {
                return None;
            }
            q.push((x - l) as usize);
        }
        Some(q)
    }

    /// Panics when `p` is outside the builder box.
    pub fn insert(&mut self, p: &[i64]) {
        let q = self.offset(p).unwrap_or_else(|| panic!("point {p:?} outside builder box"));
        self.grid.set(&q);
    }

    /// Removes `p`; points outside the box are ignored.
    pub fn remove(&mut self, p: &[i64]) {
        if let Some(q) = self.offset(p) {
            self.grid.clear(&q);
        }
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.offset(p).is_some_and(|q| self.grid.get(&q))
    }

    /// Inserts the box `[lo, hi]` clipped to the builder box. Empty when any
    /// `lo > hi`.
    pub fn insert_box(&mut self, lo: &[i64], hi: &[i64]) {
        self.box_rows(lo, hi, true);
    }

    /// Removes the box `[lo, hi]` clipped to the builder box.
    pub fn remove_box(&mut self, lo: &[i64], hi: &[i64]) {
        self.box_rows(lo, hi, false);
    }

    fn box_rows(&mut self, lo: &[i64], hi: &[i64], fill: bool) {
        let d = self.lo.len();
        let mut a = vec![0i64; d];
        let mut b = vec![0i64; d];
        for i in 0..d {
            a[i] = lo[i].max(self.lo[i]);
            b[i] = hi[i].min(self.hi[i]);
            if a[i] > b[i] {
                return;
            }
        }
        // Walk the leading axes; the last axis is a bit range.
        let mut cur = a[..d - 1].to_vec();
        let from = (a[d - 1] - self.lo[d - 1]) as usize;
        let to = (b[d - 1] - self.lo[d - 1]) as usize;
        loop {
            let lead: Vec<usize> = cur.iter().zip(&self.lo).map(|(&x, &l)| (x - l) as usize).collect();
            let r = self.grid.row_index(&lead);
            self.grid.set_row_range(r, from, to, fill);
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if cur[i] < b[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = a[i];
            }
        }
    }

    pub fn build(self) -> Result<PointSet> {
        PointSet::from_grid(&self.lo, self.grid)
    }
}
