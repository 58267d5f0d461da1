//! Dense bit-grid backend.
//!
//! A grid covers a box with extents `ext[0] × … × ext[d-1]`. The last axis is
//! packed into the bits of a row of `u64` words; the leading axes index rows in
//! row-major (mixed-radix) order, so walking rows in order and bits in order
//! visits points lexicographically.

use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Grid {
    ext: Vec<usize>,
    row_strides: Vec<usize>,
    rows: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl Grid {
    pub(crate) fn zeros(ext: &[usize]) -> Grid {
        let d = ext.len();
        let mut row_strides = vec![0usize; d.saturating_sub(1)];
        let mut acc = 1usize;
        for i in (0..d - 1).rev() {
            row_strides[i] = acc;
            acc *= ext[i];
        }
        let rows = acc;
        let words_per_row = ext[d - 1].div_ceil(64);
        Grid {
            ext: ext.to_vec(),
            row_strides,
            rows,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub(crate) fn ext(&self) -> &[usize] {
        &self.ext
    }

    pub(crate) fn rows(&self) -> usize {
        self.rows
    }

    pub(crate) fn row_len(&self) -> usize {
        self.ext[self.ext.len() - 1]
    }

    pub(crate) fn row(&self, r: usize) -> &[u64] {
        let w = self.words_per_row;
        &self.bits[r * w..(r + 1) * w]
    }

    pub(crate) fn row_index(&self, lead: &[usize]) -> usize {
        lead.iter().zip(&self.row_strides).map(|(q, s)| q * s).sum()
    }

    pub(crate) fn row_coords(&self, mut r: usize, out: &mut [usize]) {
        for (o, s) in out.iter_mut().zip(&self.row_strides) {
            *o = r / s;
            r %= s;
        }
    }

    pub(crate) fn set(&mut self, q: &[usize]) {
        let (lead, last) = q.split_at(q.len() - 1);
        let r = self.row_index(lead);
        let b = last[0];
        self.bits[r * self.words_per_row + b / 64] |= 1u64 << (b % 64);
    }

    pub(crate) fn clear(&mut self, q: &[usize]) {
        let (lead, last) = q.split_at(q.len() - 1);
        let r = self.row_index(lead);
        let b = last[0];
        self.bits[r * self.words_per_row + b / 64] &= !(1u64 << (b % 64));
    }

    pub(crate) fn get(&self, q: &[usize]) -> bool {
        let (lead, last) = q.split_at(q.len() - 1);
        let r = self.row_index(lead);
        let b = last[0];
        self.bits[r * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }

    /// Sets (or clears) bits `[from, to]` (inclusive) of row `r`.
    pub(crate) fn set_row_range(&mut self, r: usize, from: usize, to: usize, value: bool) {
        let base = r * self.words_per_row;
        let (fw, lw) = (from / 64, to / 64);
        for wi in fw..=lw {
            let lo = if wi == fw { from % 64 } else { 0 };
            let hi = if wi == lw { to % 64 } else { 63 };
            let mask = (u64::MAX >> (63 - hi)) & (u64::MAX << lo);
            if value {
                self.bits[base + wi] |= mask;
            } else {
                self.bits[base + wi] &= !mask;
            }
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Calls `f(row, bit)` for every set cell, in lexicographic order.
    pub(crate) fn for_each_set(&self, mut f: impl FnMut(usize, usize)) {
        for r in 0..self.rows {
            for (wi, &w) in self.row(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let t = w.trailing_zeros() as usize;
                    f(r, wi * 64 + t);
                    w &= w - 1;
                }
            }
        }
    }

    fn row_is_empty(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    /// Minkowski sum of two grids whose origins are both at zero. The result
    /// has extents `a.ext + b.ext - 1`. `a` should be the operand with fewer
    /// set cells; its cells become shifts applied to the rows of `b`.
    pub(crate) fn minkowski(a: &Grid, b: &Grid) -> Grid {
        let d = a.ext.len();
        let ext: Vec<usize> = a.ext.iter().zip(&b.ext).map(|(x, y)| x + y - 1).collect();
        let mut out = Grid::zeros(&ext);
        let lead = d - 1;

        // Non-empty rows of `a`, with their leading coordinates and bit shifts.
        let mut a_rows: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut coords = vec![0usize; lead];
        for r in 0..a.rows {
            if a.row_is_empty(r) {
                continue;
            }
            a.row_coords(r, &mut coords);
            let mut shifts = Vec::new();
            for (wi, &w) in a.row(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    shifts.push(wi * 64 + w.trailing_zeros() as usize);
                    w &= w - 1;
                }
            }
            a_rows.push((coords.clone(), shifts));
        }
        let b_nonempty: Vec<bool> = (0..b.rows).map(|r| !b.row_is_empty(r)).collect();

        let wpr = out.words_per_row;
        let out_strides = out.row_strides.clone();
        out.bits
            .par_chunks_mut(wpr)
            .enumerate()
            .for_each(|(r, dst)| {
                let mut u = vec![0usize; lead];
                let mut rem = r;
                for (o, s) in u.iter_mut().zip(&out_strides) {
                    *o = rem / s;
                    rem %= s;
                }
                let mut w = vec![0usize; lead];
                'rows: for (v, shifts) in &a_rows {
                    for i in 0..lead {
                        if u[i] < v[i] || u[i] - v[i] >= b.ext[i] {
                            continue 'rows;
                        }
                        w[i] = u[i] - v[i];
                    }
                    let br = b.row_index(&w);
                    if !b_nonempty[br] {
                        continue;
                    }
                    let src = b.row(br);
                    for &s in shifts {
                        or_shifted(dst, src, s);
                    }
                }
            });
        out
    }
}

#[inline]
fn or_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let wo = shift / 64;
    let bo = shift % 64;
    if bo == 0 {
        for (j, &w) in src.iter().enumerate() {
            dst[j + wo] |= w;
        }
    } else {
        let n = dst.len();
        for (j, &w) in src.iter().enumerate() {
            if w == 0 {
                continue;
            }
            dst[j + wo] |= w << bo;
            if j + wo + 1 < n {
                dst[j + wo + 1] |= w >> (64 - bo);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_or_crosses_word_boundary() {
        let mut dst = vec![0u64; 3];
        or_shifted(&mut dst, &[1u64 << 63, 1], 1);
        assert_eq!(dst, vec![0, 1 | (1 << 1), 0]);
    }

    #[test]
    fn row_range_fill_and_clear() {
        let mut g = Grid::zeros(&[2, 200]);
        g.set_row_range(1, 3, 190, true);
        assert_eq!(g.count(), 188);
        assert!(!g.get(&[1, 2]));
        assert!(g.get(&[1, 3]));
        assert!(g.get(&[1, 190]));
        assert!(!g.get(&[1, 191]));
        assert!(!g.get(&[0, 100]));
        g.set_row_range(1, 60, 130, false);
        assert_eq!(g.count(), 188 - 71);
        assert!(g.get(&[1, 59]) && !g.get(&[1, 60]) && !g.get(&[1, 130]) && g.get(&[1, 131]));
        g.set_row_range(0, 64, 64, true);
        assert_eq!(g.count(), 188 - 70);
    }
}
