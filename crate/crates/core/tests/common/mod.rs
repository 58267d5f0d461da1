//! Independent brute-force oracles over `BTreeSet<Vec<i64>>`.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mstd::PointSet;

pub type Naive = BTreeSet<Vec<i64>>;

pub fn naive(a: &PointSet) -> Naive {
    a.points().into_iter().map(|p| p.coords().to_vec()).collect()
}

pub fn to_set(dim: usize, n: &Naive) -> PointSet {
    PointSet::from_points(dim, n.iter().cloned()).unwrap()
}

pub fn add(a: &Naive, b: &Naive) -> Naive {
    let mut out = Naive::new();
    for p in a {
        for q in b {
            out.insert(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    out
}

pub fn neg(a: &Naive) -> Naive {
    a.iter().map(|p| p.iter().map(|x| -x).collect()).collect()
}

/// `s` copies of `A` plus `d` copies of `−A`, one element at a time.
pub fn sumdiff(a: &Naive, dim: usize, s: u32, d: u32) -> Naive {
    let mut acc: Naive = [vec![0; dim]].into_iter().collect();
    let minus = neg(a);
    for _ in 0..s {
        acc = add(&acc, a);
    }
    for _ in 0..d {
        acc = add(&acc, &minus);
    }
    acc
}

pub fn ints(xs: &[i64]) -> Naive {
    xs.iter().map(|&x| vec![x]).collect()
}

/// Interval `[lo, hi]` minus the listed points, as a 1D oracle set.
pub fn interval_minus(lo: i64, hi: i64, gone: impl Fn(i64) -> bool) -> Naive {
    (lo..=hi).filter(|&x| !gone(x)).map(|x| vec![x]).collect()
}
