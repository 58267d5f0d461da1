use crate::error::{Error, Result};
use crate::lattice::{PointSet, SetBuilder};

/// One-dimensional fringe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fringe1d {
    L,
    R,
}

/// Base fringe in dimension ≥ 2: `B1` sits in corners touching the origin
/// side of the first axis, `B2` in the far ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FringeKind {
    B1,
    B2,
}

/// The four oriented planar fringes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner2d {
    B11,
    B12,
    B21,
    B22,
}

impl Corner2d {
    pub const ALL: [Corner2d; 4] = [Corner2d::B11, Corner2d::B12, Corner2d::B21, Corner2d::B22];

    pub fn kind(self) -> FringeKind {
        match self {
            Corner2d::B11 | Corner2d::B12 => FringeKind::B1,
            Corner2d::B21 | Corner2d::B22 => FringeKind::B2,
        }
    }

    /// Corner bits: `1` on axis `j` when the fringe touches coordinate 0,
    /// `0` when it touches the far side.
    pub fn bits(self) -> [u8; 2] {
        match self {
            Corner2d::B11 => [1, 1],
            Corner2d::B12 => [1, 0],
            Corner2d::B21 => [0, 0],
            Corner2d::B22 => [0, 1],
        }
    }
}

impl FringeKind {
    /// Side length minus one of the fringe cube.
    pub fn side(self, k: i64) -> i64 {
        match self {
            FringeKind::B1 => 2 * k + 1,
            FringeKind::B2 => 2 * k + 2,
        }
    }

    /// Axis positions removed from the cube: the hole and the run.
    fn holes(self, k: i64) -> (i64, i64, i64) {
        match self {
            FringeKind::B1 => (2, k + 2, 2 * k),
            FringeKind::B2 => (3, k + 3, 2 * k + 1),
        }
    }

    pub fn for_corner(bits: &[u8]) -> FringeKind {
        if bits[0] == 1 {
            FringeKind::B1
        } else {
            FringeKind::B2
        }
    }
}

pub(crate) fn check_k(k: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::arg(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

fn removed(kind: FringeKind, k: i64, t: i64) -> bool {
    let (h, lo, hi) = kind.holes(k);
    t == h || (lo..=hi).contains(&t)
}

/// `L = [0,2k+1] \ ({2} ∪ [k+2,2k])`, `R = [0,2k+2] \ ({3} ∪ [k+3,2k+1])`.
pub fn fringe_1d(k: i64, which: Fringe1d) -> Result<PointSet> {
    check_k(k)?;
    let kind = match which {
        Fringe1d::L => FringeKind::B1,
        Fringe1d::R => FringeKind::B2,
    };
    let xs: Vec<i64> = (0..=kind.side(k)).filter(|&t| !removed(kind, k, t)).collect();
    Ok(PointSet::from_ints(&xs))
}

/// The base cube `[0,S]^d` with holes on the coordinate axes.
pub(crate) fn base_fringe(k: i64, dim: usize, kind: FringeKind) -> Result<PointSet> {
    let s = kind.side(k);
    let lo = vec![0; dim];
    let hi = vec![s; dim];
    let mut b = SetBuilder::new(&lo, &hi)?;
    b.insert_box(&lo, &hi);
    let mut p = vec![0i64; dim];
    for axis in 0..dim {
        for t in 0..=s {
            if removed(kind, k, t) {
                p[axis] = t;
                b.remove(&p);
            }
        }
        p[axis] = 0;
    }
    b.build()
}

/// Oriented planar fringe, unplaced (inside `[0,S]²`).
pub fn fringe_2d(k: i64, corner: Corner2d) -> Result<PointSet> {
    check_k(k)?;
    fringe_ddim(k, corner.kind(), &corner.bits())
}

fn check_corner(kind: FringeKind, corner: &[u8]) -> Result<()> {
    if corner.len() < 2 {
        return Err(Error::arg("fringe corner needs at least two coordinates"));
    }
    if corner.iter().any(|&b| b > 1) {
        return Err(Error::arg(format!("corner bits must be 0 or 1, got {corner:?}")));
    }
    if FringeKind::for_corner(corner) != kind {
        return Err(Error::arg(format!("corner {corner:?} takes fringe {:?}, not {kind:?}", FringeKind::for_corner(corner))));
    }
    Ok(())
}

/// Reflects axis `j` of the base fringe when `corner[j] = 1`, except that the
/// all-ones corner keeps the base fringe as is.
fn orient(p: &mut [i64], s: i64, corner: &[u8]) {
    if corner.iter().all(|&b| b == 1) {
        return;
    }
    for (x, &b) in p.iter_mut().zip(corner) {
        if b == 1 {
            *x = s - *x;
        }
    }
}

/// Oriented fringe `B_{i₁,…,i_d}`, unplaced (inside `[0,S]^d`).
pub fn fringe_ddim(k: i64, kind: FringeKind, corner: &[u8]) -> Result<PointSet> {
    check_k(k)?;
    check_corner(kind, corner)?;
    let base = base_fringe(k, corner.len(), kind)?;
    let s = kind.side(k);
    let mut flat = Vec::with_capacity(base.len() * corner.len());
    let mut buf = vec![0i64; corner.len()];
    base.for_each_point(|p| {
        buf.copy_from_slice(p);
        orient(&mut buf, s, corner);
        flat.extend_from_slice(&buf);
    });
    PointSet::from_flat(corner.len(), flat)
}

/// Writes the oriented fringe into its corner of the box `[0,n₁]×…×[0,n_d]`.
pub(crate) fn place_fringe(b: &mut SetBuilder, k: i64, dims: &[i64], corner: &[u8]) -> Result<()> {
    let kind = FringeKind::for_corner(corner);
    let s = kind.side(k);
    let oriented = fringe_ddim(k, kind, corner)?;
    let all_ones = corner.iter().all(|&c| c == 1);
    let mut q = vec![0i64; dims.len()];
    oriented.for_each_point(|p| {
        for j in 0..dims.len() {
            q[j] = if all_ones {
                p[j]
            } else {
                let t = if corner[j] == 0 { dims[j] } else { s };
                t - p[j]
            };
        }
        b.insert(&q);
    });
    Ok(())
}

/// `[0,T] \ ({s} ∪ [r₀,r₁])` with the constants of `aL + bR`.
fn closed_form_params(k: i64, a: i64, b: i64) -> Result<(i64, i64, i64, i64)> {
    check_k(k)?;
    if a < 0 || b < 0 || a + b < 1 {
        return Err(Error::arg(format!("need a, b >= 0 with a + b >= 1, got a={a}, b={b}")));
    }
    let t = 2 * k * (a + b) + (a + 2 * b);
    let single = 2 * k * (a + b - 1) + (a + 2 * b + 1);
    let r0 = k * (2 * a + 2 * b - 1) + (a + 2 * b + 1);
    let r1 = 2 * k * (a + b) + (a + 2 * b - 1);
    Ok((t, single, r0, r1))
}

/// Closed form of `aL + bR`.
pub fn closed_form_1d(k: i64, a: i64, b: i64) -> Result<PointSet> {
    let (t, single, r0, r1) = closed_form_params(k, a, b)?;
    let xs: Vec<i64> = (0..=t).filter(|&x| x != single && !(r0..=r1).contains(&x)).collect();
    Ok(PointSet::from_ints(&xs))
}

/// Closed form of `aB₁ + bB₂`.
pub fn closed_form_2d(k: i64, a: i64, b: i64) -> Result<PointSet> {
    let (t, single, r0, r1) = closed_form_params(k, a, b)?;
    let mut bld = SetBuilder::new(&[0, 0], &[t, t])?;
    bld.insert_box(&[0, 0], &[t, t]);
    for x in std::iter::once(single).chain(r0..=r1) {
        bld.remove(&[x, 0]);
        bld.remove(&[0, x]);
    }
    bld.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_affine, minkowski_sum, IntegerAffineMap};

    #[test]
    fn one_dimensional_fringes() {
        assert_eq!(fringe_1d(4, Fringe1d::L).unwrap(), PointSet::from_ints(&[0, 1, 3, 4, 5, 9]));
        assert_eq!(fringe_1d(4, Fringe1d::R).unwrap(), PointSet::from_ints(&[0, 1, 2, 4, 5, 6, 10]));
        assert_eq!(fringe_1d(2, Fringe1d::L).unwrap(), PointSet::from_ints(&[0, 1, 3, 5]));
        assert!(matches!(fringe_1d(1, Fringe1d::L), Err(Error::Argument(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_1d(4, 1, 0).unwrap(), fringe_1d(4, Fringe1d::L).unwrap());
        assert_eq!(closed_form_1d(4, 0, 1).unwrap(), fringe_1d(4, Fringe1d::R).unwrap());
        let expect: Vec<i64> = (0..=19).filter(|&x| x != 12 && !(16..=18).contains(&x)).collect();
        assert_eq!(closed_form_1d(4, 1, 1).unwrap(), PointSet::from_ints(&expect));
        assert!(matches!(closed_form_1d(4, 0, 0), Err(Error::Argument(_))));
        assert!(matches!(closed_form_2d(4, 0, 0), Err(Error::Argument(_))));
    }

    #[test]
    fn planar_fringe_sizes() {
        let b1 = fringe_2d(4, Corner2d::B11).unwrap();
        let b2 = fringe_2d(4, Corner2d::B21).unwrap();
        assert_eq!(b1.len(), 92);
        assert_eq!(b2.len(), 113);
        for k in 2..6 {
            assert_eq!(fringe_2d(k, Corner2d::B11).unwrap().len() as i64, (2 * k + 2).pow(2) - 2 - 2 * (k - 1));
            assert_eq!(fringe_2d(k, Corner2d::B21).unwrap().len() as i64, (2 * k + 3).pow(2) - 2 - 2 * (k - 1));
        }
        assert_eq!(closed_form_2d(4, 1, 0).unwrap(), b1);
        assert_eq!(closed_form_2d(4, 0, 1).unwrap(), b2);
    }

    #[test]
    fn small_b1_by_hand() {
        let mut pts = Vec::new();
        for x in 0..=5 {
            for y in 0..=5 {
                if ![(2, 0), (0, 2), (4, 0), (0, 4)].contains(&(x, y)) {
                    pts.push((x, y));
                }
            }
        }
        assert_eq!(fringe_2d(2, Corner2d::B11).unwrap(), PointSet::from_pairs(&pts));
    }

    #[test]
    fn oriented_planar_fringes_have_holes_on_the_right_edges() {
        let k = 4;
        let b12 = fringe_2d(k, Corner2d::B12).unwrap();
        // Holes along y = 0 at x = 2k+1-2 and along x = 2k+1 at y = 2.
        assert!(!b12.contains_coords(&[2 * k - 1, 0]));
        assert!(!b12.contains_coords(&[2 * k + 1, 2]));
        assert!(b12.contains_coords(&[0, 2]));
        let b22 = fringe_2d(k, Corner2d::B22).unwrap();
        assert!(!b22.contains_coords(&[3, 2 * k + 2]));
        assert!(!b22.contains_coords(&[0, 2 * k - 1]));
        assert!(b22.contains_coords(&[3, 0]));
    }

    #[test]
    fn three_dimensional_fringe() {
        let b = fringe_ddim(2, FringeKind::B1, &[1, 1, 1]).unwrap();
        assert_eq!(b.len(), 216 - 6);
        for p in [[2, 0, 0], [0, 2, 0], [0, 0, 2], [4, 0, 0], [0, 4, 0], [0, 0, 4]] {
            assert!(!b.contains_coords(&p));
        }
        let base = base_fringe(2, 3, FringeKind::B2).unwrap();
        let phi = IntegerAffineMap::new(vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]], vec![0, 6, 6]).unwrap();
        assert_eq!(fringe_ddim(2, FringeKind::B2, &[0, 1, 1]).unwrap(), apply_affine(&base, &phi).unwrap());
        assert!(fringe_ddim(2, FringeKind::B1, &[0, 1, 1]).is_err());
        assert!(fringe_ddim(2, FringeKind::B1, &[1, 2, 1]).is_err());
    }

    #[test]
    fn closed_form_matches_one_brute_force_sum() {
        let l = fringe_1d(3, Fringe1d::L).unwrap();
        let r = fringe_1d(3, Fringe1d::R).unwrap();
        assert_eq!(minkowski_sum(&l, &r).unwrap(), closed_form_1d(3, 1, 1).unwrap());
    }
}
