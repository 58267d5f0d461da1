use super::fringe::{check_k, fringe_1d, place_fringe, Fringe1d};
use crate::error::{Error, Result};
use crate::lattice::{apply_injective, IntegerAffineMap, PointSet, SetBuilder, SumDiffSpec};

/// Coordinates of a construction and of its sumsets up to level `k` stay
/// below this bound.
const COORD_LIMIT: i128 = 1 << 62;

/// Inputs of a generalized MSTD construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub k: i64,
    pub dims: Vec<i64>,
    /// Upper-triangular shear entries `m12, m13, …, m23, …`; empty means none.
    pub slopes: Vec<i64>,
    pub spec1: SumDiffSpec,
    pub spec2: SumDiffSpec,
    /// Accept sides at or below the guaranteed threshold.
    pub force: bool,
}

/// What a builder did with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionMeta {
    /// `spec1`, `spec2` after normalization to `s ≥ d`.
    pub spec1: SumDiffSpec,
    pub spec2: SumDiffSpec,
    pub swapped1: bool,
    pub swapped2: bool,
    /// Distance from each face to the filled middle.
    pub middle_offset: i64,
    /// All sides exceed `4(2k²+1)`.
    pub guaranteed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub set: PointSet,
    pub meta: ConstructionMeta,
}

impl ConstructionParams {
    pub fn new(k: i64, dims: Vec<i64>, spec1: SumDiffSpec, spec2: SumDiffSpec) -> ConstructionParams {
        ConstructionParams { k, dims, slopes: Vec::new(), spec1, spec2, force: false }
    }

    /// Square / cube with all sides equal to `n`.
    pub fn cube(k: i64, dim: usize, n: i64, spec1: SumDiffSpec, spec2: SumDiffSpec) -> ConstructionParams {
        ConstructionParams::new(k, vec![n; dim], spec1, spec2)
    }

    pub fn with_slopes(mut self, slopes: Vec<i64>) -> ConstructionParams {
        self.slopes = slopes;
        self
    }

    pub fn forced(mut self) -> ConstructionParams {
        self.force = true;
        self
    }

    /// Smallest side that carries the guarantee.
    pub fn min_side(k: i64) -> i64 {
        4 * (2 * k * k + 1) + 1
    }

    /// Checks the parameters and returns the normalization record.
    pub fn validate(&self) -> Result<ConstructionMeta> {
        let k = self.k;
        check_k(k)?;
        if k > 1 << 20 {
            return Err(Error::Overflow(format!("k = {k} is too large")));
        }
        for (name, sp) in [("spec1", self.spec1), ("spec2", self.spec2)] {
            if i64::from(sp.level()) != k {
                return Err(Error::arg(format!("{name} = {sp} has level {} but k = {k}", sp.level())));
            }
        }
        let n1 = self.spec1.normalized();
        let n2 = self.spec2.normalized();
        if n1 == n2 {
            return Err(Error::arg(format!("{} and {} coincide up to sign", self.spec1, self.spec2)));
        }
        let c = 2 * k * k + 1 - if n1.s > n2.s { i64::from(n1.d) } else { i64::from(n1.s) };
        let min = ConstructionParams::min_side(k);
        let mut guaranteed = true;
        for &n in &self.dims {
            if n < min {
                guaranteed = false;
                if !self.force {
                    return Err(Error::arg(format!("side {n} must exceed 4(2k^2+1) = {}", min - 1)));
                }
                if n < 2 * c || n < 2 * (2 * k + 3) {
                    return Err(Error::arg(format!("side {n} leaves no room for fringes and middle (need {})", (2 * c).max(4 * k + 6))));
                }
            }
        }
        if self.slopes.iter().any(|&m| m < 0) {
            return Err(Error::arg("shear slopes must be non-negative"));
        }
        // Largest coordinate after shearing, times the level.
        let d = self.dims.len();
        let mut span: i128 = 0;
        for i in 0..d {
            let mut row = self.dims[i] as i128;
            if !self.slopes.is_empty() {
                let mut idx = 0;
                for r in 0..d {
                    for col in r + 1..d {
                        if r == i {
                            row += self.slopes[idx] as i128 * self.dims[col] as i128;
                        }
                        idx += 1;
                    }
                }
            }
            span = span.max(row);
        }
        if span.saturating_mul(k as i128) >= COORD_LIMIT {
            return Err(Error::Overflow(format!("k * side = {} exceeds 2^62", span * k as i128)));
        }
        Ok(ConstructionMeta {
            spec1: n1,
            spec2: n2,
            swapped1: n1 != self.spec1,
            swapped2: n2 != self.spec2,
            middle_offset: c,
            guaranteed,
        })
    }
}

/// `L ∪ [c, n−c] ∪ (n − R)`.
pub fn build_1d(params: &ConstructionParams) -> Result<Construction> {
    if params.dims.len() != 1 {
        return Err(Error::Dimension { expected: 1, found: params.dims.len() });
    }
    if !params.slopes.is_empty() {
        return Err(Error::arg("one-dimensional sets take no shear"));
    }
    let meta = params.validate()?;
    let (k, n, c) = (params.k, params.dims[0], meta.middle_offset);
    let mut b = SetBuilder::new(&[0], &[n])?;
    fringe_1d(k, Fringe1d::L)?.for_each_point(|p| b.insert(p));
    fringe_1d(k, Fringe1d::R)?.for_each_point(|p| b.insert(&[n - p[0]]));
    b.insert_box(&[c], &[n - c]);
    Ok(Construction { set: b.build()?, meta })
}

fn all_corners(d: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..1u32 << d).map(move |mask| (0..d).map(|j| (mask >> (d - 1 - j) & 1) as u8).collect())
}

fn shear(set: PointSet, d: usize, slopes: &[i64]) -> Result<PointSet> {
    if slopes.iter().all(|&m| m == 0) {
        return Ok(set);
    }
    apply_injective(&set, &IntegerAffineMap::upper_shear(d, slopes)?)
}

/// Square, rectangle, or parallelogram: four oriented fringes around a
/// filled cross, sheared by `(x, y) ↦ (x + m·y, y)` when `m > 0`.
pub fn build_2d(params: &ConstructionParams) -> Result<Construction> {
    if params.dims.len() != 2 {
        return Err(Error::Dimension { expected: 2, found: params.dims.len() });
    }
    if params.slopes.len() > 1 {
        return Err(Error::arg("planar sets take a single shear slope"));
    }
    let meta = params.validate()?;
    let (k, c) = (params.k, meta.middle_offset);
    let (n1, n2) = (params.dims[0], params.dims[1]);
    let mut b = SetBuilder::new(&[0, 0], &[n1, n2])?;
    b.insert_box(&[c, 0], &[n1 - c, n2]);
    b.insert_box(&[0, c], &[n1, n2 - c]);
    for corner in all_corners(2) {
        place_fringe(&mut b, k, &params.dims, &corner)?;
    }
    let set = shear(b.build()?, 2, &params.slopes)?;
    Ok(Construction { set, meta })
}

/// The box `[0,n₁]×…×[0,n_d]` minus a cube of side `c` at every vertex, with
/// the `2^d` oriented fringes in the vertices, sheared by the
/// upper-triangular map built from `slopes`.
pub fn build_ddim(params: &ConstructionParams) -> Result<Construction> {
    let d = params.dims.len();
    if d < 2 {
        return Err(Error::arg(format!("dimension must be at least 2, got {d}")));
    }
    if !params.slopes.is_empty() && params.slopes.len() != d * (d - 1) / 2 {
        return Err(Error::arg(format!("dimension {d} takes {} slopes, got {}", d * (d - 1) / 2, params.slopes.len())));
    }
    let meta = params.validate()?;
    let (k, c) = (params.k, meta.middle_offset);
    let lo = vec![0i64; d];
    let mut b = SetBuilder::new(&lo, &params.dims)?;
    b.insert_box(&lo, &params.dims);
    for corner in all_corners(d) {
        let a: Vec<i64> = (0..d).map(|j| if corner[j] == 1 { 0 } else { params.dims[j] - c + 1 }).collect();
        let z: Vec<i64> = (0..d).map(|j| if corner[j] == 1 { c - 1 } else { params.dims[j] }).collect();
        b.remove_box(&a, &z);
    }
    for corner in all_corners(d) {
        place_fringe(&mut b, k, &params.dims, &corner)?;
    }
    let set = shear(b.build()?, d, &params.slopes)?;
    Ok(Construction { set, meta })
}
