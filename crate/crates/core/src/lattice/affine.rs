use super::set::PointSet;
use crate::error::{Error, Result};

/// `x ↦ Mx + t` with integer `M` (row-major, `d × d`) and integer `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerAffineMap {
    matrix: Vec<Vec<i64>>,
    offset: Vec<i64>,
}

impl IntegerAffineMap {
    pub fn new(matrix: Vec<Vec<i64>>, offset: Vec<i64>) -> Result<IntegerAffineMap> {
        let d = offset.len();
        if d == 0 {
            return Err(Error::arg("affine map needs dimension at least 1"));
        }
        if matrix.len() != d {
            return Err(Error::Dimension { expected: d, found: matrix.len() });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != d) {
            return Err(Error::Dimension { expected: d, found: row.len() });
        }
        Ok(IntegerAffineMap { matrix, offset })
    }

    pub fn linear(matrix: Vec<Vec<i64>>) -> Result<IntegerAffineMap> {
        let d = matrix.len();
        IntegerAffineMap::new(matrix, vec![0; d])
    }

    pub fn identity(dim: usize) -> IntegerAffineMap {
        let matrix = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        IntegerAffineMap { matrix, offset: vec![0; dim] }
    }

    /// Upper unitriangular shear with the given entries above the diagonal,
    /// listed row by row: `m12, m13, …, m1d, m23, …`.
    pub fn upper_shear(dim: usize, entries: &[i64]) -> Result<IntegerAffineMap> {
        let need = dim * (dim.saturating_sub(1)) / 2;
        if entries.len() != need {
            return Err(Error::arg(format!("shear in dimension {dim} needs {need} entries, got {}", entries.len())));
        }
        let mut m = IntegerAffineMap::identity(dim);
        let mut it = entries.iter();
        for i in 0..dim {
            for j in i + 1..dim {
                m.matrix[i][j] = *it.next().unwrap();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[i64] {
        &self.offset
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> i128 {
        let n = self.dim();
        let mut a: Vec<Vec<i128>> = self.matrix.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    pub fn apply(&self, p: &[i64]) -> Result<Vec<i64>> {
        if p.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), found: p.len() });
        }
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, &t)| {
                let v: i128 = row.iter().zip(p).map(|(&m, &x)| m as i128 * x as i128).sum::<i128>() + t as i128;
                i64::try_from(v).map_err(|_| Error::Overflow("affine image leaves the 64-bit range".into()))
            })
            .collect()
    }
}

/// Image of `A` under `f`. Collisions are merged, so for a singular `f` the
/// image can be smaller than `A`.
pub fn apply_affine(a: &PointSet, f: &IntegerAffineMap) -> Result<PointSet> {
    if a.dim() != f.dim() {
        return Err(Error::Dimension { expected: f.dim(), found: a.dim() });
    }
    let mut flat = Vec::with_capacity(a.len() * a.dim());
    let mut err = None;
    a.for_each_point(|p| {
        if err.is_some() {
            return;
        }
        match f.apply(p) {
            Ok(q) => flat.extend(q),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    PointSet::from_flat(a.dim(), flat)
}

/// Like [`apply_affine`] but refuses maps with determinant 0.
pub fn apply_injective(a: &PointSet, f: &IntegerAffineMap) -> Result<PointSet> {
    if f.determinant() == 0 {
        return Err(Error::SingularMap);
    }
    apply_affine(a, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(IntegerAffineMap::identity(3).determinant(), 1);
        let m = IntegerAffineMap::linear(vec![vec![2, 1], vec![4, 2]]).unwrap();
        assert_eq!(m.determinant(), 0);
        let m = IntegerAffineMap::linear(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.determinant(), -1);
        let m = IntegerAffineMap::linear(vec![vec![2, -3, 1], vec![2, 0, -1], vec![1, 4, 5]]).unwrap();
        assert_eq!(m.determinant(), 49);
    }

    #[test]
    fn shear_layout() {
        let m = IntegerAffineMap::upper_shear(3, &[1, 2, 3]).unwrap();
        assert_eq!(m.matrix(), &[vec![1, 1, 2], vec![0, 1, 3], vec![0, 0, 1]]);
        assert!(IntegerAffineMap::upper_shear(3, &[1]).is_err());
    }

    #[test]
    fn singular_map_is_rejected() {
        let a = PointSet::from_pairs(&[(0, 0), (1, 0), (0, 1)]);
        let f = IntegerAffineMap::linear(vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(apply_injective(&a, &f), Err(Error::SingularMap));
        assert_eq!(apply_affine(&a, &f).unwrap().len(), 2);
    }

    #[test]
    fn shear_image() {
        let a = PointSet::from_pairs(&[(0, 0), (1, 0), (0, 1), (1, 1)]);
        let f = IntegerAffineMap::new(vec![vec![1, 2], vec![0, 1]], vec![5, -1]).unwrap();
        let img = apply_injective(&a, &f).unwrap();
        assert_eq!(img, PointSet::from_pairs(&[(5, -1), (6, -1), (7, 0), (8, 0)]));
    }
}
