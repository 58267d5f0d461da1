use std::fmt;

/// A point of the integer lattice ℤ^d.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    /// Panics if `coords` is empty; a lattice point has dimension at least 1.
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        let coords = coords.into();
        assert!(!coords.is_empty(), "lattice point needs at least one coordinate");
        LatticePoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        LatticePoint::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }
}

impl From<i64> for LatticePoint {
    fn from(x: i64) -> Self {
        LatticePoint(vec![x])
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(c: Vec<i64>) -> Self {
        LatticePoint::new(c)
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(c: &[i64]) -> Self {
        LatticePoint::new(c.to_vec())
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint(vec![x, y])
    }
}

impl From<(i64, i64, i64)> for LatticePoint {
    fn from((x, y, z): (i64, i64, i64)) -> Self {
        LatticePoint(vec![x, y, z])
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(c: [i64; N]) -> Self {
        LatticePoint::new(c.to_vec())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
