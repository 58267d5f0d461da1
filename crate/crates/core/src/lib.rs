//! Sets with more sums than differences (MSTD) in ℤ^d.
//!
//! The crate computes iterated sumsets `sA − dA` of finite lattice sets,
//! builds sets with prescribed sumset orderings, combines them across levels,
//! and estimates how often random sets behave this way.

pub mod analysis;
pub mod combinators;
pub mod constructions;
pub mod error;
pub mod io;
pub mod lattice;
pub mod montecarlo;

pub use error::{Error, Result};
pub use lattice::{
    apply_affine, apply_injective, bounding_box, dilate, iterated_sumdiff, minkowski_sum, negate, Backend,
    IntegerAffineMap, LatticePoint, PointSet, SetBuilder, SumDiffSpec,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sumsets.md")]
    mod sumsets {}
    #[doc = include_str!("../../../book/src/fringes.md")]
    mod fringes {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/density.md")]
    mod density {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
