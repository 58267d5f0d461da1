//! Fringes, their closed-form sums, and the generalized MSTD sets built from
//! them in one, two, and `d` dimensions.

mod build;
mod fringe;

pub use build::{build_1d, build_2d, build_ddim, Construction, ConstructionMeta, ConstructionParams};
pub use fringe::{closed_form_1d, closed_form_2d, fringe_1d, fringe_2d, fringe_ddim, Corner2d, Fringe1d, FringeKind};
