//! Continuous primitive integral on the extended plane.
//!
//! A distribution `f` is stored as its continuous primitive `F` on
//! `[-inf, inf]^2`, vanishing on the `x = -inf` and `y = -inf` edges. Integrals
//! over intervals are corner combinations of `F`; products with functions of
//! bounded Hardy-Krause variation are Riemann-Stieltjes sums.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod num;
pub mod quad;

pub mod convolution;
pub mod extplane;
pub mod integral;
pub mod operators;
pub mod primitive;
pub mod stieltjes;
pub mod variation;

pub use error::{Error, Result};
pub use extplane::{
    make_interval, uniform_grid, Chart, ChartCoord, ExtKind, ExtPoint2, ExtReal, Grid2, Interval2,
    OrientedInterval,
};
pub use integral::QuadResult;
pub use primitive::{
    catalog_bv, catalog_primitive, BVFunction, ContinuousFn2, Distribution, Field2, Params,
    Primitive,
};
pub use variation::VariationEstimate;
