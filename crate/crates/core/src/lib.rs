//! Optimal n-point quantizers for probability measures carried by planar curves.
//!
//! The crate covers three layers:
//!
//! * [`curve`]: piecewise line/arc curves with exact arc-length parametrization,
//!   densities over arc length and the midpoint quadrature used for every integral.
//! * [`closedform`]: exact optimal codebooks and quantization errors for the uniform
//!   distribution on a segment, the unit circle and the boundary of the unit
//!   equilateral triangle, plus affine transport of codebooks.
//! * [`solver`]: Lloyd fixed-point iteration with seeded multi-start, and independent
//!   oracles (interval dynamic program, equal-arc circle scan) used to cross-check it.
//!
//! [`asymptotics`] turns `(n, V_n)` series into quantization dimension and coefficient
//! statistics, and [`exact`] evaluates Voronoi cells analytically on polygonal curves.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![deny(rust_2018_idioms)]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod closedform;
pub mod codebook;
pub mod curve;
mod error;
pub mod exact;
mod fmath;
pub mod geom;
pub mod solver;

pub use codebook::Codebook;
pub use curve::{CurveDistribution, Density, ParametricCurve, Piece};
pub use error::{Error, Result};
pub use geom::Point;
pub use solver::{QuantizationResult, SolverConfig};
