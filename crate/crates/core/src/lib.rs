//! Curvature functionals of parallel sets of self-similar fractals.
//!
//! The crate is organised bottom-up:
//!
//! * [`ifs`] holds similarity systems, words, stopping families and attractor samples.
//! * [`geometry`] builds parallel sets: exact unions of intervals on the line and
//!   exact Euclidean distance grids in the plane.
//! * [`functionals`] evaluates Euler characteristic, boundary length and volume,
//!   globally and localized on cell partitions.
//! * [`estimators`] assembles `ε ↦ C_k(F_ε)` curves and derives the fractal
//!   curvatures, localized limits and scaling diagnostics.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod functionals;
pub mod geometry;
pub mod ifs;

pub use error::{Error, Result};

/// A point in the plane; one-dimensional sets use the x-axis.
pub type Point = [f64; 2];
