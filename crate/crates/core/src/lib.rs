//! Plane-activated slicing of mapped microstructure.
//!
//! A solid is described by cubic Bernstein-Bezier maps `g: Δ → ℝ³` over a
//! shared domain tetrahedron `Δ`. The domain is paved by `n = 2^ν` boxes per
//! edge. For each slice plane `z = z0` only the boxes whose mapped, tolerance
//! inflated cuboids can meet the plane are activated. They are found by a
//! depth-first traversal seeded on the boundary of `Δ`, so the work per
//! map-plane pair is proportional to the number of active boxes rather than
//! to the `n³` boxes of the paving.
//!
//! Module map:
//!
//! * [`bbform`]: trivariate and bivariate BB-form polynomials.
//! * [`bounds`]: second differences and the per-axis offsets `μ/4^ν`.
//! * [`paving`]: box ids, corners, neighbors, edge and face enumerations.
//! * [`cuboid`]: mapped boxes and their plane tests.
//! * [`traversal`]: the single map-plane iterator.
//! * [`sweep`]: the multi-map, multi-plane driver.
//! * [`microstructure`]: per-box lattice generation and slab slicing.
//! * [`io`] and [`cli`]: file formats and the command-line driver.
//! * [`oracle`]: brute-force references used by tests and `verify`.
//! * [`synthetic`]: constructed maps used by examples and tests.

pub mod bbform;
pub mod bounds;
pub mod cli;
pub mod cuboid;
mod error;
pub mod io;
pub mod microstructure;
pub mod oracle;
pub mod paving;
pub mod sweep;
pub mod synthetic;
pub mod traversal;

pub use error::{Error, Result};

/// A point or vector in model space.
pub type Point3 = nalgebra::Vector3<f64>;
/// A point in the slice plane.
pub type Point2 = nalgebra::Vector2<f64>;
