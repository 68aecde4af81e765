//! Exact computations around degenerating polarized abelian varieties:
//! lattice normal forms, Delaunay pavings and second Voronoi cones, periodic
//! convex piecewise-affine functions, degeneration monoids, Siegel
//! tropicalization and finite Heisenberg groups with their theta sections.
//!
//! Everything except [`siegel`] works over `BigInt`/`BigRational`.

pub mod arith;
pub mod error;
pub mod linalg;
pub mod polytope;
pub mod paving;
pub mod delaunay;
pub mod pwl;
pub mod monoid;
pub mod siegel;
pub mod theta;

pub use error::Error;
