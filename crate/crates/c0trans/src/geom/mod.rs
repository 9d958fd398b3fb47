//! Exact piecewise-linear geometry kernel.
//!
//! Points carry exact rational coordinates and distances are measured in
//! the Chebyshev (max) norm. Simplicial complexes are face-closed sets of
//! abstract simplices; PL maps assign an image point to every vertex and
//! extend affinely over each simplex. Oriented cycles are PL maps from
//! closed oriented pseudomanifolds and carry the linking-number arguments.
//!
//! All types are immutable after construction and all operations are pure.

mod complex;
mod cube;
mod intersect;
pub(crate) mod linalg;
pub(crate) mod lp;
mod point;

pub use complex::{
    c0_distance, OrientedCycle, PLMap, SignedSimplex, Simplex, SimplicialComplex, VertexId,
};
pub use cube::{freudenthal_cube, TriangulatedCube};
pub use intersect::{bounding_box, min_cheb_distance, simplex_pair_intersects};
pub use point::{cheb_dist, Point};
