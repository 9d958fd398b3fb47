//! Exact decision procedures for C0 transversality of piecewise-linear
//! subsets of R^n.
//!
//! The crate answers three kinds of questions about a pair of PL maps whose
//! images meet:
//!
//! * **Certify** — produce a sound certificate that the intersection is
//!   delta-essential for an explicit delta > 0: every pair of perturbations
//!   of the two maps within delta (uniform Chebyshev norm) still has
//!   intersecting images. The certificate is a nonzero linking number
//!   between a boundary sphere and an explicitly constructed "plate" cycle,
//!   together with exact margin bookkeeping ([`certify`]).
//! * **Refute** — construct a verified witness that the intersection is not
//!   delta-essential: a pair of perturbed maps with exactly disjoint images.
//!   The constructive route goes through nerve approximations of sampled
//!   maps and a small separating translation, and works whenever the
//!   relevant dimensions sum below the ambient dimension ([`refute`]).
//! * **Probe** — search randomly for separating perturbation pairs at a
//!   given delta; a hit is an exact refutation, absence of hits is
//!   one-sided statistical evidence ([`probe`]).
//!
//! The two-dimensional specialization for curve pairs (disk-side test and
//! squeeze-out refuter) lives in [`sakai2d`].
//!
//! All predicates and decisions use exact rational arithmetic; there are no
//! floating-point fast paths in any predicate. Maps are piecewise linear on
//! explicit triangulations: the library works in the PL category throughout,
//! which is sufficient for every construction it performs. Floating point
//! appears only in decimal renderings of results and in test oracles.

pub mod certify;
pub mod cli;
pub mod error;
pub mod geom;
pub mod linking;
pub mod probe;
pub mod refute;
pub mod sakai2d;
pub mod scalar;
pub mod scene;
pub mod svg;

pub use error::Error;
pub use scalar::Rational;

/// Convenience re-exports of the most commonly used items.
pub mod prelude {
    pub use crate::error::Error;
    pub use crate::geom::{
        c0_distance, cheb_dist, freudenthal_cube, simplex_pair_intersects, OrientedCycle, PLMap,
        Point, SimplicialComplex, TriangulatedCube,
    };
    pub use crate::scalar::{rat, Rational};
}
