//! Convex geometry on the three constant-curvature planes.
//!
//! The crate works in the Euclidean plane (curvature 0), the hyperbolic
//! plane in the Beltrami-Klein model (curvature -1), and the unit sphere
//! (curvature +1). On top of a small metric kernel it provides:
//!
//! * convex discs (geodesic circles, smooth Klein-model discs given by a
//!   trigonometric support function, convex polygons) with containment,
//!   chord-intersection, boundary arc-length and curvature queries
//!   ([`disc`]),
//! * the perimeter deviation `dev(K, P) = per(K ∪ P) - per(K ∩ P)` between
//!   a disc and a convex polygon, computed from an explicit boundary
//!   decomposition ([`deviation`]),
//! * best-approximating `n`-gons under perimeter deviation, both inscribed
//!   and with free vertices, plus Dowker-style tables of the optimal
//!   inscribed perimeter ([`approximator`]),
//! * numerical fits of the chord-arc defect expansions of a smooth convex
//!   boundary near a point of tangency ([`expansion`]),
//! * the one-parameter family of regular spherical triangles concentric
//!   with a spherical circle, whose deviation minimum is attained strictly
//!   between the inscribed and circumscribed members ([`sphere_cex`]).
//!
//! All computations are pure `f64` functions of immutable values and are
//! safe to call concurrently.

pub mod approximator;
pub mod deviation;
pub mod disc;
mod error;
mod scalar;
pub mod expansion;
pub mod geometry;
pub mod quadrature;
pub mod sphere_cex;

pub use error::{Error, Result};
pub use geometry::{Geometry, Isometry, Point};
