//! Executable predicates for centrally symmetric convex bodies and ellipsoids.
//!
//! Bodies are polytopes in R^3 (planar work in R^2) held in dual
//! representation. On top of a small geometry kernel (hulls, sections,
//! projections, Minkowski erosion, LP feasibility) the crate provides:
//!
//! - [`parkability`]: whether a subset can be translated inside a body so as to
//!   contain the origin, universal parkability scans, and the direction map of
//!   parked translates;
//! - [`symmetry`]: centers of symmetry, section-center lines, chord-midpoint
//!   planes and the induced involution on subspaces;
//! - [`banach`]: gauge norms, operator norms of orthogonal projections and the
//!   ellipsoid certificate;
//! - [`illumination`]: shadow boundaries, weak Blaschke plane search and the
//!   cone of common supporting-line directions;
//! - [`bodies`]: generators and the JSON body format;
//! - [`report`] and [`plot`]: the analysis pipeline behind the CLI.

pub mod banach;
pub mod bodies;
pub mod body;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod illumination;
pub mod lp;
pub mod parkability;
pub mod plot;
pub mod report;
pub mod sampling;
pub mod symmetry;
pub mod tolerance;
pub mod vector;

pub use body::{ConvexBody, HPolytope};
pub use error::{Error, Result};
pub use lp::{lp_feasible, FeasibilityResult, Halfspace, Status};
pub use tolerance::Tolerances;
pub use vector::{AffineSubspace, Vector};
