use serde::{Deserialize, Serialize};

/// Numeric tolerances shared by every predicate.
///
/// `Default` is tuned for icosphere-discretized smooth bodies (642 vertices);
/// [`Tolerances::exact`] tightens the shape thresholds for exact polytopes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute slack for incidence tests (vertex on facet, point in body).
    pub geom: f64,
    /// Feasibility slack of the LP solver.
    pub lp: f64,
    /// Sections with inradius below `section * diameter` are flagged degenerate.
    pub section: f64,
    /// Relative Hausdorff residual below which a center of symmetry is accepted.
    pub symmetry: f64,
    /// Relative distance of section centers from their fitted line.
    pub collinearity: f64,
    /// Relative distance of chord midpoints from their fitted plane.
    pub coplanarity: f64,
    /// Quadric fit residual accepted by the ellipsoid certificate.
    pub ellipsoid: f64,
    /// Operator norm excess over 1 accepted for orthogonal projections.
    pub projection: f64,
    /// Relative planarity residual of the weak Blaschke plane search.
    pub blaschke: f64,
    /// Largest tangent of the angle between a supporting-line direction and
    /// the crossed facets for which a supporting cone is reported nonempty.
    pub psi: f64,
    /// Angular tolerance (radians) for the subspace involution audit.
    pub involution: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geom: 1e-9,
            lp: 1e-9,
            section: 1e-6,
            symmetry: 5e-2,
            collinearity: 5e-2,
            coplanarity: 5e-2,
            ellipsoid: 5e-2,
            projection: 5e-3,
            blaschke: 5e-2,
            psi: 0.25,
            involution: 2e-2,
        }
    }
}

impl Tolerances {
    /// Thresholds for exact polytopes, where no discretization error is expected.
    pub fn exact() -> Self {
        Tolerances {
            symmetry: 1e-6,
            collinearity: 1e-6,
            coplanarity: 1e-6,
            ellipsoid: 1e-6,
            projection: 1e-9,
            blaschke: 1e-6,
            psi: 1e-6,
            ..Self::default()
        }
    }
}
