//! Parking a convex set inside a body: translating it so that it stays in
//! the body and contains the origin.
//!
//! `park(C, B)` looks for `v` with `-v ∈ C` and `C + v ⊆ B`, i.e. a point of
//! `(-C) ∩ (B ⊖ C)`. Universal parkability reduces to parking the far
//! translates `C + u` in the symmetric hulls `conv(-(C + u) ∪ (C + u))`; the
//! direction of the parking translation defines the map `phi`.

use rayon::prelude::*;
use serde::Serialize;

use crate::body::{ConvexBody, HPolytope};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{offset_hyperplane, section};
use crate::lp::{lp_feasible, maximize, Halfspace, Status};
use crate::sampling;
use crate::symmetry::symmetry_center;
use crate::tolerance::Tolerances;
use crate::vector::{orthogonal_complement, AffineSubspace, Vector};

/// Constraint systems up to this size get their feasible set enumerated
/// exactly; larger ones are probed with LPs.
const ENUMERATION_LIMIT: usize = 64;
/// Probe directions used to sample the extent of a large feasible set.
const EXTENT_PROBES: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct ParkResult {
    pub status: Status,
    pub witness: Option<Vector>,
    /// Uniform slack of the LP; negative when infeasible.
    pub margin: f64,
    /// Constraint system of the feasible translations.
    #[serde(skip)]
    pub system: HPolytope,
}

impl ParkResult {
    pub fn is_feasible(&self) -> bool {
        self.status == Status::Feasible
    }

    /// The polytope of all valid translations, or `None` when infeasible.
    pub fn feasible_set(&self, eps: f64) -> Result<Option<ConvexBody>> {
        if !self.is_feasible() {
            return Ok(None);
        }
        self.system.to_body(eps)
    }
}

/// Halfspace system of `(-C) ∩ (B ⊖ C)`, dropping erosion constraints that
/// `-v ∈ C` already implies.
pub fn park_constraints(c: &ConvexBody, b: &ConvexBody) -> Result<HPolytope> {
    check_dim(b.dim(), c.dim())?;
    let mut cons: Vec<Halfspace> = c
        .facets()
        .iter()
        .map(|f| Halfspace::new(-&f.normal, f.offset))
        .collect();
    for f in b.facets() {
        let bound = f.offset - c.support_unchecked(&f.normal);
        if bound < c.support_unchecked(&-&f.normal) {
            cons.push(Halfspace::new(f.normal.clone(), bound));
        }
    }
    Ok(HPolytope::new(b.dim(), cons))
}

/// Decides whether `c` is parkable in `b`.
///
/// The witness is the vertex centroid of the feasible set for small planar
/// systems, and the LP's maximal-slack point otherwise.
pub fn park(c: &ConvexBody, b: &ConvexBody, eps: f64) -> Result<ParkResult> {
    check_dim(b.dim(), c.dim())?;
    let tol = eps * b.diameter().max(1.0);
    let violation = c
        .vertices()
        .iter()
        .map(|v| b.max_violation(v))
        .fold(f64::NEG_INFINITY, f64::max);
    if violation > tol {
        return Err(Error::NotContained { violation });
    }
    if b.max_violation(&Vector::zeros(b.dim())) > tol {
        return Err(Error::Precondition("origin is not in B".into()));
    }
    let system = park_constraints(c, b)?;
    let feas = lp_feasible(&system.constraints, system.dim, tol)?;
    let enumerate = system.dim <= 2 && system.constraints.len() <= ENUMERATION_LIMIT;
    let witness = if feas.is_feasible() && enumerate {
        Vector::centroid(&system.vertices(tol)?).or(feas.witness)
    } else {
        feas.witness
    };
    Ok(ParkResult {
        status: feas.status,
        witness,
        margin: feas.margin,
        system,
    })
}

/// `conv(-(C + u) ∪ (C + u))`
pub fn symmetric_hull(c: &ConvexBody, u: &Vector) -> Result<ConvexBody> {
    check_dim(c.dim(), u.dim())?;
    let mut pts: Vec<Vector> = c.vertices().iter().map(|v| v + u).collect();
    let neg: Vec<Vector> = pts.iter().map(|p| -p).collect();
    pts.extend(neg);
    ConvexBody::hull(&pts, c.eps() / c.diameter().max(1.0))
}

/// Smallest admissible sphere radius: no translate `C + u` with `|u|` above
/// it contains the origin.
pub fn radius_bound(c: &ConvexBody) -> f64 {
    let reach = c.vertices().iter().map(Vector::norm).fold(0.0, f64::max);
    reach + c.diameter()
}

pub fn default_radius(c: &ConvexBody) -> f64 {
    2.0 * radius_bound(c)
}

fn check_radius(c: &ConvexBody, radius: f64) -> Result<()> {
    let bound = radius_bound(c);
    if radius > bound {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "sphere radius {radius} must exceed {bound}"
        )))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalReport {
    pub radius: f64,
    pub checked: usize,
    pub failures: usize,
    /// First sampled `u` (on the radius sphere) whose translate does not park.
    pub witness: Option<Vector>,
}

impl UniversalReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Parks `C + R u` in its symmetric hull for every sampled unit `u`.
pub fn universal_parkability(
    c: &ConvexBody,
    radius: f64,
    dirs: &[Vector],
    eps: f64,
) -> Result<UniversalReport> {
    check_radius(c, radius)?;
    let verdicts: Vec<bool> = dirs
        .par_iter()
        .map(|d| {
            let u = &d.normalized()? * radius;
            let cu = c.translated(&u)?;
            Ok(park(&cu, &symmetric_hull(c, &u)?, eps)?.is_feasible())
        })
        .collect::<Result<_>>()?;
    let first = verdicts.iter().position(|ok| !ok);
    Ok(UniversalReport {
        radius,
        checked: dirs.len(),
        failures: verdicts.iter().filter(|ok| !**ok).count(),
        witness: first.map(|i| &dirs[i].normalized().expect("checked above") * radius),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiSample {
    pub u: Vector,
    pub direction: Vector,
    /// Largest angle between two nonzero points of the feasible set.
    pub uniqueness_residual: f64,
}

/// Points spanning the feasible set: its vertices when the system is small,
/// otherwise its extreme points in a fixed set of probe directions.
fn feasible_points(system: &HPolytope, tol: f64) -> Result<Vec<Vector>> {
    if system.constraints.len() <= ENUMERATION_LIMIT {
        return system.vertices(tol);
    }
    let mut pts: Vec<Vector> = Vec::new();
    for d in sampling::directions(system.dim, EXTENT_PROBES) {
        if let Some((_, x)) = maximize(&d, &system.constraints, system.dim)? {
            pts.push(x);
        }
    }
    Ok(pts)
}

/// Direction of the translation parking `C + u` in its symmetric hull.
pub fn phi_direction(c: &ConvexBody, u: &Vector, eps: f64) -> Result<PhiSample> {
    let cu = c.translated(u)?;
    let tol = eps * cu.diameter().max(1.0);
    if cu.contains(&Vector::zeros(c.dim()), tol) {
        return Err(Error::Precondition(
            "translate already contains the origin".into(),
        ));
    }
    let parked = park(&cu, &symmetric_hull(c, u)?, eps)?;
    if !parked.is_feasible() {
        return Err(Error::Infeasible(
            "translate is not parkable in its symmetric hull".into(),
        ));
    }
    let scale = u.norm().max(1.0);
    let pts: Vec<Vector> = feasible_points(&parked.system, tol)?
        .into_iter()
        .filter(|p| p.norm() > 1e-9 * scale)
        .collect();
    let center = Vector::centroid(&pts)
        .or_else(|| parked.witness.clone())
        .ok_or_else(|| Error::Degenerate("empty feasible set".into()))?;
    let direction = center.normalized()?;
    let mut spread: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            spread = spread.max(p.angle(q));
        }
    }
    Ok(PhiSample {
        u: u.clone(),
        direction,
        uniqueness_residual: spread,
    })
}

/// Angle between the parking direction of the antipodal translate
/// `-(C + u)` and `-phi(u)`. Both translates share the symmetric hull.
pub fn phi_oddness(c: &ConvexBody, u: &Vector, eps: f64) -> Result<f64> {
    let plus = phi_direction(c, u, eps)?;
    let minus = phi_direction(&c.negated()?, &-u, eps)?;
    Ok(minus.direction.angle(&-&plus.direction))
}

/// Largest empty cap (radians) left by the `phi` images of the sampled
/// directions; samples where `phi` is undefined are skipped.
pub fn phi_coverage(c: &ConvexBody, radius: f64, dirs: &[Vector], eps: f64) -> Result<f64> {
    check_radius(c, radius)?;
    let images: Vec<Option<Vector>> = dirs
        .par_iter()
        .map(|d| {
            let u = &d.normalized()? * radius;
            match phi_direction(c, &u, eps) {
                Ok(s) => Ok(Some(s.direction)),
                Err(Error::Infeasible(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let pts: Vec<Vector> = images.into_iter().flatten().collect();
    let probes = sampling::directions(c.dim(), 4 * dirs.len().max(64));
    Ok(sampling::largest_empty_cap(&pts, &probes))
}

/// Symmetry residual of the projection of `C + u` on `phi(u)^⊥`.
pub fn phi_projection_symmetry_check(c: &ConvexBody, u: &Vector, tol: &Tolerances) -> Result<f64> {
    let sample = phi_direction(c, u, tol.geom)?;
    let plane = AffineSubspace::linear(
        c.dim(),
        &orthogonal_complement(&[sample.direction], c.dim()),
    )?;
    let shadow = crate::geometry::project(&c.translated(u)?, &plane)?;
    Ok(symmetry_center(&shadow, tol)?.residual)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionWitness {
    pub direction: Vector,
    pub offset_fraction: f64,
}

impl SectionWitness {
    /// Recomputes the section and reports whether it is still not parkable.
    pub fn revalidate(&self, b: &ConvexBody, tol: &Tolerances) -> Result<bool> {
        Ok(matches!(
            section_outcome(b, &self.direction, self.offset_fraction, tol)?,
            SectionOutcome::NotParkable
        ))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionScan {
    pub checked: usize,
    /// Empty or degenerate sections, skipped.
    pub skipped: usize,
    pub failures: Vec<SectionWitness>,
}

impl SectionScan {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn pass_rate(&self) -> f64 {
        let tested = self.checked - self.skipped;
        if tested == 0 {
            return 1.0;
        }
        (tested - self.failures.len()) as f64 / tested as f64
    }
}

enum SectionOutcome {
    Parkable,
    NotParkable,
    Skipped,
}

fn section_outcome(
    b: &ConvexBody,
    dir: &Vector,
    fraction: f64,
    tol: &Tolerances,
) -> Result<SectionOutcome> {
    let h = offset_hyperplane(b, dir, fraction)?;
    let sec = section(b, &h, tol.section)?;
    let Some(sec) = sec.proper() else {
        return Ok(SectionOutcome::Skipped);
    };
    let c = sec.ambient_body()?;
    Ok(if park(&c, b, tol.geom)?.is_feasible() {
        SectionOutcome::Parkable
    } else {
        SectionOutcome::NotParkable
    })
}

/// Parks every sampled hyperplane section of `b` in `b`.
pub fn condition_iii_scan(
    b: &ConvexBody,
    dirs: &[Vector],
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<SectionScan> {
    let origin = Vector::zeros(b.dim());
    if b.max_violation(&origin) >= -tol.geom * b.diameter().max(1.0) {
        return Err(Error::Precondition("origin is not interior to B".into()));
    }
    let per_dir: Vec<Vec<SectionOutcome>> = dirs
        .par_iter()
        .map(|d| {
            offsets
                .iter()
                .map(|&f| section_outcome(b, d, f, tol))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut scan = SectionScan {
        checked: dirs.len() * offsets.len(),
        skipped: 0,
        failures: Vec::new(),
    };
    for (d, outcomes) in dirs.iter().zip(per_dir) {
        for (&f, o) in offsets.iter().zip(outcomes) {
            match o {
                SectionOutcome::Parkable => {}
                SectionOutcome::Skipped => scan.skipped += 1,
                SectionOutcome::NotParkable => scan.failures.push(SectionWitness {
                    direction: d.normalized()?,
                    offset_fraction: f,
                }),
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate, BodySpec};

    const EPS: f64 = 1e-9;

    fn body(pts: &[[f64; 2]]) -> ConvexBody {
        let pts: Vec<Vector> = pts.iter().map(|p| Vector::from(*p)).collect();
        ConvexBody::hull(&pts, EPS).unwrap()
    }

    fn square(h: f64) -> ConvexBody {
        body(&[[h, h], [-h, h], [-h, -h], [h, -h]])
    }

    fn regular_polygon(n: usize, r: f64) -> ConvexBody {
        let pts: Vec<Vector> = sampling::circle(n, 0.0).iter().map(|p| p * r).collect();
        ConvexBody::hull(&pts, EPS).unwrap()
    }

    #[test]
    fn segment_parks_at_its_midpoint_translation() {
        let c = body(&[[1.0, 0.0], [2.0, 0.0]]);
        assert!(matches!(
            park(&c, &square(1.0), EPS),
            Err(Error::NotContained { .. })
        ));
        let r = park(&c, &square(2.0), EPS).unwrap();
        assert!(r.is_feasible());
        let w = r.witness.unwrap();
        assert!((w[0] + 1.5).abs() < 1e-9 && w[1].abs() < 1e-9);
    }

    #[test]
    fn bottom_edge_of_triangle_is_not_parkable() {
        let b = body(&[[-1.0, -0.5], [1.0, -0.5], [0.0, 1.0]]);
        let c = body(&[[-1.0, -0.5], [1.0, -0.5]]);
        let r = park(&c, &b, EPS).unwrap();
        assert!(!r.is_feasible());
        assert!(r.witness.is_none());
    }

    #[test]
    fn point_parks_at_its_negative() {
        let c = body(&[[0.3, 0.4]]);
        let r = park(&c, &regular_polygon(64, 1.0), EPS).unwrap();
        let w = r.witness.unwrap();
        assert!((w[0] + 0.3).abs() < 1e-12 && (w[1] + 0.4).abs() < 1e-12);
    }

    #[test]
    fn uncontained_set_is_rejected() {
        let c = body(&[[0.0, 0.0], [2.0, 0.0]]);
        assert!(matches!(
            park(&c, &square(1.0), EPS),
            Err(Error::NotContained { .. })
        ));
    }

    #[test]
    fn witness_satisfies_both_conditions() {
        let b = regular_polygon(7, 2.0);
        let c = body(&[[0.5, 0.5], [1.2, 0.3], [0.9, 1.0]]);
        let r = park(&c, &b, EPS).unwrap();
        let v = r.witness.unwrap();
        assert!(c.contains(&-&v, 1e-9));
        for p in c.vertices() {
            assert!(b.contains(&(p + &v), 1e-9));
        }
    }

    #[test]
    fn symmetric_hull_examples() {
        let p = body(&[[1.0, 0.0]]);
        let s = symmetric_hull(&p, &Vector::zeros(2)).unwrap();
        assert_eq!(s.vertices().len(), 2);
        assert!((s.support(&Vector::from([1.0, 0.0])).unwrap() - 1.0).abs() < 1e-12);

        let sq = body(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let s = symmetric_hull(&sq, &Vector::from([2.0, 0.0])).unwrap();
        // hull of ±([2,3]×[0,1]): (3,0),(3,1),(2,1) and their negatives
        assert_eq!(s.vertices().len(), 6);
        for v in s.vertices() {
            assert!(s.contains(&-v, 1e-12));
        }
        let expected = [[3.0, 0.0], [3.0, 1.0], [2.0, 1.0]];
        for e in expected {
            let e = Vector::from(e);
            assert!(s.vertices().iter().any(|v| v.distance(&e) < 1e-12));
            assert!(s.vertices().iter().any(|v| v.distance(&-&e) < 1e-12));
        }
    }

    #[test]
    fn universal_parkability_examples() {
        let dirs = sampling::directions(2, 256);
        let r = universal_parkability(&square(1.0), 6.0, &dirs, EPS).unwrap();
        assert!(r.passed(), "{r:?}");
        let seg = body(&[[0.0, 0.0], [1.0, 0.0]]);
        assert!(universal_parkability(&seg, 6.0, &dirs, EPS)
            .unwrap()
            .passed());
        // planar convex sets are universally parkable in the plane; the
        // triangle fails once embedded in R^3
        let tri = body(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!(universal_parkability(&tri, 6.0, &dirs, EPS)
            .unwrap()
            .passed());
        let tri3: Vec<Vector> = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
            .iter()
            .map(|p| Vector::from(*p))
            .collect();
        let tri3 = ConvexBody::hull(&tri3, EPS).unwrap();
        let r = universal_parkability(&tri3, 6.0, &sampling::directions(3, 256), EPS).unwrap();
        assert!(!r.passed());
        assert!((r.witness.unwrap().norm() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn small_radius_is_rejected() {
        let dirs = sampling::directions(2, 8);
        match universal_parkability(&square(1.0), 2.0, &dirs, EPS) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("must exceed")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn phi_of_point_points_back_at_origin() {
        let c = body(&[[0.3, 0.4]]);
        let u = Vector::from([3.0, -4.0]);
        let s = phi_direction(&c, &u, EPS).unwrap();
        let expected = (-&(&Vector::from([0.3, 0.4]) + &u)).normalized().unwrap();
        assert!(s.direction.angle(&expected) < 1e-12);
        assert!(s.uniqueness_residual < 1e-12);
    }

    #[test]
    fn phi_of_centered_square_is_minus_u() {
        let c = square(1.0);
        for d in sampling::directions(2, 16) {
            let u = &d * 6.0;
            let s = phi_direction(&c, &u, EPS).unwrap();
            assert!(s.direction.angle(&-&d) < 1e-9, "{u:?} -> {:?}", s.direction);
            assert!(phi_oddness(&c, &u, EPS).unwrap() < 1e-6);
        }
    }

    #[test]
    fn phi_of_triangle_is_odd_and_unique() {
        let c = body(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let radius = default_radius(&c);
        for d in sampling::directions(2, 24) {
            let u = &d * radius;
            assert!(phi_oddness(&c, &u, EPS).unwrap() < 1e-6, "{u:?}");
            assert!(phi_direction(&c, &u, EPS).unwrap().uniqueness_residual < 1e-6);
        }
    }

    #[test]
    fn central_sections_of_symmetric_body_park() {
        let cube = generate(&BodySpec::cube()).unwrap();
        let dirs = sampling::directions(3, 32);
        let scan = condition_iii_scan(&cube, &dirs, &[0.0], &Tolerances::default()).unwrap();
        assert!(scan.passed());
    }

    #[test]
    fn cube_corner_section_is_not_parkable() {
        let cube = generate(&BodySpec::cube()).unwrap();
        let w = SectionWitness {
            direction: Vector::from([1.0, 1.0, 1.0]).normalized().unwrap(),
            offset_fraction: 0.4,
        };
        assert!(w.revalidate(&cube, &Tolerances::default()).unwrap());
    }
}
