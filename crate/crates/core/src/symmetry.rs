//! Centers of symmetry and the subspace involution built from them.
//!
//! For a centrally symmetric body `B`, a plane direction `H` is mapped to the
//! line `H'` carrying the centers of the sections parallel to `H`, and a line
//! direction `L` to the plane `L'` carrying the midpoints of the chords
//! parallel to `L`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{offset_hyperplane, project, section};
use crate::lp::lp_feasible;
use crate::parkability::SectionWitness;
use crate::sampling;
use crate::tolerance::Tolerances;
use crate::vector::{orthogonal_complement, rank, AffineSubspace, Vector};

/// Sampled directions added to the facet normals when validating a center.
pub const VALIDATION_SAMPLES: usize = 512;
/// Chord offsets are taken on a `CHORD_GRID x CHORD_GRID` grid.
pub const CHORD_GRID: usize = 11;
/// Fraction of the shadow, around its Chebyshev center, holding the chord grid.
const CHORD_SHRINK: f64 = 0.95;
/// Directions probed by the planar supporting-lines criterion.
pub const SUPPORT_DIRECTIONS: usize = 360;

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    /// Present when the residual is within the symmetry tolerance.
    pub center: Option<Vector>,
    /// Candidate center solved from the coordinate directions.
    pub estimate: Vector,
    /// Support-sampled Hausdorff distance between `K` and `2p - K`, relative
    /// to the diameter of `K`.
    pub residual: f64,
}

/// Detects a center of symmetry `p` with `K = 2p - K`.
pub fn symmetry_center(k: &ConvexBody, tol: &Tolerances) -> Result<SymmetryReport> {
    if k.affine_dim() == 0 {
        return Ok(SymmetryReport {
            center: Some(k.vertices()[0].clone()),
            estimate: k.vertices()[0].clone(),
            residual: 0.0,
        });
    }
    if k.is_flat() {
        let chart = k.affine_hull();
        let pts: Vec<Vector> = k.vertices().iter().map(|v| chart.to_chart(v)).collect();
        let flat = ConvexBody::hull(&pts, k.eps() / k.diameter().max(1.0))?;
        let rep = symmetry_center(&flat, tol)?;
        return Ok(SymmetryReport {
            center: rep.center.map(|c| chart.from_chart(&c)),
            estimate: chart.from_chart(&rep.estimate),
            residual: rep.residual,
        });
    }
    let dim = k.dim();
    let p = Vector::new(
        (0..dim)
            .map(|j| {
                let e = Vector::basis(dim, j);
                0.5 * (k.support_unchecked(&e) - k.support_unchecked(&-&e))
            })
            .collect(),
    );
    let residual = center_residual(k, &p);
    Ok(SymmetryReport {
        center: (residual <= tol.symmetry).then(|| p.clone()),
        estimate: p,
        residual,
    })
}

/// `max |h(u) - h(-u) - 2 p.u| / diameter` over facet normals and samples.
fn center_residual(k: &ConvexBody, p: &Vector) -> f64 {
    let diam = k.diameter();
    if diam <= f64::MIN_POSITIVE {
        return 0.0;
    }
    let gap =
        |u: &Vector| (k.support_unchecked(u) - k.support_unchecked(&-u) - 2.0 * p.dot(u)).abs();
    let sampled = sampling::directions(k.dim(), VALIDATION_SAMPLES);
    k.facets()
        .iter()
        .map(|f| &f.normal)
        .chain(&sampled)
        .map(gap)
        .fold(0.0, f64::max)
        / diam
}

/// Eigen-decomposition of the second-moment matrix `sum x x^T`, eigenvalues
/// ascending.
fn second_moment_axes(points: &[Vector]) -> Option<Vec<(f64, Vector)>> {
    let dim = points.first()?.dim();
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for p in points {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += p[i] * p[j];
            }
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut axes: Vec<(f64, Vector)> = (0..dim)
        .map(|i| {
            let v = eig.eigenvectors.column(i);
            (eig.eigenvalues[i], Vector::new(v.iter().copied().collect()))
        })
        .collect();
    axes.sort_by(|a, b| a.0.total_cmp(&b.0));
    Some(axes)
}

/// Least-squares line through the origin.
pub fn fit_line(points: &[Vector]) -> Option<Vector> {
    second_moment_axes(points).map(|mut a| a.pop().unwrap().1)
}

/// Unit normal of the least-squares plane through the origin.
pub fn fit_plane_normal(points: &[Vector]) -> Option<Vector> {
    second_moment_axes(points).map(|a| a[0].1.clone())
}

fn require_symmetric(b: &ConvexBody, tol: &Tolerances) -> Result<()> {
    let rep = symmetry_center(b, tol)?;
    match rep.center {
        Some(c) if c.norm() <= tol.symmetry * b.diameter() => Ok(()),
        _ => Err(Error::Precondition(format!(
            "body is not centrally symmetric (residual {:.3e})",
            rep.residual
        ))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterLine {
    /// Unit normal of the section planes.
    pub normal: Vector,
    /// Centers of the proper sections, in offset order.
    pub centers: Vec<Vector>,
    /// Least-squares line through the origin and the centers.
    pub line: Option<AffineSubspace>,
    /// Largest center-to-line distance relative to the body diameter.
    pub collinearity_residual: f64,
    /// Offset fraction of the first proper section without a center.
    pub centerless_offset: Option<f64>,
    /// Sections skipped as empty or degenerate.
    pub skipped: usize,
}

impl CenterLine {
    pub fn all_centered(&self) -> bool {
        self.centerless_offset.is_none()
    }
}

/// Centers of the sections `(H + x) ∩ B` for planes with unit normal `normal`
/// at the given offset fractions, and the line through them.
pub fn section_center_line(
    b: &ConvexBody,
    normal: &Vector,
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<CenterLine> {
    check_dim(b.dim(), normal.dim())?;
    require_symmetric(b, tol)?;
    center_line_unchecked(b, normal, offsets, tol)
}

/// `section_center_line` for each of `normals`, checking the symmetry of `b`
/// once.
pub fn section_center_lines(
    b: &ConvexBody,
    normals: &[Vector],
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<Vec<CenterLine>> {
    for n in normals {
        check_dim(b.dim(), n.dim())?;
    }
    require_symmetric(b, tol)?;
    normals
        .par_iter()
        .map(|n| center_line_unchecked(b, n, offsets, tol))
        .collect()
}

fn center_line_unchecked(
    b: &ConvexBody,
    normal: &Vector,
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<CenterLine> {
    let normal = normal.normalized()?;
    let mut centers = Vec::new();
    let mut centerless_offset = None;
    let mut skipped = 0;
    for &f in offsets {
        let h = offset_hyperplane(b, &normal, f)?;
        let Some(sec) = section(b, &h, tol.section)?.proper().cloned() else {
            skipped += 1;
            continue;
        };
        match symmetry_center(&sec.body, tol)?.center {
            Some(c) => centers.push(sec.chart.from_chart(&c)),
            None => {
                centerless_offset.get_or_insert(f);
            }
        }
    }
    if skipped == offsets.len() {
        return Err(Error::Degenerate("every section is degenerate".into()));
    }
    let diam = b.diameter();
    let (line, collinearity_residual) = match fit_line(&centers) {
        Some(d) if centers.iter().any(|c| c.norm() > tol.geom * diam.max(1.0)) => {
            let line = AffineSubspace::linear(b.dim(), &[d])?;
            let res = centers.iter().map(|c| line.distance(c)).fold(0.0, f64::max) / diam;
            (Some(line), res)
        }
        _ => (None, 0.0),
    };
    Ok(CenterLine {
        normal,
        centers,
        line,
        collinearity_residual,
        centerless_offset,
        skipped,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MidpointPlane {
    pub line_direction: Vector,
    /// Unit normal of the least-squares plane through the origin.
    pub normal: Vector,
    pub midpoints: Vec<Vector>,
    /// Largest midpoint-to-plane distance relative to the body diameter.
    pub coplanarity_residual: f64,
}

impl MidpointPlane {
    pub fn plane(&self) -> Result<AffineSubspace> {
        AffineSubspace::hyperplane(&self.normal, 0.0)
    }
}

/// Parameter interval of the chord `{y + t d} ∩ B`, if nonempty.
pub fn chord(b: &ConvexBody, y: &Vector, d: &Vector) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for f in b.facets() {
        let a = f.normal.dot(d);
        let r = f.offset - f.normal.dot(y);
        if a.abs() <= 1e-14 {
            if r < -b.eps() {
                return None;
            }
        } else if a > 0.0 {
            hi = hi.min(r / a);
        } else {
            lo = lo.max(r / a);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Midpoints of the chords of `B` parallel to `line_dir` and the plane
/// through them.
pub fn chord_midpoint_plane(
    b: &ConvexBody,
    line_dir: &Vector,
    tol: &Tolerances,
) -> Result<MidpointPlane> {
    check_dim(b.dim(), line_dir.dim())?;
    if b.dim() != 3 || b.is_flat() {
        return Err(Error::Precondition("chord midpoints need a 3D body".into()));
    }
    require_symmetric(b, tol)?;
    let d = line_dir.normalized()?;
    let perp = AffineSubspace::linear(3, &orthogonal_complement(&[d.clone()], 3))?;
    let shadow = project(b, &perp)?;
    let center = lp_feasible(shadow.facets(), 2, tol.geom)?
        .witness
        .ok_or_else(|| Error::Degenerate("empty shadow".into()))?;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in shadow.vertices() {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    let diam = b.diameter();
    let mut midpoints = Vec::new();
    for i in 0..CHORD_GRID {
        for j in 0..CHORD_GRID {
            let s = |k: usize, idx: usize| {
                lo[k] + (hi[k] - lo[k]) * idx as f64 / (CHORD_GRID - 1) as f64
            };
            let y = Vector::from([s(0, i), s(1, j)]);
            let pulled = center.axpy(1.0 / CHORD_SHRINK, &(&y - &center));
            if !shadow.contains(&pulled, tol.geom) {
                continue;
            }
            let base = perp.from_chart(&y);
            if let Some((t0, t1)) = chord(b, &base, &d) {
                if t1 - t0 >= tol.section * diam {
                    midpoints.push(base.axpy(0.5 * (t0 + t1), &d));
                }
            }
        }
    }
    if midpoints.len() < 3 {
        return Err(Error::Degenerate("fewer than three proper chords".into()));
    }
    let normal = fit_plane_normal(&midpoints).expect("nonempty");
    let coplanarity_residual = midpoints
        .iter()
        .map(|m| normal.dot(m).abs())
        .fold(0.0, f64::max)
        / diam;
    Ok(MidpointPlane {
        line_direction: d,
        normal,
        midpoints,
        coplanarity_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prime {
    pub subspace: AffineSubspace,
    /// Collinearity or coplanarity residual of the fit (0 for the trivial cases).
    pub residual: f64,
}

/// The involution `S -> S'` on linear subspaces of R^3: the full space and
/// `{0}` are swapped, planes go to their section-center lines and lines to
/// their chord-midpoint planes.
pub fn subspace_prime(b: &ConvexBody, s: &AffineSubspace, tol: &Tolerances) -> Result<Prime> {
    check_dim(b.dim(), s.ambient_dim())?;
    if !s.is_linear(tol.geom) {
        return Err(Error::Precondition("subspace must be linear".into()));
    }
    if b.dim() != 3 {
        return Err(Error::Precondition("involution is defined in R^3".into()));
    }
    match s.dim() {
        0 => Ok(Prime {
            subspace: AffineSubspace::full(3),
            residual: 0.0,
        }),
        3 => Ok(Prime {
            subspace: AffineSubspace::zero(3),
            residual: 0.0,
        }),
        2 => {
            let n = &s.normals()[0];
            let cl = section_center_line(b, n, &crate::geometry::OFFSET_FRACTIONS, tol)?;
            if let Some(f) = cl.centerless_offset {
                return Err(Error::Degenerate(format!(
                    "section at offset {f} has no center"
                )));
            }
            let line = cl
                .line
                .ok_or_else(|| Error::Degenerate("section centers span no line".into()))?;
            Ok(Prime {
                subspace: line,
                residual: cl.collinearity_residual,
            })
        }
        _ => {
            let mp = chord_midpoint_plane(b, &s.directions[0], tol)?;
            Ok(Prime {
                subspace: mp.plane()?,
                residual: mp.coplanarity_residual,
            })
        }
    }
}

/// A line `L` inside a plane `H`, both through the origin.
#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub line: Vector,
    pub plane_normal: Vector,
}

impl Flag {
    /// Random flag: a uniform plane normal and a uniform direction inside it.
    pub fn random<R: Rng>(rng: &mut R) -> Flag {
        let n = sampling::random_unit(rng, 3);
        loop {
            let d = sampling::random_unit(rng, 3);
            let l = d.axpy(-d.dot(&n), &n);
            if let Ok(l) = l.normalized() {
                return Flag {
                    line: l,
                    plane_normal: n,
                };
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagAudit {
    pub flag: Flag,
    pub h_prime: Vector,
    /// Angle by which `H'` leaves `L'`.
    pub reversal_angle: f64,
    /// Angle between `H''` and `H`.
    pub involution_angle: f64,
    /// Whether `H` and `H'` span R^3, i.e. meet only at the origin.
    pub trivial_intersection: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionAudit {
    pub flags: Vec<FlagAudit>,
    pub reversal_violations: usize,
    pub involution_violations: usize,
    pub intersection_violations: usize,
}

impl InvolutionAudit {
    pub fn violations(&self) -> usize {
        self.reversal_violations + self.involution_violations + self.intersection_violations
    }
}

/// Checks `L ⊂ H ⇒ H' ⊂ L'`, `H'' = H` and `H ∩ H' = {0}` on each flag.
pub fn involution_audit(
    b: &ConvexBody,
    flags: &[Flag],
    tol: &Tolerances,
) -> Result<InvolutionAudit> {
    let audits: Vec<FlagAudit> = flags
        .par_iter()
        .map(|flag| {
            let h = AffineSubspace::hyperplane(&flag.plane_normal, 0.0)?;
            let l = AffineSubspace::linear(3, &[flag.line.clone()])?;
            let h1 = subspace_prime(b, &h, tol)?.subspace;
            let l1 = subspace_prime(b, &l, tol)?.subspace;
            let h2 = subspace_prime(b, &h1, tol)?.subspace;
            let mut span = h.directions.clone();
            span.extend(h1.directions.iter().cloned());
            Ok(FlagAudit {
                flag: flag.clone(),
                h_prime: h1.directions[0].clone(),
                reversal_angle: h1.containment_angle(&l1),
                involution_angle: h2.angle_to(&h),
                trivial_intersection: rank(&span, 1e-9) == 3,
            })
        })
        .collect::<Result<_>>()?;
    Ok(InvolutionAudit {
        reversal_violations: audits
            .iter()
            .filter(|a| a.reversal_angle > tol.involution)
            .count(),
        involution_violations: audits
            .iter()
            .filter(|a| a.involution_angle > tol.involution)
            .count(),
        intersection_violations: audits.iter().filter(|a| !a.trivial_intersection).count(),
        flags: audits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportsReport {
    pub checked: usize,
    /// First direction whose two contact sets do not surround the origin.
    pub witness: Option<Vector>,
}

impl SupportsReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// For each sampled direction `v`, tests whether the origin lies in the hull
/// of the contact sets of the two supporting lines orthogonal to `v`.
pub fn supports_criterion_2d(b: &ConvexBody, tol: &Tolerances) -> Result<SupportsReport> {
    if b.dim() != 2 || b.is_flat() {
        return Err(Error::Precondition(
            "planar body with interior expected".into(),
        ));
    }
    let origin = Vector::zeros(2);
    let scale = b.diameter().max(1.0);
    if b.max_violation(&origin) >= -tol.geom * scale {
        return Err(Error::Precondition("origin is not interior".into()));
    }
    let dirs = sampling::circle(SUPPORT_DIRECTIONS, 0.0);
    for v in &dirs {
        let mut contact: Vec<Vector> = Vec::new();
        for w in [v.clone(), -v] {
            for i in b.support_vertices(&w, tol.geom * scale)? {
                contact.push(b.vertices()[i].clone());
            }
        }
        let hull = ConvexBody::hull(&contact, tol.geom)?;
        if !hull.contains(&origin, tol.geom * scale) {
            return Ok(SupportsReport {
                checked: dirs.len(),
                witness: Some(v.clone()),
            });
        }
    }
    Ok(SupportsReport {
        checked: dirs.len(),
        witness: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionCenters {
    pub body_center: Option<Vector>,
    pub checked: usize,
    /// Plane normals whose projections have no center.
    pub centerless: Vec<Vector>,
    /// Projections whose center does not match the projected body center.
    pub mismatches: usize,
}

impl ProjectionCenters {
    /// Centered body with matching projection centers, or centerless body
    /// with at least one centerless projection.
    pub fn consistent(&self) -> bool {
        match self.body_center {
            Some(_) => self.centerless.is_empty() && self.mismatches == 0,
            None => !self.centerless.is_empty(),
        }
    }
}

/// Cross-checks the center of a 3D body against the centers of its
/// projections on the planes orthogonal to `normals`.
pub fn projection_center_check(
    b: &ConvexBody,
    normals: &[Vector],
    tol: &Tolerances,
) -> Result<ProjectionCenters> {
    if b.dim() != 3 {
        return Err(Error::Precondition(
            "projection check needs a 3D body".into(),
        ));
    }
    let body_center = symmetry_center(b, tol)?.center;
    let diam = b.diameter();
    let results: Vec<(Vector, Option<Vector>, AffineSubspace)> = normals
        .par_iter()
        .map(|n| {
            let plane = AffineSubspace::linear(3, &orthogonal_complement(&[n.clone()], 3))?;
            let shadow = project(b, &plane)?;
            Ok((n.clone(), symmetry_center(&shadow, tol)?.center, plane))
        })
        .collect::<Result<_>>()?;
    let mut report = ProjectionCenters {
        body_center: body_center.clone(),
        checked: normals.len(),
        centerless: Vec::new(),
        mismatches: 0,
    };
    for (n, center, plane) in results {
        match (center, &body_center) {
            (None, _) => report.centerless.push(n),
            (Some(c), Some(bc)) => {
                if c.distance(&plane.to_chart(bc)) > tol.symmetry * diam {
                    report.mismatches += 1;
                }
            }
            (Some(_), None) => {}
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterScan {
    /// Relative symmetry residual of `B` about the origin.
    pub body_residual: f64,
    pub centered: bool,
    pub checked: usize,
    pub skipped: usize,
    pub centerless: Vec<SectionWitness>,
    /// Largest relative symmetry residual over the proper sections.
    pub worst_section_residual: f64,
}

impl CenterScan {
    pub fn passed(&self) -> bool {
        self.centered && self.centerless.is_empty()
    }
}

/// `B` is symmetric about the origin and every sampled section has a center.
pub fn condition_ii_scan(
    b: &ConvexBody,
    dirs: &[Vector],
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<CenterScan> {
    let body_residual = center_residual(b, &Vector::zeros(b.dim()));
    let per_dir: Vec<Vec<Option<f64>>> = dirs
        .par_iter()
        .map(|d| {
            offsets
                .iter()
                .map(|&f| {
                    let h = offset_hyperplane(b, d, f)?;
                    match section(b, &h, tol.section)?.proper() {
                        Some(sec) => Ok(Some(symmetry_center(&sec.body, tol)?.residual)),
                        None => Ok(None),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut scan = CenterScan {
        body_residual,
        centered: body_residual <= tol.symmetry,
        checked: dirs.len() * offsets.len(),
        skipped: 0,
        centerless: Vec::new(),
        worst_section_residual: 0.0,
    };
    for (d, residuals) in dirs.iter().zip(per_dir) {
        for (&f, r) in offsets.iter().zip(residuals) {
            match r {
                None => scan.skipped += 1,
                Some(r) => {
                    scan.worst_section_residual = scan.worst_section_residual.max(r);
                    if r > tol.symmetry {
                        scan.centerless.push(SectionWitness {
                            direction: d.normalized()?,
                            offset_fraction: f,
                        });
                    }
                }
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate, BodySpec};
    use crate::geometry::OFFSET_FRACTIONS;

    fn exact() -> Tolerances {
        Tolerances::exact()
    }

    fn cube() -> ConvexBody {
        generate(&BodySpec::cube()).unwrap()
    }

    fn ball() -> ConvexBody {
        generate(&BodySpec::diagonal_ellipsoid([1.0, 1.0, 1.0])).unwrap()
    }

    fn polygon(pts: &[[f64; 2]]) -> ConvexBody {
        let pts: Vec<Vector> = pts.iter().map(|p| Vector::from(*p)).collect();
        ConvexBody::hull(&pts, 1e-9).unwrap()
    }

    #[test]
    fn translated_cube_center() {
        let t = Vector::from([1.0, 2.0, 3.0]);
        let rep = symmetry_center(&cube().translated(&t).unwrap(), &exact()).unwrap();
        assert!(rep.center.unwrap().distance(&t) < 1e-12);
        assert!(rep.residual < 1e-12);
    }

    #[test]
    fn hexagon_center() {
        let pts: Vec<Vector> = sampling::circle(6, 0.3);
        let hex = ConvexBody::hull(&pts, 1e-9).unwrap();
        let c = symmetry_center(&hex, &exact()).unwrap().center.unwrap();
        assert!(c.norm() < 1e-12);
    }

    #[test]
    fn simplex_has_no_center() {
        let rep = symmetry_center(&generate(&BodySpec::simplex()).unwrap(), &exact()).unwrap();
        assert!(rep.center.is_none());
        assert!(rep.residual >= 0.1);
    }

    #[test]
    fn flat_body_center_in_chart() {
        let seg = ConvexBody::hull(
            &[Vector::from([1.0, 1.0, 1.0]), Vector::from([3.0, 1.0, 1.0])],
            1e-9,
        )
        .unwrap();
        let c = symmetry_center(&seg, &exact()).unwrap().center.unwrap();
        assert!(c.distance(&Vector::from([2.0, 1.0, 1.0])) < 1e-12);
    }

    #[test]
    fn ball_section_centers_lie_on_normal() {
        let cl = section_center_line(
            &ball(),
            &Vector::basis(3, 2),
            &OFFSET_FRACTIONS,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(cl.all_centered());
        let line = cl.line.unwrap();
        assert!(line.directions[0][2].abs() > 1.0 - 2e-2);
        assert!(cl.collinearity_residual <= 2e-2);
    }

    #[test]
    fn ellipsoid_centers_follow_conjugate_diameter() {
        let e = generate(&BodySpec::diagonal_ellipsoid([1.0, 0.25, 1.0 / 9.0])).unwrap();
        let u = Vector::from([1.0, 1.0, 1.0]).normalized().unwrap();
        let cl = section_center_line(&e, &u, &OFFSET_FRACTIONS, &Tolerances::default()).unwrap();
        // Q^{-1} u with Q = diag(1, 1/4, 1/9)
        let conj = AffineSubspace::linear(3, &[Vector::from([1.0, 4.0, 9.0])]).unwrap();
        assert!(cl.line.unwrap().angle_to(&conj) <= 2e-2);
    }

    #[test]
    fn cube_generic_section_lacks_center() {
        let u = Vector::from([1.0, 2.0, 3.0]).normalized().unwrap();
        let cl = section_center_line(&cube(), &u, &OFFSET_FRACTIONS, &exact()).unwrap();
        assert!(cl.centerless_offset.is_some());
    }

    #[test]
    fn chord_midpoints_of_cube() {
        let vertical = chord_midpoint_plane(&cube(), &Vector::basis(3, 2), &exact()).unwrap();
        assert!(vertical.normal[2].abs() > 1.0 - 1e-12);
        assert!(vertical.coplanarity_residual <= 1e-9);
        let diag = Vector::from([1.0, 1.0, 1.0]).normalized().unwrap();
        let d = chord_midpoint_plane(&cube(), &diag, &exact()).unwrap();
        assert!(d.coplanarity_residual >= 0.1, "{}", d.coplanarity_residual);
    }

    #[test]
    fn ball_chord_midpoints() {
        let mp =
            chord_midpoint_plane(&ball(), &Vector::basis(3, 2), &Tolerances::default()).unwrap();
        assert!(mp.normal[2].abs() > 1.0 - 2e-2);
        assert!(mp.coplanarity_residual <= 2e-2);
    }

    #[test]
    fn trivial_primes() {
        let b = ball();
        let tol = Tolerances::default();
        assert_eq!(
            subspace_prime(&b, &AffineSubspace::full(3), &tol)
                .unwrap()
                .subspace
                .dim(),
            0
        );
        assert_eq!(
            subspace_prime(&b, &AffineSubspace::zero(3), &tol)
                .unwrap()
                .subspace
                .dim(),
            3
        );
        let plane = AffineSubspace::hyperplane(&Vector::basis(3, 2), 0.0).unwrap();
        let p = subspace_prime(&b, &plane, &tol).unwrap();
        let axis = AffineSubspace::linear(3, &[Vector::basis(3, 2)]).unwrap();
        assert!(p.subspace.angle_to(&axis) <= 2e-2);
    }

    #[test]
    fn ellipsoid_prime_of_coordinate_plane() {
        let e = generate(&BodySpec::diagonal_ellipsoid([1.0, 4.0, 9.0])).unwrap();
        let plane = AffineSubspace::hyperplane(&Vector::basis(3, 0), 0.0).unwrap();
        let p = subspace_prime(&e, &plane, &Tolerances::default()).unwrap();
        let axis = AffineSubspace::linear(3, &[Vector::basis(3, 0)]).unwrap();
        assert!(p.subspace.angle_to(&axis) <= 2e-2);
    }

    #[test]
    fn supports_criterion_examples() {
        let tol = exact();
        let sq = polygon(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]);
        assert!(supports_criterion_2d(&sq, &tol).unwrap().passed());
        let ngon = ConvexBody::hull(&sampling::circle(64, 0.1), 1e-9).unwrap();
        assert!(supports_criterion_2d(&ngon, &tol).unwrap().passed());
        let tri = polygon(&[[-1.0, -0.5], [1.0, -0.5], [0.0, 1.0]]);
        let r = supports_criterion_2d(&tri, &tol).unwrap();
        assert!(!r.passed());
        assert!(symmetry_center(&tri, &tol).unwrap().center.is_none());
    }

    #[test]
    fn projection_centers() {
        let dirs = sampling::directions(3, 32);
        let tol = exact();
        let c = projection_center_check(&cube(), &dirs, &tol).unwrap();
        assert!(c.consistent() && c.body_center.is_some());
        let t = Vector::from([1.0, 2.0, 3.0]);
        let moved = projection_center_check(&cube().translated(&t).unwrap(), &dirs, &tol).unwrap();
        assert!(moved.consistent());
        let s =
            projection_center_check(&generate(&BodySpec::simplex()).unwrap(), &dirs, &tol).unwrap();
        assert!(s.body_center.is_none() && !s.centerless.is_empty());
    }
}
