//! Projections, sections, Minkowski erosion and support-sampled Hausdorff
//! distance.

use crate::body::{ConvexBody, HPolytope};
use crate::error::{check_dim, Error, Result};
use crate::lp::{lp_feasible, Halfspace};
use crate::sampling;
use crate::vector::{AffineSubspace, Vector};

/// Number of sampled directions added to the facet normals in [`hausdorff`].
pub const HAUSDORFF_SAMPLES: usize = 512;

/// Orthogonal projection of `body` onto the linear subspace `target`,
/// expressed in the subspace's chart.
pub fn project(body: &ConvexBody, target: &AffineSubspace) -> Result<ConvexBody> {
    check_dim(body.dim(), target.ambient_dim())?;
    if !target.is_linear(1e-12) {
        return Err(Error::Precondition(
            "projection target must be linear".into(),
        ));
    }
    if target.dim() == 0 {
        return Err(Error::Precondition("projection onto {0}".into()));
    }
    let pts: Vec<Vector> = body.vertices().iter().map(|v| target.to_chart(v)).collect();
    ConvexBody::hull(&pts, body.eps() / body.diameter().max(1.0))
}

/// A nonempty section `H ∩ B` in the orthonormal chart of `H`.
#[derive(Clone, Debug)]
pub struct SectionBody {
    pub chart: AffineSubspace,
    pub body: ConvexBody,
    /// Chebyshev radius of the section within its chart (0 when flat there).
    pub inradius: f64,
    /// True when the inradius is below `section_tol * diameter(B)`.
    pub degenerate: bool,
}

impl SectionBody {
    /// Section vertices in ambient coordinates.
    pub fn ambient_vertices(&self) -> Vec<Vector> {
        self.body
            .vertices()
            .iter()
            .map(|y| self.chart.from_chart(y))
            .collect()
    }

    /// The section as a (flat) body of the ambient space.
    pub fn ambient_body(&self) -> Result<ConvexBody> {
        ConvexBody::hull(
            &self.ambient_vertices(),
            self.body.eps() / self.body.diameter().max(1.0),
        )
    }
}

#[derive(Clone, Debug)]
pub enum Section {
    Empty,
    Body(SectionBody),
}

impl Section {
    pub fn body(&self) -> Option<&SectionBody> {
        match self {
            Section::Empty => None,
            Section::Body(b) => Some(b),
        }
    }

    /// The section when nonempty and not degenerate.
    pub fn proper(&self) -> Option<&SectionBody> {
        self.body().filter(|s| !s.degenerate)
    }
}

/// Intersection of `body` with the affine subspace `h`.
pub fn section(body: &ConvexBody, h: &AffineSubspace, section_tol: f64) -> Result<Section> {
    check_dim(body.dim(), h.ambient_dim())?;
    let k = h.dim();
    if k == 0 {
        return Err(Error::Precondition("section by a point".into()));
    }
    let eps = body.eps();
    let chart_pts: Vec<Vector> = if k == body.dim() {
        body.vertices().iter().map(|v| h.to_chart(v)).collect()
    } else if k == 2 && body.dim() == 3 && !body.is_flat() {
        plane_cut_points(body, h, eps)?
            .iter()
            .map(|p| h.to_chart(p))
            .collect()
    } else {
        // restrict the facet system to the chart
        let cons: Vec<Halfspace> = body
            .facets()
            .iter()
            .map(|f| {
                Halfspace::new(
                    h.direction_to_chart(&f.normal),
                    f.offset - f.normal.dot(&h.base),
                )
            })
            .collect();
        HPolytope::new(k, cons).vertices(eps)?
    };
    if chart_pts.is_empty() {
        return Ok(Section::Empty);
    }
    let sec = ConvexBody::hull(&chart_pts, eps / body.diameter().max(1.0))?;
    let inradius = if sec.is_flat() {
        0.0
    } else {
        lp_feasible(sec.facets(), k, eps)?.margin.max(0.0)
    };
    let degenerate = inradius < section_tol * body.diameter();
    Ok(Section::Body(SectionBody {
        chart: h.clone(),
        body: sec,
        inradius,
        degenerate,
    }))
}

/// Points of `∂B ∩ H` for a plane `H` in R^3: vertices on the plane and
/// crossings of edges that straddle it.
pub fn plane_cut_points(body: &ConvexBody, h: &AffineSubspace, eps: f64) -> Result<Vec<Vector>> {
    let normals = h.normals();
    let n = normals
        .first()
        .ok_or_else(|| Error::Precondition("plane expected".into()))?;
    let c = n.dot(&h.base);
    Ok(cut_points(body, n, c, eps))
}

/// Same as [`plane_cut_points`] for the plane `{x : n . x = c}` with unit `n`.
pub fn cut_points(body: &ConvexBody, n: &Vector, c: f64, eps: f64) -> Vec<Vector> {
    let s: Vec<f64> = body.vertices().iter().map(|v| n.dot(v) - c).collect();
    let mut out: Vec<Vector> = body
        .vertices()
        .iter()
        .zip(&s)
        .filter(|(_, si)| si.abs() <= eps)
        .map(|(v, _)| v.clone())
        .collect();
    for &(a, b) in body.edges() {
        let (sa, sb) = (s[a], s[b]);
        if (sa > eps && sb < -eps) || (sa < -eps && sb > eps) {
            let t = sa / (sa - sb);
            let (va, vb) = (&body.vertices()[a], &body.vertices()[b]);
            out.push(va.axpy(t, &(vb - va)));
        }
    }
    out
}

/// Offset fractions used by the section scans: the plane sits at
/// `mid + f * halfwidth` along its normal, where `mid` and `halfwidth` are
/// the midpoint and half-length of the body's extent in that direction.
pub const OFFSET_FRACTIONS: [f64; 9] = [0.0, 0.2, -0.2, 0.4, -0.4, 0.6, -0.6, 0.8, -0.8];

/// The hyperplane with unit normal `u` at offset fraction `fraction` of the
/// width of `body` in direction `u`.
pub fn offset_hyperplane(body: &ConvexBody, u: &Vector, fraction: f64) -> Result<AffineSubspace> {
    let u = u.normalized()?;
    let hi = body.support(&u)?;
    let lo = -body.support(&-&u)?;
    let mid = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo);
    AffineSubspace::hyperplane(&u, mid + fraction * half)
}

/// Constraint system of the Minkowski erosion `B ⊖ C = {v : C + v ⊆ B}`.
pub fn erosion_constraints(b: &ConvexBody, c: &ConvexBody) -> Result<HPolytope> {
    check_dim(b.dim(), c.dim())?;
    let cons = b
        .facets()
        .iter()
        .map(|f| Halfspace::new(f.normal.clone(), f.offset - c.support_unchecked(&f.normal)))
        .collect();
    Ok(HPolytope::new(b.dim(), cons))
}

/// `B ⊖ C` as a body, or `None` when no translate of `C` fits in `B`.
pub fn minkowski_erode(b: &ConvexBody, c: &ConvexBody, eps: f64) -> Result<Option<ConvexBody>> {
    erosion_constraints(b, c)?.to_body(eps)
}

/// Support-sampled Hausdorff distance: the largest support-function gap over
/// both facet-normal sets and a fixed direction sample.
pub fn hausdorff(b1: &ConvexBody, b2: &ConvexBody) -> Result<f64> {
    check_dim(b1.dim(), b2.dim())?;
    let mut dirs: Vec<Vector> = b1
        .facets()
        .iter()
        .chain(b2.facets())
        .map(|f| f.normal.clone())
        .collect();
    dirs.extend(sampling::directions(b1.dim(), HAUSDORFF_SAMPLES));
    Ok(dirs
        .iter()
        .map(|u| (b1.support_unchecked(u) - b2.support_unchecked(u)).abs() / u.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec())
    }

    fn square(h: f64) -> ConvexBody {
        ConvexBody::hull(&[v(&[h, h]), v(&[-h, h]), v(&[-h, -h]), v(&[h, -h])], 1e-9).unwrap()
    }

    fn cube() -> ConvexBody {
        let pts: Vec<Vector> = (0..8)
            .map(|i| {
                let c = |b: usize| if i >> b & 1 == 1 { 1.0 } else { -1.0 };
                v(&[c(0), c(1), c(2)])
            })
            .collect();
        ConvexBody::hull(&pts, 1e-9).unwrap()
    }

    fn same_vertex_set(a: &[Vector], b: &[Vector], tol: f64) -> bool {
        a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| q.distance(p) < tol))
    }

    #[test]
    fn project_cube_onto_xy() {
        let s = AffineSubspace::linear(3, &[Vector::basis(3, 0), Vector::basis(3, 1)]).unwrap();
        let p = project(&cube(), &s).unwrap();
        assert!(same_vertex_set(p.vertices(), square(1.0).vertices(), 1e-12));
    }

    #[test]
    fn project_cube_along_diagonal_is_regular_hexagon() {
        let n = v(&[1.0, 1.0, 1.0]);
        let s = AffineSubspace::hyperplane(&n, 0.0).unwrap();
        let p = project(&cube(), &s).unwrap();
        // oracle: six non-extreme-diagonal vertices, each at distance sqrt(8/3)
        assert_eq!(p.vertices().len(), 6);
        for q in p.vertices() {
            assert!((q.norm() - (8.0_f64 / 3.0).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn project_onto_full_space_is_identity() {
        let c = cube();
        let p = project(&c, &AffineSubspace::full(3)).unwrap();
        assert!(same_vertex_set(p.vertices(), c.vertices(), 1e-12));
    }

    #[test]
    fn cube_sections() {
        let c = cube();
        let z0 = AffineSubspace::hyperplane(&Vector::basis(3, 2), 0.0).unwrap();
        let s = section(&c, &z0, 1e-6).unwrap();
        let sb = s.proper().unwrap();
        assert_eq!(sb.body.vertices().len(), 4);
        assert!((sb.inradius - 1.0).abs() < 1e-9);

        let z1 = AffineSubspace::hyperplane(&Vector::basis(3, 2), 1.0).unwrap();
        let top = section(&c, &z1, 1e-6).unwrap();
        let tb = top.proper().unwrap();
        assert_eq!(tb.body.vertices().len(), 4);
        assert!(!tb.body.is_flat());
        assert!(tb.ambient_body().unwrap().is_flat());

        let z2 = AffineSubspace::hyperplane(&Vector::basis(3, 2), 1.5).unwrap();
        assert!(matches!(section(&c, &z2, 1e-6).unwrap(), Section::Empty));
    }

    #[test]
    fn diagonal_section_of_cube_is_hexagon() {
        let c = cube();
        let h = AffineSubspace::hyperplane(&v(&[1.0, 1.0, 1.0]), 0.0).unwrap();
        let s = section(&c, &h, 1e-6).unwrap();
        let verts = s.proper().unwrap().ambient_vertices();
        // oracle: edge-plane intersections are the permutations of (1,-1,0)
        let mut expected = Vec::new();
        for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)] {
            let mut e = vec![0.0; 3];
            e[i] = 1.0;
            e[j] = -1.0;
            expected.push(Vector::new(e));
        }
        assert!(same_vertex_set(&verts, &expected, 1e-12));
    }

    #[test]
    fn chord_of_cube() {
        let c = cube();
        let l = AffineSubspace::line(v(&[0.5, 0.5, 0.0]), &Vector::basis(3, 2)).unwrap();
        let s = section(&c, &l, 1e-6).unwrap();
        let sb = s.proper().unwrap();
        let ends = sb.ambient_vertices();
        assert_eq!(ends.len(), 2);
        let mid = Vector::centroid(&ends).unwrap();
        assert!(mid[2].abs() < 1e-12);
    }

    #[test]
    fn erosion_examples() {
        let b = square(1.0);
        let e = minkowski_erode(&b, &square(0.5), 1e-9).unwrap().unwrap();
        assert!(same_vertex_set(e.vertices(), square(0.5).vertices(), 1e-12));

        let pt = ConvexBody::hull(&[v(&[0.5, 0.0])], 1e-9).unwrap();
        let e = minkowski_erode(&b, &pt, 1e-9).unwrap().unwrap();
        let expected = [
            v(&[-1.5, -1.0]),
            v(&[0.5, -1.0]),
            v(&[0.5, 1.0]),
            v(&[-1.5, 1.0]),
        ];
        assert!(same_vertex_set(e.vertices(), &expected, 1e-12));

        let e = minkowski_erode(&b, &b, 1e-9).unwrap().unwrap();
        assert_eq!(e.vertices().len(), 1);
        assert!(e.vertices()[0].norm() < 1e-12);

        assert!(minkowski_erode(&square(0.5), &b, 1e-9).unwrap().is_none());
    }

    #[test]
    fn hausdorff_examples() {
        let c = cube();
        assert_eq!(hausdorff(&c, &c).unwrap(), 0.0);
        let shifted = c.translated(&v(&[0.3, 0.0, 0.0])).unwrap();
        assert!((hausdorff(&c, &shifted).unwrap() - 0.3).abs() < 1e-12);
        let r = 2.0_f64.sqrt();
        let diamond = ConvexBody::hull(
            &[v(&[r, 0.0]), v(&[0.0, r]), v(&[-r, 0.0]), v(&[0.0, -r])],
            1e-9,
        )
        .unwrap();
        assert!((hausdorff(&square(1.0), &diamond).unwrap() - (r - 1.0)).abs() < 1e-12);
    }
}
