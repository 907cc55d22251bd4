//! Convex polytopes in dual (vertex + facet) representation.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{check_dim, Error, Result};
use crate::hull::{hull_2d, hull_3d};
use crate::lp::{lp_feasible, FeasibilityResult, Halfspace};
use crate::vector::{orthogonal_complement, rank, AffineSubspace, Vector};

/// A compact convex polytope with both representations kept consistent.
///
/// Facet normals are unit length. A body whose affine hull is a proper
/// subspace is *flat*: its facet list then contains the chart facets lifted
/// to the ambient space, followed by a pair of opposite halfspaces for every
/// normal of the affine hull.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Halfspace>,
    /// Ordered vertex indices of each chart facet (cycles for 3D facets).
    faces: Vec<Vec<usize>>,
    affine: AffineSubspace,
    eps: f64,
    diameter: OnceLock<f64>,
    edges: OnceLock<Vec<(usize, usize)>>,
}

impl ConvexBody {
    /// Convex hull of `points`, with incidence tolerance `eps` (scaled by the
    /// extent of the input when it exceeds 1).
    pub fn hull(points: &[Vector], eps: f64) -> Result<ConvexBody> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.dim();
        if dim == 0 || dim > 3 {
            return Err(Error::Precondition(format!(
                "ambient dimension {dim} unsupported (1 to 3)"
            )));
        }
        for p in points {
            check_dim(dim, p.dim())?;
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        let extent = points.iter().map(|p| p.distance(first)).fold(0.0, f64::max);
        let tol = eps * extent.max(1.0);
        let affine = affine_hull(points, tol);
        let k = affine.dim();
        let chart = if k == dim {
            AffineSubspace::full(dim)
        } else {
            affine.clone()
        };
        let ys: Vec<Vector> = points.iter().map(|p| chart.to_chart(p)).collect();

        // chart hull: vertex indices (into `points`), chart facets, face lists
        let (vert_idx, chart_facets, chart_faces): (Vec<usize>, Vec<Halfspace>, Vec<Vec<usize>>) =
            match k {
                0 => (vec![0], Vec::new(), Vec::new()),
                1 => {
                    let (lo, hi) = extreme_pair(&ys);
                    (
                        vec![lo, hi],
                        vec![
                            Halfspace::new(Vector::from([-1.0]), -ys[lo][0]),
                            Halfspace::new(Vector::from([1.0]), ys[hi][0]),
                        ],
                        vec![vec![0], vec![1]],
                    )
                }
                2 => {
                    let raw: Vec<[f64; 2]> = ys.iter().map(|y| [y[0], y[1]]).collect();
                    let ring = hull_2d(&raw, tol);
                    let m = ring.len();
                    let mut facets = Vec::with_capacity(m);
                    let mut faces = Vec::with_capacity(m);
                    for i in 0..m {
                        let (a, b) = (raw[ring[i]], raw[ring[(i + 1) % m]]);
                        let n = Vector::from([b[1] - a[1], a[0] - b[0]]).normalized()?;
                        let off = n[0] * a[0] + n[1] * a[1];
                        facets.push(Halfspace::new(n, off));
                        faces.push(vec![i, (i + 1) % m]);
                    }
                    (ring, facets, faces)
                }
                _ => hull_3d_facets(&ys, tol)?,
            };

        let vertices: Vec<Vector> = vert_idx.iter().map(|&i| points[i].clone()).collect();
        let mut facets: Vec<Halfspace> = chart_facets
            .into_iter()
            .map(|h| {
                let n = chart.direction_from_chart(&h.normal);
                let off = h.offset + n.dot(&chart.base);
                Halfspace::new(n, off)
            })
            .collect();
        let mut faces = chart_faces;
        if k < dim {
            let all: Vec<usize> = (0..vertices.len()).collect();
            for w in orthogonal_complement(&affine.directions, dim) {
                let off = w.dot(&affine.base);
                facets.push(Halfspace::new(w.clone(), off));
                facets.push(Halfspace::new(-&w, -off));
                faces.push(all.clone());
                faces.push(all.clone());
            }
        }
        let affine = AffineSubspace {
            base: vertices[0].clone(),
            directions: affine.directions,
        };
        Ok(ConvexBody {
            dim,
            vertices,
            facets,
            faces,
            affine,
            eps: tol,
            diameter: OnceLock::new(),
            edges: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Number of facets of the body within its affine hull.
    pub fn chart_facet_count(&self) -> usize {
        self.facets.len() - 2 * (self.dim - self.affine_dim())
    }

    /// Ordered vertex indices of each chart facet.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn affine_hull(&self) -> &AffineSubspace {
        &self.affine
    }

    pub fn affine_dim(&self) -> usize {
        self.affine.dim()
    }

    pub fn is_flat(&self) -> bool {
        self.affine_dim() < self.dim
    }

    /// Scaled incidence tolerance used at construction.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Support function `h(u) = max_v v . u`.
    pub fn support(&self, u: &Vector) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        if u.norm() <= f64::MIN_POSITIVE {
            return Err(Error::DegenerateDirection);
        }
        Ok(self.support_unchecked(u))
    }

    pub fn support_unchecked(&self, u: &Vector) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Indices of the vertices attaining the support value within `eps`.
    pub fn support_vertices(&self, u: &Vector, eps: f64) -> Result<Vec<usize>> {
        let h = self.support(u)?;
        let tol = eps * u.norm();
        Ok((0..self.vertices.len())
            .filter(|&i| self.vertices[i].dot(u) >= h - tol)
            .collect())
    }

    /// Largest facet violation at `x` (nonpositive inside the body).
    pub fn max_violation(&self, x: &Vector) -> f64 {
        self.facets
            .iter()
            .map(|h| h.violation(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        self.max_violation(x) <= eps
    }

    pub fn diameter(&self) -> f64 {
        *self.diameter.get_or_init(|| {
            let mut d: f64 = 0.0;
            for (i, a) in self.vertices.iter().enumerate() {
                for b in &self.vertices[i + 1..] {
                    d = d.max(a.distance(b));
                }
            }
            d
        })
    }

    pub fn centroid(&self) -> Vector {
        Vector::centroid(&self.vertices).expect("bodies are nonempty")
    }

    /// Edges as pairs of vertex indices (sorted, deduplicated).
    pub fn edges(&self) -> &[(usize, usize)] {
        self.edges.get_or_init(|| match self.affine_dim() {
            0 => Vec::new(),
            1 => vec![(0, 1)],
            2 => {
                let m = self.vertices.len();
                let mut e: Vec<(usize, usize)> = (0..m)
                    .map(|i| {
                        let j = (i + 1) % m;
                        (i.min(j), i.max(j))
                    })
                    .collect();
                e.sort_unstable();
                e.dedup();
                e
            }
            _ => {
                let mut set = BTreeSet::new();
                for f in &self.faces {
                    for i in 0..f.len() {
                        let (a, b) = (f[i], f[(i + 1) % f.len()]);
                        set.insert((a.min(b), a.max(b)));
                    }
                }
                set.into_iter().collect()
            }
        })
    }

    /// Indices of facets tight at `x` within `eps`.
    pub fn active_facets(&self, x: &Vector, eps: f64) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].violation(x).abs() <= eps)
            .collect()
    }

    pub fn translated(&self, t: &Vector) -> Result<ConvexBody> {
        check_dim(self.dim, t.dim())?;
        let pts: Vec<Vector> = self.vertices.iter().map(|v| v + t).collect();
        ConvexBody::hull(&pts, self.base_eps())
    }

    /// Point reflection `-B`.
    pub fn negated(&self) -> Result<ConvexBody> {
        let pts: Vec<Vector> = self.vertices.iter().map(|v| -v).collect();
        ConvexBody::hull(&pts, self.base_eps())
    }

    /// Image under `x -> matrix * x` (row-major `dim x dim`).
    pub fn mapped(&self, matrix: &[Vec<f64>]) -> Result<ConvexBody> {
        let pts: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| {
                Vector::new(
                    matrix
                        .iter()
                        .map(|row| Vector::new(row.clone()).dot(v))
                        .collect(),
                )
            })
            .collect();
        ConvexBody::hull(&pts, self.base_eps())
    }

    fn base_eps(&self) -> f64 {
        let extent = self.diameter();
        self.eps / extent.max(1.0)
    }

    /// Facet system as an [`HPolytope`].
    pub fn to_hpolytope(&self) -> HPolytope {
        HPolytope {
            dim: self.dim,
            constraints: self.facets.clone(),
        }
    }

    /// Support value computed from the H-representation alone (vertices
    /// re-enumerated from the facet system); cross-checks the two
    /// representations.
    pub fn support_from_facets(&self, u: &Vector) -> Result<f64> {
        check_dim(self.dim, u.dim())?;
        let vs = self.to_hpolytope().vertices(self.eps)?;
        vs.iter()
            .map(|v| v.dot(u))
            .reduce(f64::max)
            .ok_or(Error::EmptyInput)
    }
}

fn extreme_pair(ys: &[Vector]) -> (usize, usize) {
    let lo = (0..ys.len())
        .min_by(|&a, &b| ys[a][0].total_cmp(&ys[b][0]))
        .unwrap();
    let hi = (0..ys.len())
        .max_by(|&a, &b| ys[a][0].total_cmp(&ys[b][0]))
        .unwrap();
    (lo, hi)
}

/// Affine hull of `points` by repeatedly adding the point farthest from the
/// current hull; points within `tol` count as lying in it.
pub fn affine_hull(points: &[Vector], tol: f64) -> AffineSubspace {
    let dim = points[0].dim();
    let mut sub = AffineSubspace {
        base: points[0].clone(),
        directions: Vec::new(),
    };
    while sub.dim() < dim {
        let (far, dist) = points
            .iter()
            .enumerate()
            .map(|(i, p)| (i, sub.distance(p)))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if dist <= tol {
            break;
        }
        let r = &points[far] - &sub.project_point(&points[far]);
        let mut dirs = sub.directions.clone();
        dirs.push(r);
        sub = AffineSubspace::new(sub.base.clone(), &dirs).expect("finite input");
    }
    sub
}

type ChartHull = (Vec<usize>, Vec<Halfspace>, Vec<Vec<usize>>);

/// Facet enumeration for full-dimensional 3D chart points: triangulated hull,
/// coplanar triangles merged, non-extreme points dropped.
fn hull_3d_facets(ys: &[Vector], tol: f64) -> Result<ChartHull> {
    let raw: Vec<[f64; 3]> = ys.iter().map(|y| [y[0], y[1], y[2]]).collect();
    let tris = hull_3d(&raw, tol)?;

    // merge coplanar triangles into facets
    let mut planes: Vec<([f64; 3], f64, BTreeSet<usize>)> = Vec::new();
    for t in &tris {
        let found = planes.iter_mut().find(|(n, off, _)| {
            let c = n[0] * t.normal[0] + n[1] * t.normal[1] + n[2] * t.normal[2];
            c > 1.0 - 1e-6
                && t.v.iter().all(|&i| {
                    let p = raw[i];
                    (n[0] * p[0] + n[1] * p[1] + n[2] * p[2] - *off).abs() <= tol
                })
        });
        match found {
            Some((_, _, vs)) => vs.extend(t.v),
            None => planes.push((t.normal, t.offset, t.v.into_iter().collect())),
        }
    }

    // a hull point is a vertex iff its tight facet normals have full rank
    let candidates: BTreeSet<usize> = planes.iter().flat_map(|p| p.2.iter().copied()).collect();
    let normals: Vec<Vector> = planes.iter().map(|p| Vector::from(p.0)).collect();
    let mut keep: Vec<usize> = candidates
        .into_iter()
        .filter(|&i| {
            let tight: Vec<Vector> = planes
                .iter()
                .zip(&normals)
                .filter(|(p, _)| p.2.contains(&i))
                .map(|(_, n)| n.clone())
                .collect();
            rank(&tight, 1e-9) == 3
        })
        .collect();
    keep.sort_unstable();
    let position = |i: usize| keep.binary_search(&i).ok();

    let mut facets = Vec::with_capacity(planes.len());
    let mut faces = Vec::with_capacity(planes.len());
    for (n, off, vs) in &planes {
        let normal = Vector::from(*n);
        let members: Vec<usize> = vs.iter().filter_map(|&i| position(i)).collect();
        faces.push(order_face(&members, &keep, &raw, &normal));
        facets.push(Halfspace::new(normal, *off));
    }
    Ok((keep, facets, faces))
}

/// Sorts face vertices counterclockwise around the outward normal.
fn order_face(members: &[usize], keep: &[usize], raw: &[[f64; 3]], normal: &Vector) -> Vec<usize> {
    let pts: Vec<Vector> = members
        .iter()
        .map(|&m| Vector::from(raw[keep[m]]))
        .collect();
    let c = Vector::centroid(&pts).unwrap();
    let basis = orthogonal_complement(&[normal.clone()], 3);
    let (e1, e2) = (&basis[0], &basis[1]);
    // right-handed (e1, e2, normal)
    let flip = e1.cross(e2).dot(normal) < 0.0;
    let mut order: Vec<(f64, usize)> = members
        .iter()
        .zip(&pts)
        .map(|(&m, p)| {
            let r = p - &c;
            let (x, mut y) = (r.dot(e1), r.dot(e2));
            if flip {
                y = -y;
            }
            (y.atan2(x), m)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    order.into_iter().map(|(_, m)| m).collect()
}

/// A polyhedron given only by halfspaces.
#[derive(Clone, Debug)]
pub struct HPolytope {
    pub dim: usize,
    pub constraints: Vec<Halfspace>,
}

/// Brute-force vertex enumeration is used up to this many constraints.
const BRUTE_FORCE_LIMIT: usize = 64;

impl HPolytope {
    pub fn new(dim: usize, constraints: Vec<Halfspace>) -> Self {
        HPolytope { dim, constraints }
    }

    pub fn feasibility(&self, eps: f64) -> Result<FeasibilityResult> {
        lp_feasible(&self.constraints, self.dim, eps)
    }

    pub fn is_empty(&self, eps: f64) -> Result<bool> {
        Ok(!self.feasibility(eps)?.is_feasible())
    }

    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        self.constraints.iter().all(|h| h.violation(x) <= eps)
    }

    /// Vertices of a bounded polyhedron. Empty when infeasible.
    pub fn vertices(&self, eps: f64) -> Result<Vec<Vector>> {
        let feas = self.feasibility(eps)?;
        if !feas.is_feasible() {
            return Ok(Vec::new());
        }
        if self.constraints.len() <= BRUTE_FORCE_LIMIT || self.dim == 1 {
            return Ok(self.vertices_brute_force(eps));
        }
        if feas.margin > 1e3 * eps {
            return self.vertices_polar(&feas.witness.unwrap(), eps);
        }
        Err(Error::Degenerate(format!(
            "lower-dimensional polyhedron with {} constraints",
            self.constraints.len()
        )))
    }

    /// Every `dim`-subset of constraints whose hyperplanes meet in a single
    /// feasible point.
    fn vertices_brute_force(&self, eps: f64) -> Vec<Vector> {
        let m = self.constraints.len();
        let d = self.dim;
        let mut out: Vec<Vector> = Vec::new();
        let mut idx: Vec<usize> = (0..d).collect();
        if m < d {
            return out;
        }
        loop {
            if let Some(x) = solve_square(
                &idx.iter()
                    .map(|&i| &self.constraints[i])
                    .collect::<Vec<_>>(),
            ) {
                if self.contains(&x, eps * 10.0)
                    && !out.iter().any(|o| o.distance(&x) <= eps * 100.0)
                {
                    out.push(x);
                }
            }
            // next combination
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < m - d + i {
                    idx[i] += 1;
                    for j in i + 1..d {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Vertices through the polar dual about an interior point.
    fn vertices_polar(&self, center: &Vector, eps: f64) -> Result<Vec<Vector>> {
        let mut dual = Vec::with_capacity(self.constraints.len());
        for h in &self.constraints {
            let slack = h.offset - h.normal.dot(center);
            dual.push(&h.normal * (1.0 / slack));
        }
        let dual_body = ConvexBody::hull(&dual, eps)?;
        if dual_body.is_flat() {
            return Err(Error::Degenerate("unbounded polyhedron".into()));
        }
        let mut out = Vec::new();
        for f in dual_body.facets() {
            if f.offset <= eps {
                return Err(Error::Degenerate("unbounded polyhedron".into()));
            }
            out.push(center.axpy(1.0 / f.offset, &f.normal));
        }
        Ok(out)
    }

    /// Hull of the vertices, or `None` when empty.
    pub fn to_body(&self, eps: f64) -> Result<Option<ConvexBody>> {
        let vs = self.vertices(eps)?;
        if vs.is_empty() {
            return Ok(None);
        }
        ConvexBody::hull(&vs, eps).map(Some)
    }
}

/// Solves the square system `a_i . x = b_i` by Gaussian elimination.
fn solve_square(rows: &[&Halfspace]) -> Option<Vector> {
    let d = rows.len();
    let mut m: Vec<Vec<f64>> = rows
        .iter()
        .map(|h| {
            let mut r = h.normal.coords().to_vec();
            r.push(h.offset);
            r
        })
        .collect();
    for c in 0..d {
        let piv = (c..d).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[piv][c].abs() < 1e-10 {
            return None;
        }
        m.swap(c, piv);
        for r in 0..d {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..=d {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    Some(Vector::new((0..d).map(|i| m[i][d] / m[i][i]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec())
    }

    pub(crate) fn cube() -> ConvexBody {
        let mut pts = Vec::new();
        for i in 0..8 {
            let c = |b: usize| if i >> b & 1 == 1 { 1.0 } else { -1.0 };
            pts.push(v(&[c(0), c(1), c(2)]));
        }
        ConvexBody::hull(&pts, 1e-9).unwrap()
    }

    #[test]
    fn cube_support_values() {
        let c = cube();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.facets().len(), 6);
        assert_eq!(c.edges().len(), 12);
        assert!((c.support(&v(&[1.0, 0.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((c.support(&v(&[1.0, 1.0, 1.0])).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(
            c.support_vertices(&v(&[1.0, 1.0, 1.0]), 1e-9)
                .unwrap()
                .len(),
            1
        );
        assert!(matches!(
            c.support(&Vector::zeros(3)),
            Err(Error::DegenerateDirection)
        ));
    }

    #[test]
    fn triangle_support() {
        let t = ConvexBody::hull(&[v(&[0.0, 0.0]), v(&[2.0, 0.0]), v(&[0.0, 2.0])], 1e-9).unwrap();
        assert!((t.support(&v(&[1.0, 1.0])).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn square_hull_has_four_facets() {
        let sq = ConvexBody::hull(
            &[
                v(&[1.0, 1.0]),
                v(&[-1.0, 1.0]),
                v(&[-1.0, -1.0]),
                v(&[1.0, -1.0]),
            ],
            1e-9,
        )
        .unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.facets().len(), 4);
        for f in sq.facets() {
            assert!((f.offset - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_point_is_dropped() {
        let t = ConvexBody::hull(
            &[
                v(&[0.0, 0.0]),
                v(&[1.0, 0.0]),
                v(&[0.5, 0.2]),
                v(&[0.0, 1.0]),
            ],
            1e-9,
        )
        .unwrap();
        assert_eq!(t.vertices().len(), 3);
        assert!(!t.vertices().contains(&v(&[0.5, 0.2])));
    }

    #[test]
    fn hull_of_triangle_and_reflection_is_symmetric() {
        let tri = [v(&[1.0, 0.0]), v(&[2.0, 0.0]), v(&[1.0, 1.0])];
        let mut pts: Vec<Vector> = tri.to_vec();
        pts.extend(tri.iter().map(|p| -p));
        let h = ConvexBody::hull(&pts, 1e-9).unwrap();
        let neg = h.negated().unwrap();
        // oracle: hull vertex set equals its negation as a set
        assert_eq!(h.vertices().len(), neg.vertices().len());
        for p in h.vertices() {
            assert!(neg.vertices().iter().any(|q| q.distance(p) < 1e-12));
        }
        // (1,0) and (-1,0) fall inside: the hull is a parallelogram
        assert_eq!(h.vertices().len(), 4);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(
            ConvexBody::hull(&[], 1e-9),
            Err(Error::EmptyInput)
        ));
        let pt = ConvexBody::hull(&[v(&[1.0, 2.0, 3.0]), v(&[1.0, 2.0, 3.0])], 1e-9).unwrap();
        assert_eq!(pt.vertices().len(), 1);
        assert_eq!(pt.affine_dim(), 0);
        assert!(pt.contains(&v(&[1.0, 2.0, 3.0]), 1e-9));
        assert!(!pt.contains(&v(&[1.0, 2.0, 3.1]), 1e-9));
        let seg = ConvexBody::hull(
            &[
                v(&[0.0, 0.0, 0.0]),
                v(&[1.0, 1.0, 0.0]),
                v(&[2.0, 2.0, 0.0]),
            ],
            1e-9,
        )
        .unwrap();
        assert_eq!(seg.vertices().len(), 2);
        assert!(seg.is_flat());
    }

    #[test]
    fn every_vertex_satisfies_facets_and_facets_are_tight() {
        let c = cube();
        for f in c.facets() {
            let tight = c
                .vertices()
                .iter()
                .filter(|p| f.violation(p).abs() < 1e-9)
                .count();
            assert!(tight >= 3);
            for p in c.vertices() {
                assert!(f.violation(p) <= 1e-9);
            }
        }
        for u in crate::sampling::fibonacci_sphere(32) {
            let a = c.support(&u).unwrap();
            let b = c.support_from_facets(&u).unwrap();
            assert!((a - b).abs() < 1e-9 * c.diameter());
        }
    }

    #[test]
    fn hpolytope_vertices_brute_force_and_polar_agree() {
        let c = cube();
        let hp = c.to_hpolytope();
        let brute = hp.vertices_brute_force(1e-9);
        let polar = hp.vertices_polar(&Vector::zeros(3), 1e-9).unwrap();
        assert_eq!(brute.len(), 8);
        assert_eq!(polar.len(), 8);
        for p in &brute {
            assert!(polar.iter().any(|q| q.distance(p) < 1e-9));
        }
    }
}
