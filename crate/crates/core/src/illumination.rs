//! Shadow boundaries and supporting-line tests.
//!
//! A boundary point of `B` lies on a supporting line parallel to `d` exactly
//! when its projection along `d` lies on the boundary of the shadow, so the
//! silhouette is computed in the shadow's chart and a point's distance from it
//! is measured by the depth of its projection inside the shadow.

use rayon::prelude::*;
use serde::Serialize;

use crate::body::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{cut_points, project, section};
use crate::lp::{maximize, Halfspace};
use crate::sampling;
use crate::symmetry::fit_plane_normal;
use crate::tolerance::Tolerances;
use crate::vector::{orthogonal_complement, AffineSubspace, Vector};

/// Seeds evaluated by the plane search.
pub const PLANE_SEEDS: usize = 64;
/// Seeds refined by local descent.
const REFINED_SEEDS: usize = 4;
/// Descent steps per refined seed.
pub const DESCENT_STEPS: usize = 200;
/// Points sampled on each edge of a section boundary.
const EDGE_SAMPLES: usize = 8;
/// Probe directions used to collect the generators of a cone.
const CONE_PROBES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceKind {
    Vertex,
    Edge,
    Facet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Face {
    pub kind: FaceKind,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Silhouette {
    pub direction: Vector,
    /// Plane `d^⊥` holding the shadow.
    pub chart: AffineSubspace,
    pub shadow: ConvexBody,
    /// Maximal faces of `B` projecting into the shadow boundary.
    pub faces: Vec<Face>,
    /// Indices of all vertices of `B` projecting onto the shadow boundary.
    pub vertices: Vec<usize>,
}

impl Silhouette {
    /// Depth of the projection of `x` inside the shadow (0 on its boundary).
    pub fn depth(&self, x: &Vector) -> f64 {
        (-self.shadow.max_violation(&self.chart.to_chart(x))).max(0.0)
    }
}

fn require_solid_3d(b: &ConvexBody) -> Result<()> {
    if b.dim() != 3 || b.is_flat() {
        return Err(Error::Precondition("3D body with interior expected".into()));
    }
    Ok(())
}

/// Faces of `b` whose projection along `d` lies on the shadow boundary.
pub fn silhouette(b: &ConvexBody, d: &Vector) -> Result<Silhouette> {
    check_dim(b.dim(), d.dim())?;
    require_solid_3d(b)?;
    let d = d.normalized()?;
    let chart = AffineSubspace::linear(3, &orthogonal_complement(&[d.clone()], 3))?;
    let shadow = project(b, &chart)?;
    let tol = 1e-9 * b.diameter().max(1.0);
    let ys: Vec<Vector> = b.vertices().iter().map(|v| chart.to_chart(v)).collect();
    let tight: Vec<Vec<bool>> = shadow
        .facets()
        .iter()
        .map(|e| ys.iter().map(|y| e.violation(y) >= -tol).collect())
        .collect();
    let on_common_edge = |idx: &[usize]| tight.iter().any(|t| idx.iter().all(|&i| t[i]));
    let mut covered = vec![false; ys.len()];
    let mut faces = Vec::new();
    for f in b.faces() {
        if on_common_edge(f) {
            f.iter().for_each(|&i| covered[i] = true);
            faces.push(Face {
                kind: FaceKind::Facet,
                vertices: f.clone(),
            });
        }
    }
    let facet_edges: Vec<(usize, usize)> = faces
        .iter()
        .flat_map(|f| {
            let n = f.vertices.len();
            (0..n).map(move |k| {
                let (a, c) = (f.vertices[k], f.vertices[(k + 1) % n]);
                (a.min(c), a.max(c))
            })
        })
        .collect();
    for &(a, c) in b.edges() {
        if on_common_edge(&[a, c]) && !facet_edges.contains(&(a, c)) {
            covered[a] = true;
            covered[c] = true;
            faces.push(Face {
                kind: FaceKind::Edge,
                vertices: vec![a, c],
            });
        }
    }
    let vertices: Vec<usize> = (0..ys.len())
        .filter(|&i| tight.iter().any(|t| t[i]))
        .collect();
    for &i in &vertices {
        if !covered[i] {
            faces.push(Face {
                kind: FaceKind::Vertex,
                vertices: vec![i],
            });
        }
    }
    Ok(Silhouette {
        direction: d,
        chart,
        shadow,
        faces,
        vertices,
    })
}

/// Boundary of the section `{m . x = s} ∩ B`, as points in cyclic order.
fn section_boundary(b: &ConvexBody, m: &Vector, s: f64) -> Vec<Vector> {
    let pts = cut_points(b, m, s, b.eps());
    if pts.len() < 3 {
        return pts;
    }
    let basis = orthogonal_complement(&[m.clone()], 3);
    let center = Vector::centroid(&pts).expect("nonempty");
    let mut keyed: Vec<(f64, Vector)> = pts
        .into_iter()
        .map(|p| {
            let r = &p - &center;
            (r.dot(&basis[1]).atan2(r.dot(&basis[0])), p)
        })
        .collect();
    keyed.sort_by(|a, c| a.0.total_cmp(&c.0));
    keyed.into_iter().map(|(_, p)| p).collect()
}

/// Largest shadow depth over the boundary of the section `{m . x = s} ∩ B`,
/// relative to the diameter; infinite when the plane misses the interior.
///
/// The depth of a point is its distance from the nearest supporting line
/// parallel to `d`, so the residual is 0 exactly when the whole section
/// boundary lies on the silhouette.
pub fn planarity_residual(
    b: &ConvexBody,
    sil: &Silhouette,
    m: &Vector,
    s: f64,
    tol: &Tolerances,
) -> f64 {
    let diam = b.diameter();
    let margin = tol.section.max(1e-3) * diam;
    if s >= b.support_unchecked(m) - margin || s <= -b.support_unchecked(&-m) + margin {
        return f64::INFINITY;
    }
    let ring = section_boundary(b, m, s);
    if ring.len() < 3 {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for k in 0..ring.len() {
        let (p, q) = (&ring[k], &ring[(k + 1) % ring.len()]);
        let step = q - p;
        for j in 0..EDGE_SAMPLES {
            worst = worst.max(sil.depth(&p.axpy(j as f64 / EDGE_SAMPLES as f64, &step)));
        }
    }
    worst / diam
}

#[derive(Clone, Debug, Serialize)]
pub struct BlaschkeResult {
    pub direction: Vector,
    pub verdict: bool,
    /// Best planarity residual found.
    pub residual: f64,
    /// Best plane `{normal . x = offset}`.
    pub normal: Vector,
    pub offset: f64,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
struct Candidate {
    normal: Vector,
    offset: f64,
    residual: f64,
}

/// Seed planes: `d^⊥` through the middle of the body, the least-squares plane
/// through the silhouette vertices, and planes through silhouette triples.
fn seed_planes(b: &ConvexBody, sil: &Silhouette) -> Vec<(Vector, f64)> {
    let d = &sil.direction;
    let mut seeds = vec![(
        d.clone(),
        0.5 * (b.support_unchecked(d) - b.support_unchecked(&-d)),
    )];
    let pts: Vec<Vector> = sil
        .vertices
        .iter()
        .map(|&i| b.vertices()[i].clone())
        .collect();
    if let Some(c) = Vector::centroid(&pts) {
        let centered: Vec<Vector> = pts.iter().map(|p| p - &c).collect();
        if let Some(n) = fit_plane_normal(&centered) {
            let off = n.dot(&c);
            seeds.push((n, off));
        }
    }
    let k = pts.len();
    let mut triples: Vec<[usize; 3]> = Vec::new();
    if k >= 3 {
        let total = k * (k - 1) * (k - 2) / 6;
        let wanted = PLANE_SEEDS - seeds.len();
        if total <= wanted {
            for i in 0..k {
                for j in i + 1..k {
                    for l in j + 1..k {
                        triples.push([i, j, l]);
                    }
                }
            }
        } else {
            for t in 0..wanted {
                let i = t * k / wanted;
                triples.push([i, (i + k / 3) % k, (i + 2 * k / 3) % k]);
            }
        }
    }
    for [i, j, l] in triples {
        let n = (&pts[j] - &pts[i]).cross(&(&pts[l] - &pts[i]));
        if let Ok(n) = n.normalized() {
            let off = n.dot(&pts[i]);
            seeds.push((n, off));
        }
    }
    seeds.truncate(PLANE_SEEDS);
    seeds
}

/// Searches for a plane meeting the interior of `B` whose section boundary
/// lies on the silhouette along `d`.
pub fn weak_blaschke_test(b: &ConvexBody, d: &Vector, tol: &Tolerances) -> Result<BlaschkeResult> {
    let sil = silhouette(b, d)?;
    if sil.vertices.is_empty() {
        return Err(Error::Degenerate("empty silhouette".into()));
    }
    let diam = b.diameter();
    let mut evaluations = 0usize;
    let mut eval = |m: &Vector, s: f64| {
        evaluations += 1;
        planarity_residual(b, &sil, m, s, tol)
    };
    let mut candidates: Vec<Candidate> = seed_planes(b, &sil)
        .into_iter()
        .map(|(normal, offset)| {
            let residual = eval(&normal, offset);
            Candidate {
                normal,
                offset,
                residual,
            }
        })
        .collect();
    candidates.sort_by(|a, c| a.residual.total_cmp(&c.residual));
    let mut best = candidates[0].clone();
    if best.residual > tol.blaschke {
        for start in candidates.iter().take(REFINED_SEEDS) {
            if !start.residual.is_finite() {
                continue;
            }
            let mut cur = start.clone();
            let (mut angle, mut shift): (f64, f64) = (0.1, 0.05 * diam);
            for _ in 0..DESCENT_STEPS {
                if cur.residual <= tol.blaschke || angle < 1e-6 {
                    break;
                }
                let frame = orthogonal_complement(&[cur.normal.clone()], 3);
                let mut moves: Vec<(Vector, f64)> = Vec::with_capacity(6);
                for e in &frame {
                    for sign in [1.0, -1.0] {
                        let n = cur.normal.axpy(sign * angle.tan(), e).normalized()?;
                        moves.push((n, cur.offset));
                    }
                }
                moves.push((cur.normal.clone(), cur.offset + shift));
                moves.push((cur.normal.clone(), cur.offset - shift));
                let trial = moves
                    .into_iter()
                    .map(|(n, s)| {
                        let r = eval(&n, s);
                        Candidate {
                            normal: n,
                            offset: s,
                            residual: r,
                        }
                    })
                    .min_by(|a, c| a.residual.total_cmp(&c.residual))
                    .expect("six moves");
                if trial.residual < cur.residual {
                    cur = trial;
                } else {
                    angle *= 0.5;
                    shift *= 0.5;
                }
            }
            if cur.residual < best.residual {
                best = cur;
            }
            if best.residual <= tol.blaschke {
                break;
            }
        }
    }
    Ok(BlaschkeResult {
        direction: sil.direction.clone(),
        verdict: best.residual <= tol.blaschke,
        residual: best.residual,
        normal: best.normal,
        offset: best.offset,
        evaluations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeSet {
    pub direction: Vector,
    /// Smallest relaxation `s` admitting some `w` with `w . v = 1`.
    pub slack: f64,
    pub nonempty: bool,
    /// Unit directions spanning the optimal set (empty when `!nonempty`).
    pub generators: Vec<Vector>,
    /// Facets meeting `v^⊥`.
    pub constrained_facets: usize,
}

impl ConeSet {
    /// Normalized mean of the generators.
    pub fn mean_direction(&self) -> Option<Vector> {
        Vector::centroid(&self.generators)?.normalized().ok()
    }
}

/// Position of a facet relative to `v^⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Crossed,
    /// Touches the plane from the `+v` side.
    Above,
    Below,
}

/// Facets meeting `v^⊥`, classified by the side their other vertices lie on.
fn touching_facets(b: &ConvexBody, v: &Vector) -> Vec<(usize, Side)> {
    let eps = b.eps();
    (0..b.faces().len())
        .filter_map(|f| {
            let (lo, hi) = b.faces()[f]
                .iter()
                .map(|&i| v.dot(&b.vertices()[i]))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), s| {
                    (l.min(s), h.max(s))
                });
            if lo < -eps && hi > eps {
                Some((f, Side::Crossed))
            } else if lo.abs() <= eps && hi > eps {
                Some((f, Side::Above))
            } else if hi.abs() <= eps && lo < -eps {
                Some((f, Side::Below))
            } else {
                None
            }
        })
        .collect()
}

/// Directions `w` with `w . v > 0` such that every line `p + t w` through a
/// boundary point `p` of the central section `v^⊥ ∩ B` supports `B`.
///
/// On a polytope such a line must run inside every facet crossed by `v^⊥`,
/// i.e. `n_f . w = 0`. Where the section boundary runs along an edge or a
/// vertex, the line supports `B` when `w` leans away from the facets above
/// and below: `n_f . w >= 0` above, `<= 0` below. The cone is taken as the
/// optimal set of the program relaxing each of these by `s`, with
/// `w = v + D a`, and reported nonempty when the optimum is within `tol.psi`.
pub fn psi_cone(b: &ConvexBody, v: &Vector, tol: &Tolerances) -> Result<ConeSet> {
    check_dim(b.dim(), v.dim())?;
    require_solid_3d(b)?;
    let v = v.normalized()?;
    let h = AffineSubspace::hyperplane(&v, 0.0)?;
    if section(b, &h, tol.section)?.proper().is_none() {
        return Err(Error::Degenerate("central section is degenerate".into()));
    }
    let frame = orthogonal_complement(&[v.clone()], 3);
    let touching = touching_facets(b, &v);
    let mut rows = Vec::with_capacity(2 * touching.len());
    for &(f, side) in &touching {
        let n = &b.facets()[f].normal;
        let (nd0, nd1, nv) = (n.dot(&frame[0]), n.dot(&frame[1]), n.dot(&v));
        if side != Side::Above {
            rows.push(Halfspace::new(Vector::from([nd0, nd1, -1.0]), -nv));
        }
        if side != Side::Below {
            rows.push(Halfspace::new(Vector::from([-nd0, -nd1, -1.0]), nv));
        }
    }
    let lift = |a: &Vector| v.axpy(a[0], &frame[0]).axpy(a[1], &frame[1]);
    let (neg_slack, opt) = maximize(&Vector::from([0.0, 0.0, -1.0]), &rows, 3)?
        .ok_or_else(|| Error::Infeasible("cone program infeasible".into()))?;
    let slack = (-neg_slack).max(0.0);
    let nonempty = slack <= tol.psi;
    let mut generators = Vec::new();
    if nonempty {
        // the optimal face, probed in a few directions of the (a1, a2) plane
        let level = slack + 1e-9 * slack.max(1.0);
        let mut face_rows = rows.clone();
        face_rows.push(Halfspace::new(Vector::from([0.0, 0.0, 1.0]), level));
        generators.push(lift(&opt).normalized()?);
        for p in sampling::circle(CONE_PROBES, 0.0) {
            if let Some((_, a)) = maximize(&Vector::from([p[0], p[1], 0.0]), &face_rows, 3)? {
                let w = lift(&a).normalized()?;
                if generators.iter().all(|g: &Vector| g.angle(&w) > 1e-9) {
                    generators.push(w);
                }
            }
        }
    }
    Ok(ConeSet {
        direction: v,
        slack,
        nonempty,
        generators,
        constrained_facets: touching.len(),
    })
}

/// Angle between the mean generators of `psi(-v)` and `-psi(v)`: 0 when both
/// cones are empty, pi when exactly one is.
pub fn psi_oddness(b: &ConvexBody, v: &Vector, tol: &Tolerances) -> Result<f64> {
    let plus = psi_cone(b, v, tol)?;
    let minus = psi_cone(b, &-v, tol)?;
    Ok(match (plus.mean_direction(), minus.mean_direction()) {
        (Some(p), Some(m)) => m.angle(&-&p),
        (None, None) => 0.0,
        _ => std::f64::consts::PI,
    })
}

/// Largest empty spherical cap (radians) left by the mean directions of the
/// nonempty cones over `dirs`, probed at `probes`.
pub fn psi_coverage(
    b: &ConvexBody,
    dirs: &[Vector],
    probes: &[Vector],
    tol: &Tolerances,
) -> Result<f64> {
    let images: Vec<Option<Vector>> = dirs
        .par_iter()
        .map(|v| psi_cone(b, v, tol).map(|c| c.mean_direction()))
        .collect::<Result<_>>()?;
    let images: Vec<Vector> = images.into_iter().flatten().collect();
    Ok(sampling::largest_empty_cap(&images, probes))
}

#[derive(Clone, Debug, Serialize)]
pub struct DualBlaschke {
    pub checked: usize,
    /// Sampled `v` whose cone is empty.
    pub empty: Vec<Vector>,
    pub worst_slack: f64,
}

impl DualBlaschke {
    pub fn passed(&self) -> bool {
        self.empty.is_empty()
    }
}

/// Evaluates `psi_cone` over the sampled directions.
pub fn dual_blaschke_check(
    b: &ConvexBody,
    dirs: &[Vector],
    tol: &Tolerances,
) -> Result<DualBlaschke> {
    let cones: Vec<ConeSet> = dirs
        .par_iter()
        .map(|v| psi_cone(b, v, tol))
        .collect::<Result<_>>()?;
    Ok(DualBlaschke {
        checked: dirs.len(),
        worst_slack: cones.iter().map(|c| c.slack).fold(0.0, f64::max),
        empty: cones
            .into_iter()
            .filter(|c| !c.nonempty)
            .map(|c| c.direction)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{generate, BodySpec};

    fn cube() -> ConvexBody {
        generate(&BodySpec::cube()).unwrap()
    }

    fn ball() -> ConvexBody {
        generate(&BodySpec::diagonal_ellipsoid([1.0, 1.0, 1.0])).unwrap()
    }

    fn diagonal() -> Vector {
        Vector::from([1.0, 1.0, 1.0]).normalized().unwrap()
    }

    #[test]
    fn cube_silhouettes() {
        let c = cube();
        let vertical = silhouette(&c, &Vector::basis(3, 2)).unwrap();
        assert_eq!(vertical.faces.len(), 4);
        assert!(vertical.faces.iter().all(|f| f.kind == FaceKind::Facet));
        let diag = silhouette(&c, &diagonal()).unwrap();
        assert_eq!(diag.faces.len(), 6);
        assert!(diag.faces.iter().all(|f| f.kind == FaceKind::Edge));
        assert_eq!(diag.vertices.len(), 6);
        for &i in &diag.vertices {
            let s: f64 = c.vertices()[i].coords().iter().sum();
            assert!((s.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_silhouette_hugs_equator() {
        let b = ball();
        let sil = silhouette(&b, &Vector::basis(3, 2)).unwrap();
        for &i in &sil.vertices {
            assert!(b.vertices()[i][2].abs() <= 2e-1);
        }
        let n = fit_plane_normal(
            &sil.vertices
                .iter()
                .map(|&i| b.vertices()[i].clone())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(n[2].abs() > 1.0 - 2e-2);
    }

    #[test]
    fn weak_blaschke_examples() {
        let tol = Tolerances::default();
        let b = ball();
        for d in sampling::directions(3, 4) {
            let r = weak_blaschke_test(&b, &d, &tol).unwrap();
            assert!(r.verdict && r.residual <= 2e-2, "{r:?}");
        }
        let up = weak_blaschke_test(&cube(), &Vector::basis(3, 2), &tol).unwrap();
        assert!(up.verdict);
        let diag = weak_blaschke_test(&cube(), &diagonal(), &tol).unwrap();
        assert!(!diag.verdict && diag.residual >= 0.1, "{diag:?}");
        let cross = generate(&BodySpec::cross_polytope()).unwrap();
        assert!(
            !weak_blaschke_test(&cross, &diagonal(), &tol)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn psi_examples() {
        let tol = Tolerances::default();
        let up = psi_cone(&cube(), &Vector::basis(3, 2), &tol).unwrap();
        assert!(up.nonempty && up.slack < 1e-12);
        for g in &up.generators {
            assert!(g.angle(&Vector::basis(3, 2)) < 1e-8);
        }
        let diag = psi_cone(&cube(), &diagonal(), &tol).unwrap();
        assert!(!diag.nonempty);
        assert!((diag.slack - 1.0 / 3f64.sqrt()).abs() < 1e-9);
        let ball_up = psi_cone(&ball(), &Vector::basis(3, 2), &tol).unwrap();
        assert!(ball_up.nonempty);
        assert!(
            ball_up
                .mean_direction()
                .unwrap()
                .angle(&Vector::basis(3, 2))
                <= 2e-2
        );
    }

    #[test]
    fn dual_blaschke_examples() {
        let tol = Tolerances::default();
        let dirs = sampling::directions(3, 32);
        assert!(dual_blaschke_check(&ball(), &dirs, &tol).unwrap().passed());
        let cube = dual_blaschke_check(&cube(), &[diagonal()], &tol).unwrap();
        assert!(!cube.passed());
    }

    /// Directions on a 1 degree grid of the upper hemisphere whose lines
    /// through every sampled boundary point of the central section never
    /// enter the interior, checked pointwise along each line.
    fn grid_supporting_directions(b: &ConvexBody, v: &Vector) -> Vec<Vector> {
        let ring = section_boundary(b, v, 0.0);
        let mut samples = Vec::new();
        for k in 0..ring.len() {
            let (p, q) = (&ring[k], &ring[(k + 1) % ring.len()]);
            samples.push(p.clone());
            samples.push(p.axpy(0.5, &(q - p)));
        }
        let frame = orthogonal_complement(&[v.clone()], 3);
        let steps: Vec<f64> = (-200..=200).map(|i| i as f64 * 0.01).collect();
        let mut found = Vec::new();
        for polar in 0..90 {
            let theta = (polar as f64).to_radians();
            let turns = if polar == 0 { 1 } else { 360 };
            for az in 0..turns {
                let phi = (az as f64).to_radians();
                let w = v
                    .axpy(theta.tan() * phi.cos(), &frame[0])
                    .axpy(theta.tan() * phi.sin(), &frame[1])
                    .normalized()
                    .unwrap();
                let supports = samples.iter().all(|p| {
                    steps
                        .iter()
                        .all(|&t| b.max_violation(&p.axpy(t, &w)) >= -1e-9)
                });
                if supports {
                    found.push(w);
                }
            }
        }
        found
    }

    #[test]
    fn psi_agrees_with_direction_grid() {
        let tol = Tolerances::exact();
        let up = Vector::basis(3, 2);
        let grid = grid_supporting_directions(&cube(), &up);
        assert_eq!(grid.len(), 1);
        assert!(grid[0].angle(&up) < 1e-12);
        let cone = psi_cone(&cube(), &up, &tol).unwrap();
        assert!(cone.nonempty);
        assert!(cone.mean_direction().unwrap().angle(&grid[0]) < 1e-8);
        assert!(grid_supporting_directions(&cube(), &diagonal()).is_empty());
        assert!(!psi_cone(&cube(), &diagonal(), &tol).unwrap().nonempty);
    }

    #[test]
    fn psi_is_odd() {
        let tol = Tolerances::default();
        for body in [ball(), cube()] {
            for v in sampling::directions(3, 16) {
                assert!(psi_oddness(&body, &v, &tol).unwrap() <= 2e-2);
            }
        }
    }

    /// Andrew's monotone chain over 2D points; returns hull corners.
    fn chain_hull(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let turn = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
            (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        };
        let mut hull: Vec<[f64; 2]> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
                Box::new(pts.iter())
            } else {
                Box::new(pts.iter().rev())
            };
            for &p in iter {
                while hull.len() >= start + 2
                    && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
                {
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        hull
    }

    fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        ((p[0] - a[0] - t * dx).powi(2) + (p[1] - a[1] - t * dy).powi(2)).sqrt()
    }

    #[test]
    fn silhouette_matches_shadow_boundary_test() {
        let b = generate(&BodySpec::diagonal_ellipsoid([1.0, 4.0, 9.0])).unwrap();
        for d in sampling::directions(3, 5) {
            let sil = silhouette(&b, &d).unwrap();
            let e1 = d
                .cross(&Vector::from([0.3, -0.5, 0.8]))
                .normalized()
                .unwrap();
            let e2 = d.cross(&e1);
            let flat: Vec<[f64; 2]> = b
                .vertices()
                .iter()
                .map(|x| [x.dot(&e1), x.dot(&e2)])
                .collect();
            let hull = chain_hull(flat.clone());
            for (i, &p) in flat.iter().enumerate() {
                let on_boundary = (0..hull.len())
                    .map(|k| point_segment_distance(p, hull[k], hull[(k + 1) % hull.len()]))
                    .fold(f64::INFINITY, f64::min)
                    <= 1e-9;
                assert_eq!(
                    sil.vertices.contains(&i),
                    on_boundary,
                    "vertex {i} at {d:?}"
                );
            }
        }
    }
}
