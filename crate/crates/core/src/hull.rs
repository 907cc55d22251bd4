//! Low-level hull kernels on raw coordinates.
//!
//! `ConvexBody` reduces every input to its affine hull before calling these,
//! so the kernels may assume full-dimensional input.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// Counterclockwise hull of planar points (Andrew's monotone chain).
///
/// Collinear and duplicate points are dropped; returns indices into `pts`.
pub fn hull_2d(pts: &[[f64; 2]], eps: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
    });
    idx.dedup_by(|a, b| {
        (pts[*a][0] - pts[*b][0]).abs() <= eps && (pts[*a][1] - pts[*b][1]).abs() <= eps
    });
    if idx.len() < 3 {
        return idx;
    }
    // cross product compared against a length-scaled tolerance
    let turn = |o: usize, a: usize, b: usize| {
        let (ox, oy) = (pts[o][0], pts[o][1]);
        let (ax, ay) = (pts[a][0] - ox, pts[a][1] - oy);
        let (bx, by) = (pts[b][0] - ox, pts[b][1] - oy);
        let len = (bx * bx + by * by).sqrt().max((ax * ax + ay * ay).sqrt());
        (ax * by - ay * bx) > eps * len.max(1.0)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !turn(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !turn(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

#[derive(Clone, Debug)]
pub struct Triangle {
    pub v: [usize; 3],
    /// Unit outward normal.
    pub normal: [f64; 3],
    pub offset: f64,
}

fn make_triangle(pts: &[[f64; 3]], v: [usize; 3], interior: [f64; 3]) -> Option<Triangle> {
    let n = cross(sub(pts[v[1]], pts[v[0]]), sub(pts[v[2]], pts[v[0]]));
    let len = norm(n);
    if len <= f64::MIN_POSITIVE {
        return None;
    }
    let mut normal = [n[0] / len, n[1] / len, n[2] / len];
    let mut v = v;
    let mut offset = dot(normal, pts[v[0]]);
    if dot(normal, interior) > offset {
        normal = [-normal[0], -normal[1], -normal[2]];
        offset = -offset;
        v.swap(1, 2);
    }
    Some(Triangle { v, normal, offset })
}

/// Outward-oriented triangulated hull of non-coplanar points (incremental
/// construction, points inserted in index order).
pub fn hull_3d(pts: &[[f64; 3]], eps: f64) -> Result<Vec<Triangle>> {
    if pts.len() < 4 {
        return Err(Error::Degenerate("3D hull needs at least 4 points".into()));
    }
    // initial tetrahedron from extreme points
    let i0 = (0..pts.len())
        .min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]))
        .unwrap();
    let i1 = (0..pts.len())
        .max_by(|&a, &b| norm(sub(pts[a], pts[i0])).total_cmp(&norm(sub(pts[b], pts[i0]))))
        .unwrap();
    let d01 = sub(pts[i1], pts[i0]);
    let line_dist = |p: [f64; 3]| norm(cross(sub(p, pts[i0]), d01)) / norm(d01);
    let i2 = (0..pts.len())
        .max_by(|&a, &b| line_dist(pts[a]).total_cmp(&line_dist(pts[b])))
        .unwrap();
    let pn = cross(d01, sub(pts[i2], pts[i0]));
    let plane_dist = |p: [f64; 3]| dot(sub(p, pts[i0]), pn).abs() / norm(pn);
    let i3 = (0..pts.len())
        .max_by(|&a, &b| plane_dist(pts[a]).total_cmp(&plane_dist(pts[b])))
        .unwrap();
    if norm(d01) <= eps || line_dist(pts[i2]) <= eps || plane_dist(pts[i3]) <= eps {
        return Err(Error::Degenerate("points are coplanar".into()));
    }
    let interior = {
        let mut c = [0.0; 3];
        for i in [i0, i1, i2, i3] {
            for k in 0..3 {
                c[k] += pts[i][k] / 4.0;
            }
        }
        c
    };
    let mut faces: Vec<Option<Triangle>> = [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]]
        .into_iter()
        .map(|v| make_triangle(pts, v, interior))
        .collect();
    let seed: HashSet<usize> = [i0, i1, i2, i3].into_iter().collect();

    for (p, &pt) in pts.iter().enumerate() {
        if seed.contains(&p) {
            continue;
        }
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter_map(|(i, f)| {
                f.as_ref()
                    .filter(|f| dot(f.normal, pt) - f.offset > eps)
                    .map(|_| i)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for &fi in &visible {
            let v = faces[fi].as_ref().unwrap().v;
            for k in 0..3 {
                directed.insert((v[k], v[(k + 1) % 3]), fi);
            }
        }
        let mut horizon: Vec<(usize, usize)> = directed
            .keys()
            .filter(|(a, b)| !directed.contains_key(&(*b, *a)))
            .copied()
            .collect();
        horizon.sort_unstable();
        for fi in visible {
            faces[fi] = None;
        }
        for (a, b) in horizon {
            if let Some(t) = make_triangle(pts, [a, b, p], interior) {
                faces.push(Some(t));
            }
        }
    }
    Ok(faces.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_interior_and_collinear_points() {
        let pts = [
            [0.0, 0.0],
            [1.0, 0.0],
            [0.5, 0.0],
            [1.0, 1.0],
            [0.0, 1.0],
            [0.5, 0.5],
        ];
        let h = hull_2d(&pts, 1e-12);
        assert_eq!(h, vec![0, 1, 3, 4]);
    }

    #[test]
    fn cube_hull_has_twelve_triangles() {
        let mut pts = Vec::new();
        for i in 0..8 {
            let c = |b: usize| if i >> b & 1 == 1 { 1.0 } else { -1.0 };
            pts.push([c(0), c(1), c(2)]);
        }
        pts.push([0.0, 0.0, 1.0]); // face center, not a vertex
        let tris = hull_3d(&pts, 1e-9).unwrap();
        assert_eq!(tris.len(), 12);
        for t in &tris {
            for p in &pts {
                assert!(dot(t.normal, *p) - t.offset <= 1e-9);
            }
        }
    }

    #[test]
    fn coplanar_input_is_rejected() {
        let pts = [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
        ];
        assert!(hull_3d(&pts, 1e-9).is_err());
    }
}
