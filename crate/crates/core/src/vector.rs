//! Dimension-generic vectors and affine subspaces.
//!
//! Bodies live in R^3 (or R^2 for planar work); sections and projections are
//! expressed in orthonormal charts of lower dimension, so the vector type
//! carries its dimension at runtime.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of R^dim.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Unit vector in the same direction; errors on the zero vector.
    pub fn normalized(&self) -> Result<Vector> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE || !n.is_finite() {
            return Err(Error::DegenerateDirection);
        }
        Ok(self * (1.0 / n))
    }

    /// `self + t * other`
    pub fn axpy(&self, t: f64, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * b)
                .collect(),
        )
    }

    pub fn cross(&self, other: &Vector) -> Vector {
        debug_assert!(self.dim() == 3 && other.dim() == 3);
        let (a, b) = (&self.0, &other.0);
        Vector(vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Angle in radians between two nonzero vectors.
    pub fn angle(&self, other: &Vector) -> f64 {
        let c = self.dot(other);
        let s = if self.dim() == 3 {
            self.cross(other).norm()
        } else {
            (self.norm_squared() * other.norm_squared() - c * c)
                .max(0.0)
                .sqrt()
        };
        s.atan2(c)
    }

    pub fn centroid(points: &[Vector]) -> Option<Vector> {
        let first = points.first()?;
        let mut acc = Vector::zeros(first.dim());
        for p in points {
            acc += p;
        }
        Some(&acc * (1.0 / points.len() as f64))
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, s: f64) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl AddAssign<&Vector> for Vector {
    fn add_assign(&mut self, rhs: &Vector) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

/// Orthonormalize `candidates` by modified Gram-Schmidt, dropping vectors whose
/// residual norm falls below `tol` (relative to the candidate's own norm).
pub fn orthonormalize(candidates: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for c in candidates {
        let scale = c.norm();
        if scale <= f64::MIN_POSITIVE {
            continue;
        }
        let mut r = c.clone();
        // two passes keep the basis orthogonal to machine precision
        for _ in 0..2 {
            for b in &basis {
                let t = r.dot(b);
                r = r.axpy(-t, b);
            }
        }
        let n = r.norm();
        if n > tol * scale {
            basis.push(&r * (1.0 / n));
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of span(`dirs`) in R^dim.
pub fn orthogonal_complement(dirs: &[Vector], dim: usize) -> Vec<Vector> {
    let mut all: Vec<Vector> = orthonormalize(dirs, 1e-10);
    let k = all.len();
    for i in 0..dim {
        all.push(Vector::basis(dim, i));
    }
    let full = orthonormalize(&all, 1e-8);
    full.into_iter().skip(k).collect()
}

/// An affine subspace `base + span(directions)` with orthonormal directions.
///
/// Lines, planes and their translates all use this type; a subspace is
/// linear when `base` is the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineSubspace {
    pub base: Vector,
    pub directions: Vec<Vector>,
}

impl AffineSubspace {
    /// Builds a subspace, orthonormalizing the given spanning vectors.
    pub fn new(base: Vector, spanning: &[Vector]) -> Result<Self> {
        for d in spanning {
            check_dim(base.dim(), d.dim())?;
        }
        if !base.is_finite() || spanning.iter().any(|d| !d.is_finite()) {
            return Err(Error::NonFinite);
        }
        let directions = orthonormalize(spanning, 1e-10);
        Ok(AffineSubspace { base, directions })
    }

    /// Linear subspace spanned by `spanning`.
    pub fn linear(dim: usize, spanning: &[Vector]) -> Result<Self> {
        Self::new(Vector::zeros(dim), spanning)
    }

    /// The line `base + t * direction`.
    pub fn line(base: Vector, direction: &Vector) -> Result<Self> {
        let d = direction.normalized()?;
        Self::new(base, &[d])
    }

    /// The hyperplane `{x : normal . x = offset}`.
    pub fn hyperplane(normal: &Vector, offset: f64) -> Result<Self> {
        let n = normal.normalized()?;
        let scale = offset / normal.norm();
        let base = &n * scale;
        let dirs = orthogonal_complement(&[n.clone()], n.dim());
        Ok(AffineSubspace {
            base,
            directions: dirs,
        })
    }

    /// The whole ambient space R^dim.
    pub fn full(dim: usize) -> Self {
        AffineSubspace {
            base: Vector::zeros(dim),
            directions: (0..dim).map(|i| Vector::basis(dim, i)).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        AffineSubspace {
            base: Vector::zeros(dim),
            directions: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn is_linear(&self, tol: f64) -> bool {
        self.base.norm() <= tol
    }

    /// Orthonormal basis of the orthogonal complement of the direction space.
    pub fn normals(&self) -> Vec<Vector> {
        orthogonal_complement(&self.directions, self.ambient_dim())
    }

    /// Coordinates of `x - base` in the orthonormal chart.
    pub fn to_chart(&self, x: &Vector) -> Vector {
        let r = x - &self.base;
        Vector::new(self.directions.iter().map(|d| d.dot(&r)).collect())
    }

    /// Chart coordinates of a direction (no base shift).
    pub fn direction_to_chart(&self, x: &Vector) -> Vector {
        Vector::new(self.directions.iter().map(|d| d.dot(x)).collect())
    }

    pub fn from_chart(&self, y: &Vector) -> Vector {
        let mut x = self.base.clone();
        for (d, c) in self.directions.iter().zip(y.coords()) {
            x = x.axpy(*c, d);
        }
        x
    }

    pub fn direction_from_chart(&self, y: &Vector) -> Vector {
        let mut x = Vector::zeros(self.ambient_dim());
        for (d, c) in self.directions.iter().zip(y.coords()) {
            x = x.axpy(*c, d);
        }
        x
    }

    /// Orthogonal projection of `x` onto the subspace, in ambient coordinates.
    pub fn project_point(&self, x: &Vector) -> Vector {
        self.from_chart(&self.to_chart(x))
    }

    pub fn distance(&self, x: &Vector) -> f64 {
        x.distance(&self.project_point(x))
    }

    pub fn translated(&self, t: &Vector) -> AffineSubspace {
        AffineSubspace {
            base: &self.base + t,
            directions: self.directions.clone(),
        }
    }

    /// Largest principal angle between the direction spaces, for subspaces of
    /// equal dimension.
    pub fn angle_to(&self, other: &AffineSubspace) -> f64 {
        self.containment_angle(other)
            .max(other.containment_angle(self))
    }

    /// Largest angle between a direction of `self` and the direction space of
    /// `other`; zero when `self` is (angularly) contained in `other`.
    pub fn containment_angle(&self, other: &AffineSubspace) -> f64 {
        self.directions
            .iter()
            .map(|d| {
                let p = other.direction_from_chart(&other.direction_to_chart(d));
                (d - &p).norm().atan2(p.norm())
            })
            .fold(0.0, f64::max)
    }
}

/// Numerical rank of a set of vectors (Gaussian elimination with partial
/// pivoting, pivots below `tol` treated as zero).
pub fn rank(vectors: &[Vector], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols = vectors[0].dim();
    let mut m: Vec<Vec<f64>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    let rows = m.len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (piv, val) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        m.swap(r, piv);
        for i in r + 1..rows {
            let f = m[i][c] / m[r][c];
            for k in c..cols {
                m[i][k] -= f * m[r][k];
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperplane_chart_round_trip() {
        let h = AffineSubspace::hyperplane(&Vector::from([1.0, 1.0, 1.0]), 3.0_f64.sqrt()).unwrap();
        assert_eq!(h.dim(), 2);
        let p = h.from_chart(&Vector::from([0.3, -0.7]));
        let n = Vector::from([1.0, 1.0, 1.0]).normalized().unwrap();
        assert!((n.dot(&p) - 1.0).abs() < 1e-12);
        let back = h.to_chart(&p);
        assert!((back[0] - 0.3).abs() < 1e-12 && (back[1] + 0.7).abs() < 1e-12);
    }

    #[test]
    fn zero_direction_is_rejected() {
        assert!(matches!(
            Vector::zeros(3).normalized(),
            Err(Error::DegenerateDirection)
        ));
    }

    #[test]
    fn complement_and_rank() {
        let c = orthogonal_complement(&[Vector::from([0.0, 0.0, 2.0])], 3);
        assert_eq!(c.len(), 2);
        for v in &c {
            assert!(v[2].abs() < 1e-12);
        }
        let vs = [
            Vector::from([1.0, 0.0, 0.0]),
            Vector::from([0.0, 1.0, 0.0]),
            Vector::from([1.0, 1.0, 0.0]),
        ];
        assert_eq!(rank(&vs, 1e-9), 2);
    }

    #[test]
    fn containment_angle_of_line_in_plane() {
        let plane = AffineSubspace::linear(3, &[Vector::basis(3, 0), Vector::basis(3, 1)]).unwrap();
        let inside = AffineSubspace::linear(3, &[Vector::from([1.0, 1.0, 0.0])]).unwrap();
        let tilted = AffineSubspace::linear(3, &[Vector::from([1.0, 0.0, 1.0])]).unwrap();
        assert!(inside.containment_angle(&plane) < 1e-12);
        assert!((tilted.containment_angle(&plane) - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }
}
