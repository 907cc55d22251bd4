//! Norms with a symmetric body as unit ball, operator norms of linear maps,
//! the orthogonal-projection audit and the ellipsoid certificate.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::sampling;
use crate::symmetry::symmetry_center;
use crate::tolerance::Tolerances;
use crate::vector::{orthogonal_complement, Vector};

/// The gauge (Minkowski functional) of a body with the origin in its
/// interior: `inf {r >= 0 : x ∈ r B}`.
#[derive(Clone, Debug)]
pub struct Gauge {
    body: ConvexBody,
}

impl Gauge {
    pub fn new(body: ConvexBody) -> Result<Gauge> {
        if body.is_flat() {
            return Err(Error::Precondition("unit ball must have interior".into()));
        }
        if let Some(f) = body.facets().iter().find(|f| f.offset <= 0.0) {
            return Err(Error::Precondition(format!(
                "origin is not interior (facet offset {})",
                f.offset
            )));
        }
        Ok(Gauge { body })
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn norm(&self, x: &Vector) -> f64 {
        self.body
            .facets()
            .iter()
            .map(|f| f.normal.dot(x) / f.offset)
            .fold(0.0, f64::max)
    }
}

/// A linear map of R^dim by its row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearMap {
    rows: Vec<Vec<f64>>,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<LinearMap> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for r in &rows {
            check_dim(n, r.len())?;
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(LinearMap { rows })
    }

    pub fn identity(dim: usize) -> LinearMap {
        LinearMap {
            rows: (0..dim)
                .map(|i| Vector::basis(dim, i).into_coords())
                .collect(),
        }
    }

    /// Orthogonal projection onto the span of the orthonormal `basis`.
    pub fn orthogonal_projection(dim: usize, basis: &[Vector]) -> LinearMap {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| basis.iter().map(|b| b[i] * b[j]).sum())
                    .collect()
            })
            .collect();
        LinearMap { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        Vector::new(
            self.rows
                .iter()
                .map(|r| r.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        LinearMap { rows }
    }

    pub fn add(&self, other: &LinearMap) -> LinearMap {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        LinearMap { rows }
    }

    pub fn transpose(&self) -> LinearMap {
        let n = self.dim();
        LinearMap {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i]).collect())
                .collect(),
        }
    }
}

/// `sup_{|x| <= 1} |T x|` in the gauge norm; attained at a vertex of the ball.
pub fn operator_norm(g: &Gauge, t: &LinearMap) -> Result<f64> {
    check_dim(g.dim(), t.dim())?;
    Ok(g.body
        .vertices()
        .iter()
        .map(|v| g.norm(&t.apply(v)))
        .fold(0.0, f64::max))
}

/// `M^{-1/2}` for the vertex second moment `M = mean(v v^T)`: the linear map
/// putting `b` in isotropic position.
///
/// Conjugating by it turns the inner product `x^T M^{-1} y` into the standard
/// one; for an ellipsoid sampled by an isotropic point set this is the inner
/// product whose unit ball is the ellipsoid.
pub fn isotropic_map(b: &ConvexBody) -> Result<LinearMap> {
    let dim = b.dim();
    let n = b.vertices().len() as f64;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for v in b.vertices() {
        let col = DVector::from_column_slice(v.coords());
        m += &col * col.transpose() / n;
    }
    let eig = SymmetricEigen::new(m);
    let floor = 1e-12 * eig.eigenvalues.max().max(f64::MIN_POSITIVE);
    if eig.eigenvalues.iter().any(|&l| l <= floor) {
        return Err(Error::Degenerate("vertices span a proper subspace".into()));
    }
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    let w = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
    LinearMap::new(
        (0..dim)
            .map(|i| w.row(i).iter().copied().collect())
            .collect(),
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionAudit {
    pub max_norm: f64,
    /// Direction `u` of the worst projection.
    pub witness: Vector,
    /// Rank of the worst projection: 1 onto `span(u)`, 2 onto `u^⊥`.
    pub witness_rank: usize,
    pub checked: usize,
}

/// Largest gauge operator norm of the orthogonal projections onto `span(u)`
/// and `u^⊥` over the sampled directions.
pub fn projection_norm_audit(g: &Gauge, dirs: &[Vector]) -> Result<ProjectionAudit> {
    let dim = g.dim();
    let norms: Vec<(f64, usize)> = dirs
        .par_iter()
        .map(|d| {
            let u = d.normalized()?;
            let line = LinearMap::orthogonal_projection(dim, std::slice::from_ref(&u));
            let complement =
                LinearMap::orthogonal_projection(dim, &orthogonal_complement(&[u], dim));
            let n1 = operator_norm(g, &line)?;
            let n2 = if dim > 1 {
                operator_norm(g, &complement)?
            } else {
                0.0
            };
            Ok(if n2 > n1 { (n2, 2) } else { (n1, 1) })
        })
        .collect::<Result<_>>()?;
    let (best, &(max_norm, witness_rank)) = norms
        .iter()
        .enumerate()
        .fold(
            None,
            |acc: Option<(usize, &(f64, usize))>, (i, x)| match acc {
                Some((_, y)) if y.0 >= x.0 => acc,
                _ => Some((i, x)),
            },
        )
        .ok_or(Error::EmptyInput)?;
    Ok(ProjectionAudit {
        max_norm,
        witness: dirs[best].normalized()?,
        witness_rank,
        checked: dirs.len(),
    })
}

/// `|‖x+y‖² + ‖x−y‖² − 2‖x‖² − 2‖y‖²| / (‖x‖² + ‖y‖²)`
pub fn parallelogram_defect(g: &Gauge, x: &Vector, y: &Vector) -> f64 {
    let (nx, ny) = (g.norm(x), g.norm(y));
    let denom = nx * nx + ny * ny;
    if denom <= f64::MIN_POSITIVE {
        return 0.0;
    }
    let s = g.norm(&(x + y));
    let d = g.norm(&(x - y));
    (s * s + d * d - 2.0 * nx * nx - 2.0 * ny * ny).abs() / denom
}

pub fn parallelogram_residual(g: &Gauge, pairs: &[(Vector, Vector)]) -> f64 {
    pairs
        .iter()
        .map(|(x, y)| parallelogram_defect(g, x, y))
        .fold(0.0, f64::max)
}

/// Pairs of consecutive vertex directions followed by `random` random unit
/// pairs.
pub fn parallelogram_pairs<R: Rng>(g: &Gauge, rng: &mut R, random: usize) -> Vec<(Vector, Vector)> {
    let vs = g.body.vertices();
    let mut pairs: Vec<(Vector, Vector)> = (0..vs.len())
        .map(|i| (vs[i].clone(), vs[(i + 1) % vs.len()].clone()))
        .collect();
    for _ in 0..random {
        pairs.push((
            sampling::random_unit(rng, g.dim()),
            sampling::random_unit(rng, g.dim()),
        ));
    }
    pairs
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipsoidCertificate {
    /// Fitted `Q` of the quadric `{x : x^T Q x = 1}`.
    pub shape: Vec<Vec<f64>>,
    /// `max |v^T Q v - 1|` over the vertices.
    pub fit_residual: f64,
    /// `max (1 - b² / n^T Q^{-1} n)` over the facets `(n, b)`: how far a
    /// facet plane sits inside the fitted ellipsoid.
    pub facet_gap: f64,
    pub positive_definite: bool,
    pub verdict: bool,
}

impl EllipsoidCertificate {
    pub fn residual(&self) -> f64 {
        self.fit_residual.max(self.facet_gap)
    }
}

/// Fits a centered quadric to the vertices of `b` and measures how well `b`
/// matches the ellipsoid it bounds.
pub fn ellipsoid_certify(b: &ConvexBody, tol: &Tolerances) -> Result<EllipsoidCertificate> {
    if b.is_flat() {
        return Err(Error::Precondition("body must have interior".into()));
    }
    let scale = b.diameter().max(1.0);
    if b.max_violation(&Vector::zeros(b.dim())) >= -tol.geom * scale {
        return Err(Error::Precondition("origin is not interior".into()));
    }
    let sym = symmetry_center(b, tol)?;
    if !sym
        .center
        .is_some_and(|c| c.norm() <= tol.symmetry * b.diameter())
    {
        return Err(Error::Precondition(format!(
            "body is not centrally symmetric (residual {:.3e})",
            sym.residual
        )));
    }
    let dim = b.dim();
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i..dim).map(move |j| (i, j)))
        .collect();
    let vs = b.vertices();
    let a = DMatrix::from_fn(vs.len(), pairs.len(), |r, c| {
        let (i, j) = pairs[c];
        let m = if i == j { 1.0 } else { 2.0 };
        m * vs[r][i] * vs[r][j]
    });
    let ones = DVector::from_element(vs.len(), 1.0);
    let q = a
        .clone()
        .svd(true, true)
        .solve(&ones, 1e-12)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let mut shape = DMatrix::zeros(dim, dim);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        shape[(i, j)] = q[c];
        shape[(j, i)] = q[c];
    }
    let fit_residual = (&a * &q - &ones).amax();
    let eig = SymmetricEigen::new(shape.clone());
    let positive_definite = eig.eigenvalues.iter().all(|&l| l > 0.0);
    let facet_gap = if positive_definite {
        let inv = shape
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("singular fit".into()))?;
        b.facets()
            .iter()
            .map(|f| {
                let n = DVector::from_column_slice(f.normal.coords());
                1.0 - f.offset * f.offset / (n.transpose() * &inv * &n)[(0, 0)]
            })
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(EllipsoidCertificate {
        shape: (0..dim)
            .map(|i| (0..dim).map(|j| shape[(i, j)]).collect())
            .collect(),
        fit_residual,
        facet_gap,
        positive_definite,
        verdict: positive_definite && fit_residual <= tol.ellipsoid && facet_gap <= tol.ellipsoid,
    })
}
