//! Body generators and the JSON body file format.
//!
//! A body file is a single JSON object with `"format": 1`, a `"kind"`, the
//! kind's parameters and an optional `"metadata"` object:
//!
//! ```json
//! {"format": 1, "kind": "vpolytope", "dim": 3,
//!  "vertices": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0]], "metadata": {}}
//! {"format": 1, "kind": "ellipsoid", "dim": 3,
//!  "shape": [[1, 0, 0], [0, 4, 0], [0, 0, 9]], "subdivision": 3}
//! ```

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::sampling::random_unit;
use crate::vector::Vector;

pub const FORMAT_VERSION: u32 = 1;
pub const MAX_SUBDIVISION: u32 = 5;
pub const MAX_VERTEX_COUNT: usize = 5000;
pub const DEFAULT_SUBDIVISION: u32 = 3;

const HULL_EPS: f64 = 1e-9;

/// Parametric description of a body.
#[derive(Clone, Debug, PartialEq)]
pub enum BodySpec {
    VPolytope {
        vertices: Vec<Vector>,
    },
    /// `{x : (x - c)^T Q (x - c) <= 1}` discretized by an icosphere.
    Ellipsoid {
        shape: Vec<Vec<f64>>,
        subdivision: u32,
        center: Option<Vector>,
    },
    Cube {
        dim: usize,
        half_width: f64,
    },
    CrossPolytope {
        dim: usize,
        radius: f64,
    },
    /// `conv{0, e_1, ..., e_dim}`
    Simplex {
        dim: usize,
    },
    /// Hull of seeded uniform points on the unit sphere, optionally
    /// symmetrized by adding their negatives.
    RandomPolytope {
        count: usize,
        seed: u64,
        symmetric: bool,
    },
    /// Radial perturbation of every vertex of `base` by a factor in
    /// `[1 - amplitude, 1 + amplitude]`.
    Perturbed {
        base: Box<BodySpec>,
        amplitude: f64,
        seed: u64,
    },
}

impl BodySpec {
    pub fn ellipsoid(shape: [[f64; 3]; 3]) -> Self {
        BodySpec::Ellipsoid {
            shape: shape.iter().map(|r| r.to_vec()).collect(),
            subdivision: DEFAULT_SUBDIVISION,
            center: None,
        }
    }

    pub fn diagonal_ellipsoid(d: [f64; 3]) -> Self {
        Self::ellipsoid([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]])
    }

    pub fn cube() -> Self {
        BodySpec::Cube {
            dim: 3,
            half_width: 1.0,
        }
    }

    pub fn cross_polytope() -> Self {
        BodySpec::CrossPolytope {
            dim: 3,
            radius: 1.0,
        }
    }

    pub fn simplex() -> Self {
        BodySpec::Simplex { dim: 3 }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            BodySpec::VPolytope { .. } => "vpolytope",
            BodySpec::Ellipsoid { .. } => "ellipsoid",
            BodySpec::Cube { .. } => "cube",
            BodySpec::CrossPolytope { .. } => "cross_polytope",
            BodySpec::Simplex { .. } => "simplex",
            BodySpec::RandomPolytope { .. } => "random_polytope",
            BodySpec::Perturbed { .. } => "perturbed",
        }
    }
}

/// Builds the body described by `spec`. Deterministic in the spec.
pub fn generate(spec: &BodySpec) -> Result<ConvexBody> {
    ConvexBody::hull(&generate_points(spec)?, HULL_EPS)
}

fn generate_points(spec: &BodySpec) -> Result<Vec<Vector>> {
    match spec {
        BodySpec::VPolytope { vertices } => {
            if vertices.is_empty() {
                return Err(Error::EmptyInput);
            }
            Ok(vertices.clone())
        }
        BodySpec::Ellipsoid {
            shape,
            subdivision,
            center,
        } => {
            if *subdivision > MAX_SUBDIVISION {
                return Err(Error::InvalidSpec(format!(
                    "subdivision {subdivision} exceeds {MAX_SUBDIVISION}"
                )));
            }
            let root = inverse_sqrt(shape)?;
            if root.nrows() != 3 {
                return Err(Error::InvalidSpec("ellipsoid shape must be 3x3".into()));
            }
            let c = center.clone().unwrap_or_else(|| Vector::zeros(3));
            if c.dim() != 3 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    found: c.dim(),
                });
            }
            Ok(icosphere(*subdivision)
                .into_iter()
                .map(|s| {
                    let x = &root * nalgebra::DVector::from_column_slice(s.coords());
                    &Vector::new(x.iter().copied().collect()) + &c
                })
                .collect())
        }
        BodySpec::Cube { dim, half_width } => {
            check_param_dim(*dim)?;
            positive("half_width", *half_width)?;
            Ok((0..1usize << dim)
                .map(|i| {
                    Vector::new(
                        (0..*dim)
                            .map(|b| {
                                if i >> b & 1 == 1 {
                                    *half_width
                                } else {
                                    -half_width
                                }
                            })
                            .collect(),
                    )
                })
                .collect())
        }
        BodySpec::CrossPolytope { dim, radius } => {
            check_param_dim(*dim)?;
            positive("radius", *radius)?;
            Ok((0..*dim)
                .flat_map(|i| {
                    let e = &Vector::basis(*dim, i) * *radius;
                    [e.clone(), -&e]
                })
                .collect())
        }
        BodySpec::Simplex { dim } => {
            check_param_dim(*dim)?;
            let mut pts = vec![Vector::zeros(*dim)];
            pts.extend((0..*dim).map(|i| Vector::basis(*dim, i)));
            Ok(pts)
        }
        BodySpec::RandomPolytope {
            count,
            seed,
            symmetric,
        } => {
            if *count < 4 || *count > MAX_VERTEX_COUNT {
                return Err(Error::InvalidSpec(format!(
                    "vertex count {count} outside 4..={MAX_VERTEX_COUNT}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut pts: Vec<Vector> = (0..*count).map(|_| random_unit(&mut rng, 3)).collect();
            if *symmetric {
                let neg: Vec<Vector> = pts.iter().map(|p| -p).collect();
                pts.extend(neg);
            }
            Ok(pts)
        }
        BodySpec::Perturbed {
            base,
            amplitude,
            seed,
        } => {
            if !(0.0..1.0).contains(amplitude) {
                return Err(Error::InvalidSpec(format!(
                    "perturbation amplitude {amplitude} outside [0, 1)"
                )));
            }
            let base = generate(base)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(base
                .vertices()
                .iter()
                .map(|v| {
                    let f: f64 = rng.gen_range(-1.0..=1.0);
                    v * (1.0 + amplitude * f)
                })
                .collect())
        }
    }
}

fn check_param_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("dimension {dim} outside 1..=3")))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "{name} must be positive, got {x}"
        )))
    }
}

/// `Q^{-1/2}` for a symmetric positive-definite `Q`.
fn inverse_sqrt(shape: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = shape.len();
    if n == 0 || shape.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidSpec("shape matrix must be square".into()));
    }
    let q = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = q.amax().max(1.0);
    if (&q - q.transpose()).amax() > 1e-12 * scale {
        return Err(Error::InvalidSpec("shape matrix is not symmetric".into()));
    }
    let eig = SymmetricEigen::new(q);
    if eig.eigenvalues.iter().any(|&l| l <= 1e-12 * scale) {
        return Err(Error::InvalidSpec(
            "shape matrix is not positive definite".into(),
        ));
    }
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
    Ok(&eig.eigenvectors * d * eig.eigenvectors.transpose())
}

/// Unit icosphere: icosahedron refined `level` times by edge midpoints,
/// every vertex projected to the sphere. `10 * 4^level + 2` vertices.
pub fn icosphere(level: u32) -> Vec<Vector> {
    let t = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(unit)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(unit([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    verts.into_iter().map(Vector::from).collect()
}

fn unit(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

/// Rotation matrix `R(axis, angle)` (Rodrigues).
pub fn rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let [x, y, z] = unit(axis);
    let (s, c) = angle.sin_cos();
    let k = 1.0 - c;
    [
        [c + x * x * k, x * y * k - z * s, x * z * k + y * s],
        [y * x * k + z * s, c + y * y * k, y * z * k - x * s],
        [z * x * k - y * s, z * y * k + x * s, c + z * z * k],
    ]
}

/// `R diag(d) R^T`
pub fn rotated_diagonal(d: [f64; 3], r: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut q = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            q[i][j] = (0..3).map(|k| r[i][k] * d[k] * r[j][k]).sum();
        }
    }
    q
}

/// The rotated `diag(1, 2, 5)` shape used throughout the test corpus.
pub fn rotated_125() -> [[f64; 3]; 3] {
    rotated_diagonal([1.0, 2.0, 5.0], rotation([1.0, 2.0, 3.0], 0.7))
}

/// Named generator corpus: three ellipsoids, cube, cross-polytope,
/// octahedron and five perturbed balls.
pub fn corpus() -> Vec<(String, BodySpec)> {
    let mut out = vec![
        (
            "ellipsoid_identity".to_string(),
            BodySpec::diagonal_ellipsoid([1.0, 1.0, 1.0]),
        ),
        (
            "ellipsoid_diag_1_4_9".to_string(),
            BodySpec::diagonal_ellipsoid([1.0, 4.0, 9.0]),
        ),
        (
            "ellipsoid_rotated_1_2_5".to_string(),
            BodySpec::ellipsoid(rotated_125()),
        ),
        ("cube".to_string(), BodySpec::cube()),
        ("cross_polytope".to_string(), BodySpec::cross_polytope()),
        (
            "octahedron".to_string(),
            BodySpec::CrossPolytope {
                dim: 3,
                radius: 1.5,
            },
        ),
    ];
    for seed in 1..=5 {
        out.push((
            format!("perturbed_ellipsoid_{seed}"),
            BodySpec::Perturbed {
                base: Box::new(BodySpec::diagonal_ellipsoid([1.0, 1.0, 1.0])),
                amplitude: 0.05,
                seed,
            },
        ));
    }
    out
}

/// Serialized form shared by all kinds; only the fields of `kind` are set.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    format: Option<u32>,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shape: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subdivision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    half_width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<Box<RawSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<serde_json::Map<String, serde_json::Value>>,
}

fn missing(kind: &str, field: &str) -> Error {
    Error::Parse {
        path: field.to_string(),
        line: 0,
        column: 0,
        message: format!("missing field `{field}` for kind `{kind}`"),
    }
}

impl RawSpec {
    fn into_spec(self) -> Result<BodySpec> {
        let kind = self.kind.as_str();
        let dim = self.dim.unwrap_or(3);
        let spec = match kind {
            "vpolytope" => {
                let vs = self.vertices.ok_or_else(|| missing(kind, "vertices"))?;
                if let Some(d) = self.dim {
                    if let Some(bad) = vs.iter().find(|v| v.len() != d) {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            found: bad.len(),
                        });
                    }
                }
                BodySpec::VPolytope {
                    vertices: vs.into_iter().map(Vector::new).collect(),
                }
            }
            "ellipsoid" => BodySpec::Ellipsoid {
                shape: self.shape.ok_or_else(|| missing(kind, "shape"))?,
                subdivision: self.subdivision.unwrap_or(DEFAULT_SUBDIVISION),
                center: self.center.map(Vector::new),
            },
            "cube" => BodySpec::Cube {
                dim,
                half_width: self.half_width.unwrap_or(1.0),
            },
            "cross_polytope" => BodySpec::CrossPolytope {
                dim,
                radius: self.radius.unwrap_or(1.0),
            },
            "simplex" => BodySpec::Simplex { dim },
            "random_polytope" => BodySpec::RandomPolytope {
                count: self.count.ok_or_else(|| missing(kind, "count"))?,
                seed: self.seed.unwrap_or(0),
                symmetric: self.symmetric.unwrap_or(false),
            },
            "perturbed" => BodySpec::Perturbed {
                base: Box::new(
                    self.base
                        .ok_or_else(|| missing(kind, "base"))?
                        .into_spec()?,
                ),
                amplitude: self.amplitude.ok_or_else(|| missing(kind, "amplitude"))?,
                seed: self.seed.unwrap_or(0),
            },
            other => {
                return Err(Error::Parse {
                    path: "kind".into(),
                    line: 0,
                    column: 0,
                    message: format!("unknown kind `{other}`"),
                })
            }
        };
        Ok(spec)
    }

    fn from_spec(spec: &BodySpec) -> RawSpec {
        let mut raw = RawSpec {
            kind: spec.kind().to_string(),
            ..RawSpec::default()
        };
        match spec {
            BodySpec::VPolytope { vertices } => {
                raw.dim = vertices.first().map(Vector::dim);
                raw.vertices = Some(vertices.iter().map(|v| v.coords().to_vec()).collect());
            }
            BodySpec::Ellipsoid {
                shape,
                subdivision,
                center,
            } => {
                raw.dim = Some(shape.len());
                raw.shape = Some(shape.clone());
                raw.subdivision = Some(*subdivision);
                raw.center = center.as_ref().map(|c| c.coords().to_vec());
            }
            BodySpec::Cube { dim, half_width } => {
                raw.dim = Some(*dim);
                raw.half_width = Some(*half_width);
            }
            BodySpec::CrossPolytope { dim, radius } => {
                raw.dim = Some(*dim);
                raw.radius = Some(*radius);
            }
            BodySpec::Simplex { dim } => raw.dim = Some(*dim),
            BodySpec::RandomPolytope {
                count,
                seed,
                symmetric,
            } => {
                raw.dim = Some(3);
                raw.count = Some(*count);
                raw.seed = Some(*seed);
                raw.symmetric = Some(*symmetric);
            }
            BodySpec::Perturbed {
                base,
                amplitude,
                seed,
            } => {
                raw.dim = Some(3);
                raw.base = Some(Box::new(RawSpec::from_spec(base)));
                raw.amplitude = Some(*amplitude);
                raw.seed = Some(*seed);
            }
        }
        raw
    }
}

/// Parses a body file into its spec.
pub fn parse_spec(text: &str) -> Result<BodySpec> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    match raw.format {
        Some(FORMAT_VERSION) => {}
        Some(v) => {
            return Err(Error::Parse {
                path: "format".into(),
                line: 0,
                column: 0,
                message: format!("unsupported format version {v}"),
            })
        }
        None => return Err(missing(&raw.kind, "format")),
    }
    raw.into_spec()
}

pub fn spec_to_json(spec: &BodySpec) -> String {
    let mut raw = RawSpec::from_spec(spec);
    raw.format = Some(FORMAT_VERSION);
    raw.metadata = Some(serde_json::Map::new());
    serde_json::to_string_pretty(&raw).expect("spec serializes")
}

pub fn load_spec(path: &Path) -> Result<BodySpec> {
    parse_spec(&fs::read_to_string(path)?)
}

/// Reads and generates the body stored at `path`.
pub fn load(path: &Path) -> Result<ConvexBody> {
    generate(&load_spec(path)?)
}

/// Writes `body` as a `vpolytope` file.
pub fn save(body: &ConvexBody, path: &Path) -> Result<()> {
    let spec = BodySpec::VPolytope {
        vertices: body.vertices().to_vec(),
    };
    fs::write(path, spec_to_json(&spec))?;
    Ok(())
}

pub fn save_spec(spec: &BodySpec, path: &Path) -> Result<()> {
    fs::write(path, spec_to_json(spec))?;
    Ok(())
}
