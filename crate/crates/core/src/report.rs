//! The analysis pipeline behind `convexity analyze`.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::banach::{
    ellipsoid_certify, isotropic_map, parallelogram_pairs, parallelogram_residual,
    projection_norm_audit, Gauge,
};
use crate::body::ConvexBody;
use crate::error::Result;
use crate::geometry::OFFSET_FRACTIONS;
use crate::illumination::{dual_blaschke_check, weak_blaschke_test};
use crate::parkability::condition_iii_scan;
use crate::sampling;
use crate::symmetry::{
    chord_midpoint_plane, condition_ii_scan, involution_audit, section_center_lines,
    supports_criterion_2d, symmetry_center, Flag,
};
use crate::tolerance::Tolerances;

pub const REPORT_FORMAT: u32 = 1;
/// Witnesses listed per predicate.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisConfig {
    /// Sampled directions for the section scans and the projection audit.
    pub dirs: usize,
    pub offsets: Vec<f64>,
    pub seed: u64,
    /// Directions for the weak Blaschke search.
    pub blaschke_dirs: usize,
    /// Line directions for the chord-midpoint planes.
    pub chord_dirs: usize,
    /// Random flags for the subspace involution audit.
    pub flags: usize,
    /// Random pairs for the parallelogram law, on top of the vertex pairs.
    pub parallelogram_pairs: usize,
    pub tolerances: Tolerances,
    /// Record wall-clock time per predicate (makes reports non-reproducible).
    #[serde(skip)]
    pub timings: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            dirs: 512,
            offsets: OFFSET_FRACTIONS.to_vec(),
            seed: 0,
            blaschke_dirs: 64,
            chord_dirs: 64,
            flags: 64,
            parallelogram_pairs: 64,
            tolerances: Tolerances::default(),
            timings: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredicateEntry {
    pub name: &'static str,
    /// The property the predicate tests, in plain words.
    pub anchor: &'static str,
    pub verdict: bool,
    /// Predicate-specific residual; `null` when not computed or unbounded.
    pub residual: Option<f64>,
    pub witnesses: Vec<Value>,
    pub parameters: BTreeMap<&'static str, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BodySummary {
    pub dim: usize,
    pub vertices: usize,
    pub facets: usize,
    pub diameter: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub format_version: u32,
    pub body_id: String,
    pub body: BodySummary,
    pub config: AnalysisConfig,
    pub predicates: Vec<PredicateEntry>,
    pub all_passed: bool,
}

impl AnalysisReport {
    pub fn predicate(&self, name: &str) -> Option<&PredicateEntry> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn failed(&self) -> Vec<&PredicateEntry> {
        self.predicates.iter().filter(|p| !p.verdict).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

struct Outcome {
    verdict: bool,
    residual: f64,
    witnesses: Vec<Value>,
}

fn witnesses<T: Serialize>(items: impl IntoIterator<Item = T>) -> Vec<Value> {
    items
        .into_iter()
        .take(MAX_WITNESSES)
        .map(|w| serde_json::to_value(w).expect("witness serializes"))
        .collect()
}

struct Runner {
    timings: bool,
    entries: Vec<PredicateEntry>,
}

impl Runner {
    fn run(
        &mut self,
        name: &'static str,
        anchor: &'static str,
        parameters: &[(&'static str, Value)],
        f: impl FnOnce() -> Result<Outcome>,
    ) {
        let start = Instant::now();
        let result = f();
        let runtime_ms = self.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        let parameters = parameters.iter().cloned().collect();
        self.entries.push(match result {
            Ok(o) => PredicateEntry {
                name,
                anchor,
                verdict: o.verdict,
                residual: o.residual.is_finite().then_some(o.residual),
                witnesses: o.witnesses,
                parameters,
                error: None,
                runtime_ms,
            },
            Err(e) => PredicateEntry {
                name,
                anchor,
                verdict: false,
                residual: None,
                witnesses: Vec::new(),
                parameters,
                error: Some(e.to_string()),
                runtime_ms,
            },
        });
    }
}

/// Runs every predicate applicable to the dimension of `b`.
pub fn analyze(body_id: &str, b: &ConvexBody, config: &AnalysisConfig) -> AnalysisReport {
    let tol = &config.tolerances;
    let dim = b.dim();
    let dirs = sampling::directions(dim, config.dirs);
    let offsets = &config.offsets;
    let scan_params = [("dirs", json!(config.dirs)), ("offsets", json!(offsets))];
    let mut r = Runner {
        timings: config.timings,
        entries: Vec::new(),
    };

    r.run("symmetry", "the body has a center of symmetry", &[], || {
        let rep = symmetry_center(b, tol)?;
        Ok(Outcome {
            verdict: rep.center.is_some(),
            residual: rep.residual,
            witnesses: witnesses(rep.center),
        })
    });

    if dim == 2 {
        r.run(
            "supporting_lines",
            "opposite supporting lines touch the body on both sides of the origin",
            &[],
            || {
                let rep = supports_criterion_2d(b, tol)?;
                Ok(Outcome {
                    verdict: rep.passed(),
                    residual: 0.0,
                    witnesses: witnesses(rep.witness),
                })
            },
        );
    }

    r.run(
        "section_centers",
        "the body is centered at the origin and every hyperplane section has a center of symmetry",
        &scan_params,
        || {
            let scan = condition_ii_scan(b, &dirs, offsets, tol)?;
            Ok(Outcome {
                verdict: scan.passed(),
                residual: scan.worst_section_residual.max(scan.body_residual),
                witnesses: witnesses(&scan.centerless),
            })
        },
    );

    r.run(
        "center_collinearity",
        "centers of parallel sections lie on a line through the center",
        &scan_params,
        || {
            let mut worst: f64 = 0.0;
            let mut failing = Vec::new();
            for (d, line) in dirs
                .iter()
                .zip(section_center_lines(b, &dirs, offsets, tol)?)
            {
                worst = worst.max(line.collinearity_residual);
                if let Some(f) = line.centerless_offset {
                    failing.push(json!({ "direction": d, "offset_fraction": f }));
                } else if line.collinearity_residual > tol.collinearity {
                    failing.push(json!({ "direction": d, "residual": line.collinearity_residual }));
                }
            }
            Ok(Outcome {
                verdict: failing.is_empty(),
                residual: worst,
                witnesses: witnesses(failing),
            })
        },
    );

    r.run(
        "section_parking",
        "every hyperplane section can be translated inside the body so that it contains the origin",
        &scan_params,
        || {
            let scan = condition_iii_scan(b, &dirs, offsets, tol)?;
            Ok(Outcome {
                verdict: scan.passed(),
                residual: 1.0 - scan.pass_rate(),
                witnesses: witnesses(&scan.failures),
            })
        },
    );

    if dim == 3 {
        r.run(
            "chord_midpoints",
            "midpoints of parallel chords lie in a plane",
            &[("dirs", json!(config.chord_dirs))],
            || {
                let mut worst: f64 = 0.0;
                let mut failing = Vec::new();
                for d in sampling::directions(3, config.chord_dirs) {
                    let plane = chord_midpoint_plane(b, &d, tol)?;
                    worst = worst.max(plane.coplanarity_residual);
                    if plane.coplanarity_residual > tol.coplanarity {
                        failing.push(
                            json!({ "direction": d, "residual": plane.coplanarity_residual }),
                        );
                    }
                }
                Ok(Outcome {
                    verdict: failing.is_empty(),
                    residual: worst,
                    witnesses: witnesses(failing),
                })
            },
        );
    }

    r.run(
        "projection_norms",
        "orthogonal projections have norm at most 1 in the norm whose unit ball is the body, with the inner product taken from the body in isotropic position",
        &[("dirs", json!(config.dirs))],
        || {
            let w = isotropic_map(b)?;
            let audit = projection_norm_audit(&Gauge::new(b.mapped(w.rows())?)?, &dirs)?;
            let verdict = audit.max_norm <= 1.0 + tol.projection;
            Ok(Outcome {
                verdict,
                residual: audit.max_norm - 1.0,
                witnesses: if verdict {
                    Vec::new()
                } else {
                    witnesses([json!({
                        "isotropic_direction": audit.witness,
                        "rank": audit.witness_rank,
                        "norm": audit.max_norm,
                        "isotropic_map": w.rows(),
                    })])
                },
            })
        },
    );

    r.run(
        "parallelogram_law",
        "the norm whose unit ball is the body satisfies the parallelogram law",
        &[
            ("pairs", json!(config.parallelogram_pairs)),
            ("seed", json!(config.seed)),
        ],
        || {
            let gauge = Gauge::new(b.clone())?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let pairs = parallelogram_pairs(&gauge, &mut rng, config.parallelogram_pairs);
            let residual = parallelogram_residual(&gauge, &pairs);
            Ok(Outcome {
                verdict: residual <= tol.ellipsoid,
                residual,
                witnesses: Vec::new(),
            })
        },
    );

    if dim == 3 {
        r.run(
            "subspace_involution",
            "the map sending a plane to its line of section centers and a line to its plane of chord midpoints reverses inclusion and is an involution",
            &[("flags", json!(config.flags)), ("seed", json!(config.seed))],
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                let flags: Vec<Flag> = (0..config.flags).map(|_| Flag::random(&mut rng)).collect();
                let audit = involution_audit(b, &flags, tol)?;
                let worst = audit
                    .flags
                    .iter()
                    .map(|a| a.reversal_angle.max(a.involution_angle))
                    .fold(0.0, f64::max);
                Ok(Outcome {
                    verdict: audit.violations() == 0,
                    residual: worst,
                    witnesses: witnesses(
                        audit
                            .flags
                            .iter()
                            .filter(|a| {
                                a.reversal_angle > tol.involution
                                    || a.involution_angle > tol.involution
                                    || !a.trivial_intersection
                            })
                            .map(|a| &a.flag),
                    ),
                })
            },
        );

        r.run(
            "weak_blaschke",
            "for every direction some plane section of the boundary lies on the shadow boundary",
            &[("dirs", json!(config.blaschke_dirs))],
            || {
                let mut worst: f64 = 0.0;
                let mut failing = Vec::new();
                for d in sampling::directions(3, config.blaschke_dirs) {
                    let res = weak_blaschke_test(b, &d, tol)?;
                    worst = worst.max(res.residual);
                    if !res.verdict {
                        failing.push(json!({ "direction": d, "residual": res.residual }));
                    }
                }
                Ok(Outcome {
                    verdict: failing.is_empty(),
                    residual: worst,
                    witnesses: witnesses(failing),
                })
            },
        );

        r.run(
            "dual_blaschke",
            "every central plane section admits a line direction supporting the body along its whole boundary",
            &[("dirs", json!(config.dirs))],
            || {
                let dual = dual_blaschke_check(b, &dirs, tol)?;
                Ok(Outcome {
                    verdict: dual.passed(),
                    residual: dual.worst_slack,
                    witnesses: witnesses(&dual.empty),
                })
            },
        );
    }

    r.run(
        "ellipsoid",
        "the body is an ellipsoid centered at the origin",
        &[],
        || {
            let cert = ellipsoid_certify(b, tol)?;
            Ok(Outcome {
                verdict: cert.verdict,
                residual: cert.residual(),
                witnesses: witnesses([&cert.shape]),
            })
        },
    );

    let all_passed = r.entries.iter().all(|e| e.verdict);
    AnalysisReport {
        format_version: REPORT_FORMAT,
        body_id: body_id.to_string(),
        body: BodySummary {
            dim,
            vertices: b.vertices().len(),
            facets: b.facets().len(),
            diameter: b.diameter(),
        },
        config: config.clone(),
        predicates: r.entries,
        all_passed,
    }
}
