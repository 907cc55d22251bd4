//! Brute-force planar helpers shared by the oracle tests. They do not use the
//! library's hull or LP code.

#![allow(dead_code)]

use convexity::{ConvexBody, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type P2 = [f64; 2];

fn turn(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise hull corners by Andrew's monotone chain.
pub fn chain_hull(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// `p` inside the counterclockwise polygon `hull`, up to `slack`
/// (measured as signed distance to each edge line).
pub fn inside(hull: &[P2], p: P2, slack: f64) -> bool {
    (0..hull.len()).all(|k| {
        let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
        let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        turn(a, b, p) / len >= -slack
    })
}

pub fn random_polygon(rng: &mut ChaCha8Rng, count: usize, radius: f64, center: P2) -> Vec<P2> {
    let pts: Vec<P2> = (0..count)
        .map(|_| {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = radius * rng.gen_range(0.3..1.0);
            [center[0] + r * a.cos(), center[1] + r * a.sin()]
        })
        .collect();
    chain_hull(&pts)
}

pub const GRID_STEP: f64 = 0.01;

pub fn body(poly: &[P2]) -> ConvexBody {
    let pts: Vec<Vector> = poly.iter().map(|p| Vector::from(*p)).collect();
    ConvexBody::hull(&pts, 1e-12).unwrap()
}

/// A translate `v` on the 0.01 grid with `0 ∈ C + v ⊆ B` up to `slack`, by
/// exhaustion.
pub fn grid_park(c: &[P2], b: &[P2], slack: f64) -> Option<P2> {
    let (lo, hi) = c.iter().fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), p| {
        ([lo[0].min(-p[0]), lo[1].min(-p[1])], [hi[0].max(-p[0]), hi[1].max(-p[1])])
    });
    let range = |a: f64, b: f64| (a / GRID_STEP).floor() as i64..=(b / GRID_STEP).ceil() as i64;
    for i in range(lo[0], hi[0]) {
        for j in range(lo[1], hi[1]) {
            let v = [i as f64 * GRID_STEP, j as f64 * GRID_STEP];
            if inside(c, [-v[0], -v[1]], slack)
                && c.iter().all(|p| inside(b, [p[0] + v[0], p[1] + v[1]], slack))
            {
                return Some(v);
            }
        }
    }
    None
}

/// Seeded instance: `B` a polygon around the origin, `C` a polygon inside `B`.
pub fn instance(seed: u64) -> (Vec<P2>, Vec<P2>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = loop {
        let center = [rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7)];
        let b = random_polygon(&mut rng, 7, 1.0, center);
        if b.len() >= 3 && inside(&b, [0.0, 0.0], -0.02) {
            break b;
        }
    };
    let c = loop {
        let center = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
        let radius = rng.gen_range(0.3..1.0);
        let (squash, tilt) = (rng.gen_range(0.2..1.0), rng.gen_range(0.0..std::f64::consts::PI));
        let c: Vec<P2> = random_polygon(&mut rng, 5, radius, [0.0, 0.0])
            .into_iter()
            .map(|[x, y]| {
                let y = squash * y;
                [center[0] + x * tilt.cos() - y * tilt.sin(), center[1] + x * tilt.sin() + y * tilt.cos()]
            })
            .collect();
        if c.len() >= 3 && c.iter().all(|p| inside(&b, *p, -1e-6)) {
            break c;
        }
    };
    (c, b)
}

/// Seed, `C`, `B` and the grid verdict.
pub type Instance = (u64, Vec<P2>, Vec<P2>, bool);

/// The first 100 seeds whose grid verdict does not change when every
/// containment is relaxed by two grid cells: feasible sets thinner than the
/// grid cannot be resolved by it.
pub fn resolvable_instances() -> (Vec<Instance>, usize) {
    let mut kept = Vec::new();
    let mut skipped = 0;
    let mut seed = 0;
    while kept.len() < 100 {
        let (c, b) = instance(seed);
        let strict = grid_park(&c, &b, 0.0).is_some();
        if strict == grid_park(&c, &b, 2.0 * GRID_STEP).is_some() {
            kept.push((seed, c, b, strict));
        } else {
            skipped += 1;
        }
        seed += 1;
    }
    (kept, skipped)
}
