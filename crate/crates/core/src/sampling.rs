//! Deterministic direction samples.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::vector::Vector;

/// `n` near-uniform unit vectors on S^2 from the Fibonacci lattice.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector> {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let theta = golden * i as f64;
            Vector::from([r * theta.cos(), r * theta.sin(), z])
        })
        .collect()
}

/// `n` equally spaced unit vectors on S^1, starting at angle `phase`.
pub fn circle(n: usize, phase: f64) -> Vec<Vector> {
    (0..n)
        .map(|i| {
            let a = phase + 2.0 * PI * i as f64 / n as f64;
            Vector::from([a.cos(), a.sin()])
        })
        .collect()
}

/// Near-uniform unit directions in R^dim (dim 1, 2 or 3).
pub fn directions(dim: usize, n: usize) -> Vec<Vector> {
    match dim {
        1 => vec![Vector::from([1.0]), Vector::from([-1.0])],
        2 => circle(n, 0.0),
        3 => fibonacci_sphere(n),
        _ => {
            // Gaussian normalization for higher dimensions
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..n).map(|_| random_unit(&mut rng, dim)).collect()
        }
    }
}

/// A uniformly distributed unit vector in R^dim.
pub fn random_unit<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let v = Vector::new(
            (0..dim)
                .map(|_| {
                    // Box-Muller
                    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                    let u2: f64 = rng.gen();
                    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
                })
                .collect(),
        );
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

/// Largest angular radius (radians) of a spherical cap, centered at one of
/// `probes`, that contains none of `points`.
///
/// With a dense probe set this approximates the covering radius of `points`.
pub fn largest_empty_cap(points: &[Vector], probes: &[Vector]) -> f64 {
    probes
        .iter()
        .map(|c| {
            points
                .iter()
                .map(|p| c.angle(p))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
