mod common;

use common::{body, chain_hull, inside, random_polygon, resolvable_instances};
use convexity::geometry::minkowski_erode;
use convexity::parkability::park;
use convexity::Vector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn park_agrees_with_grid_search() {
    let (instances, skipped) = resolvable_instances();
    let mut feasible = 0;
    let mut disagreements = Vec::new();
    for (seed, c, b, grid) in &instances {
        let lp = park(&body(c), &body(b), 1e-9).unwrap();
        if lp.is_feasible() {
            feasible += 1;
            // the LP witness itself must pass the brute-force test
            let w = lp.witness.as_ref().unwrap();
            assert!(inside(c, [-w[0], -w[1]], 1e-7), "seed {seed}");
            assert!(c.iter().all(|p| inside(b, [p[0] + w[0], p[1] + w[1]], 1e-7)), "seed {seed}");
        }
        if lp.is_feasible() != *grid {
            disagreements.push((*seed, lp.margin));
        }
    }
    println!(
        "park vs grid: {feasible}/100 feasible, {skipped} unresolvable seeds skipped, disagreements {disagreements:?}"
    );
    assert!(disagreements.is_empty());
    assert!(feasible < 100, "no infeasible instance in the sample");
}

#[test]
fn erosion_agrees_with_vertex_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = random_polygon(&mut rng, 9, 1.0, [0.0, 0.0]);
    let c = random_polygon(&mut rng, 6, 0.4, [0.1, -0.1]);
    let eroded = minkowski_erode(&body(&b), &body(&c), 1e-12).unwrap().expect("C fits in B");
    let (mut agree, mut total) = (0usize, 0usize);
    for i in 0..101 {
        for j in 0..101 {
            let v = [-1.0 + 0.02 * i as f64, -1.0 + 0.02 * j as f64];
            let direct = c.iter().all(|p| inside(&b, [p[0] + v[0], p[1] + v[1]], 0.0));
            let member = eroded.contains(&Vector::from(v), 1e-12);
            total += 1;
            agree += usize::from(direct == member);
        }
    }
    let rate = agree as f64 / total as f64;
    println!("erosion vs vertex checks: {agree}/{total} agree");
    assert!(rate >= 0.999);
}

#[test]
fn chain_hull_is_sane() {
    let square = chain_hull(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]);
    assert_eq!(square.len(), 4);
    assert!(inside(&square, [0.5, 0.5], 0.0));
    assert!(!inside(&square, [1.5, 0.5], 0.0));
}
