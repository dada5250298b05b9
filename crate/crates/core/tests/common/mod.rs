#![allow(dead_code)]

use num_traits::Zero;
use plnet_core::exact_geometry::{int, ratio};
use plnet_core::{LiftedSimplex, Point, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_point(rng: &mut ChaCha8Rng, dim: usize, half: i64) -> Point {
    Point::new((0..dim).map(|_| int(rng.random_range(-half..=half))).collect())
}

/// Random nondegenerate lifted simplex over `R^d` with small integer vertices.
pub fn random_lifted(rng: &mut ChaCha8Rng, d: usize) -> LiftedSimplex {
    loop {
        let verts = (0..d + 2).map(|_| random_point(rng, d + 1, 8)).collect();
        if let Ok(s) = LiftedSimplex::new(verts) {
            return s;
        }
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Scalar {
    let den = rng.random_range(1..=12);
    ratio(rng.random_range(lo * den..=hi * den), den)
}

/// Mix of points: shadow vertices, points on shadow edges, apex-like
/// interior combinations, and points in a box around the shadow.
pub fn probe_points(rng: &mut ChaCha8Rng, s: &LiftedSimplex, count: usize) -> Vec<Point> {
    let shadow = s.shadow();
    let d = s.base_dim();
    (0..count)
        .map(|i| match i % 4 {
            0 => shadow[rng.random_range(0..shadow.len())].clone(),
            1 => {
                let a = &shadow[rng.random_range(0..shadow.len())];
                let b = &shadow[rng.random_range(0..shadow.len())];
                let t = ratio(rng.random_range(0..=8), 8);
                Point::combination(&[a, b], &[int(1) - &t, t])
            }
            2 => {
                let w: Vec<i64> = (0..shadow.len()).map(|_| rng.random_range(0..=5)).collect();
                let total: i64 = w.iter().sum::<i64>().max(1);
                let refs: Vec<&Point> = shadow.iter().collect();
                let weights: Vec<Scalar> = w.iter().map(|&k| ratio(k, total)).collect();
                if weights.iter().all(Zero::is_zero) {
                    shadow[0].clone()
                } else {
                    Point::combination(&refs, &weights)
                }
            }
            _ => Point::new((0..d).map(|_| random_rational(rng, -10, 10)).collect()),
        })
        .collect()
}
