//! Benchmark fixtures shared by the criterion targets.

use plnet_core::exact_geometry::{int, ratio};
use plnet_core::{generate_random, LiftedSimplex, PLMesh, Point};

/// A fixed nondegenerate lifted simplex over `R^d`, `d ≤ 3`.
pub fn lifted_simplex(d: usize) -> LiftedSimplex {
    let rows: [&[i64]; 5] = [&[0, 0, 0, 0], &[5, 1, -2, 3], &[-1, 4, 1, -2], &[2, -3, 5, 1], &[1, 2, -1, 6]];
    let vertices = rows[..d + 2]
        .iter()
        .map(|r| {
            let mut c: Vec<i64> = r[..d].to_vec();
            c.push(r[3]);
            Point::from_ints(&c)
        })
        .collect();
    LiftedSimplex::new(vertices).expect("fixture simplex is nondegenerate")
}

pub fn mesh(d: usize, n: usize) -> PLMesh {
    generate_random(d, n, 42).expect("generator")
}

/// Points along a diagonal through the mesh support region.
pub fn probe(d: usize, count: usize) -> Vec<Point> {
    (0..count)
        .map(|k| Point::new(vec![ratio(k as i64 - count as i64 / 2, 3); d]))
        .chain(std::iter::once(Point::new(vec![int(0); d])))
        .collect()
}
