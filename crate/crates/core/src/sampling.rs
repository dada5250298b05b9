//! Stratified exact sample points for checking a mesh function.
//!
//! Disagreements between PL representations concentrate on lower
//! dimensional sets, so samples cycle through four strata: mesh vertices,
//! points on simplex facets (including the support boundary), interior
//! points of simplices, and points anywhere in a box around the support.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::exact_geometry::{int, ratio, Point, Scalar};
use crate::pl_mesh::PLMesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stratum {
    Vertex,
    Facet,
    Interior,
    Exterior,
}

const STRATA: [Stratum; 4] = [Stratum::Vertex, Stratum::Facet, Stratum::Interior, Stratum::Exterior];

fn convex_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<Scalar> {
    let raw: Vec<i64> = (0..count).map(|_| rng.random_range(1..=7)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

pub fn sample_in(mesh: &PLMesh, stratum: Stratum, rng: &mut ChaCha8Rng) -> Point {
    let d = mesh.dim();
    let n = mesh.simplex_count();
    match stratum {
        Stratum::Vertex if !mesh.vertices().is_empty() => {
            mesh.vertices()[rng.random_range(0..mesh.vertices().len())].clone()
        }
        Stratum::Facet if n > 0 => {
            let corners = mesh.corners(rng.random_range(0..n));
            let skip = rng.random_range(0..corners.len());
            let facet: Vec<&Point> = corners
                .iter()
                .enumerate()
                .filter_map(|(k, p)| (k != skip).then_some(*p))
                .collect();
            let w = convex_weights(rng, facet.len());
            Point::combination(&facet, &w)
        }
        Stratum::Interior if n > 0 => {
            let corners = mesh.corners(rng.random_range(0..n));
            let w = convex_weights(rng, corners.len());
            Point::combination(&corners, &w)
        }
        _ => {
            let coords = (0..d)
                .map(|c| {
                    let lo = mesh.vertices().iter().map(|p| &p.coords()[c]).min().cloned().unwrap_or_else(|| int(0));
                    let hi = mesh.vertices().iter().map(|p| &p.coords()[c]).max().cloned().unwrap_or_else(|| int(0));
                    let span = &hi - &lo + int(2);
                    let t = ratio(rng.random_range(0..=64), 64);
                    lo - int(1) + span * t
                })
                .collect();
            Point::new(coords)
        }
    }
}

/// `count` points cycling vertex, facet, interior and exterior strata.
pub fn stratified_samples(mesh: &PLMesh, count: usize, rng: &mut ChaCha8Rng) -> Vec<Point> {
    (0..count).map(|i| sample_in(mesh, STRATA[i % STRATA.len()], rng)).collect()
}
