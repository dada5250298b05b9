//! Seeded random meshes for `d ≤ 3`.
//!
//! Growth starts from one integer simplex and applies three moves that keep
//! the mesh conforming: attaching a simplex to a boundary facet (apex on
//! the integer grid, checked exactly against every existing simplex),
//! stellar subdivision at a rational interior point, and bisection of an
//! edge in every simplex that contains it. Interior vertices then get
//! random rational heights; boundary vertices get 0.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conformity::{barycentric_functionals, conforms, SimplexView};
use super::{MeshError, PLMesh};
use crate::exact_geometry::{hyperplane_through, AffineFunctional, int, ratio, signed_volume, Point, Scalar};

const START_BOX: i64 = 6;
const GROW_BOX: i64 = 12;

struct Growth {
    dim: usize,
    vertices: Vec<Point>,
    simplices: Vec<Vec<usize>>,
    /// Barycentric functionals per simplex, rebuilt lazily after subdivisions.
    charts: Vec<Vec<AffineFunctional>>,
}

impl Growth {
    fn corners(&self, s: &[usize]) -> Vec<&Point> {
        s.iter().map(|&i| &self.vertices[i]).collect()
    }

    fn boundary_facets(&self) -> Vec<(Vec<usize>, usize)> {
        let mut counts: std::collections::BTreeMap<Vec<usize>, Vec<usize>> = Default::default();
        for (s, simplex) in self.simplices.iter().enumerate() {
            for skip in 0..simplex.len() {
                let mut f: Vec<usize> = simplex
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &v)| (k != skip).then_some(v))
                    .collect();
                f.sort_unstable();
                counts.entry(f).or_default().push(s);
            }
        }
        counts
            .into_iter()
            .filter_map(|(f, owners)| (owners.len() == 1).then(|| (f, owners[0])))
            .collect()
    }

    fn random_grid_point(&self, rng: &mut ChaCha8Rng, half: i64) -> Point {
        Point::new((0..self.dim).map(|_| int(rng.random_range(-half..=half))).collect())
    }

    fn refresh_charts(&mut self) {
        if self.charts.len() == self.simplices.len() {
            return;
        }
        self.charts = self
            .simplices
            .iter()
            .map(|s| barycentric_functionals(&self.corners(s)).expect("grown simplices are nondegenerate"))
            .collect();
    }

    fn try_attach(&mut self, rng: &mut ChaCha8Rng) -> bool {
        self.refresh_charts();
        let boundary = self.boundary_facets();
        let (facet, owner) = boundary[rng.random_range(0..boundary.len())].clone();
        let opposite = *self.simplices[owner].iter().find(|v| !facet.contains(v)).unwrap();
        let facet_pts = self.corners(&facet);
        let plane = hyperplane_through(&facet_pts);
        let inner_side = plane.eval(&self.vertices[opposite]);

        let apex = self.random_grid_point(rng, GROW_BOX);
        let apex_side = plane.eval(&apex);
        if apex_side.is_zero() || apex_side.is_positive() == inner_side.is_positive() {
            return false;
        }
        if self.vertices.contains(&apex) {
            return false;
        }

        let apex_index = self.vertices.len();
        self.vertices.push(apex);
        let mut candidate = facet.clone();
        candidate.push(apex_index);
        let cand_corners = self.corners(&candidate);
        let Some(cand_bary) = barycentric_functionals(&cand_corners) else {
            self.vertices.pop();
            return false;
        };
        let cand_view = SimplexView {
            indices: &candidate,
            corners: cand_corners,
            barycentric: &cand_bary,
        };
        let ok = self.simplices.iter().zip(&self.charts).all(|(s, bary)| {
            conforms(
                &cand_view,
                &SimplexView {
                    indices: s,
                    corners: self.corners(s),
                    barycentric: bary,
                },
            )
        });
        if ok {
            self.simplices.push(candidate);
            self.charts.push(cand_bary);
        } else {
            self.vertices.pop();
        }
        ok
    }

    fn stellar(&mut self, rng: &mut ChaCha8Rng) {
        let s = rng.random_range(0..self.simplices.len());
        let simplex = self.simplices[s].clone();
        let weights: Vec<i64> = (0..simplex.len()).map(|_| rng.random_range(1..=3)).collect();
        let total: i64 = weights.iter().sum();
        let w: Vec<Scalar> = weights.iter().map(|&k| ratio(k, total)).collect();
        let centre = Point::combination(&self.corners(&simplex), &w);
        let c = self.vertices.len();
        self.vertices.push(centre);
        self.simplices.swap_remove(s);
        self.charts.clear();
        for k in 0..simplex.len() {
            let mut child = simplex.clone();
            child[k] = c;
            self.simplices.push(child);
        }
    }

    fn edge_degree(&self, a: usize, b: usize) -> usize {
        self.simplices.iter().filter(|s| s.contains(&a) && s.contains(&b)).count()
    }

    fn bisect(&mut self, a: usize, b: usize) {
        let mid = Point::combination(
            &[&self.vertices[a], &self.vertices[b]],
            &[ratio(1, 2), ratio(1, 2)],
        );
        let m = self.vertices.len();
        self.vertices.push(mid);
        let mut next = Vec::with_capacity(self.simplices.len() + 4);
        for s in std::mem::take(&mut self.simplices) {
            if s.contains(&a) && s.contains(&b) {
                next.push(s.iter().map(|&v| if v == a { m } else { v }).collect());
                next.push(s.iter().map(|&v| if v == b { m } else { v }).collect());
            } else {
                next.push(s);
            }
        }
        self.simplices = next;
        self.charts.clear();
    }
}

/// A valid random mesh in `PL(dim, n_target)`, deterministic in `seed`.
///
/// The generator aims for exactly `n_target` simplices and never exceeds it.
pub fn generate_random(dim: usize, n_target: usize, seed: u64) -> Result<PLMesh, MeshError> {
    if !(1..=3).contains(&dim) {
        return Err(MeshError::UnsupportedDimension(dim));
    }
    if n_target == 0 {
        return Err(MeshError::EmptyTarget);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Growth { dim, vertices: Vec::new(), simplices: Vec::new(), charts: Vec::new() };

    loop {
        let pts: Vec<Point> = (0..=dim).map(|_| g.random_grid_point(&mut rng, START_BOX)).collect();
        let refs: Vec<&Point> = pts.iter().collect();
        if !signed_volume(&refs).is_zero() {
            g.vertices = pts;
            g.simplices.push((0..=dim).collect());
            break;
        }
    }

    let mut attempts = 0;
    while g.simplices.len() < n_target && attempts < 400 * n_target {
        attempts += 1;
        let room = n_target - g.simplices.len();
        match rng.random_range(0..4) {
            0 if room >= dim => g.stellar(&mut rng),
            1 => {
                let s = g.simplices[rng.random_range(0..g.simplices.len())].clone();
                let i = rng.random_range(0..s.len());
                let j = (i + 1 + rng.random_range(0..s.len() - 1)) % s.len();
                if g.edge_degree(s[i], s[j]) <= room {
                    g.bisect(s[i], s[j]);
                }
            }
            _ => {
                g.try_attach(&mut rng);
            }
        }
    }

    let mut on_boundary = vec![false; g.vertices.len()];
    for (facet, _) in g.boundary_facets() {
        for v in facet {
            on_boundary[v] = true;
        }
    }
    let values = on_boundary
        .iter()
        .map(|&b| {
            if b {
                Scalar::zero()
            } else {
                ratio(rng.random_range(-32..=32), rng.random_range(1..=4))
            }
        })
        .collect();
    PLMesh::new(dim, g.vertices, values, g.simplices)
}
