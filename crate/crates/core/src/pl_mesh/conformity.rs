//! Exact pairwise conformity test for closed simplices.
//!
//! Two closed `d`-simplices meet in a common face iff every vertex of the
//! polytope `σ ∩ τ` lies in the face spanned by their shared vertex
//! indices. The vertices of `σ ∩ τ` are among the points where `d` of the
//! `2(d+1)` barycentric constraints are tight, so enumerating those
//! `C(2d+2, d)` candidates decides the question without an LP.

use num_traits::{Signed, Zero};

use crate::exact_geometry::{linalg, AffineFunctional, Point, Scalar};

/// Barycentric coordinate functionals of a nondegenerate simplex, one per vertex.
pub fn barycentric_functionals(corners: &[&Point]) -> Option<Vec<AffineFunctional>> {
    let d = corners.len().checked_sub(1)?;
    let pts: Vec<Point> = corners.iter().map(|p| (*p).clone()).collect();
    (0..=d)
        .map(|j| {
            let values: Vec<Scalar> = (0..=d)
                .map(|k| if k == j { Scalar::from_integer(1.into()) } else { Scalar::zero() })
                .collect();
            crate::exact_geometry::solve_affine(&pts, &values).ok()
        })
        .collect()
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn bounding_boxes_meet(a: &[&Point], b: &[&Point]) -> bool {
    let dim = a[0].dim();
    (0..dim).all(|c| {
        let lo = |s: &[&Point]| s.iter().map(|p| &p.coords()[c]).min().unwrap().clone();
        let hi = |s: &[&Point]| s.iter().map(|p| &p.coords()[c]).max().unwrap().clone();
        lo(a) <= hi(b) && lo(b) <= hi(a)
    })
}

/// A simplex given by its global vertex indices, corner points and barycentric functionals.
pub struct SimplexView<'a> {
    pub indices: &'a [usize],
    pub corners: Vec<&'a Point>,
    pub barycentric: &'a [AffineFunctional],
}

/// True when a facet hyperplane of `s` has all of `t` weakly on its far
/// side and every vertex of `t` touching it is a shared vertex. Then
/// `s ∩ t` is the face spanned by those shared vertices.
fn separated_by_facet(s: &SimplexView<'_>, t: &SimplexView<'_>) -> bool {
    s.barycentric.iter().any(|lambda| {
        t.corners.iter().zip(t.indices).all(|(p, idx)| {
            let v = lambda.eval(p);
            v.is_negative() || (v.is_zero() && s.indices.contains(idx))
        })
    })
}

/// Whether two nondegenerate closed simplices intersect in a common (possibly empty) face.
pub fn conforms(s: &SimplexView<'_>, t: &SimplexView<'_>) -> bool {
    let shared: Vec<usize> = s.indices.iter().copied().filter(|i| t.indices.contains(i)).collect();
    if shared.is_empty() && !bounding_boxes_meet(&s.corners, &t.corners) {
        return true;
    }
    if separated_by_facet(s, t) || separated_by_facet(t, s) {
        return true;
    }
    full_check(s, t, &shared)
}

/// Exhaustive test over candidate vertices of `s ∩ t`.
pub fn full_check(s: &SimplexView<'_>, t: &SimplexView<'_>, shared: &[usize]) -> bool {
    let d = s.corners[0].dim();
    // λ^s_j for vertices of s outside the shared face must vanish on the intersection.
    let outside: Vec<usize> = (0..s.indices.len())
        .filter(|&j| !shared.contains(&s.indices[j]))
        .collect();
    let constraints: Vec<&AffineFunctional> = s.barycentric.iter().chain(t.barycentric).collect();
    for pick in combinations(constraints.len(), d) {
        let matrix = pick.iter().map(|&k| constraints[k].normal.clone()).collect();
        let rhs = pick.iter().map(|&k| -&constraints[k].offset).collect();
        let Some(x) = linalg::solve(matrix, rhs) else {
            continue;
        };
        if constraints.iter().any(|g| g.eval_coords(&x).is_negative()) {
            continue;
        }
        if outside.iter().any(|&j| !s.barycentric[j].eval_coords(&x).is_zero()) {
            return false;
        }
    }
    true
}
