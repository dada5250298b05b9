//! Signed simplex-function decomposition of a mesh function.
//!
//! The base faces `(v_i, 0)` of every mesh simplex, minus its graph faces
//! `(v_i, f(v_i))`, form a `d`-cycle in `R^{d+1}`. Coning each face to a
//! generic apex `a` gives simplices `Δ_i` whose signed sum has that cycle
//! as boundary, so its degree at a point is the winding number of the
//! cycle there: the signed thickness between the base and the graph.
//! Integrating along vertical lines gives `f = Σ ε_i τ(Δ_i)` exactly.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact_geometry::{int, ratio, signed_volume, GeometryError, Point, Scalar, Sign};
use crate::pl_mesh::PLMesh;
use crate::simplex_calculus::{LiftedSimplex, SimplexError};

/// Number of seeded cone-point candidates tried before giving up.
pub const CONE_POINT_RETRIES: usize = 64;

/// Leading candidates restricted to integer coordinates.
pub const INTEGER_CANDIDATES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceKind {
    Base,
    Graph,
}

/// One face of the base-plus-graph cycle, identified by its mesh simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceId {
    pub simplex: usize,
    pub kind: FaceKind,
}

impl std::fmt::Display for FaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            FaceKind::Base => "base",
            FaceKind::Graph => "graph",
        };
        write!(f, "{kind} face of mesh simplex {}", self.simplex)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error("cone point has dimension {found}, expected {expected}")]
    ConePointDimension { expected: usize, found: usize },
    #[error("cone point {point} is not generic: coning the {face} ({vertices}) gives a degenerate simplex: {cause}")]
    NotGeneric {
        point: Point,
        face: FaceId,
        vertices: String,
        cause: SimplexError,
    },
    #[error("no generic cone point found after {0} seeded candidates")]
    RetriesExhausted(usize),
    #[error("term {index} is malformed: {reason}")]
    MalformedTerm { index: usize, reason: &'static str },
    #[error("term index {index} out of range for {len} terms")]
    TermIndex { index: usize, len: usize },
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub sign: Sign,
    pub simplex: LiftedSimplex,
}

/// `f = Σ ε_i τ(Δ_i)`, every `Δ_i` having the cone point as its first vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDecomposition {
    dim: usize,
    cone_point: Point,
    terms: Vec<Term>,
}

impl SignedDecomposition {
    /// Assembles a decomposition, checking that every term is a `(d+1)`-simplex
    /// with a nonzero sign and the cone point as first vertex.
    pub fn new(dim: usize, cone_point: Point, terms: Vec<Term>) -> Result<Self, DecomposeError> {
        if cone_point.dim() != dim + 1 {
            return Err(DecomposeError::ConePointDimension { expected: dim + 1, found: cone_point.dim() });
        }
        for (index, t) in terms.iter().enumerate() {
            let reason = if t.simplex.base_dim() != dim {
                "wrong dimension"
            } else if t.sign.is_zero() {
                "zero sign"
            } else if t.simplex.vertices()[0] != cone_point {
                "first vertex is not the cone point"
            } else {
                continue;
            };
            return Err(DecomposeError::MalformedTerm { index, reason });
        }
        Ok(SignedDecomposition { dim, cone_point, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone_point(&self) -> &Point {
        &self.cone_point
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ ε_i τ(Δ_i)(x)`, exact.
    pub fn eval(&self, x: &Point) -> Result<Scalar, GeometryError> {
        if x.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        let mut total = Scalar::zero();
        for t in &self.terms {
            let tau = t.simplex.tau(x)?;
            match t.sign {
                Sign::Positive => total += tau,
                Sign::Negative => total -= tau,
                Sign::Zero => {}
            }
        }
        Ok(total)
    }

    /// Drops pairs of identical simplices carrying opposite signs.
    pub fn prune(&self) -> SignedDecomposition {
        let mut open: HashMap<Vec<Point>, Vec<usize>> = HashMap::new();
        let mut keep = vec![true; self.terms.len()];
        for (i, t) in self.terms.iter().enumerate() {
            let key = t.simplex.canonical_key();
            let pending = open.entry(key).or_default();
            if let Some(pos) = pending.iter().position(|&j| self.terms[j].sign == -t.sign) {
                let j = pending.swap_remove(pos);
                keep[i] = false;
                keep[j] = false;
            } else {
                pending.push(i);
            }
        }
        SignedDecomposition {
            dim: self.dim,
            cone_point: self.cone_point.clone(),
            terms: self
                .terms
                .iter()
                .zip(keep)
                .filter_map(|(t, k)| k.then(|| t.clone()))
                .collect(),
        }
    }

    /// Copy with one term's sign negated; used to check that verification catches bad signs.
    pub fn with_flipped_sign(&self, index: usize) -> Result<SignedDecomposition, DecomposeError> {
        if index >= self.terms.len() {
            return Err(DecomposeError::TermIndex { index, len: self.terms.len() });
        }
        let mut out = self.clone();
        out.terms[index].sign = -out.terms[index].sign;
        Ok(out)
    }
}

/// Oriented faces of the cycle `[base] − [graph]`: all base faces in mesh
/// order, then all graph faces. Graph faces have their first two vertices
/// swapped, which reverses their projected orientation.
pub fn cycle_faces(mesh: &PLMesh) -> Vec<(FaceId, Vec<Point>)> {
    let zero = Scalar::zero();
    let mut faces = Vec::with_capacity(2 * mesh.simplex_count());
    for (s, simplex) in mesh.simplices().iter().enumerate() {
        let base = simplex.iter().map(|&v| mesh.vertices()[v].lift(zero.clone())).collect();
        faces.push((FaceId { simplex: s, kind: FaceKind::Base }, base));
    }
    for (s, simplex) in mesh.simplices().iter().enumerate() {
        let mut graph: Vec<Point> = simplex
            .iter()
            .map(|&v| mesh.vertices()[v].lift(mesh.values()[v].clone()))
            .collect();
        graph.swap(0, 1);
        faces.push((FaceId { simplex: s, kind: FaceKind::Graph }, graph));
    }
    faces
}

fn cone(
    faces: &[(FaceId, Vec<Point>)],
    apex: &Point,
) -> Result<Vec<Term>, DecomposeError> {
    faces
        .iter()
        .map(|(id, face)| {
            let mut vertices = Vec::with_capacity(face.len() + 1);
            vertices.push(apex.clone());
            vertices.extend(face.iter().cloned());
            let simplex = LiftedSimplex::new(vertices).map_err(|cause| DecomposeError::NotGeneric {
                point: apex.clone(),
                face: *id,
                vertices: face.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "),
                cause,
            })?;
            // Apex last: orientation of (w_1, .., w_{d+1}, a).
            let mut refs: Vec<&Point> = simplex.vertices()[1..].iter().collect();
            refs.push(apex);
            let sign = Sign::of(&signed_volume(&refs));
            Ok(Term { sign, simplex })
        })
        .collect()
}

fn floor(v: &Scalar) -> i64 {
    num_traits::ToPrimitive::to_i64(&v.floor().to_integer()).unwrap_or(0)
}

fn ceil(v: &Scalar) -> i64 {
    num_traits::ToPrimitive::to_i64(&v.ceil().to_integer()).unwrap_or(0)
}

/// Seeded cone-point candidates in a box of side `8 · spread` below the mesh:
/// integer points first, then points on successively finer lattices.
pub fn cone_point_candidates(mesh: &PLMesh, seed: u64) -> impl Iterator<Item = Point> {
    let d = mesh.dim();
    let coord_range = |c: usize| {
        let vals = mesh.vertices().iter().map(move |p| &p.coords()[c]);
        (vals.clone().min().cloned().unwrap_or_else(Scalar::zero), vals.max().cloned().unwrap_or_else(Scalar::zero))
    };
    let mut ranges: Vec<(Scalar, Scalar)> = (0..d).map(coord_range).collect();
    let heights = (
        mesh.values().iter().min().cloned().unwrap_or_else(Scalar::zero).min(Scalar::zero()),
        mesh.values().iter().max().cloned().unwrap_or_else(Scalar::zero).max(Scalar::zero()),
    );
    ranges.push(heights);
    let spread = ranges
        .iter()
        .map(|(lo, hi)| ceil(&(hi - lo)))
        .max()
        .unwrap_or(1)
        .max(1);

    let boxes: Vec<(i64, i64)> = ranges
        .iter()
        .enumerate()
        .map(|(c, (lo, hi))| {
            if c < d {
                let mid = floor(&((lo + hi) / int(2)));
                (mid - 4 * spread, mid + 4 * spread)
            } else {
                let bottom = floor(lo);
                (bottom - 8 * spread, bottom - 1)
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..).map(move |k: usize| {
        let step = lattice_denominator(k);
        Point::new(
            boxes
                .iter()
                .map(|&(lo, hi)| ratio(rng.random_range(lo * step..=hi * step), step))
                .collect(),
        )
    })
}

/// Candidates after the first [`INTEGER_CANDIDATES`] use the lattice `Z/q`
/// with `q = 2, 3, ..`, escaping special hyperplanes of symmetric meshes.
fn lattice_denominator(k: usize) -> i64 {
    if k < INTEGER_CANDIDATES {
        1
    } else {
        (k - INTEGER_CANDIDATES + 2) as i64
    }
}

/// Cones the base-plus-graph cycle of a valid mesh to `cone_point`, or to
/// the first generic seeded candidate when none is given.
pub fn decompose(mesh: &PLMesh, cone_point: Option<&Point>, seed: u64) -> Result<SignedDecomposition, DecomposeError> {
    let d = mesh.dim();
    let faces = cycle_faces(mesh);
    let (apex, terms) = match cone_point {
        Some(a) => {
            if a.dim() != d + 1 {
                return Err(DecomposeError::ConePointDimension { expected: d + 1, found: a.dim() });
            }
            (a.clone(), cone(&faces, a)?)
        }
        None => cone_point_candidates(mesh, seed)
            .take(CONE_POINT_RETRIES)
            .find_map(|a| cone(&faces, &a).ok().map(|terms| (a, terms)))
            .ok_or(DecomposeError::RetriesExhausted(CONE_POINT_RETRIES))?,
    };
    Ok(SignedDecomposition { dim: d, cone_point: apex, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_geometry::ratio;
    use crate::pl_mesh::fixtures::hat;

    fn x(v: Scalar) -> Point {
        Point::new(vec![v])
    }

    #[test]
    fn hat_signs_and_values() {
        let dec = decompose(&hat(), Some(&Point::from_ints(&[-1, -2])), 0).unwrap();
        assert_eq!(dec.len(), 4);
        let signs: Vec<Sign> = dec.terms().iter().map(|t| t.sign).collect();
        assert_eq!(signs, vec![Sign::Negative, Sign::Negative, Sign::Positive, Sign::Positive]);
        let half = x(ratio(1, 2));
        let taus: Vec<Scalar> = dec.terms().iter().map(|t| t.simplex.tau(&half).unwrap()).collect();
        assert_eq!(taus, vec![ratio(1, 2), ratio(1, 2), ratio(1, 4), ratio(5, 4)]);
        assert_eq!(dec.eval(&half).unwrap(), ratio(1, 2));
        assert_eq!(dec.eval(&x(int(5))).unwrap(), int(0));
        for v in hat().vertices() {
            assert_eq!(dec.eval(v).unwrap(), hat().eval(v).unwrap());
        }
    }

    #[test]
    fn vertical_cone_point_rejected() {
        let err = decompose(&hat(), Some(&Point::from_ints(&[1, -1])), 0).unwrap_err();
        match err {
            DecomposeError::NotGeneric { face, .. } => assert_eq!(face.simplex, 0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            decompose(&hat(), Some(&Point::from_ints(&[1])), 0),
            Err(DecomposeError::ConePointDimension { .. })
        ));
    }

    #[test]
    fn seeded_cone_point_is_deterministic() {
        let a = decompose(&hat(), None, 11).unwrap();
        let b = decompose(&hat(), None, 11).unwrap();
        assert_eq!(a.cone_point(), b.cone_point());
        assert_eq!(a.eval(&x(ratio(1, 3))).unwrap(), ratio(1, 3));
    }

    #[test]
    fn prune_cancels_zero_simplices() {
        let zero = PLMesh::new(
            1,
            vec![Point::from_ints(&[0]), Point::from_ints(&[1])],
            vec![int(0), int(0)],
            vec![vec![0, 1]],
        )
        .unwrap();
        let dec = decompose(&zero, None, 0).unwrap();
        assert_eq!(dec.len(), 2);
        assert!(dec.prune().is_empty());

        let hat_dec = decompose(&hat(), Some(&Point::from_ints(&[-1, -2])), 0).unwrap();
        assert_eq!(hat_dec.prune(), hat_dec);

        let padded = PLMesh::new(
            1,
            vec![Point::from_ints(&[0]), Point::from_ints(&[1]), Point::from_ints(&[2]), Point::from_ints(&[3])],
            vec![int(0), int(1), int(0), int(0)],
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
        )
        .unwrap();
        assert!(padded.validate().is_valid());
        let dec = decompose(&padded, None, 5).unwrap();
        assert_eq!(dec.len(), 6);
        let pruned = dec.prune();
        assert_eq!(pruned.len(), 4);
        for k in 0..12 {
            let p = x(ratio(k, 4));
            assert_eq!(pruned.eval(&p).unwrap(), padded.eval(&p).unwrap());
        }
    }

    #[test]
    fn flipped_sign_breaks_identity() {
        let dec = decompose(&hat(), None, 3).unwrap();
        let bad = dec.with_flipped_sign(2).unwrap();
        assert_ne!(bad.eval(&x(ratio(1, 2))).unwrap(), ratio(1, 2));
        assert!(dec.with_flipped_sign(4).is_err());
    }
}
