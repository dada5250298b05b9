//! Simplex functions: the vertical extent of a nondegenerate `(d+1)`-simplex
//! over each point of `R^d`, and its max-min normal form.
//!
//! Two independent evaluators are provided. [`LiftedSimplex::tau`] clips the
//! vertical line against the facet half-spaces; [`maxmin_form`] builds the
//! pyramid over the shadow `P` with apex above the Radon point of the
//! projected vertices. Each is the test oracle for the other.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact_geometry::{
    hull_facets, hyperplane_through, radon_point, signed_volume, AffineFunctional, GeometryError, Point,
    Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error("a lifted simplex in R^{ambient} needs {expected} vertices, found {found}")]
    VertexCount { ambient: usize, expected: usize, found: usize },
    #[error("lifted simplices live in R^(d+1) with d >= 1")]
    AmbientTooSmall,
    #[error("simplex is not full-dimensional")]
    NotFullDimensional,
    #[error("face {0:?} of the simplex is vertical")]
    VerticalFace(Vec<usize>),
    #[error("max-min form needs at least one functional")]
    EmptyForm,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Half-space `normal·x + slope·t + offset ≥ 0` bounding the simplex.
#[derive(Debug, Clone)]
struct FacetBound {
    normal: Vec<Scalar>,
    slope: Scalar,
    offset: Scalar,
}

/// A nondegenerate `(d+1)`-simplex in `R^{d+1}`: full-dimensional with no vertical facet.
#[derive(Debug, Clone)]
pub struct LiftedSimplex {
    vertices: Vec<Point>,
    bounds: Vec<FacetBound>,
}

impl PartialEq for LiftedSimplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LiftedSimplex {}

impl LiftedSimplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, SimplexError> {
        let Some(first) = vertices.first() else {
            return Err(SimplexError::AmbientTooSmall);
        };
        let ambient = first.dim();
        if ambient < 2 {
            return Err(SimplexError::AmbientTooSmall);
        }
        if vertices.len() != ambient + 1 {
            return Err(SimplexError::VertexCount { ambient, expected: ambient + 1, found: vertices.len() });
        }
        if let Some(p) = vertices.iter().find(|p| p.dim() != ambient) {
            return Err(GeometryError::DimensionMismatch { expected: ambient, found: p.dim() }.into());
        }
        let refs: Vec<&Point> = vertices.iter().collect();
        if signed_volume(&refs).is_zero() {
            return Err(SimplexError::NotFullDimensional);
        }

        let shadow: Vec<Point> = vertices.iter().map(Point::project).collect();
        let mut bounds = Vec::with_capacity(vertices.len());
        for skip in 0..vertices.len() {
            let facet: Vec<usize> = (0..vertices.len()).filter(|&k| k != skip).collect();
            let projected: Vec<&Point> = facet.iter().map(|&k| &shadow[k]).collect();
            if signed_volume(&projected).is_zero() {
                return Err(SimplexError::VerticalFace(facet));
            }
            let lifted: Vec<&Point> = facet.iter().map(|&k| &vertices[k]).collect();
            let mut h = hyperplane_through(&lifted);
            if h.eval(&vertices[skip]).is_negative() {
                h = h.neg();
            }
            let slope = h.normal.pop().expect("ambient >= 2");
            debug_assert!(!slope.is_zero());
            bounds.push(FacetBound { normal: h.normal, slope, offset: h.offset });
        }
        Ok(LiftedSimplex { vertices, bounds })
    }

    /// Dimension `d` of the base space.
    pub fn base_dim(&self) -> usize {
        self.vertices[0].dim() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn shadow(&self) -> Vec<Point> {
        self.vertices.iter().map(Point::project).collect()
    }

    /// Vertices sorted lexicographically; equal keys mean the same point set.
    pub fn canonical_key(&self) -> Vec<Point> {
        let mut key = self.vertices.clone();
        key.sort();
        key
    }

    /// Length of the intersection of the vertical line over `x` with the simplex.
    pub fn tau(&self, x: &Point) -> Result<Scalar, GeometryError> {
        let d = self.base_dim();
        if x.dim() != d {
            return Err(GeometryError::DimensionMismatch { expected: d, found: x.dim() });
        }
        let mut lower: Option<Scalar> = None;
        let mut upper: Option<Scalar> = None;
        for b in &self.bounds {
            let mut rest = b.offset.clone();
            for (a, c) in b.normal.iter().zip(x.coords()) {
                rest += a * c;
            }
            // slope·t + rest ≥ 0
            let t = -rest / &b.slope;
            if b.slope.is_positive() {
                if lower.as_ref().is_none_or(|l| t > *l) {
                    lower = Some(t);
                }
            } else if upper.as_ref().is_none_or(|u| t < *u) {
                upper = Some(t);
            }
        }
        let (Some(lo), Some(hi)) = (lower, upper) else {
            unreachable!("a bounded simplex has facets on both sides");
        };
        Ok(if hi > lo { hi - lo } else { Scalar::zero() })
    }

    pub fn translated(&self, by: &[Scalar]) -> Result<LiftedSimplex, SimplexError> {
        LiftedSimplex::new(self.vertices.iter().map(|v| v.translate(by)).collect())
    }
}

/// `x ↦ max(0, min_i g_i(x))` with its pyramid apex `(apex, apex_height)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxMinForm {
    pub functionals: Vec<AffineFunctional>,
    pub apex: Point,
    pub apex_height: Scalar,
}

impl MaxMinForm {
    pub fn new(functionals: Vec<AffineFunctional>, apex: Point, apex_height: Scalar) -> Result<Self, SimplexError> {
        if functionals.is_empty() {
            return Err(SimplexError::EmptyForm);
        }
        Ok(MaxMinForm { functionals, apex, apex_height })
    }

    pub fn dim(&self) -> usize {
        self.functionals[0].dim()
    }

    pub fn eval(&self, x: &Point) -> Scalar {
        let min = self
            .functionals
            .iter()
            .map(|g| g.eval(x))
            .min()
            .expect("forms are nonempty");
        if min.is_positive() {
            min
        } else {
            Scalar::zero()
        }
    }
}

/// The max-min normal form of `τ(Δ)`.
///
/// The apex `p` is the Radon point of the projected vertices, `h = τ(p)`,
/// and each shadow facet with interior-positive functional `H_i` yields
/// `g_i = h · H_i / H_i(p)`, the linear piece of `τ` on the cone from `p`
/// over that facet.
pub fn maxmin_form(delta: &LiftedSimplex) -> Result<MaxMinForm, SimplexError> {
    let shadow = delta.shadow();
    let radon = radon_point(&shadow)?;
    let apex = radon.point;
    let height = delta.tau(&apex)?;
    let functionals = hull_facets(&shadow)?
        .into_iter()
        .map(|facet| {
            let at_apex = facet.functional.eval(&apex);
            debug_assert!(at_apex.is_positive());
            facet.functional.scale(&(&height / at_apex))
        })
        .collect();
    MaxMinForm::new(functionals, apex, height)
}
