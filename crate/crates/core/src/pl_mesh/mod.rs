//! Compactly supported piecewise-linear functions on simplicial meshes.
//!
//! A [`PLMesh`] stores a `d`-dimensional simplicial mesh with one exact
//! height per vertex. The function is the barycentric interpolant on each
//! simplex and zero off the mesh, which is continuous exactly when the
//! mesh is conforming and every boundary vertex has height zero.

pub mod conformity;
mod generate;

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact_geometry::{signed_volume, AffineFunctional, GeometryError, Point, Scalar};
use conformity::{barycentric_functionals, SimplexView};

pub use generate::generate_random;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("mesh dimension must be positive")]
    ZeroDimension,
    #[error("vertex {vertex} has dimension {found}, expected {expected}")]
    VertexDimension { vertex: usize, expected: usize, found: usize },
    #[error("{values} values given for {vertices} vertices")]
    ValueCount { vertices: usize, values: usize },
    #[error("simplex {simplex} has {found} vertices, expected {expected}")]
    SimplexArity { simplex: usize, expected: usize, found: usize },
    #[error("simplex {simplex} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfBounds { simplex: usize, index: usize, count: usize },
    #[error("simplex {simplex} repeats a vertex index")]
    RepeatedVertex { simplex: usize },
    #[error("random generation supports dimensions 1..=3, got {0}")]
    UnsupportedDimension(usize),
    #[error("requested simplex count must be at least 1")]
    EmptyTarget,
    #[error("invalid mesh: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DegenerateSimplex { simplex: usize },
    DuplicateSimplex { first: usize, second: usize },
    NonConforming { first: usize, second: usize },
    NonzeroBoundary { vertex: usize, simplex: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DegenerateSimplex { simplex } => write!(f, "simplex {simplex} is degenerate"),
            Violation::DuplicateSimplex { first, second } => {
                write!(f, "simplices {first} and {second} have the same vertices")
            }
            Violation::NonConforming { first, second } => {
                write!(f, "simplices {first} and {second} do not meet in a common face")
            }
            Violation::NonzeroBoundary { vertex, simplex } => {
                write!(f, "boundary vertex {vertex} (on a boundary facet of simplex {simplex}) has nonzero value")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Chart {
    barycentric: Vec<AffineFunctional>,
    interpolant: AffineFunctional,
}

/// A function in `PL(d, n)`: a simplicial mesh with exact vertex heights.
#[derive(Debug, Clone)]
pub struct PLMesh {
    dim: usize,
    vertices: Vec<Point>,
    values: Vec<Scalar>,
    simplices: Vec<Vec<usize>>,
    charts: Vec<Option<Chart>>,
}

impl PLMesh {
    /// Builds a mesh after structural checks, reordering each nondegenerate
    /// simplex to positive orientation. Geometric validity is left to
    /// [`PLMesh::validate`].
    pub fn new(
        dim: usize,
        vertices: Vec<Point>,
        values: Vec<Scalar>,
        mut simplices: Vec<Vec<usize>>,
    ) -> Result<Self, MeshError> {
        if dim == 0 {
            return Err(MeshError::ZeroDimension);
        }
        if let Some((vertex, p)) = vertices.iter().enumerate().find(|(_, p)| p.dim() != dim) {
            return Err(MeshError::VertexDimension { vertex, expected: dim, found: p.dim() });
        }
        if values.len() != vertices.len() {
            return Err(MeshError::ValueCount { vertices: vertices.len(), values: values.len() });
        }
        let mut charts = Vec::with_capacity(simplices.len());
        for (s, simplex) in simplices.iter_mut().enumerate() {
            if simplex.len() != dim + 1 {
                return Err(MeshError::SimplexArity { simplex: s, expected: dim + 1, found: simplex.len() });
            }
            if let Some(&index) = simplex.iter().find(|&&i| i >= vertices.len()) {
                return Err(MeshError::IndexOutOfBounds { simplex: s, index, count: vertices.len() });
            }
            let mut sorted = simplex.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != simplex.len() {
                return Err(MeshError::RepeatedVertex { simplex: s });
            }

            let corners: Vec<&Point> = simplex.iter().map(|&i| &vertices[i]).collect();
            let volume = signed_volume(&corners);
            if volume.is_zero() {
                charts.push(None);
                continue;
            }
            if volume.is_negative() {
                simplex.swap(0, 1);
            }
            let corners: Vec<&Point> = simplex.iter().map(|&i| &vertices[i]).collect();
            let barycentric = barycentric_functionals(&corners).expect("nondegenerate simplex");
            let mut interpolant = AffineFunctional::zero(dim);
            for (lambda, &v) in barycentric.iter().zip(simplex.iter()) {
                let scaled = lambda.scale(&values[v]);
                for (a, b) in interpolant.normal.iter_mut().zip(scaled.normal) {
                    *a += b;
                }
                interpolant.offset += scaled.offset;
            }
            charts.push(Some(Chart { barycentric, interpolant }));
        }
        Ok(PLMesh { dim, vertices, values, simplices, charts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Simplices as vertex-index tuples, each positively oriented.
    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn corners(&self, simplex: usize) -> Vec<&Point> {
        self.simplices[simplex].iter().map(|&i| &self.vertices[i]).collect()
    }

    /// The same mesh with every height negated.
    pub fn negated(&self) -> PLMesh {
        PLMesh::new(
            self.dim,
            self.vertices.clone(),
            self.values.iter().map(|v| -v).collect(),
            self.simplices.clone(),
        )
        .expect("negation preserves structure")
    }

    /// Facets (sorted vertex-index `d`-tuples) mapped to the simplices containing them.
    pub fn facet_incidence(&self) -> HashMap<Vec<usize>, Vec<usize>> {
        let mut incidence: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (s, simplex) in self.simplices.iter().enumerate() {
            for skip in 0..simplex.len() {
                let mut facet: Vec<usize> = simplex
                    .iter()
                    .enumerate()
                    .filter_map(|(k, &v)| (k != skip).then_some(v))
                    .collect();
                facet.sort_unstable();
                incidence.entry(facet).or_default().push(s);
            }
        }
        incidence
    }

    /// Facets owned by exactly one simplex, with that simplex.
    pub fn boundary_facets(&self) -> Vec<(Vec<usize>, usize)> {
        let mut out: Vec<_> = self
            .facet_incidence()
            .into_iter()
            .filter_map(|(facet, owners)| (owners.len() == 1).then(|| (facet, owners[0])))
            .collect();
        out.sort();
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (s, chart) in self.charts.iter().enumerate() {
            if chart.is_none() {
                violations.push(Violation::DegenerateSimplex { simplex: s });
            }
        }

        let sorted: Vec<Vec<usize>> = self
            .simplices
            .iter()
            .map(|s| {
                let mut v = s.clone();
                v.sort_unstable();
                v
            })
            .collect();
        for i in 0..self.simplices.len() {
            for j in i + 1..self.simplices.len() {
                if sorted[i] == sorted[j] {
                    violations.push(Violation::DuplicateSimplex { first: i, second: j });
                    continue;
                }
                let (Some(ci), Some(cj)) = (&self.charts[i], &self.charts[j]) else {
                    continue;
                };
                let a = SimplexView {
                    indices: &self.simplices[i],
                    corners: self.corners(i),
                    barycentric: &ci.barycentric,
                };
                let b = SimplexView {
                    indices: &self.simplices[j],
                    corners: self.corners(j),
                    barycentric: &cj.barycentric,
                };
                if !conformity::conforms(&a, &b) {
                    violations.push(Violation::NonConforming { first: i, second: j });
                }
            }
        }

        let mut flagged = vec![false; self.vertices.len()];
        for (facet, owner) in self.boundary_facets() {
            for v in facet {
                if !flagged[v] && !self.values[v].is_zero() {
                    flagged[v] = true;
                    violations.push(Violation::NonzeroBoundary { vertex: v, simplex: owner });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Returns the mesh if valid, otherwise the report as an error.
    pub fn into_validated(self) -> Result<PLMesh, MeshError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(self)
        } else {
            Err(MeshError::Invalid(report))
        }
    }

    fn check_point(&self, x: &Point) -> Result<(), MeshError> {
        if x.dim() != self.dim {
            return Err(GeometryError::DimensionMismatch { expected: self.dim, found: x.dim() }.into());
        }
        Ok(())
    }

    /// Value of the linear piece of `simplex` at `x`, if `x` lies in the closed simplex.
    pub fn eval_in_simplex(&self, simplex: usize, x: &Point) -> Option<Scalar> {
        let chart = self.charts[simplex].as_ref()?;
        if chart.barycentric.iter().any(|l| l.eval(x).is_negative()) {
            return None;
        }
        Some(chart.interpolant.eval(x))
    }

    /// Barycentric coordinates of `x` in a nondegenerate simplex, aligned with its vertex tuple.
    pub fn barycentric(&self, simplex: usize, x: &Point) -> Option<Vec<Scalar>> {
        let chart = self.charts[simplex].as_ref()?;
        Some(chart.barycentric.iter().map(|l| l.eval(x)).collect())
    }

    /// Linear piece of `f` on `simplex` (`None` if degenerate).
    pub fn interpolant(&self, simplex: usize) -> Option<&AffineFunctional> {
        self.charts[simplex].as_ref().map(|c| &c.interpolant)
    }

    /// Exact value `f(x)`: the interpolant of any closed simplex containing `x`, else 0.
    pub fn eval(&self, x: &Point) -> Result<Scalar, MeshError> {
        self.check_point(x)?;
        Ok((0..self.simplices.len())
            .find_map(|s| self.eval_in_simplex(s, x))
            .unwrap_or_else(Scalar::zero))
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::hat;
    use super::*;
    use crate::exact_geometry::{int, ratio};

    #[test]
    fn hat_is_valid() {
        assert!(hat().validate().is_valid());
    }

    #[test]
    fn nonzero_boundary_reported() {
        let mesh = PLMesh::new(
            1,
            vec![Point::from_ints(&[0]), Point::from_ints(&[1]), Point::from_ints(&[2])],
            vec![int(0), int(1), int(1)],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        let report = mesh.validate();
        assert_eq!(report.violations, vec![Violation::NonzeroBoundary { vertex: 2, simplex: 1 }]);
    }

    #[test]
    fn overlapping_intervals_reported() {
        let mesh = PLMesh::new(
            1,
            vec![Point::from_ints(&[0]), Point::from_ints(&[2]), Point::from_ints(&[1]), Point::from_ints(&[3])],
            vec![int(0), int(0), int(0), int(0)],
            vec![vec![0, 1], vec![2, 3]],
        )
        .unwrap();
        assert_eq!(
            mesh.validate().violations,
            vec![Violation::NonConforming { first: 0, second: 1 }]
        );
    }

    #[test]
    fn degenerate_and_duplicate_reported() {
        let mesh = PLMesh::new(
            2,
            vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1]), Point::from_ints(&[2, 2]), Point::from_ints(&[0, 1])],
            vec![int(0); 4],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![3, 1, 0]],
        )
        .unwrap();
        let v = mesh.validate().violations;
        assert!(v.contains(&Violation::DegenerateSimplex { simplex: 0 }));
        assert!(v.contains(&Violation::DuplicateSimplex { first: 1, second: 2 }));
    }

    #[test]
    fn orientation_normalized_on_load() {
        let mesh = PLMesh::new(
            2,
            vec![Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0]), Point::from_ints(&[0, 1])],
            vec![int(0); 3],
            vec![vec![0, 2, 1]],
        )
        .unwrap();
        assert_eq!(mesh.simplices()[0], vec![2, 0, 1]);
        assert!(signed_volume(&mesh.corners(0)).is_positive());
    }

    #[test]
    fn structural_errors() {
        let p = || vec![Point::from_ints(&[0]), Point::from_ints(&[1])];
        assert_eq!(
            PLMesh::new(1, p(), vec![int(0)], vec![]).unwrap_err(),
            MeshError::ValueCount { vertices: 2, values: 1 }
        );
        assert!(matches!(
            PLMesh::new(1, p(), vec![int(0); 2], vec![vec![0, 5]]).unwrap_err(),
            MeshError::IndexOutOfBounds { .. }
        ));
        assert!(matches!(
            PLMesh::new(1, p(), vec![int(0); 2], vec![vec![0]]).unwrap_err(),
            MeshError::SimplexArity { .. }
        ));
        assert!(matches!(
            PLMesh::new(1, p(), vec![int(0); 2], vec![vec![1, 1]]).unwrap_err(),
            MeshError::RepeatedVertex { .. }
        ));
        assert!(matches!(
            PLMesh::new(2, p(), vec![int(0); 2], vec![]).unwrap_err(),
            MeshError::VertexDimension { .. }
        ));
    }

    #[test]
    fn eval_hat() {
        let mesh = hat();
        assert_eq!(mesh.eval(&Point::new(vec![ratio(1, 2)])).unwrap(), ratio(1, 2));
        assert_eq!(mesh.eval(&Point::from_ints(&[5])).unwrap(), int(0));
        assert_eq!(mesh.eval(&Point::from_ints(&[1])).unwrap(), int(1));
        assert_eq!(mesh.eval(&Point::new(vec![ratio(3, 2)])).unwrap(), ratio(1, 2));
        assert!(matches!(
            mesh.eval(&Point::from_ints(&[1, 1])),
            Err(MeshError::Geometry(GeometryError::DimensionMismatch { .. }))
        ));
    }
}
