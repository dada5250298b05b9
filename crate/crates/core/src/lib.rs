//! Exact lowering of compactly supported piecewise-linear functions.
//!
//! A function `f: R^d → R` given on a simplicial mesh ([`PLMesh`]) is
//! rewritten as a signed sum of simplex functions ([`SignedDecomposition`])
//! by coning the base-plus-graph cycle to a generic apex, and then compiled
//! into an explicit ReLU network ([`ReluNetwork`]). All geometry is exact
//! rational arithmetic, so the first lowering is checked with zero tolerance.

pub mod cone_decomposition;
pub mod exact_geometry;
pub mod io;
pub mod pl_mesh;
pub mod relu_compiler;
pub mod sampling;
pub mod simplex_calculus;
pub mod verify;

pub use cone_decomposition::{decompose, DecomposeError, SignedDecomposition, Term};
pub use exact_geometry::{AffineFunctional, GeometryError, Point, Scalar, Sign};
pub use pl_mesh::{generate_random, MeshError, PLMesh, ValidationReport, Violation};
pub use relu_compiler::{
    compile_decomposition, compile_mesh, compile_simplex, pairwise_min_gadget, stats, Activation, ExactNetwork,
    Layer, NetworkError, NetworkStats, ReluNetwork,
};
pub use simplex_calculus::{maxmin_form, LiftedSimplex, MaxMinForm, SimplexError};
pub use verify::{verify, VerifyError, VerifyOptions, VerifyReport};
