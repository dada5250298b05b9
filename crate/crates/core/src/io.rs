//! JSON file formats for meshes, decompositions and networks.
//!
//! Exact numbers are written as strings (`"3"`, `"-7/4"`). On input both
//! strings and bare JSON numbers are accepted; a JSON number is read from
//! its decimal text, so `0.1` means exactly `1/10`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone_decomposition::{DecomposeError, SignedDecomposition, Term};
use crate::exact_geometry::{format_scalar, parse_scalar, GeometryError, Point, Scalar, Sign};
use crate::pl_mesh::{MeshError, PLMesh};
use crate::relu_compiler::{Network, NetworkError, ReluNetwork};
use crate::simplex_calculus::{LiftedSimplex, SimplexError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Literal(#[from] GeometryError),
    #[error("mesh: {0}")]
    Mesh(#[from] MeshError),
    #[error("decomposition: {0}")]
    Decomposition(#[from] DecomposeError),
    #[error("decomposition term {index}: {source}")]
    Term { index: usize, source: SimplexError },
    #[error("decomposition term {index} has sign {sign}; expected 1 or -1")]
    BadSign { index: usize, sign: i64 },
    #[error("network: {0}")]
    Network(#[from] NetworkError),
    #[error("unrecognised artifact: expected a mesh, decomposition or network object")]
    UnknownArtifact,
}

/// An exact number as it appears in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Text(String),
    Number(serde_json::Number),
}

impl Literal {
    pub fn parse(&self) -> Result<Scalar, GeometryError> {
        match self {
            Literal::Text(s) => parse_scalar(s),
            Literal::Number(n) => parse_scalar(&n.to_string()),
        }
    }
}

impl From<&Scalar> for Literal {
    fn from(v: &Scalar) -> Self {
        Literal::Text(format_scalar(v))
    }
}

fn parse_point(raw: &[Literal]) -> Result<Point, FormatError> {
    if raw.is_empty() {
        return Err(GeometryError::DimensionMismatch { expected: 1, found: 0 }.into());
    }
    Ok(Point::new(raw.iter().map(Literal::parse).collect::<Result<_, _>>()?))
}

fn write_point(p: &Point) -> Vec<Literal> {
    p.coords().iter().map(Literal::from).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshFile {
    pub dim: usize,
    pub vertices: Vec<Vec<Literal>>,
    pub values: Vec<Literal>,
    pub simplices: Vec<Vec<usize>>,
}

impl MeshFile {
    pub fn from_mesh(mesh: &PLMesh) -> Self {
        MeshFile {
            dim: mesh.dim(),
            vertices: mesh.vertices().iter().map(write_point).collect(),
            values: mesh.values().iter().map(Literal::from).collect(),
            simplices: mesh.simplices().to_vec(),
        }
    }

    /// Structural parse only; call [`PLMesh::validate`] for geometric validity.
    pub fn into_mesh(self) -> Result<PLMesh, FormatError> {
        let vertices = self.vertices.iter().map(|v| parse_point(v)).collect::<Result<_, _>>()?;
        let values = self.values.iter().map(Literal::parse).collect::<Result<_, _>>()?;
        Ok(PLMesh::new(self.dim, vertices, values, self.simplices)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermFile {
    pub sign: i64,
    pub vertices: Vec<Vec<Literal>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub dim: usize,
    pub cone_point: Vec<Literal>,
    pub terms: Vec<TermFile>,
}

impl DecompositionFile {
    pub fn from_decomposition(dec: &SignedDecomposition) -> Self {
        DecompositionFile {
            dim: dec.dim(),
            cone_point: write_point(dec.cone_point()),
            terms: dec
                .terms()
                .iter()
                .map(|t| TermFile {
                    sign: i64::from(t.sign.as_i8()),
                    vertices: t.simplex.vertices().iter().map(write_point).collect(),
                })
                .collect(),
        }
    }

    pub fn into_decomposition(self) -> Result<SignedDecomposition, FormatError> {
        let cone_point = parse_point(&self.cone_point)?;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(index, t)| {
                let sign = match t.sign {
                    1 => Sign::Positive,
                    -1 => Sign::Negative,
                    sign => return Err(FormatError::BadSign { index, sign }),
                };
                let vertices = t.vertices.iter().map(|v| parse_point(v)).collect::<Result<_, _>>()?;
                let simplex = LiftedSimplex::new(vertices).map_err(|source| FormatError::Term { index, source })?;
                Ok(Term { sign, simplex })
            })
            .collect::<Result<_, _>>()?;
        Ok(SignedDecomposition::new(self.dim, cone_point, terms)?)
    }
}

/// Any of the three file kinds, recognised by their keys.
#[derive(Debug)]
pub enum Artifact {
    Mesh(PLMesh),
    Decomposition(SignedDecomposition),
    Network(ReluNetwork),
}

pub fn parse_artifact(text: &str) -> Result<Artifact, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or(FormatError::UnknownArtifact)?;
    if obj.contains_key("simplices") {
        Ok(Artifact::Mesh(serde_json::from_value::<MeshFile>(value)?.into_mesh()?))
    } else if obj.contains_key("terms") {
        Ok(Artifact::Decomposition(
            serde_json::from_value::<DecompositionFile>(value)?.into_decomposition()?,
        ))
    } else if obj.contains_key("layers") {
        Ok(Artifact::Network(parse_network_value(value)?))
    } else {
        Err(FormatError::UnknownArtifact)
    }
}

fn parse_network_value(value: serde_json::Value) -> Result<ReluNetwork, FormatError> {
    let raw: ReluNetwork = serde_json::from_value(value)?;
    Ok(Network::new(raw.input_dim, raw.layers)?)
}

pub fn mesh_from_str(text: &str) -> Result<PLMesh, FormatError> {
    serde_json::from_str::<MeshFile>(text)?.into_mesh()
}

pub fn mesh_to_string(mesh: &PLMesh) -> String {
    serde_json::to_string_pretty(&MeshFile::from_mesh(mesh)).expect("mesh files serialize")
}

pub fn decomposition_from_str(text: &str) -> Result<SignedDecomposition, FormatError> {
    serde_json::from_str::<DecompositionFile>(text)?.into_decomposition()
}

pub fn decomposition_to_string(dec: &SignedDecomposition) -> String {
    serde_json::to_string_pretty(&DecompositionFile::from_decomposition(dec)).expect("decomposition files serialize")
}

pub fn network_from_str(text: &str) -> Result<ReluNetwork, FormatError> {
    parse_network_value(serde_json::from_str(text)?)
}

pub fn network_to_string(net: &ReluNetwork) -> String {
    serde_json::to_string_pretty(net).expect("finite weights serialize")
}

pub fn read_mesh(path: &Path) -> Result<PLMesh, FormatError> {
    mesh_from_str(&std::fs::read_to_string(path)?)
}

pub fn read_network(path: &Path) -> Result<ReluNetwork, FormatError> {
    network_from_str(&std::fs::read_to_string(path)?)
}

pub fn read_artifact(path: &Path) -> Result<Artifact, FormatError> {
    parse_artifact(&std::fs::read_to_string(path)?)
}
