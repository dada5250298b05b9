//! ReLU networks realising simplex functions and whole mesh functions.
//!
//! Every network is a chain of affine layers, each followed by ReLU or the
//! identity. Construction happens over exact rationals ([`ExactNetwork`]) and
//! is converted to doubles ([`ReluNetwork`]) for emission, so compiled
//! weights are correctly rounded and the exact network can be checked
//! against the decomposition with zero tolerance.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone_decomposition::{decompose, DecomposeError, SignedDecomposition};
use crate::exact_geometry::{int, max_facet_count, ratio, to_f64, Point, Scalar, Sign};
use crate::pl_mesh::PLMesh;
use crate::simplex_calculus::{maxmin_form, MaxMinForm, SimplexError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("input has dimension {found}, network expects {expected}")]
    InputDimension { expected: usize, found: usize },
    #[error("layer {layer}: {reason}")]
    LayerShape { layer: usize, reason: String },
    #[error("network must end in a single identity output")]
    OutputLayer,
    #[error("max-min form has {found} functionals but only {slots} slots are available")]
    TooManyFunctionals { found: usize, slots: usize },
    #[error("capacity {capacity} is smaller than the mesh's {simplices} simplices")]
    CapacityTooSmall { capacity: usize, simplices: usize },
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Identity,
}

/// Scalar types a network can be evaluated in.
pub trait Weight: Clone + PartialEq + std::fmt::Debug {
    fn relu(self) -> Self;
    fn mul_add(acc: Self, w: &Self, x: &Self) -> Self;
}

impl Weight for f64 {
    fn relu(self) -> Self {
        self.max(0.0)
    }

    fn mul_add(acc: Self, w: &Self, x: &Self) -> Self {
        acc + w * x
    }
}

impl Weight for Scalar {
    fn relu(self) -> Self {
        if self.is_negative() {
            Zero::zero()
        } else {
            self
        }
    }

    fn mul_add(acc: Self, w: &Self, x: &Self) -> Self {
        if w.is_zero() {
            acc
        } else {
            acc + w * x
        }
    }
}

/// Affine map `x ↦ W x + b` (rows of `W` are output units) and an activation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer<W> {
    pub weights: Vec<Vec<W>>,
    pub bias: Vec<W>,
    pub activation: Activation,
}

impl<W: Weight> Layer<W> {
    pub fn input_dim(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn output_dim(&self) -> usize {
        self.bias.len()
    }

    fn apply(&self, x: &[W]) -> Vec<W> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(row, b)| {
                let pre = row.iter().zip(x).fold(b.clone(), |acc, (w, v)| W::mul_add(acc, w, v));
                match self.activation {
                    Activation::Relu => pre.relu(),
                    Activation::Identity => pre,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network<W> {
    pub input_dim: usize,
    pub layers: Vec<Layer<W>>,
}

pub type ReluNetwork = Network<f64>;
pub type ExactNetwork = Network<Scalar>;

/// Per-layer `(inputs, outputs, activation)`: two networks with equal
/// shapes are the same architecture with different weights.
pub type ShapeSignature = Vec<(usize, usize, Activation)>;

impl<W: Weight> Network<W> {
    /// Checks that layers chain and that the last one is a 1-unit identity layer.
    pub fn new(input_dim: usize, layers: Vec<Layer<W>>) -> Result<Self, NetworkError> {
        let mut width = input_dim;
        for (i, layer) in layers.iter().enumerate() {
            if layer.weights.len() != layer.bias.len() {
                return Err(NetworkError::LayerShape {
                    layer: i,
                    reason: format!("{} weight rows but {} biases", layer.weights.len(), layer.bias.len()),
                });
            }
            if let Some(row) = layer.weights.iter().find(|r| r.len() != width) {
                return Err(NetworkError::LayerShape {
                    layer: i,
                    reason: format!("row of length {} fed by {width} inputs", row.len()),
                });
            }
            width = layer.output_dim();
        }
        match layers.last() {
            Some(last) if last.activation == Activation::Identity && last.output_dim() == 1 => {}
            _ => return Err(NetworkError::OutputLayer),
        }
        Ok(Network { input_dim, layers })
    }

    pub fn forward(&self, x: &[W]) -> Result<W, NetworkError> {
        if x.len() != self.input_dim {
            return Err(NetworkError::InputDimension { expected: self.input_dim, found: x.len() });
        }
        let mut signal = x.to_vec();
        for layer in &self.layers {
            signal = layer.apply(&signal);
        }
        Ok(signal.pop().expect("validated networks end in one unit"))
    }

    pub fn shape(&self) -> ShapeSignature {
        let mut inputs = self.input_dim;
        self.layers
            .iter()
            .map(|l| {
                let s = (inputs, l.output_dim(), l.activation);
                inputs = l.output_dim();
                s
            })
            .collect()
    }
}

impl ExactNetwork {
    pub fn eval_point(&self, x: &Point) -> Result<Scalar, NetworkError> {
        self.forward(x.coords())
    }

    pub fn to_f64(&self) -> ReluNetwork {
        Network {
            input_dim: self.input_dim,
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    weights: l.weights.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
                    bias: l.bias.iter().map(to_f64).collect(),
                    activation: l.activation,
                })
                .collect(),
        }
    }
}

/// Depth, width and size, with the constants they imply for `(d, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetworkStats {
    pub depth: usize,
    pub width: usize,
    pub size: usize,
    /// `depth − 2 log₂ d`
    pub c0: f64,
    /// `width / (d² n)`
    pub c1: f64,
    /// `size / (d² n)`
    pub c2: f64,
}

impl NetworkStats {
    pub fn measure<W: Weight>(layers: &[Layer<W>], d: usize, n: usize) -> NetworkStats {
        let depth = layers.iter().filter(|l| l.activation == Activation::Relu).count();
        let width = layers.iter().map(Layer::output_dim).max().unwrap_or(0);
        let size = layers
            .iter()
            .filter(|l| l.activation == Activation::Relu)
            .map(Layer::output_dim)
            .sum();
        let log_term = if d == 0 { 0.0 } else { 2.0 * (d as f64).log2() };
        let scale = (d * d * n) as f64;
        let per = |v: usize| if scale == 0.0 { 0.0 } else { v as f64 / scale };
        NetworkStats {
            depth,
            width,
            size,
            c0: if layers.is_empty() { 0.0 } else { depth as f64 - log_term },
            c1: per(width),
            c2: per(size),
        }
    }
}

pub fn stats<W: Weight>(net: &Network<W>, d: usize, n: usize) -> NetworkStats {
    NetworkStats::measure(&net.layers, d, n)
}

/// A value carried between layers: an affine combination of the previous layer's outputs.
#[derive(Clone)]
struct Signal {
    coeffs: Vec<Scalar>,
    bias: Scalar,
}

impl Signal {
    fn combine(&self, a: i64, other: &Signal, b: i64) -> Signal {
        let (a, b) = (int(a), int(b));
        Signal {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| &a * x + &b * y).collect(),
            bias: &a * &self.bias + &b * &other.bias,
        }
    }
}

/// One relu level of pairwise min gadgets over `signals`; returns the layer
/// and the reduced signals expressed over its outputs.
fn min_level(signals: &[Signal]) -> (Layer<Scalar>, Vec<Signal>) {
    let mut rows: Vec<Signal> = Vec::new();
    let mut combos: Vec<Vec<(usize, Scalar)>> = Vec::new();
    for chunk in signals.chunks(2) {
        let base = rows.len();
        if let [a, b] = chunk {
            rows.push(a.combine(1, b, -1));
            rows.push(a.combine(-1, b, 1));
            rows.push(a.combine(1, b, 1));
            rows.push(a.combine(-1, b, -1));
            let half = ratio(1, 2);
            combos.push(vec![
                (base, -half.clone()),
                (base + 1, -half.clone()),
                (base + 2, half.clone()),
                (base + 3, -half),
            ]);
        } else {
            // relu(t) − relu(−t) = t
            let t = &chunk[0];
            rows.push(t.combine(1, t, 0));
            rows.push(t.combine(-1, t, 0));
            combos.push(vec![(base, int(1)), (base + 1, int(-1))]);
        }
    }
    let width = rows.len();
    let layer = Layer {
        weights: rows.iter().map(|r| r.coeffs.clone()).collect(),
        bias: rows.into_iter().map(|r| r.bias).collect(),
        activation: Activation::Relu,
    };
    let next = combos
        .into_iter()
        .map(|terms| {
            let mut coeffs = vec![Scalar::zero(); width];
            for (unit, w) in terms {
                coeffs[unit] = w;
            }
            Signal { coeffs, bias: Scalar::zero() }
        })
        .collect();
    (layer, next)
}

fn single_relu(signal: Signal) -> Layer<Scalar> {
    Layer {
        weights: vec![signal.coeffs],
        bias: vec![signal.bias],
        activation: Activation::Relu,
    }
}

/// ReLU layers computing `max(0, min_i g_i)`, ending in one nonnegative unit.
fn simplex_block(form: &MaxMinForm, slots: usize) -> Result<Vec<Layer<Scalar>>, NetworkError> {
    let m = form.functionals.len();
    if m > slots {
        return Err(NetworkError::TooManyFunctionals { found: m, slots });
    }
    // Pad with copies of the first functional: min(a, a) = a.
    let mut signals: Vec<Signal> = (0..slots)
        .map(|i| {
            let g = &form.functionals[if i < m { i } else { 0 }];
            Signal { coeffs: g.normal.clone(), bias: g.offset.clone() }
        })
        .collect();
    let mut layers = Vec::new();
    while signals.len() > 1 {
        let (layer, next) = min_level(&signals);
        layers.push(layer);
        signals = next;
    }
    layers.push(single_relu(signals.pop().expect("at least one slot")));
    Ok(layers)
}

fn output_layer(weights: Vec<Scalar>) -> Layer<Scalar> {
    Layer {
        weights: vec![weights],
        bias: vec![Scalar::zero()],
        activation: Activation::Identity,
    }
}

/// `min(a, b)` for two inputs: one hidden layer of four relus.
pub fn pairwise_min_gadget() -> ExactNetwork {
    let a = Signal { coeffs: vec![int(1), int(0)], bias: Scalar::zero() };
    let b = Signal { coeffs: vec![int(0), int(1)], bias: Scalar::zero() };
    let (hidden, mut out) = min_level(&[a, b]);
    let out = out.pop().expect("one pair");
    Network {
        input_dim: 2,
        layers: vec![
            hidden,
            Layer {
                weights: vec![out.coeffs],
                bias: vec![out.bias],
                activation: Activation::Identity,
            },
        ],
    }
}

/// Exact network for `max(0, min_i g_i)` with exactly the form's functionals.
pub fn compile_simplex_exact(form: &MaxMinForm) -> Result<ExactNetwork, NetworkError> {
    if form.functionals.is_empty() {
        return Err(SimplexError::EmptyForm.into());
    }
    let mut layers = simplex_block(form, form.functionals.len())?;
    layers.push(output_layer(vec![int(1)]));
    Network::new(form.dim(), layers)
}

pub fn compile_simplex(form: &MaxMinForm) -> Result<ReluNetwork, NetworkError> {
    compile_simplex_exact(form).map(|n| n.to_f64())
}

/// Places blocks side by side (block-diagonal weights) and sums their final
/// units with `weights`. Shallower blocks are extended with 1-unit relu
/// passthroughs, which is exact because every block ends in a relu.
fn parallel_sum(input_dim: usize, blocks: Vec<Vec<Layer<Scalar>>>, weights: Vec<Scalar>) -> ExactNetwork {
    let depth = blocks.iter().map(Vec::len).max().unwrap_or(0);
    let blocks: Vec<Vec<Layer<Scalar>>> = blocks
        .into_iter()
        .map(|mut b| {
            while b.len() < depth {
                b.push(single_relu(Signal { coeffs: vec![int(1)], bias: Scalar::zero() }));
            }
            b
        })
        .collect();

    let mut layers = Vec::with_capacity(depth + 1);
    for level in 0..depth {
        let total_in: usize = if level == 0 {
            input_dim
        } else {
            blocks.iter().map(|b| b[level - 1].output_dim()).sum()
        };
        let mut rows = Vec::new();
        let mut bias = Vec::new();
        let mut offset = 0;
        for b in &blocks {
            let layer = &b[level];
            for (row, bv) in layer.weights.iter().zip(&layer.bias) {
                let mut full = vec![Scalar::zero(); total_in];
                if level == 0 {
                    full.clone_from(row);
                } else {
                    full[offset..offset + row.len()].clone_from_slice(row);
                }
                rows.push(full);
                bias.push(bv.clone());
            }
            if level > 0 {
                offset += b[level - 1].output_dim();
            }
        }
        layers.push(Layer { weights: rows, bias, activation: Activation::Relu });
    }
    let mut out = Vec::new();
    for (b, w) in blocks.iter().zip(weights) {
        let width = b.last().map_or(0, Layer::output_dim);
        out.extend(std::iter::repeat_n(Scalar::zero(), width.saturating_sub(1)));
        out.push(w);
    }
    layers.push(output_layer(out));
    Network { input_dim, layers }
}

/// Fixed-architecture network for a decomposition: one padded simplex block
/// per term (`max_facet_count(d)` slots each) plus zero blocks up to
/// `2 · capacity` terms, summed with the term signs.
pub fn compile_decomposition_exact(
    dec: &SignedDecomposition,
    capacity: Option<usize>,
) -> Result<ExactNetwork, NetworkError> {
    let d = dec.dim();
    let slots = max_facet_count(d);
    let simplices = dec.len().div_ceil(2);
    let capacity = capacity.unwrap_or(simplices);
    if capacity < simplices {
        return Err(NetworkError::CapacityTooSmall { capacity, simplices });
    }

    let mut blocks = Vec::with_capacity(2 * capacity);
    let mut weights = Vec::with_capacity(2 * capacity);
    for term in dec.terms() {
        let form = maxmin_form(&term.simplex)?;
        blocks.push(simplex_block(&form, slots)?);
        weights.push(if term.sign == Sign::Negative { int(-1) } else { int(1) });
    }
    let filler = MaxMinForm {
        functionals: vec![crate::exact_geometry::AffineFunctional::zero(d)],
        apex: Point::origin(d),
        apex_height: Scalar::zero(),
    };
    while blocks.len() < 2 * capacity {
        blocks.push(simplex_block(&filler, slots)?);
        weights.push(Scalar::zero());
    }
    Ok(parallel_sum(d, blocks, weights))
}

pub fn compile_decomposition(dec: &SignedDecomposition, capacity: Option<usize>) -> Result<ReluNetwork, NetworkError> {
    compile_decomposition_exact(dec, capacity).map(|n| n.to_f64())
}

/// Decomposes a valid mesh (cone point drawn from `seed`) and compiles it.
pub fn compile_mesh_exact(mesh: &PLMesh, seed: u64, capacity: Option<usize>) -> Result<ExactNetwork, NetworkError> {
    if let Some(c) = capacity {
        if c < mesh.simplex_count() {
            return Err(NetworkError::CapacityTooSmall { capacity: c, simplices: mesh.simplex_count() });
        }
    }
    let dec = decompose(mesh, None, seed)?;
    compile_decomposition_exact(&dec, Some(capacity.unwrap_or(mesh.simplex_count())))
}

pub fn compile_mesh(mesh: &PLMesh, seed: u64, capacity: Option<usize>) -> Result<ReluNetwork, NetworkError> {
    compile_mesh_exact(mesh, seed, capacity).map(|n| n.to_f64())
}

/// `⌈log₂ m⌉` for `m ≥ 1`.
pub fn ceil_log2(m: usize) -> usize {
    m.next_power_of_two().trailing_zeros() as usize
}

pub fn relu_layer_count(net: &ReluNetwork) -> usize {
    net.layers.iter().filter(|l| l.activation == Activation::Relu).count()
}

/// Largest absolute weight or bias, for reporting conditioning of emitted networks.
pub fn max_abs_weight(net: &ExactNetwork) -> f64 {
    net.layers
        .iter()
        .flat_map(|l| l.weights.iter().flatten().chain(&l.bias))
        .map(|w| w.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}
