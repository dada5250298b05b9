//! Exact rational geometry: points, affine functionals, orientation,
//! affine interpolation, hull facets and Radon points of `d + 2` points.
//!
//! Everything here is exact. Degeneracies (coincident points, affinely
//! dependent subsets) are decided, never guessed, and reported as errors.

pub mod linalg;
pub mod scalar;

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

pub use scalar::{format_scalar, int, parse_scalar, ratio, to_f64, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected {expected} points, found {found}")]
    WrongPointCount { expected: usize, found: usize },
    #[error("points are affinely dependent")]
    Degenerate,
    #[error("general position violated: points {0:?} are affinely dependent")]
    GeneralPosition(Vec<usize>),
    #[error("affine dependence vector vanished")]
    ZeroDependence,
    #[error("bad numeric literal {0:?}")]
    BadLiteral(String),
}

/// Sign of an orientation determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    pub fn of(value: &Scalar) -> Self {
        if value.is_positive() {
            Sign::Positive
        } else if value.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        self as i8
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Scalar>,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        assert!(!coords.is_empty(), "points must have positive dimension");
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![Scalar::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    /// Appends a last coordinate: `R^d -> R^{d+1}`.
    pub fn lift(&self, height: Scalar) -> Point {
        let mut coords = self.coords.clone();
        coords.push(height);
        Point { coords }
    }

    /// Drops the last coordinate: `R^{d+1} -> R^d`.
    pub fn project(&self) -> Point {
        assert!(self.dim() >= 2, "cannot project a 1-dimensional point");
        Point {
            coords: self.coords[..self.dim() - 1].to_vec(),
        }
    }

    pub fn last(&self) -> &Scalar {
        self.coords.last().expect("points are nonempty")
    }

    pub fn sub(&self, other: &Point) -> Vec<Scalar> {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()
    }

    pub fn translate(&self, by: &[Scalar]) -> Point {
        Point {
            coords: self.coords.iter().zip(by).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(to_f64).collect()
    }

    /// Exact convex (or affine) combination `Σ w_i p_i`.
    pub fn combination(points: &[&Point], weights: &[Scalar]) -> Point {
        let dim = points[0].dim();
        let mut coords = vec![Scalar::zero(); dim];
        for (p, w) in points.iter().zip(weights) {
            for (acc, c) in coords.iter_mut().zip(&p.coords) {
                *acc += w * c;
            }
        }
        Point { coords }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_scalar(c))?;
        }
        write!(f, ")")
    }
}

/// `x ↦ normal · x + offset`, stored unnormalized.
///
/// `==` is equality of functions (equal coefficients). Use
/// [`AffineFunctional::is_positive_multiple_of`] to compare hyperplanes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineFunctional {
    pub normal: Vec<Scalar>,
    pub offset: Scalar,
}

impl AffineFunctional {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Self {
        AffineFunctional { normal, offset }
    }

    pub fn zero(dim: usize) -> Self {
        AffineFunctional::new(vec![Scalar::zero(); dim], Scalar::zero())
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &Point) -> Scalar {
        debug_assert_eq!(x.dim(), self.dim());
        self.eval_coords(x.coords())
    }

    pub fn eval_coords(&self, x: &[Scalar]) -> Scalar {
        let mut acc = self.offset.clone();
        for (a, b) in self.normal.iter().zip(x) {
            if !a.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn scale(&self, factor: &Scalar) -> AffineFunctional {
        AffineFunctional {
            normal: self.normal.iter().map(|c| c * factor).collect(),
            offset: &self.offset * factor,
        }
    }

    pub fn neg(&self) -> AffineFunctional {
        AffineFunctional {
            normal: self.normal.iter().map(|c| -c).collect(),
            offset: -&self.offset,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.offset.is_zero() && self.normal.iter().all(Zero::is_zero)
    }

    /// True when `self = λ · other` for some `λ > 0`, decided by cross-multiplication.
    pub fn is_positive_multiple_of(&self, other: &AffineFunctional) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let a: Vec<&Scalar> = self.normal.iter().chain(std::iter::once(&self.offset)).collect();
        let b: Vec<&Scalar> = other.normal.iter().chain(std::iter::once(&other.offset)).collect();
        let Some(k) = b.iter().position(|c| !c.is_zero()) else {
            return a.iter().all(|c| c.is_zero());
        };
        if Sign::of(a[k]) != Sign::of(b[k]) {
            return false;
        }
        a.iter().zip(&b).all(|(ai, bi)| *ai * b[k] == *bi * a[k])
    }
}

fn check_dims(points: &[Point], dim: usize) -> Result<(), GeometryError> {
    match points.iter().find(|p| p.dim() != dim) {
        Some(p) => Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        }),
        None => Ok(()),
    }
}

/// Signed volume `det[p_1 − p_0, …, p_k − p_0]` of `k + 1` points in `R^k`.
pub fn signed_volume(points: &[&Point]) -> Scalar {
    let base = points[0];
    let rows = points[1..].iter().map(|p| p.sub(base)).collect();
    linalg::determinant(rows)
}

/// Orientation of `k + 1` points in `R^k`: the sign of
/// `det[p_1 − p_0, …, p_k − p_0]`, zero iff they are affinely dependent.
pub fn orientation(points: &[Point]) -> Result<Sign, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::WrongPointCount { expected: 2, found: 0 });
    };
    let k = first.dim();
    if points.len() != k + 1 {
        return Err(GeometryError::WrongPointCount {
            expected: k + 1,
            found: points.len(),
        });
    }
    check_dims(points, k)?;
    let refs: Vec<&Point> = points.iter().collect();
    Ok(Sign::of(&signed_volume(&refs)))
}

/// The unique affine functional taking `values[i]` at `points[i]`.
pub fn solve_affine(points: &[Point], values: &[Scalar]) -> Result<AffineFunctional, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::WrongPointCount { expected: 2, found: 0 });
    };
    let k = first.dim();
    if points.len() != k + 1 || values.len() != k + 1 {
        return Err(GeometryError::WrongPointCount {
            expected: k + 1,
            found: points.len().min(values.len()),
        });
    }
    check_dims(points, k)?;
    let matrix = points
        .iter()
        .map(|p| {
            let mut row = p.coords().to_vec();
            row.push(int(1));
            row
        })
        .collect();
    let mut solution = linalg::solve(matrix, values.to_vec()).ok_or(GeometryError::Degenerate)?;
    let offset = solution.pop().expect("k + 1 unknowns");
    Ok(AffineFunctional::new(solution, offset))
}

/// The affine functional `x ↦ det[s_1 − x, …, s_k − x]` for `k` points in `R^k`.
///
/// It vanishes on the affine hull of the points and its sign at `x` is the
/// orientation of `(x, s_1, …, s_k)`. Identically zero iff the points are
/// affinely dependent.
pub fn hyperplane_through(points: &[&Point]) -> AffineFunctional {
    let k = points.len();
    debug_assert!(points.iter().all(|p| p.dim() == k));
    let eval_at = |x: &Point| -> Scalar {
        linalg::determinant(points.iter().map(|s| s.sub(x)).collect())
    };
    let offset = eval_at(&Point::origin(k));
    let normal = (0..k)
        .map(|j| {
            let mut e = vec![Scalar::zero(); k];
            e[j] = int(1);
            eval_at(&Point::new(e)) - &offset
        })
        .collect();
    AffineFunctional::new(normal, offset)
}

/// Checks that every `(d+1)`-subset of `d + 2` points in `R^d` is affinely independent.
fn check_general_position(points: &[Point]) -> Result<usize, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::WrongPointCount { expected: 3, found: 0 });
    };
    let d = first.dim();
    if points.len() != d + 2 {
        return Err(GeometryError::WrongPointCount {
            expected: d + 2,
            found: points.len(),
        });
    }
    check_dims(points, d)?;
    for skip in 0..points.len() {
        let subset: Vec<&Point> = points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| (i != skip).then_some(p))
            .collect();
        if signed_volume(&subset).is_zero() {
            let idx = (0..points.len()).filter(|&i| i != skip).collect();
            return Err(GeometryError::GeneralPosition(idx));
        }
    }
    Ok(d)
}

/// A facet of `conv(points)`: vertex indices and a supporting functional
/// vanishing on them and strictly positive at the remaining points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFacet {
    pub vertices: Vec<usize>,
    pub functional: AffineFunctional,
}

/// Facets of the convex hull of `d + 2` points in general position in `R^d`,
/// by brute force over all `d`-subsets.
pub fn hull_facets(points: &[Point]) -> Result<Vec<HullFacet>, GeometryError> {
    let d = check_general_position(points)?;
    let m = points.len();
    let mut facets = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let vertices: Vec<usize> = (0..m).filter(|&k| k != i && k != j).collect();
            let support: Vec<&Point> = vertices.iter().map(|&k| &points[k]).collect();
            debug_assert_eq!(support.len(), d);
            let h = hyperplane_through(&support);
            let si = Sign::of(&h.eval(&points[i]));
            let sj = Sign::of(&h.eval(&points[j]));
            if si.is_zero() || sj.is_zero() {
                return Err(GeometryError::GeneralPosition(
                    vertices.iter().copied().chain([if si.is_zero() { i } else { j }]).collect(),
                ));
            }
            if si == sj {
                let functional = if si == Sign::Positive { h } else { h.neg() };
                facets.push(HullFacet { vertices, functional });
            }
        }
    }
    facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(facets)
}

/// Upper bound `⌈(d+2)²/4⌉` on the facet count of `conv` of `d + 2` points in `R^d`.
pub fn facet_count_bound(d: usize) -> usize {
    (d + 2) * (d + 2) / 4 + usize::from((d + 2) % 2 == 1)
}

/// The largest facet count actually attainable: `|A|·|B|` maximised over
/// Radon splits with both parts of size ≥ 2, or `d + 1` when one point is
/// interior.
pub fn max_facet_count(d: usize) -> usize {
    ((d + 2) * (d + 2) / 4).max(d + 1)
}

/// The Radon partition of `d + 2` points in general position and its
/// common point, with the convex weights realising it on each side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadonPartition {
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
    pub weights_a: Vec<Scalar>,
    pub weights_b: Vec<Scalar>,
    pub point: Point,
}

/// Unique Radon partition of `d + 2` points in general position in `R^d`.
///
/// The parts are ordered so that `part_a` is the smaller one; on a tie
/// `part_a` contains index 0.
pub fn radon_point(points: &[Point]) -> Result<RadonPartition, GeometryError> {
    let d = check_general_position(points)?;
    let m = d + 2;
    // Null vector of the (d+1)×(d+2) system [p_i; 1] by cofactors.
    let lambdas: Vec<Scalar> = (0..m)
        .map(|skip| {
            let minor = (0..d + 1)
                .map(|row| {
                    (0..m)
                        .filter(|&c| c != skip)
                        .map(|c| if row < d { points[c].coords()[row].clone() } else { int(1) })
                        .collect()
                })
                .collect();
            let det = linalg::determinant(minor);
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect();
    if lambdas.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroDependence);
    }
    debug_assert!(lambdas.iter().fold(Scalar::zero(), |acc, l| acc + l).is_zero());

    let mut positive: Vec<usize> = (0..m).filter(|&i| lambdas[i].is_positive()).collect();
    let mut negative: Vec<usize> = (0..m).filter(|&i| lambdas[i].is_negative()).collect();
    if positive.len() + negative.len() != m {
        // A zero coefficient means a (d+1)-subset is dependent.
        return Err(GeometryError::ZeroDependence);
    }
    let swap = match positive.len().cmp(&negative.len()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => !positive.contains(&0),
    };
    if swap {
        std::mem::swap(&mut positive, &mut negative);
    }

    let convex = |idx: &[usize]| -> Vec<Scalar> {
        let total = idx.iter().fold(Scalar::zero(), |acc, &i| acc + &lambdas[i]);
        idx.iter().map(|&i| &lambdas[i] / &total).collect()
    };
    let weights_a = convex(&positive);
    let weights_b = convex(&negative);
    let refs: Vec<&Point> = positive.iter().map(|&i| &points[i]).collect();
    let point = Point::combination(&refs, &weights_a);
    Ok(RadonPartition {
        part_a: positive,
        part_b: negative,
        weights_a,
        weights_b,
        point,
    })
}
