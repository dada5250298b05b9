//! Dense exact linear algebra over the rationals, sized for the tiny
//! systems the geometry needs (at most a handful of rows).

use num_traits::{One, Zero};

use super::Scalar;

/// Determinant by fraction-exact Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Solves `m · x = rhs` for square, nonsingular `m`. Returns `None` when singular.
pub fn solve(mut m: Vec<Vec<Scalar>>, mut rhs: Vec<Scalar>) -> Option<Vec<Scalar>> {
    let n = m.len();
    debug_assert_eq!(rhs.len(), n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        rhs.swap(pivot, col);
        let p = m[col][col].clone();
        for c in col..n {
            m[col][c] /= &p;
        }
        rhs[col] /= &p;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}
