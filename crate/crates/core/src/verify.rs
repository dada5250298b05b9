//! End-to-end check that a mesh, its signed decomposition and its compiled
//! network compute the same function.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cone_decomposition::{decompose, DecomposeError};
use crate::exact_geometry::{to_f64, Point};
use crate::pl_mesh::{MeshError, PLMesh};
use crate::relu_compiler::{compile_decomposition, stats, NetworkError};
use crate::sampling::stratified_samples;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("at least one sample point is required")]
    NoSamples,
    #[error("tolerance must be finite and nonnegative, got {0}")]
    BadTolerance(f64),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub cone_point: Option<Point>,
    /// Negate this term's sign before checking (fault injection).
    pub flip_sign: Option<usize>,
    /// Worker threads; `0` or `1` runs on the calling thread.
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 1000,
            tolerance: 1e-9,
            seed: 0,
            cone_point: None,
            flip_sign: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub samples: usize,
    pub tolerance: f64,
    /// Largest `|network(x) − f(x)|` over the samples.
    pub max_abs_error: f64,
    /// Samples where the exact decomposition sum differs from `f`.
    pub exact_mismatches: usize,
    pub term_count: usize,
    pub depth: usize,
    pub width: usize,
    pub size: usize,
    pub pass: bool,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "samples:          {}", self.samples)?;
        writeln!(f, "exact_mismatches: {}", self.exact_mismatches)?;
        writeln!(f, "max_abs_error:    {:.3e}", self.max_abs_error)?;
        writeln!(f, "tolerance:        {:e}", self.tolerance)?;
        writeln!(f, "term_count:       {}", self.term_count)?;
        writeln!(f, "depth:            {}", self.depth)?;
        writeln!(f, "width:            {}", self.width)?;
        writeln!(f, "size:             {}", self.size)?;
        write!(f, "result:           {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Validates `mesh`, decomposes and compiles it, then compares all three
/// representations on stratified samples.
pub fn verify(mesh: &PLMesh, options: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    if options.samples == 0 {
        return Err(VerifyError::NoSamples);
    }
    if !(options.tolerance.is_finite() && options.tolerance >= 0.0) {
        return Err(VerifyError::BadTolerance(options.tolerance));
    }
    let report = mesh.validate();
    if !report.is_valid() {
        return Err(MeshError::Invalid(report).into());
    }

    let mut dec = decompose(mesh, options.cone_point.as_ref(), options.seed)?;
    if let Some(i) = options.flip_sign {
        dec = dec.with_flipped_sign(i)?;
    }
    let net = compile_decomposition(&dec, None)?;
    let points = stratified_samples(mesh, options.samples, &mut ChaCha8Rng::seed_from_u64(options.seed));

    let check = |x: &Point| -> Result<(bool, f64), VerifyError> {
        let exact = mesh.eval(x)?;
        let summed = dec.eval(x).map_err(MeshError::from)?;
        let out = net.forward(&x.to_f64())?;
        Ok((summed != exact, (out - to_f64(&exact)).abs()))
    };
    let results: Vec<(bool, f64)> = if options.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| VerifyError::Pool(e.to_string()))?;
        pool.install(|| points.par_iter().map(check).collect::<Result<_, _>>())?
    } else {
        points.iter().map(check).collect::<Result<_, _>>()?
    };

    let exact_mismatches = results.iter().filter(|(bad, _)| *bad).count();
    let max_abs_error = results.iter().map(|(_, e)| *e).fold(0.0, f64::max);
    let s = stats(&net, mesh.dim(), mesh.simplex_count());
    Ok(VerifyReport {
        samples: options.samples,
        tolerance: options.tolerance,
        max_abs_error,
        exact_mismatches,
        term_count: dec.len(),
        depth: s.depth,
        width: s.width,
        size: s.size,
        pass: exact_mismatches == 0 && max_abs_error <= options.tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_mesh::fixtures::hat;

    #[test]
    fn hat_passes() {
        let r = verify(&hat(), &VerifyOptions { samples: 1000, ..Default::default() }).unwrap();
        assert!(r.pass, "{r}");
        assert_eq!(r.exact_mismatches, 0);
        assert_eq!(r.term_count, 4);
    }

    #[test]
    fn flipped_sign_fails() {
        let opts = VerifyOptions { samples: 200, flip_sign: Some(1), ..Default::default() };
        let r = verify(&hat(), &opts).unwrap();
        assert!(r.exact_mismatches > 0);
        assert!(!r.pass);
    }

    #[test]
    fn zero_samples_rejected() {
        let opts = VerifyOptions { samples: 0, ..Default::default() };
        assert!(matches!(verify(&hat(), &opts), Err(VerifyError::NoSamples)));
    }

    #[test]
    fn parallel_matches_serial() {
        let mesh = crate::pl_mesh::generate_random(2, 6, 2).unwrap();
        let serial = verify(&mesh, &VerifyOptions { samples: 300, seed: 4, ..Default::default() }).unwrap();
        let parallel = verify(&mesh, &VerifyOptions { samples: 300, seed: 4, jobs: 4, ..Default::default() }).unwrap();
        assert_eq!(serial, parallel);
    }
}
