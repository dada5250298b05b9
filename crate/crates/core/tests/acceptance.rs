//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_traits::Zero;
use plnet_core::exact_geometry::{facet_count_bound, int, ratio, AffineFunctional};
use plnet_core::relu_compiler::{ceil_log2, compile_mesh_exact, compile_simplex_exact, ShapeSignature};
use plnet_core::sampling::stratified_samples;
use plnet_core::{decompose, generate_random, maxmin_form, stats, MaxMinForm, PLMesh, Point, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MESHES: usize = 200;
const EXACT_SAMPLES: usize = 120;
const FLOAT_SAMPLES: usize = 1000;
const SIMPLICES_PER_DIM: usize = 1000;
const POINTS_PER_SIMPLEX: usize = 50;
const SWEEP_N: [usize; 4] = [2, 5, 10, 20];
const SHAPE_MESHES: usize = 20;
/// Bounds asserted for width/(d²n) and size/(d²n) over the sweep.
const WIDTH_CONSTANT: f64 = 16.0;
const SIZE_CONSTANT: f64 = 32.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Parameters of the i-th seeded mesh: d cycles through 1..=3, n through 1..=20.
fn mesh_params(i: usize) -> (usize, usize, u64) {
    (1 + i % 3, 1 + (i * 7) % 20, 1000 + i as u64)
}

struct MeshRun {
    identity_failures: usize,
    samples: usize,
    pre_terms_ok: bool,
    post_terms_ok: bool,
    max_float_error: f64,
    float_samples: usize,
}

fn run_mesh(i: usize) -> MeshRun {
    let (d, n, seed) = mesh_params(i);
    let mesh = generate_random(d, n, seed).expect("generator");
    let dec = decompose(&mesh, None, seed).expect("decompose");
    let pruned = dec.prune();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = stratified_samples(&mesh, EXACT_SAMPLES, &mut rng);
    let identity_failures = samples
        .iter()
        .filter(|x| {
            let f = mesh.eval(x).unwrap();
            dec.eval(x).unwrap() != f || pruned.eval(x).unwrap() != f
        })
        .count();

    let net = compile_mesh_exact(&mesh, seed, None).expect("compile").to_f64();
    let max_float_error = stratified_samples(&mesh, FLOAT_SAMPLES, &mut rng)
        .iter()
        .map(|x| {
            let exact = plnet_core::exact_geometry::to_f64(&mesh.eval(x).unwrap());
            (net.forward(&x.to_f64()).unwrap() - exact).abs()
        })
        .fold(0.0, f64::max);

    MeshRun {
        identity_failures,
        samples: samples.len(),
        pre_terms_ok: dec.len() == 2 * mesh.simplex_count(),
        post_terms_ok: pruned.len() <= 2 * mesh.simplex_count(),
        max_float_error,
        float_samples: FLOAT_SAMPLES,
    }
}

fn mesh_criteria() -> [Outcome; 3] {
    let start = Instant::now();
    let runs: Vec<MeshRun> = (0..MESHES).into_par_iter().map(run_mesh).collect();
    let elapsed = start.elapsed().as_secs_f64();

    let failures: usize = runs.iter().map(|r| r.identity_failures).sum();
    let samples: usize = runs.iter().map(|r| r.samples).sum();
    let min_samples = runs.iter().map(|r| r.samples).min().unwrap_or(0);
    let identity = outcome(
        failures == 0 && min_samples >= 100,
        format!("{MESHES} meshes, {samples} exact samples (min {min_samples}/mesh), {failures} mismatches, {elapsed:.1}s"),
    );

    let pre_bad = runs.iter().filter(|r| !r.pre_terms_ok).count();
    let post_bad = runs.iter().filter(|r| !r.post_terms_ok).count();
    let terms = outcome(
        pre_bad == 0 && post_bad == 0,
        format!("{pre_bad} meshes without exactly 2n terms, {post_bad} pruned above 2n"),
    );

    let worst = runs.iter().map(|r| r.max_float_error).fold(0.0, f64::max);
    let min_float = runs.iter().map(|r| r.float_samples).min().unwrap_or(0);
    let fidelity = outcome(
        worst <= 1e-6 && min_float >= 1000,
        format!("max |forward - f| = {worst:.3e} over {min_float} samples/mesh (tol 1e-6)"),
    );
    [identity, terms, fidelity]
}

fn maxmin_criteria() -> [Outcome; 2] {
    let start = Instant::now();
    let per_dim: Vec<(usize, usize, usize)> = (1..=3usize)
        .into_par_iter()
        .map(|d| {
            let mut rng = ChaCha8Rng::seed_from_u64(77 + d as u64);
            let mut mismatches = 0;
            let mut max_m = 0;
            for _ in 0..SIMPLICES_PER_DIM {
                let s = common::random_lifted(&mut rng, d);
                let form = maxmin_form(&s).expect("maxmin form");
                max_m = max_m.max(form.functionals.len());
                for x in common::probe_points(&mut rng, &s, POINTS_PER_SIMPLEX) {
                    if form.eval(&x) != s.tau(&x).unwrap() {
                        mismatches += 1;
                    }
                }
            }
            (d, mismatches, max_m)
        })
        .collect();
    let elapsed = start.elapsed().as_secs_f64();

    let mismatches: usize = per_dim.iter().map(|p| p.1).sum();
    let equivalence = outcome(
        mismatches == 0,
        format!(
            "{} simplices x {POINTS_PER_SIMPLEX} points per d in 1..=3, {mismatches} mismatches, {elapsed:.1}s",
            SIMPLICES_PER_DIM
        ),
    );
    let within = per_dim.iter().all(|&(d, _, m)| m <= facet_count_bound(d));
    let observed: Vec<String> = per_dim
        .iter()
        .map(|&(d, _, m)| format!("d={d}: max {m} <= {}", facet_count_bound(d)))
        .collect();
    [equivalence, outcome(within, observed.join(", "))]
}

/// `max(0, min g_i)` with `m` distinct functionals, all positive at the origin.
fn synthetic_form(d: usize, m: usize) -> MaxMinForm {
    let functionals = (0..m)
        .map(|i| {
            let mut normal = vec![Scalar::zero(); d];
            normal[i % d] = int(if (i / d) % 2 == 0 { 1 } else { -1 });
            AffineFunctional::new(normal, int(1 + i as i64))
        })
        .collect();
    MaxMinForm { functionals, apex: Point::origin(d), apex_height: int(1) }
}

/// Stellar subdivision of the simplex `{0, e_1, .., e_d}` with the centre raised to 1.
fn star_mesh(d: usize) -> PLMesh {
    let mut vertices = vec![Point::origin(d)];
    for i in 0..d {
        let mut c = vec![Scalar::zero(); d];
        c[i] = int(1);
        vertices.push(Point::new(c));
    }
    vertices.push(Point::new(vec![ratio(1, d as i64 + 1); d]));
    let mut values = vec![Scalar::zero(); d + 1];
    values.push(int(1));
    let simplices = (0..=d)
        .map(|skip| (0..=d).filter(|&v| v != skip).chain([d + 1]).collect())
        .collect();
    PLMesh::new(d, vertices, values, simplices).expect("star mesh")
}

fn depth_criterion() -> Outcome {
    let mut ok = true;
    let mut c0 = f64::NEG_INFINITY;
    let mut notes = Vec::new();
    for d in 1..=8usize {
        let bound = 2 * ceil_log2(d);
        let simplex_net = compile_simplex_exact(&synthetic_form(d, facet_count_bound(d))).unwrap();
        let simplex_depth = stats(&simplex_net, d, 1).depth;
        let mesh = star_mesh(d);
        let full = compile_mesh_exact(&mesh, d as u64, None).unwrap();
        let full_stats = stats(&full, d, mesh.simplex_count());
        // Spot-check the full network against the mesh at the raised centre.
        let centre = mesh.vertices()[d + 1].clone();
        ok &= full.eval_point(&centre).unwrap() == int(1);
        ok &= simplex_depth <= bound + 3 && full_stats.depth <= bound + 4;
        c0 = c0.max(full_stats.depth as f64 - bound as f64);
        notes.push(format!("d={d}:{simplex_depth}/{}", full_stats.depth));
    }
    outcome(ok, format!("depth per-simplex/full {}; measured C0 = {c0}", notes.join(" ")))
}

fn sweep_mesh(d: usize, n: usize, k: usize) -> PLMesh {
    generate_random(d, n, (d * 100_000 + n * 1000 + k) as u64).expect("generator")
}

fn scaling_and_shape_criteria() -> [Outcome; 2] {
    let cells: Vec<(usize, usize)> = (1..=3).flat_map(|d| SWEEP_N.map(|n| (d, n))).collect();
    let results: Vec<(usize, usize, f64, f64, usize, usize, bool)> = cells
        .par_iter()
        .map(|&(d, n)| {
            let shapes: Vec<(ShapeSignature, usize, usize)> = (0..SHAPE_MESHES)
                .into_par_iter()
                .map(|k| {
                    let net = compile_mesh_exact(&sweep_mesh(d, n, k), k as u64, Some(n)).unwrap();
                    let s = stats(&net, d, n);
                    (net.shape(), s.width, s.size)
                })
                .collect();
            let same = shapes.windows(2).all(|w| w[0].0 == w[1].0);
            let s = stats(&compile_mesh_exact(&sweep_mesh(d, n, 0), 0, Some(n)).unwrap(), d, n);
            (d, n, s.c1, s.c2, shapes[0].1, shapes[0].2, same)
        })
        .collect();

    let c1 = results.iter().map(|r| r.2).fold(0.0, f64::max);
    let c2 = results.iter().map(|r| r.3).fold(0.0, f64::max);
    let mut linear = true;
    for d in 1..=3 {
        let row: Vec<_> = results.iter().filter(|r| r.0 == d).collect();
        for pair in row.windows(2) {
            // Growth at most proportional to n; covers the doublings 5 -> 10 -> 20.
            linear &= pair[1].4 * pair[0].1 <= pair[0].4 * pair[1].1;
            linear &= pair[1].5 * pair[0].1 <= pair[0].5 * pair[1].1;
        }
    }
    let scaling = outcome(
        c1 <= WIDTH_CONSTANT && c2 <= SIZE_CONSTANT && linear,
        format!(
            "C1 = max width/(d^2 n) = {c1:.3} (<= {WIDTH_CONSTANT}), C2 = max size/(d^2 n) = {c2:.3} (<= {SIZE_CONSTANT}), linear in n: {linear}"
        ),
    );
    let differing: Vec<String> = results.iter().filter(|r| !r.6).map(|r| format!("(d={}, n={})", r.0, r.1)).collect();
    let shapes = outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} (d, n) cells x {SHAPE_MESHES} meshes share one shape per cell", results.len())
        } else {
            format!("shape mismatch in {}", differing.join(" "))
        },
    );
    [scaling, shapes]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let [identity, terms, fidelity] = mesh_criteria();
    let [equivalence, functionals] = maxmin_criteria();
    let depth = depth_criterion();
    let [scaling, shapes] = scaling_and_shape_criteria();

    let named = [
        ("1 exact decomposition identity", identity),
        ("2 term count 2n", terms),
        ("3 max-min equals clipping", equivalence),
        ("4 functional count bound", functionals),
        ("5 network fidelity", fidelity),
        ("6 depth bound", depth),
        ("7 width/size scaling", scaling),
        ("8 fixed architecture", shapes),
    ];
    let mut all = true;
    for (name, o) in &named {
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
