use plnet_core::{generate_random, verify, VerifyOptions};

#[test]
fn verify_passes_on_generated_meshes() {
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let (d, n) = (1 + (i % 3) as usize, 1 + ((i * 11) % 20) as usize);
        let mesh = generate_random(d, n, 5000 + i).unwrap();
        let options = VerifyOptions { samples: 100, tolerance: 1e-6, seed: i, ..VerifyOptions::default() };
        let report = verify(&mesh, &options).unwrap();
        if !report.pass || report.exact_mismatches != 0 {
            failures.push((d, n, i, report));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
