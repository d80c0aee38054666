//! Numeric sampling of the positivity condition: never part of exact
//! classification, checked here at random points of the relevant loci.

use hypoform::catalog::s3s3;
use hypoform::liealg::model_double_hypo_at;
use hypoform::structures::positivity::{check_positivity_numeric, PointSample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn standard_model_has_unit_positivity() {
    let (_, s) = model_double_hypo_at("0").unwrap();
    // constant forms: any single sample decides; the ring has no generators
    let samples = vec![PointSample { gen_values: vec![] }];
    let report = check_positivity_numeric(&s, &samples, 1e-9).unwrap();
    assert!(report.pass);
    assert!((report.min_eigenvalue - 1.0).abs() < 1e-9, "{report:?}");
}

fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.1 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn deformed_samples(
    frame: &hypoform::exterior::DifferentialFrame,
    lambda: f64,
    mu: f64,
    count: usize,
    seed: u64,
) -> Vec<PointSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kq = (3.0 * lambda * lambda - 9.0 * lambda * mu).sqrt();
    (0..count)
        .map(|_| {
            let s2 = unit_vector(&mut rng, 3);
            let s3 = unit_vector(&mut rng, 4);
            let gen_values = frame
                .ring()
                .generator_names()
                .map(|name| match name {
                    "x1" => s2[0],
                    "x2" => s2[1],
                    "x3" => s2[2],
                    "x5" => s3[0],
                    "x6" => s3[1],
                    "x7" => s3[2],
                    "x8" => s3[3],
                    "sqrt3" => 3f64.sqrt(),
                    "lambda" => lambda,
                    "mu" => mu,
                    "kq" => kq,
                    other => panic!("unexpected generator {other}"),
                })
                .collect();
            PointSample { gen_values }
        })
        .collect()
}

#[test]
fn deformation_positivity_depends_on_the_parameter_sign() {
    let prod = s3s3::build_s3s3().unwrap();
    let hyp = s3s3::build_s2s3(&prod).unwrap();
    let frame = &hyp.deformed_frame;
    // λ = −1, μ = 0 satisfies the stated inequality region
    let good = deformed_samples(frame, -1.0, 0.0, 8, 7);
    let report = check_positivity_numeric(&hyp.deformed, &good, 1e-7).unwrap();
    assert!(report.pass, "{report:?}");
    // λ = +1 leaves it
    let bad = deformed_samples(frame, 1.0, 0.0, 8, 11);
    let report = check_positivity_numeric(&hyp.deformed, &bad, 1e-7).unwrap();
    assert!(!report.pass, "{report:?}");
    assert!(report.min_eigenvalue < -1e-3);
}
