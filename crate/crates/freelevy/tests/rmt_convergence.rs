//! Spectral convergence: the KS distance between matched ensembles and
//! their limit laws decreases in median as the matrix size grows.

use freelevy::catalog;
use freelevy::rmt::{ks_distance, sample_spectrum, Ensemble};
use freelevy::transforms::DensityGrid;
use rayon::prelude::*;

fn closed_grid(name: &str, params: &[(&str, f64)]) -> DensityGrid {
    let e = catalog::get(name, params).unwrap();
    let d = e.closed_density.unwrap();
    let (lo, hi) = d.support;
    DensityGrid::from_closed_density(move |x| d.eval(x), lo - 0.5, hi + 0.5, 4001)
}

fn median_ks(model: &Ensemble, n: usize, grid: &DensityGrid) -> f64 {
    let mut ks: Vec<f64> = (1..=10u64)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&seed| {
            let s = sample_spectrum(model, n, seed).unwrap();
            ks_distance(&s, grid).unwrap()
        })
        .collect();
    ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    0.5 * (ks[4] + ks[5])
}

#[test]
fn matched_ks_decreases_with_matrix_size() {
    let cases: Vec<(Ensemble, DensityGrid)> = vec![
        (
            Ensemble::GaussianHermitian,
            closed_grid("semicircle", &[("a", 1.0)]),
        ),
        (
            Ensemble::Wishart { lambda: 1.0 },
            closed_grid("free_poisson", &[("lambda", 1.0)]),
        ),
        (
            Ensemble::FreeSum(
                Box::new(Ensemble::GaussianHermitian),
                Box::new(Ensemble::GaussianHermitian),
            ),
            closed_grid("semicircle", &[("a", 2.0)]),
        ),
    ];
    for (model, grid) in &cases {
        let mut prev = f64::INFINITY;
        for n in [200, 500, 1000] {
            let m = median_ks(model, n, grid);
            println!("{model} n={n}: median KS = {m:.4}");
            assert!(m < prev, "{model}: median KS did not decrease at n={n}");
            prev = m;
        }
    }
}
