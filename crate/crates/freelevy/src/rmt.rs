//! Random-matrix Monte Carlo validation.
//!
//! Empirical spectra of classical ensembles converge to catalog laws:
//! Gaussian Wigner matrices (entry variance 1/n) to the semicircle w(0,1),
//! Wishart matrices XXᵀ/n with aspect ratio λ to Marchenko-Pastur(λ), and
//! A + UBUᵀ with U Haar to the free additive convolution of the summand
//! limits. Sampling is counter-based — the generator is keyed by
//! (model, n, seed, position in the sampling tree) — so results are
//! reproducible bit-for-bit on one platform regardless of scheduling.

use crate::error::{Error, Result};
use crate::transforms::DensityGrid;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};
use std::fmt;

/// Matrix models whose spectra converge to catalog laws.
#[derive(Debug, Clone)]
pub enum Ensemble {
    /// Symmetric Gaussian Wigner matrix scaled to the semicircle w(0,1).
    GaussianHermitian,
    /// XXᵀ/n with X of shape n×round(λn); limit Marchenko-Pastur(λ).
    Wishart { lambda: f64 },
    /// A + UBUᵀ with independent samples and Haar U; limit is ⊞ of the
    /// summand limits.
    FreeSum(Box<Ensemble>, Box<Ensemble>),
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ensemble::GaussianHermitian => write!(f, "gaussian_hermitian"),
            Ensemble::Wishart { lambda } => write!(f, "wishart({lambda})"),
            Ensemble::FreeSum(a, b) => write!(f, "free_sum({a},{b})"),
        }
    }
}

/// Sorted spectrum of one sampled matrix.
#[derive(Debug, Clone)]
pub struct SpectrumSample {
    pub eigenvalues: Vec<f64>,
    pub n: usize,
    pub model: String,
    pub seed: u64,
}

fn keyed_rng(model: &str, n: usize, seed: u64, path: &str) -> ChaCha12Rng {
    let mut hasher = Sha256::new();
    hasher.update(b"freelevy-rmt-v1");
    hasher.update(model.as_bytes());
    hasher.update(n.to_le_bytes());
    hasher.update(seed.to_le_bytes());
    hasher.update(path.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha12Rng::from_seed(key)
}

fn gaussian_wigner(n: usize, rng: &mut ChaCha12Rng) -> DMatrix<f64> {
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let g: f64 = rng.sample(StandardNormal);
            let v = if i == j {
                g * std::f64::consts::SQRT_2 * scale
            } else {
                g * scale
            };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn wishart(n: usize, lambda: f64, rng: &mut ChaCha12Rng) -> Result<DMatrix<f64>> {
    let m = (lambda * n as f64).round() as usize;
    if m == 0 {
        return Err(Error::InvalidParameter(format!(
            "wishart aspect λ·n rounds to zero columns (λ={lambda}, n={n})"
        )));
    }
    let x = DMatrix::<f64>::from_fn(n, m, |_, _| rng.sample(StandardNormal));
    Ok(&x * x.transpose() / n as f64)
}

/// Haar-distributed orthogonal matrix: QR of a Ginibre matrix with the
/// R-diagonal sign fix.
fn haar_orthogonal(n: usize, rng: &mut ChaCha12Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

fn sample_matrix(
    model: &Ensemble,
    n: usize,
    root: &str,
    seed: u64,
    path: &str,
) -> Result<DMatrix<f64>> {
    match model {
        Ensemble::GaussianHermitian => {
            let mut rng = keyed_rng(root, n, seed, path);
            Ok(gaussian_wigner(n, &mut rng))
        }
        Ensemble::Wishart { lambda } => {
            if !(*lambda > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "wishart needs λ > 0, got {lambda}"
                )));
            }
            let mut rng = keyed_rng(root, n, seed, path);
            wishart(n, *lambda, &mut rng)
        }
        Ensemble::FreeSum(a, b) => {
            let ma = sample_matrix(a, n, root, seed, &format!("{path}/a"))?;
            let mb = sample_matrix(b, n, root, seed, &format!("{path}/b"))?;
            let mut rng = keyed_rng(root, n, seed, &format!("{path}/haar"));
            let u = haar_orthogonal(n, &mut rng);
            Ok(ma + &u * mb * u.transpose())
        }
    }
}

/// Sample one spectrum. Deterministic in (model, n, seed).
pub fn sample_spectrum(model: &Ensemble, n: usize, seed: u64) -> Result<SpectrumSample> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "matrix size must be ≥ 2, got {n}"
        )));
    }
    let root = model.to_string();
    let matrix = sample_matrix(model, n, &root, seed, "")?;
    let eig = matrix.symmetric_eigen();
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(SpectrumSample {
        eigenvalues,
        n,
        model: root,
        seed,
    })
}

/// Kolmogorov-Smirnov distance between the empirical CDF of a sample and
/// the trapezoid CDF of a density grid.
pub fn ks_distance(sample: &SpectrumSample, grid: &DensityGrid) -> Result<f64> {
    let cdf = grid.cdf();
    if cdf.total_mass() < 0.95 {
        return Err(Error::InsufficientCoverage {
            detail: format!("grid mass {:.4} < 0.95", cdf.total_mass()),
        });
    }
    let (lo, hi) = (grid.x_lo, grid.x_hi);
    let outside = sample
        .eigenvalues
        .iter()
        .filter(|x| **x < lo || **x > hi)
        .count();
    if outside as f64 > 0.05 * sample.n as f64 {
        return Err(Error::InsufficientCoverage {
            detail: format!(
                "{outside} of {} eigenvalues outside the grid window",
                sample.n
            ),
        });
    }
    let n = sample.eigenvalues.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in sample.eigenvalues.iter().enumerate() {
        let f = cdf.eval(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max((f - (i as f64 + 1.0) / n).abs());
    }
    Ok(sup)
}

/// CSV dump of a spectrum: header line with model/n/seed, then one
/// eigenvalue per line.
pub fn spectrum_csv(sample: &SpectrumSample) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# model={} n={} seed={}\nvalue\n",
        sample.model, sample.n, sample.seed
    ));
    for v in &sample.eigenvalues {
        out.push_str(&format!("{v}\n"));
    }
    out
}
