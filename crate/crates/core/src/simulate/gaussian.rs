//! Exact sampling of stationary Gaussian sequences.
//!
//! The primary route is circulant embedding: the Toeplitz covariance is
//! embedded in a circulant matrix whose eigenvalues are the FFT of its first
//! row, and one FFT of scaled complex noise yields an exact sample. When no
//! tried embedding is nonnegative definite, the covariance matrix is
//! factorized densely instead.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Embedding sizes tried, as successive doublings of the minimal power of two.
const EMBEDDING_DOUBLINGS: u32 = 3;

/// Negative eigenvalues down to this fraction of the largest are rounding.
const EIGEN_TOLERANCE: f64 = 1e-10;

/// Jitter added to the diagonal, relative to the variance, on each retry.
const JITTER: [f64; 5] = [0.0, 1e-14, 1e-12, 1e-10, 1e-8];

/// Draws `n` values with `Cov(X_i, X_j) = acv(|i - j|)`.
pub(crate) fn sample_stationary<R, F>(acv: F, n: usize, rng: &mut R) -> Result<Vec<f64>>
where
    R: Rng + ?Sized,
    F: Fn(usize) -> f64,
{
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let z: f64 = rng.sample(StandardNormal);
        return Ok(vec![acv(0).sqrt() * z]);
    }
    let mut size = (2 * (n - 1)).next_power_of_two();
    for _ in 0..=EMBEDDING_DOUBLINGS {
        if let Some(eigen) = circulant_eigenvalues(&acv, size) {
            return Ok(circulant_sample(&eigen, n, rng));
        }
        size *= 2;
    }
    log::debug!("circulant embedding not nonnegative definite for n = {n}; using Cholesky");
    cholesky_sample(&acv, n, rng)
}

/// Eigenvalues of the circulant with first row `acv(0..=size/2)` mirrored,
/// or `None` when one is materially negative.
fn circulant_eigenvalues<F: Fn(usize) -> f64>(acv: &F, size: usize) -> Option<Vec<f64>> {
    let half = size / 2;
    let mut row: Vec<Complex64> = (0..size)
        .map(|k| Complex64::new(acv(if k <= half { k } else { size - k }), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(size).process(&mut row);
    if row.iter().any(|c| !c.re.is_finite()) {
        return None;
    }
    let max = row.iter().map(|c| c.re).fold(0.0, f64::max);
    if row.iter().any(|c| c.re < -EIGEN_TOLERANCE * max) {
        return None;
    }
    Some(row.iter().map(|c| c.re.max(0.0)).collect())
}

fn circulant_sample<R: Rng + ?Sized>(eigen: &[f64], n: usize, rng: &mut R) -> Vec<f64> {
    let size = eigen.len();
    let mut w: Vec<Complex64> = eigen
        .iter()
        .map(|lambda| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex64::new(a, b) * (lambda / size as f64).sqrt()
        })
        .collect();
    FftPlanner::new().plan_fft_forward(size).process(&mut w);
    // Real and imaginary parts are independent exact samples; keep the real one.
    w.iter().take(n).map(|c| c.re).collect()
}

fn cholesky_sample<R, F>(acv: &F, n: usize, rng: &mut R) -> Result<Vec<f64>>
where
    R: Rng + ?Sized,
    F: Fn(usize) -> f64,
{
    let variance = acv(0);
    let base = DMatrix::from_fn(n, n, |i, j| acv(i.abs_diff(j)));
    for jitter in JITTER {
        let mut cov = base.clone();
        for i in 0..n {
            cov[(i, i)] += jitter * variance;
        }
        if let Some(chol) = cov.cholesky() {
            let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            return Ok((chol.l() * z).iter().copied().collect());
        }
    }
    Err(Error::NotFactorizable)
}
