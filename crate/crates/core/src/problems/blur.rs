//! Blurring operators on column-major vectorized `n x n` images.
//!
//! A separable blur `B1 ⊗ B2` maps `vec(X)` to `vec(B2 X B1^T)`: `B2` acts along
//! columns (vertically) and `B1` along rows (horizontally).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{CsrMatrix, QuatMatrix};
use crate::real_rep::RealMatrix;

/// Plane factors of the multichannel blur.
pub const MULTICHANNEL_SCALES: [f64; 4] = [1.0, 1.0, 1.5, 2.0];
/// Plane factors applied to external and motion-blur matrices.
pub const EXTERNAL_SCALES: [f64; 3] = [1.5, 2.0, 0.5];

fn banded(n: usize, width: usize, f: impl Fn(usize) -> f64) -> RealMatrix {
    let mut m = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in i.saturating_sub(width)..n.min(i + width + 1) {
            m.set(i, j, f(i.abs_diff(j)));
        }
    }
    m
}

/// `exp(-(i-j)^2 / (2σ^2)) / (σ sqrt(2π))` for `|i - j| <= r`.
pub fn gaussian_toeplitz(n: usize, sigma: f64, r: usize) -> Result<RealMatrix> {
    if !(sigma > 0.0) {
        return Err(Error::Parameter("sigma must be positive"));
    }
    let c = 1.0 / (sigma * libm::sqrt(2.0 * core::f64::consts::PI));
    Ok(banded(n, r, |d| {
        let d = d as f64;
        c * libm::exp(-d * d / (2.0 * sigma * sigma))
    }))
}

/// `1 / (2s - 1)` for `|i - j| <= s`.
pub fn uniform_toeplitz(n: usize, s: usize) -> Result<RealMatrix> {
    if s == 0 {
        return Err(Error::Parameter("uniform blur half-width must be at least 1"));
    }
    let v = 1.0 / (2 * s - 1) as f64;
    Ok(banded(n, s, |_| v))
}

fn to_csr(m: &RealMatrix) -> Result<CsrMatrix> {
    CsrMatrix::from_dense(m.rows(), m.cols(), m.data())
}

/// `A0 = B1 ⊗ B2` with Gaussian `B1` and uniform `B2`, as the real part only.
pub fn multichannel_blur_real(n: usize, sigma: f64, r: usize, s: usize) -> Result<CsrMatrix> {
    if n < 2 {
        return Err(Error::Parameter("blur image side must be at least 2"));
    }
    let b1 = to_csr(&gaussian_toeplitz(n, sigma, r)?)?;
    let b2 = to_csr(&uniform_toeplitz(n, s)?)?;
    Ok(b1.kron(&b2))
}

/// `A0 + A0 i + 1.5 A0 j + 2 A0 k` with `A0 = B1 ⊗ B2`.
pub fn multichannel_blur(n: usize, sigma: f64, r: usize, s: usize) -> Result<QuatMatrix> {
    let a0 = multichannel_blur_real(n, sigma, r, s)?;
    let [_, s1, s2, s3] = MULTICHANNEL_SCALES;
    scale_to_quaternion(&a0, s1, s2, s3)
}

/// Horizontal motion blur of length `len` with zero boundary: each pixel averages
/// `len` horizontal neighbours with weight `1/len`, centred on the pixel, and
/// samples falling outside the image are dropped.
pub fn motion_blur_matrix(n: usize, len: usize) -> Result<CsrMatrix> {
    if len == 0 {
        return Err(Error::Parameter("motion blur length must be at least 1"));
    }
    let w = 1.0 / len as f64;
    let left = (len - 1) / 2;
    let mut trip = Vec::with_capacity(n * n * len);
    for col in 0..n {
        for row in 0..n {
            let out = row + col * n;
            for k in 0..len {
                let Some(c) = (col + k).checked_sub(left) else { continue };
                if c < n {
                    trip.push((out, row + c * n, w));
                }
            }
        }
    }
    CsrMatrix::from_triplets(n * n, n * n, &trip)
}

/// Quaternion matrix with planes `(A0, s1 A0, s2 A0, s3 A0)`.
pub fn scale_to_quaternion(a0: &CsrMatrix, s1: f64, s2: f64, s3: f64) -> Result<QuatMatrix> {
    if a0.rows() != a0.cols() {
        return Err(Error::dim("scale_to_quaternion: square matrix", a0.rows(), a0.cols()));
    }
    QuatMatrix::from_sparse_planes([a0.clone(), a0.scaled(s1), a0.scaled(s2), a0.scaled(s3)])
}
