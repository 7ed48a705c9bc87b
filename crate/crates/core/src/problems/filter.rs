//! Quaternion filter identification systems built from a three-channel signal.
//!
//! The target is `y(t) = y_r(t) i + y_g(t) j + y_b(t) k` and the input is the
//! one-sample-delayed target plus Gaussian noise, `x(t) = y(t - 1) + n(t)`. The
//! filter taps solve `X w = y` with `X[r][c] = x(t0 + r - c)` for `r = 0..=q`,
//! `c = 0..=p`, and `y = (y(t0), ..., y(t0 + q))`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::vector::QuatVector;

use super::lorenz::LorenzSeries;
use super::random::{normal, rng};

#[derive(Debug, Clone, PartialEq)]
pub struct FilterSystem {
    pub x: QuatMatrix,
    pub y: QuatVector,
    /// Known filter, when the generator has one.
    pub w_true: Option<QuatVector>,
    /// Time index of the first row.
    pub t0: usize,
}

/// `0.01` times the RMS of the clean signal.
pub fn default_noise_sigma(series: &LorenzSeries) -> f64 {
    0.01 * series.rms()
}

/// Starts at the earliest admissible index `t0 = p + 1`.
pub fn build_filter_system(
    series: &LorenzSeries,
    noise_sigma: f64,
    p: usize,
    q: usize,
    seed: u64,
) -> Result<FilterSystem> {
    build_filter_system_at(series, noise_sigma, p, q, p + 1, seed)
}

pub fn build_filter_system_at(
    series: &LorenzSeries,
    noise_sigma: f64,
    p: usize,
    q: usize,
    t0: usize,
    seed: u64,
) -> Result<FilterSystem> {
    if !(noise_sigma >= 0.0) {
        return Err(Error::Parameter("noise_sigma must be nonnegative"));
    }
    if t0 < p + 1 {
        return Err(Error::Parameter("filter start index must be at least p + 1"));
    }
    let len = series.len();
    if t0 + q >= len {
        return Err(Error::dim("filter system: series length", t0 + q + 1, len));
    }
    // Noise is drawn once per sample so that shared time indices share noise.
    let mut g = rng(seed);
    let channels = [&series.xr, &series.xg, &series.xb];
    let mut input: [Vec<f64>; 3] = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    for k in 1..len {
        for (c, ch) in channels.iter().enumerate() {
            input[c][k] = ch[k - 1] + noise_sigma * normal(&mut g);
        }
    }
    let (m, n) = (q + 1, p + 1);
    let mut planes = [vec![0.0; m * n], vec![0.0; m * n], vec![0.0; m * n], vec![0.0; m * n]];
    for r in 0..m {
        for c in 0..n {
            let t = t0 + r - c;
            for ch in 0..3 {
                planes[ch + 1][r * n + c] = input[ch][t];
            }
        }
    }
    let mut yq = [vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]];
    for r in 0..m {
        for ch in 0..3 {
            yq[ch + 1][r] = channels[ch][t0 + r];
        }
    }
    Ok(FilterSystem {
        x: QuatMatrix::from_dense_planes(m, n, planes)?,
        y: QuatVector::from_planes(yq)?,
        w_true: None,
        t0,
    })
}
