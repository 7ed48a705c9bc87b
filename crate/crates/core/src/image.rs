//! Quaternion colour images and restoration quality metrics.
//!
//! An RGB image is the pure quaternion matrix `R i + G j + B k`; an RGBA image puts
//! the alpha channel in the real part. Planes are stored column-major so that an
//! image's plane data is exactly its vectorization.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::vector::QuatVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageMode {
    /// Real plane zero, colour on `i, j, k`.
    RgbPure,
    /// Alpha on the real plane.
    RgbaFull,
}

impl ImageMode {
    /// Real samples per pixel entering the metrics.
    pub fn samples_per_pixel(self) -> usize {
        match self {
            Self::RgbPure => 3,
            Self::RgbaFull => 4,
        }
    }

    fn planes(self) -> core::ops::Range<usize> {
        match self {
            Self::RgbPure => 1..4,
            Self::RgbaFull => 0..4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuatImage {
    height: usize,
    width: usize,
    mode: ImageMode,
    planes: [Vec<f64>; 4],
}

impl QuatImage {
    pub fn zeros(height: usize, width: usize, mode: ImageMode) -> Self {
        let n = height * width;
        Self {
            height,
            width,
            mode,
            planes: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    /// Planes in column-major order: `(alpha or 0, red, green, blue)`.
    pub fn from_planes(height: usize, width: usize, mode: ImageMode, planes: [Vec<f64>; 4]) -> Result<Self> {
        for p in &planes {
            if p.len() != height * width {
                return Err(Error::dim("QuatImage plane", height * width, p.len()));
            }
        }
        Ok(Self {
            height,
            width,
            mode,
            planes,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn mode(&self) -> ImageMode {
        self.mode
    }

    pub fn planes(&self) -> &[Vec<f64>; 4] {
        &self.planes
    }

    pub fn get(&self, plane: usize, row: usize, col: usize) -> f64 {
        self.planes[plane][row + col * self.height]
    }

    pub fn set(&mut self, plane: usize, row: usize, col: usize, v: f64) {
        self.planes[plane][row + col * self.height] = v;
    }

    /// Column-stacked quaternion vector.
    pub fn vec(&self) -> QuatVector {
        QuatVector::from_planes(self.planes.clone()).expect("planes have equal length")
    }

    pub fn unvec(x: &QuatVector, height: usize, width: usize, mode: ImageMode) -> Result<Self> {
        if x.len() != height * width {
            return Err(Error::dim("unvec", height * width, x.len()));
        }
        Self::from_planes(height, width, mode, x.planes().clone())
    }

    /// Every value in `[0, 1]` and, for RGB, a zero real plane.
    pub fn is_valid(&self) -> bool {
        let range_ok = self.planes.iter().flatten().all(|v| (0.0..=1.0).contains(v));
        range_ok && (self.mode == ImageMode::RgbaFull || self.planes[0].iter().all(|v| *v == 0.0))
    }

    /// Clamps values to `[0, 1]` and zeroes the real plane of RGB images.
    pub fn clamped(&self) -> Self {
        let mut out = self.clone();
        for p in &mut out.planes {
            for v in p.iter_mut() {
                *v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
            }
        }
        if self.mode == ImageMode::RgbPure {
            out.planes[0].iter_mut().for_each(|v| *v = 0.0);
        }
        out
    }

    /// Euclidean norm over the metric samples.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.samples().map(|v| v * v).sum())
    }

    fn samples(&self) -> impl Iterator<Item = &f64> + '_ {
        self.mode.planes().flat_map(move |p| self.planes[p].iter())
    }

    fn sample_count(&self) -> usize {
        self.mode.samples_per_pixel() * self.height * self.width
    }
}

fn check_pair(a: &QuatImage, b: &QuatImage) -> Result<()> {
    if a.height != b.height || a.width != b.width {
        return Err(Error::dim("image metric: pixel count", a.height * a.width, b.height * b.width));
    }
    if a.mode != b.mode {
        return Err(Error::Parameter("image metric: channel layouts differ"));
    }
    Ok(())
}

fn diff_sqr(a: &QuatImage, b: &QuatImage) -> f64 {
    a.samples().zip(b.samples()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `10 log10(K I1 I2 / |X_true - X_rest|^2)` with peak value 1 and `K` samples per
/// pixel. Identical images give `+inf`.
pub fn psnr(truth: &QuatImage, restored: &QuatImage) -> Result<f64> {
    check_pair(truth, restored)?;
    let d2 = diff_sqr(truth, restored);
    if d2 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * libm::log10(truth.sample_count() as f64 / d2))
}

/// `|X_true - X_rest| / |X_true|`.
pub fn rel_error(truth: &QuatImage, restored: &QuatImage) -> Result<f64> {
    check_pair(truth, restored)?;
    let t = truth.norm();
    if t == 0.0 {
        return Err(Error::Domain("relative error of a zero image"));
    }
    Ok(libm::sqrt(diff_sqr(truth, restored)) / t)
}

/// Structural similarity from global means, variances and covariance over all
/// samples, with `c1 = 0.01^2` and `c2 = 0.03^2`.
pub fn ssim(truth: &QuatImage, restored: &QuatImage) -> Result<f64> {
    check_pair(truth, restored)?;
    const C1: f64 = 0.01 * 0.01;
    const C2: f64 = 0.03 * 0.03;
    let n = truth.sample_count() as f64;
    if n == 0.0 {
        return Err(Error::Parameter("ssim of an empty image"));
    }
    let mx = truth.samples().sum::<f64>() / n;
    let my = restored.samples().sum::<f64>() / n;
    let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
    for (x, y) in truth.samples().zip(restored.samples()) {
        let (dx, dy) = (x - mx, y - my);
        vx += dx * dx;
        vy += dy * dy;
        cxy += dx * dy;
    }
    let (vx, vy, cxy) = (vx / n, vy / n, cxy / n);
    Ok(((2.0 * mx * my + C1) * (2.0 * cxy + C2)) / ((mx * mx + my * my + C1) * (vx + vy + C2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random::rng;
    use crate::quaternion::Quaternion;
    use proptest::prelude::*;
    use rand_distr::{Distribution, Uniform};

    fn random_image(h: usize, w: usize, mode: ImageMode, seed: u64) -> QuatImage {
        let mut g = rng(seed);
        let u = Uniform::new(0.0, 1.0).unwrap();
        let mut img = QuatImage::zeros(h, w, mode);
        for p in mode.planes() {
            for v in img.planes[p].iter_mut() {
                *v = u.sample(&mut g);
            }
        }
        img
    }

    #[test]
    fn red_maps_to_i_plane() {
        let mut img = QuatImage::zeros(2, 2, ImageMode::RgbPure);
        img.set(1, 0, 0, 0.5);
        let v = img.vec();
        assert_eq!(v.get(0), Quaternion::new(0.0, 0.5, 0.0, 0.0));
        img.set(3, 1, 0, 0.25);
        assert_eq!(img.vec().get(1).z, 0.25);
    }

    #[test]
    fn single_row_vectorizes_in_order() {
        let mut img = QuatImage::zeros(1, 4, ImageMode::RgbPure);
        for c in 0..4 {
            img.set(2, 0, c, c as f64 / 4.0);
        }
        let v = img.vec();
        for c in 0..4 {
            assert_eq!(v.get(c).y, c as f64 / 4.0);
        }
    }

    #[test]
    fn vec_roundtrip_and_norm() {
        let img = random_image(5, 7, ImageMode::RgbPure, 3);
        let v = img.vec();
        assert_eq!(QuatImage::unvec(&v, 5, 7, ImageMode::RgbPure).unwrap(), img);
        assert!((v.norm2() - img.norm()).abs() < 1e-12);
        assert!(QuatImage::unvec(&v, 6, 7, ImageMode::RgbPure).is_err());
    }

    #[test]
    fn identical_images() {
        let img = random_image(6, 6, ImageMode::RgbaFull, 4);
        assert_eq!(psnr(&img, &img).unwrap(), f64::INFINITY);
        assert!((ssim(&img, &img).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rel_error(&img, &img).unwrap(), 0.0);
    }

    #[test]
    fn uniform_offset_is_zero_db() {
        let img = random_image(4, 3, ImageMode::RgbPure, 5);
        let mut other = img.clone();
        for p in 1..4 {
            other.planes[p].iter_mut().for_each(|v| *v += 1.0);
        }
        assert!(psnr(&img, &other).unwrap().abs() < 1e-12);
    }

    #[test]
    fn halving_error_adds_six_db() {
        let img = random_image(8, 8, ImageMode::RgbPure, 6);
        let noise = random_image(8, 8, ImageMode::RgbPure, 7);
        let perturb = |s: f64| {
            let mut out = img.clone();
            for p in 1..4 {
                for (v, n) in out.planes[p].iter_mut().zip(&noise.planes[p]) {
                    *v += s * (n - 0.5);
                }
            }
            out
        };
        let a = psnr(&img, &perturb(0.2)).unwrap();
        let b = psnr(&img, &perturb(0.1)).unwrap();
        assert!((b - a - 10.0 * libm::log10(4.0)).abs() < 1e-10);
        assert!((b - a - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn zero_restoration_has_unit_error() {
        let img = random_image(3, 3, ImageMode::RgbPure, 8);
        let zero = QuatImage::zeros(3, 3, ImageMode::RgbPure);
        assert!((rel_error(&img, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(rel_error(&zero, &img).is_err());
    }

    // Constant shift d on a 2x2 RGB image: only the luminance term drops below one.
    #[test]
    fn constant_shift_ssim() {
        let mut img = QuatImage::zeros(2, 2, ImageMode::RgbPure);
        let vals = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.15, 0.25, 0.35];
        for (k, v) in vals.iter().enumerate() {
            img.planes[1 + k / 4][k % 4] = *v;
        }
        let mut shifted = img.clone();
        for p in 1..4 {
            shifted.planes[p].iter_mut().for_each(|v| *v += 0.1);
        }
        let mx = vals.iter().sum::<f64>() / 12.0;
        let my = mx + 0.1;
        let c1 = 1e-4;
        let expect = (2.0 * mx * my + c1) / (mx * mx + my * my + c1);
        let got = ssim(&img, &shifted).unwrap();
        assert!((got - expect).abs() < 1e-14);
        assert!(got < 1.0);
    }

    #[test]
    fn layout_mismatch_is_rejected() {
        let a = QuatImage::zeros(2, 3, ImageMode::RgbPure);
        let b = QuatImage::zeros(3, 2, ImageMode::RgbPure);
        let c = QuatImage::zeros(2, 3, ImageMode::RgbaFull);
        assert!(psnr(&a, &b).is_err());
        assert!(ssim(&a, &c).is_err());
    }

    #[test]
    fn clamping() {
        let mut img = QuatImage::zeros(1, 2, ImageMode::RgbPure);
        img.set(0, 0, 0, 0.3);
        img.set(1, 0, 1, 1.7);
        img.set(2, 0, 0, -0.2);
        assert!(!img.is_valid());
        let c = img.clamped();
        assert!(c.is_valid());
        assert_eq!((c.get(0, 0, 0), c.get(1, 0, 1), c.get(2, 0, 0)), (0.0, 1.0, 0.0));
    }

    proptest! {
        #[test]
        fn psnr_decreases_with_error(seed in 0u64..1000, s in 0.01f64..0.5, grow in 1.01f64..3.0) {
            let img = random_image(4, 4, ImageMode::RgbPure, seed);
            let noise = random_image(4, 4, ImageMode::RgbPure, seed + 1);
            let perturb = |t: f64| {
                let mut out = img.clone();
                for p in 1..4 {
                    for (v, n) in out.planes[p].iter_mut().zip(&noise.planes[p]) {
                        *v += t * (n - 0.5);
                    }
                }
                out
            };
            prop_assert!(psnr(&img, &perturb(s)).unwrap() > psnr(&img, &perturb(s * grow)).unwrap());
        }

        #[test]
        fn ssim_symmetric_and_bounded(seed in 0u64..1000) {
            let a = random_image(5, 4, ImageMode::RgbaFull, seed);
            let b = random_image(5, 4, ImageMode::RgbaFull, seed + 7);
            let ab = ssim(&a, &b).unwrap();
            prop_assert!((ab - ssim(&b, &a).unwrap()).abs() < 1e-15);
            prop_assert!((-1.0..1.0).contains(&ab));
        }
    }
}
