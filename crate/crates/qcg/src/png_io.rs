//! PNG images as quaternion images.

use std::path::Path;

use image::{DynamicImage, ImageBuffer, Rgb, Rgba};
use qcg_core::image::{ImageMode, QuatImage};

use crate::error::{QcgError, Result};

fn image_err(path: &Path, msg: impl ToString) -> QcgError {
    QcgError::Image {
        path: path.to_path_buf(),
        msg: msg.to_string(),
    }
}

/// Reads an 8- or 16-bit PNG, normalizing channels to `[0, 1]`. `RgbPure` drops any
/// alpha channel; `RgbaFull` stores alpha (1 when absent) on the real plane.
pub fn load_png(path: impl AsRef<Path>, mode: ImageMode) -> Result<QuatImage> {
    let path = path.as_ref();
    let img = image::ImageReader::open(path)
        .map_err(|e| QcgError::io(path, e))?
        .with_guessed_format()
        .map_err(|e| QcgError::io(path, e))?
        .decode()
        .map_err(|e| image_err(path, e))?;
    Ok(from_dynamic(&img, mode))
}

pub fn from_dynamic(img: &DynamicImage, mode: ImageMode) -> QuatImage {
    let rgba = img.to_rgba32f();
    let (w, h) = (rgba.width() as usize, rgba.height() as usize);
    let mut out = QuatImage::zeros(h, w, mode);
    for (x, y, px) in rgba.enumerate_pixels() {
        let (r, c) = (y as usize, x as usize);
        for ch in 0..3 {
            out.set(ch + 1, r, c, f64::from(px[ch]));
        }
        if mode == ImageMode::RgbaFull {
            out.set(0, r, c, f64::from(px[3]));
        }
    }
    out
}

fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Writes an 8-bit RGB or RGBA PNG; values are clamped to `[0, 1]`.
pub fn save_png(img: &QuatImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = (img.width() as u32, img.height() as u32);
    let px = |x: u32, y: u32, p: usize| quantize(img.get(p, y as usize, x as usize));
    let dynamic = match img.mode() {
        ImageMode::RgbPure => DynamicImage::ImageRgb8(ImageBuffer::from_fn(w, h, |x, y| {
            Rgb([px(x, y, 1), px(x, y, 2), px(x, y, 3)])
        })),
        ImageMode::RgbaFull => DynamicImage::ImageRgba8(ImageBuffer::from_fn(w, h, |x, y| {
            Rgba([px(x, y, 1), px(x, y, 2), px(x, y, 3), px(x, y, 0)])
        })),
    };
    dynamic
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| image_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::Rgb;

    #[test]
    fn black_and_white() {
        let black = DynamicImage::ImageRgb8(ImageBuffer::from_pixel(3, 2, Rgb([0u8, 0, 0])));
        let q = from_dynamic(&black, ImageMode::RgbPure);
        assert!(q.planes().iter().flatten().all(|v| *v == 0.0));
        let white = DynamicImage::ImageRgb8(ImageBuffer::from_pixel(3, 2, Rgb([255u8, 255, 255])));
        let q = from_dynamic(&white, ImageMode::RgbPure);
        assert!(q.planes()[1..].iter().flatten().all(|v| *v == 1.0));
        assert!(q.planes()[0].iter().all(|v| *v == 0.0));
        assert_eq!((q.height(), q.width()), (2, 3));
    }

    #[test]
    fn sixteen_bit_and_alpha() {
        let buf: ImageBuffer<Rgba<u16>, Vec<u16>> = ImageBuffer::from_pixel(1, 1, Rgba([65535, 0, 32768, 16384]));
        let q = from_dynamic(&DynamicImage::ImageRgba16(buf), ImageMode::RgbaFull);
        assert_eq!(q.get(1, 0, 0), 1.0);
        assert!((q.get(3, 0, 0) - 32768.0 / 65535.0).abs() < 1e-6);
        assert!((q.get(0, 0, 0) - 16384.0 / 65535.0).abs() < 1e-6);
    }

    #[test]
    fn pixel_orientation() {
        let mut buf = ImageBuffer::from_pixel(4, 2, Rgb([0u8, 0, 0]));
        buf.put_pixel(3, 1, Rgb([255, 0, 0]));
        let q = from_dynamic(&DynamicImage::ImageRgb8(buf), ImageMode::RgbPure);
        assert_eq!(q.get(1, 1, 3), 1.0);
        assert_eq!(q.get(1, 0, 3), 0.0);
    }
}
