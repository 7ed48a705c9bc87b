//! Matrix Market and PNG files on disk.

use proptest::prelude::*;
use qcg::mtx::{load_matrix_market, parse_matrix_market, to_matrix_market};
use qcg::png_io::{load_png, save_png};
use qcg::QcgError;
use qcg_core::image::{ImageMode, QuatImage};
use qcg_core::matrix::CsrMatrix;

#[test]
fn matrix_market_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = CsrMatrix::from_triplets(3, 4, &[(0, 0, 1.5), (1, 3, -2.0), (2, 1, 1e-9), (2, 2, 7.0)]).unwrap();
    let path = dir.path().join("a.mtx");
    std::fs::write(&path, to_matrix_market(&a)).unwrap();
    let back = load_matrix_market(&path).unwrap();
    assert_eq!(back.rows(), 3);
    assert_eq!(back.cols(), 4);
    assert_eq!(back.to_dense(), a.to_dense());
}

#[test]
fn symmetric_file_expands_lower_triangle() {
    let text = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 3\n1 1 2.0\n3 1 -1.0\n3 3 4.0\n";
    let a = parse_matrix_market(text).unwrap();
    assert_eq!(a.get(0, 2), -1.0);
    assert_eq!(a.get(2, 0), -1.0);
    assert_eq!(a.nnz(), 4);
}

#[test]
fn missing_file_reports_path() {
    let err = load_matrix_market("/nonexistent/dir/a.mtx").unwrap_err();
    assert!(matches!(err, QcgError::Io { .. }));
    assert!(err.to_string().contains("/nonexistent/dir/a.mtx"));
}

#[test]
fn malformed_entry_reports_line() {
    let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 3.0\n";
    match parse_matrix_market(text).unwrap_err() {
        QcgError::Parse { line, .. } => assert_eq!(line, 3),
        other => panic!("unexpected error {other}"),
    }
}

fn image_from(mode: ImageMode, h: usize, w: usize, data: &[f64]) -> QuatImage {
    let mut img = QuatImage::zeros(h, w, mode);
    let first = if mode == ImageMode::RgbaFull { 0 } else { 1 };
    let mut it = data.iter().cycle();
    for plane in first..4 {
        for r in 0..h {
            for c in 0..w {
                img.set(plane, r, c, *it.next().unwrap());
            }
        }
    }
    img
}

fn max_diff(a: &QuatImage, b: &QuatImage) -> f64 {
    a.planes()
        .iter()
        .zip(b.planes())
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn png_round_trip_within_one_level(
        h in 1usize..9,
        w in 1usize..9,
        rgba in any::<bool>(),
        data in prop::collection::vec(0.0f64..=1.0, 1..64),
    ) {
        let mode = if rgba { ImageMode::RgbaFull } else { ImageMode::RgbPure };
        let img = image_from(mode, h, w, &data);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.png");
        save_png(&img, &path).unwrap();
        let back = load_png(&path, mode).unwrap();
        prop_assert_eq!((back.height(), back.width()), (h, w));
        prop_assert!(max_diff(&img, &back) <= 1.0 / 255.0 + 1e-12);
    }
}

#[test]
fn png_out_of_range_values_are_clamped() {
    let img = image_from(ImageMode::RgbPure, 2, 2, &[-0.5, 1.7, 0.25]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.png");
    save_png(&img, &path).unwrap();
    let back = load_png(&path, ImageMode::RgbPure).unwrap();
    assert!(back.is_valid());
    assert!(max_diff(&img.clamped(), &back) <= 1.0 / 255.0);
}
