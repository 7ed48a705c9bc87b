//! The `qcg` binary end to end.

use std::path::Path;
use std::process::Command;

use qcg::png_io::save_png;
use qcg::runner::bundled_test_image;
use qcg_core::image::{ImageMode, QuatImage};

fn qcg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcg"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("exp.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn csv_rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn summary(dir: &Path) -> toml::Table {
    std::fs::read_to_string(dir.join("summary.toml")).unwrap().parse().unwrap()
}

#[test]
fn random_dense_run_writes_history_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "problem = \"random_dense\"\nn = 16\nseed = 3\nsolvers = [\"qnherqr\"]\nout = \"out\"\n",
    );
    let status = qcg().args(["run", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let out = dir.path().join("out");
    let (header, rows) = csv_rows(&out.join("qnherqr.csv"));
    assert_eq!(header, "iter,rr,wall_seconds");
    assert!(rows.last().unwrap()[1] <= 1e-6);
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1]));
    let s = summary(&out);
    assert_eq!(s["problem"].as_str(), Some("random_dense"));
    assert_eq!(s["qnherqr"]["status"].as_str(), Some("converged"));
    assert!(s["qnherqr"]["final_rr"].as_float().unwrap() <= 1e-6);
}

#[test]
fn same_seed_gives_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"random_dense\"\nn = 12\nseed = 9\n");
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let status = qcg()
            .args(["run", "--config"])
            .arg(&cfg)
            .args(["--out", name])
            .current_dir(dir.path())
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        let (_, rows) = csv_rows(&dir.path().join(name).join("qnherlq.csv"));
        runs.push(rows.iter().map(|r| (r[0], r[1])).collect::<Vec<_>>());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn maxit_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"random_dense\"\nn = 32\nmaxit = 3\nout = \"o\"\n");
    let status = qcg().args(["run", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let s = summary(&dir.path().join("o"));
    assert_eq!(s["qnherlq"]["status"].as_str(), Some("maxit"));
}

#[test]
fn bad_config_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "problem = \"random_dense\"\nunknown_key = 1\n");
    let out = qcg().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn multichannel_deblur_improves_psnr() {
    let dir = tempfile::tempdir().unwrap();
    let big = bundled_test_image(ImageMode::RgbPure);
    let mut small = QuatImage::zeros(12, 12, ImageMode::RgbPure);
    for p in 1..4 {
        for r in 0..12 {
            for c in 0..12 {
                small.set(p, r, c, big.get(p, 2 * r, 2 * c));
            }
        }
    }
    save_png(&small, dir.path().join("small.png")).unwrap();
    let cfg = write_config(
        dir.path(),
        "problem = \"blur_multichannel\"\nimage = \"small.png\"\nsolvers = [\"qnherqr\"]\nr = 3\ns = 3\nout = \"o\"\n",
    );
    let status = qcg().args(["run", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let out = dir.path().join("o");
    let s = summary(&out);
    let t = &s["qnherqr"];
    assert!(t["psnr_restored"].as_float().unwrap() > t["psnr_blurred"].as_float().unwrap());
    for f in ["truth.png", "blurred.png", "restored_qnherqr.png"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
}

#[test]
fn verify_passes_and_detects_corruption() {
    let ok = qcg().args(["verify", "--n", "8"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text.lines().all(|l| !l.starts_with("FAIL")));
    assert!(text.contains("PASS"));

    let bad = qcg().args(["verify", "--n", "8", "--corrupt"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL jrs_structure"));
}
