//! Builds a configured problem, runs the selected solvers and writes artifacts.
//!
//! Per solver the output directory receives `<solver>.csv` with columns
//! `iter,rr,wall_seconds`; the run gets one `summary.toml`. Imaging problems also
//! write `truth.png`, `blurred.png` and `restored_<solver>.png`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use qcg_core::image::{psnr, rel_error, ssim, ImageMode, QuatImage};
use qcg_core::problems::blur::{motion_blur_matrix, multichannel_blur, scale_to_quaternion, EXTERNAL_SCALES, MULTICHANNEL_SCALES};
use qcg_core::problems::filter::{build_filter_system, default_noise_sigma};
use qcg_core::problems::lorenz::lorenz_trajectory;
use qcg_core::problems::random::random_system;
use qcg_core::solvers::{SolveOptions, SolveReport, SolveStatus, SolverKind};
use qcg_core::{QuatMatrix, QuatVector, Quaternion};

use crate::clock::MonotonicClock;
use crate::config::{problem_name, ExperimentConfig, ProblemKind};
use crate::error::{QcgError, Result};
use crate::mtx::load_matrix_market;
use crate::png_io::{from_dynamic, load_png, save_png};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;
pub const EXIT_BREAKDOWN_EXACT: i32 = 4;

const BUNDLED_IMAGE: &[u8] = include_bytes!("../assets/test32.png");

/// The bundled 32x32 RGB test image.
pub fn bundled_test_image(mode: ImageMode) -> QuatImage {
    let img = image::load_from_memory(BUNDLED_IMAGE).expect("bundled image decodes");
    from_dynamic(&img, mode)
}

/// Observation `b = A x_true` for an operator whose planes are `A0 μ_p`.
#[derive(Debug, Clone)]
pub struct ImagingSetup {
    pub truth: QuatImage,
    /// `A0 x_true`, recovered from `b` as `μ^{-1} b`, clamped.
    pub blurred: QuatImage,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub a: QuatMatrix,
    pub b: QuatVector,
    pub x_true: Option<QuatVector>,
    pub imaging: Option<ImagingSetup>,
}

fn left_scaled(x: &QuatVector, q: Quaternion) -> QuatVector {
    QuatVector::from_quats(&x.to_quats().into_iter().map(|v| q * v).collect::<Vec<_>>())
}

/// Blurs `truth` with `A = A0 (1, s1, s2, s3)`.
pub fn imaging_problem(a: QuatMatrix, mu: Quaternion, truth: QuatImage) -> Result<Problem> {
    let x = truth.vec();
    let b = a.matvec(&x)?;
    let a0x = left_scaled(&b, mu.inv()?);
    let blurred = QuatImage::unvec(&a0x, truth.height(), truth.width(), truth.mode())?.clamped();
    Ok(Problem {
        a,
        b,
        x_true: Some(x),
        imaging: Some(ImagingSetup { truth, blurred }),
    })
}

fn square_image(cfg: &ExperimentConfig) -> Result<QuatImage> {
    let mode = cfg.image_mode()?;
    let img = match &cfg.image {
        Some(p) => load_png(p, mode)?,
        None => bundled_test_image(mode),
    };
    if img.height() != img.width() {
        return Err(QcgError::Config(format!(
            "blur problems need a square image, got {}x{}",
            img.height(),
            img.width()
        )));
    }
    Ok(img)
}

fn ones_system(a: QuatMatrix) -> Result<Problem> {
    let x = QuatVector::filled(a.cols(), Quaternion::ONE);
    let b = a.matvec(&x)?;
    Ok(Problem {
        a,
        b,
        x_true: Some(x),
        imaging: None,
    })
}

pub fn build_problem(cfg: &ExperimentConfig) -> Result<Problem> {
    match cfg.problem {
        ProblemKind::RandomDense => {
            let sys = random_system(cfg.n.unwrap_or(16), cfg.seed);
            Ok(Problem {
                a: sys.a,
                b: sys.b,
                x_true: Some(sys.x_true),
                imaging: None,
            })
        }
        ProblemKind::MatrixMarket => {
            let path = cfg.path.as_ref().ok_or_else(|| QcgError::Config("matrix_market needs 'path'".into()))?;
            let a0 = load_matrix_market(path)?;
            let [s1, s2, s3] = cfg.scales.unwrap_or(EXTERNAL_SCALES);
            ones_system(scale_to_quaternion(&a0, s1, s2, s3)?)
        }
        ProblemKind::LorenzFilter => {
            let n = cfg.n.unwrap_or(100);
            if n == 0 {
                return Err(QcgError::Config("n must be positive".into()));
            }
            let p = cfg.p.unwrap_or(n - 1);
            let q = cfg.q.unwrap_or(n - 1);
            if p != q {
                return Err(QcgError::Config("the filter system must be square (p = q)".into()));
            }
            let series = lorenz_trajectory(cfg.t_end, cfg.dt, (2.0, 3.0, 4.0))?;
            let sigma = cfg.noise_sigma.unwrap_or_else(|| default_noise_sigma(&series));
            let f = build_filter_system(&series, sigma, p, q, cfg.seed)?;
            Ok(Problem {
                a: f.x,
                b: f.y,
                x_true: f.w_true,
                imaging: None,
            })
        }
        ProblemKind::BlurMultichannel => {
            let img = square_image(cfg)?;
            let a = multichannel_blur(img.height(), cfg.sigma, cfg.r, cfg.s)?;
            imaging_problem(a, Quaternion::from_array(MULTICHANNEL_SCALES), img)
        }
        ProblemKind::BlurMotion => {
            let img = square_image(cfg)?;
            let [s1, s2, s3] = cfg.scales.unwrap_or(EXTERNAL_SCALES);
            let a = scale_to_quaternion(&motion_blur_matrix(img.height(), cfg.len)?, s1, s2, s3)?;
            imaging_problem(a, Quaternion::new(1.0, s1, s2, s3), img)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageScores {
    pub psnr_blurred: f64,
    pub psnr_restored: f64,
    pub ssim_blurred: f64,
    pub ssim_restored: f64,
    pub rel_error_restored: f64,
    pub samples_per_pixel: usize,
}

#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub kind: SolverKind,
    pub report: SolveReport,
    pub scores: Option<ImageScores>,
    pub restored: Option<QuatImage>,
    /// Relative error against the known solution, when there is one.
    pub solution_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub outcomes: Vec<SolverOutcome>,
    pub exit_code: i32,
    pub out_dir: PathBuf,
}

/// 0 when every solver converged, 2 when any did not, otherwise 4 when any
/// stopped on an exact breakdown.
pub fn exit_code(statuses: &[SolveStatus]) -> i32 {
    if statuses.iter().any(|s| !s.is_success()) {
        EXIT_NOT_CONVERGED
    } else if statuses.contains(&SolveStatus::BreakdownExact) {
        EXIT_BREAKDOWN_EXACT
    } else {
        EXIT_OK
    }
}

pub fn score(setup: &ImagingSetup, x: &QuatVector) -> Result<(ImageScores, QuatImage)> {
    let t = &setup.truth;
    let restored = QuatImage::unvec(x, t.height(), t.width(), t.mode())?.clamped();
    let scores = ImageScores {
        psnr_blurred: psnr(t, &setup.blurred)?,
        psnr_restored: psnr(t, &restored)?,
        ssim_blurred: ssim(t, &setup.blurred)?,
        ssim_restored: ssim(t, &restored)?,
        rel_error_restored: rel_error(t, &restored)?,
        samples_per_pixel: t.mode().samples_per_pixel(),
    };
    Ok((scores, restored))
}

pub fn solve_options(cfg: &ExperimentConfig) -> Result<SolveOptions> {
    let mut opts = SolveOptions::default().with_tol(cfg.tol).with_maxit(cfg.maxit);
    opts.residual_mode = cfg.residual_mode()?;
    Ok(opts)
}

pub fn convergence_csv(report: &SolveReport) -> String {
    let mut s = String::from("iter,rr,wall_seconds\n");
    for (k, (rr, wall)) in report.rr_history.iter().zip(&report.wall_history).enumerate() {
        let _ = writeln!(s, "{},{:e},{:.6}", k + 1, rr, wall);
    }
    s
}

fn summary(cfg: &ExperimentConfig, problem: &Problem, outcomes: &[SolverOutcome]) -> toml::Table {
    let mut root = toml::Table::new();
    root.insert("problem".into(), problem_name(cfg.problem).into());
    root.insert("dimension".into(), (problem.a.rows() as i64).into());
    root.insert("seed".into(), (cfg.seed as i64).into());
    root.insert("tol".into(), cfg.tol.into());
    root.insert("maxit".into(), (cfg.maxit as i64).into());
    for o in outcomes {
        let r = &o.report;
        let mut t = toml::Table::new();
        t.insert("status".into(), r.status.as_str().into());
        t.insert("iters".into(), (r.iters as i64).into());
        t.insert("cpu_seconds".into(), r.wall_seconds.into());
        t.insert("final_rr".into(), r.final_rr.into());
        t.insert("matvecs".into(), (r.ops.matvecs as i64).into());
        t.insert("adj_matvecs".into(), (r.ops.adj_matvecs as i64).into());
        t.insert("residual_matvecs".into(), (r.ops.residual_matvecs as i64).into());
        if let Some(e) = o.solution_error {
            t.insert("solution_rel_error".into(), e.into());
        }
        if let Some(s) = &o.scores {
            t.insert("psnr_blurred".into(), s.psnr_blurred.into());
            t.insert("psnr_restored".into(), s.psnr_restored.into());
            t.insert("ssim_blurred".into(), s.ssim_blurred.into());
            t.insert("ssim_restored".into(), s.ssim_restored.into());
            t.insert("rel_error_restored".into(), s.rel_error_restored.into());
            t.insert("psnr_samples_per_pixel".into(), (s.samples_per_pixel as i64).into());
        }
        root.insert(o.kind.name().into(), t.into());
    }
    root
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| QcgError::io(path, e))
}

/// Runs every configured solver on the configured problem and writes artifacts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let problem = build_problem(cfg)?;
    run_problem(cfg, &problem)
}

pub fn run_problem(cfg: &ExperimentConfig, problem: &Problem) -> Result<RunOutcome> {
    let kinds = cfg.solver_kinds()?;
    let opts = solve_options(cfg)?;
    let out = cfg.out.clone();
    std::fs::create_dir_all(&out).map_err(|e| QcgError::io(&out, e))?;
    if let Some(setup) = &problem.imaging {
        save_png(&setup.truth, out.join("truth.png"))?;
        save_png(&setup.blurred, out.join("blurred.png"))?;
    }
    let mut outcomes = Vec::new();
    for kind in kinds {
        let clock = MonotonicClock::new();
        let report = kind.solve(&problem.a, &problem.b, &opts, &clock)?;
        write(&out.join(format!("{}.csv", kind.name())), &convergence_csv(&report))?;
        let solution_error = problem
            .x_true
            .as_ref()
            .map(|x| report.x.sub(x).map(|d| d.norm2() / x.norm2().max(f64::MIN_POSITIVE)))
            .transpose()?;
        let (scores, restored) = match &problem.imaging {
            Some(setup) => {
                let (s, img) = score(setup, &report.x)?;
                save_png(&img, out.join(format!("restored_{}.png", kind.name())))?;
                (Some(s), Some(img))
            }
            None => (None, None),
        };
        outcomes.push(SolverOutcome {
            kind,
            report,
            scores,
            restored,
            solution_error,
        });
    }
    let text = toml::to_string(&summary(cfg, problem, &outcomes)).map_err(|e| QcgError::Config(e.to_string()))?;
    write(&out.join("summary.toml"), &text)?;
    let statuses: Vec<SolveStatus> = outcomes.iter().map(|o| o.report.status).collect();
    Ok(RunOutcome {
        outcomes,
        exit_code: exit_code(&statuses),
        out_dir: out,
    })
}
