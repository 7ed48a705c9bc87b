//! Experiment configuration: a flat TOML table.
//!
//! ```toml
//! problem = "random_dense"
//! solvers = ["qnherlq", "qnherqr"]
//! n = 16
//! seed = 3
//! tol = 1e-6
//! out = "runs/random16"
//! ```

use std::path::{Path, PathBuf};

use qcg_core::image::ImageMode;
use qcg_core::solvers::{ResidualMode, SolverKind};
use serde::{Deserialize, Serialize};

use crate::error::{QcgError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    MatrixMarket,
    LorenzFilter,
    BlurMultichannel,
    BlurMotion,
    RandomDense,
}

impl ProblemKind {
    pub fn is_imaging(self) -> bool {
        matches!(self, Self::BlurMultichannel | Self::BlurMotion)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<String>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_maxit")]
    pub maxit: usize,
    /// `recomputed` or `recurrence`; solver default when absent.
    #[serde(default)]
    pub residual_mode: Option<String>,
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,

    /// System size for `random_dense` and `lorenz_filter`.
    #[serde(default)]
    pub n: Option<usize>,
    /// Matrix Market file.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// Plane factors `(s1, s2, s3)` for external and motion-blur matrices.
    #[serde(default)]
    pub scales: Option<[f64; 3]>,

    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_r")]
    pub r: usize,
    #[serde(default = "default_s")]
    pub s: usize,
    #[serde(default = "default_len")]
    pub len: usize,
    /// PNG for imaging problems; the bundled 32x32 test image when absent.
    #[serde(default)]
    pub image: Option<PathBuf>,
    /// `rgb` or `rgba`.
    #[serde(default = "default_image_mode")]
    pub image_mode: String,

    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub q: Option<usize>,
    #[serde(default)]
    pub noise_sigma: Option<f64>,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_solvers() -> Vec<String> {
    vec!["qnherlq".into(), "qnherqr".into()]
}
fn default_tol() -> f64 {
    1e-6
}
fn default_maxit() -> usize {
    5000
}
fn default_out() -> PathBuf {
    PathBuf::from("qcg-out")
}
fn default_sigma() -> f64 {
    1.0
}
fn default_r() -> usize {
    4
}
fn default_s() -> usize {
    7
}
fn default_len() -> usize {
    9
}
fn default_image_mode() -> String {
    "rgb".into()
}
fn default_t_end() -> f64 {
    30.0
}
fn default_dt() -> f64 {
    0.01
}

impl ExperimentConfig {
    /// Defaults for `problem` with nothing else set.
    pub fn new(problem: ProblemKind) -> Self {
        toml::from_str(&format!("problem = \"{}\"", problem_name(problem))).expect("defaults parse")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| QcgError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a file; relative paths inside it resolve against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| QcgError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.path, &mut cfg.image].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if cfg.out.is_relative() {
            cfg.out = base.join(&cfg.out);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.solvers.is_empty() {
            return Err(QcgError::Config("at least one solver is required".into()));
        }
        self.solver_kinds()?;
        self.residual_mode()?;
        self.image_mode()?;
        if !(self.tol > 0.0) {
            return Err(QcgError::Config("tol must be positive".into()));
        }
        if self.maxit == 0 {
            return Err(QcgError::Config("maxit must be at least 1".into()));
        }
        if self.problem == ProblemKind::MatrixMarket && self.path.is_none() {
            return Err(QcgError::Config("matrix_market needs 'path'".into()));
        }
        Ok(())
    }

    pub fn solver_kinds(&self) -> Result<Vec<SolverKind>> {
        self.solvers
            .iter()
            .map(|s| SolverKind::from_name(s).ok_or_else(|| QcgError::Config(format!("unknown solver '{s}'"))))
            .collect()
    }

    pub fn residual_mode(&self) -> Result<Option<ResidualMode>> {
        match self.residual_mode.as_deref() {
            None => Ok(None),
            Some("recomputed") => Ok(Some(ResidualMode::Recomputed)),
            Some("recurrence") => Ok(Some(ResidualMode::Recurrence)),
            Some(other) => Err(QcgError::Config(format!("unknown residual_mode '{other}'"))),
        }
    }

    pub fn image_mode(&self) -> Result<ImageMode> {
        match self.image_mode.as_str() {
            "rgb" => Ok(ImageMode::RgbPure),
            "rgba" => Ok(ImageMode::RgbaFull),
            other => Err(QcgError::Config(format!("unknown image_mode '{other}'"))),
        }
    }
}

pub fn problem_name(p: ProblemKind) -> &'static str {
    match p {
        ProblemKind::MatrixMarket => "matrix_market",
        ProblemKind::LorenzFilter => "lorenz_filter",
        ProblemKind::BlurMultichannel => "blur_multichannel",
        ProblemKind::BlurMotion => "blur_motion",
        ProblemKind::RandomDense => "random_dense",
    }
}
