//! Iterative solvers for square quaternion systems `A x = b`.
//!
//! * [`qnherlq_solve`]: Galerkin condition `r_m ⊥ span(p_1..p_m)`, with the
//!   tridiagonal system solved through an LQ factorization updated by row
//!   rotations.
//! * [`qnherqr_solve`]: minimum residual over `x_0 + span(q_1..q_m)`, with the
//!   augmented tridiagonal least squares problem solved through a QR
//!   factorization updated by column rotations.
//! * [`solve_adjoint_pair`]: one tridiagonalization pass solving `A x = b` and
//!   `A* z = c` together.
//! * [`qgmres_solve`]: full quaternion GMRES, as a baseline.
//!
//! The relative residual is `|b - A x| / |b|` (absolute when `b = 0`).

mod adjoint;
mod engine;
mod gmres;
mod lq;
mod qr;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::ssy::DEFAULT_BREAKDOWN_TOL;
use crate::vector::QuatVector;

pub use adjoint::{solve_adjoint_pair, solve_adjoint_pair_with, PairMethod};
pub use gmres::{qgmres_solve, qgmres_solve_timed};
pub use lq::{lq_rotation, qnherlq_solve, qnherlq_solve_timed, LqScalars, LqStep};
pub use qr::{qnherqr_solve, qnherqr_solve_timed, QrColumn, QrScalars};

/// How the stopping quantity is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualMode {
    /// `|b - A x_m|` evaluated every iteration, one extra product per step.
    Recomputed,
    /// The residual norm carried by the recurrences, confirmed once by an explicit
    /// evaluation when it first meets the tolerance.
    Recurrence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub maxit: usize,
    pub x0: Option<QuatVector>,
    /// Initial guess for the adjoint system in pair solves.
    pub z0: Option<QuatVector>,
    /// Relative breakdown threshold for the tridiagonalization.
    pub tau_b: f64,
    /// `None` selects the solver default: recomputed for QNHERLQ, recurrence for
    /// QNHERQR and QGMRES.
    pub residual_mode: Option<ResidualMode>,
    /// Second starting vector of the tridiagonalization; defaults to `r_0`.
    pub q1: Option<QuatVector>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            maxit: 5000,
            x0: None,
            z0: None,
            tau_b: DEFAULT_BREAKDOWN_TOL,
            residual_mode: None,
            q1: None,
        }
    }
}

impl SolveOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_maxit(mut self, maxit: usize) -> Self {
        self.maxit = maxit;
        self
    }

    pub fn with_residual_mode(mut self, mode: ResidualMode) -> Self {
        self.residual_mode = Some(mode);
        self
    }

    pub fn with_x0(mut self, x0: QuatVector) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn with_q1(mut self, q1: QuatVector) -> Self {
        self.q1 = Some(q1);
        self
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Parameter("tol must be positive"));
        }
        if self.maxit == 0 {
            return Err(Error::Parameter("maxit must be at least 1"));
        }
        if !(self.tau_b >= 0.0) {
            return Err(Error::Parameter("breakdown tolerance must be nonnegative"));
        }
        for v in [&self.x0, &self.z0, &self.q1].into_iter().flatten() {
            if v.len() != n {
                return Err(Error::dim("solver option vector", n, v.len()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The stopping test held and was confirmed by an explicit residual.
    Converged,
    /// The recurrence terminated because the solution lies in the current search
    /// space; the explicit residual meets the tolerance.
    BreakdownExact,
    /// The recurrence terminated without a verified solution.
    Breakdown,
    MaxIt,
}

impl SolveStatus {
    pub fn is_success(self) -> bool {
        matches!(self, Self::Converged | Self::BreakdownExact)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::BreakdownExact => "breakdown_exact",
            Self::Breakdown => "breakdown",
            Self::MaxIt => "maxit",
        }
    }
}

/// Operator applications and workspace used by one solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    /// `A x` products inside the iteration.
    pub matvecs: u64,
    /// `A* x` products inside the iteration.
    pub adj_matvecs: u64,
    /// Products spent on explicit residuals.
    pub residual_matvecs: u64,
    /// Length-`n` vectors allocated by the solve.
    pub workspace_vectors: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub x: QuatVector,
    pub status: SolveStatus,
    pub iters: usize,
    /// Stopping quantity per iteration.
    pub rr_history: Vec<f64>,
    /// Recurrence residual estimate per iteration, normalized like the stopping
    /// quantity (`NaN` when undefined at that step).
    pub rr_estimate_history: Vec<f64>,
    /// Explicit relative residual per iteration, in recomputed mode only.
    pub rr_true_history: Vec<f64>,
    /// Elapsed seconds at the end of each iteration.
    pub wall_history: Vec<f64>,
    /// Explicit relative residual of the returned iterate.
    pub final_rr: f64,
    pub wall_seconds: f64,
    pub ops: OpCounts,
}

/// Time source for reports. The core crate has no clock of its own.
pub trait Clock {
    /// Seconds since an arbitrary fixed origin.
    fn now(&self) -> f64;
}

/// Clock that always reads zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Qnherlq,
    Qnherqr,
    Qgmres,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [Self::Qnherlq, Self::Qnherqr, Self::Qgmres];

    pub fn name(self) -> &'static str {
        match self {
            Self::Qnherlq => "qnherlq",
            Self::Qnherqr => "qnherqr",
            Self::Qgmres => "qgmres",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn solve(self, a: &QuatMatrix, b: &QuatVector, opts: &SolveOptions, clock: &dyn Clock) -> Result<SolveReport> {
        match self {
            Self::Qnherlq => qnherlq_solve_timed(a, b, opts, clock),
            Self::Qnherqr => qnherqr_solve_timed(a, b, opts, clock),
            Self::Qgmres => qgmres_solve_timed(a, b, opts, clock),
        }
    }
}

pub(crate) fn check_system(a: &QuatMatrix, b: &QuatVector, opts: &SolveOptions) -> Result<()> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::dim("solver: square matrix", n, a.cols()));
    }
    if b.len() != n {
        return Err(Error::dim("solver: right-hand side", n, b.len()));
    }
    opts.validate(n)
}
