//! `A x = b` and `A* z = c` from a single tridiagonalization started at
//! `p_1 = r_0 / β` and `q_1 = s_0 / γ` with `s_0 = c - A* z_0`.

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;
use crate::vector::QuatVector;

use super::engine::{run, Method, SideSpec};
use super::{check_system, Clock, NoClock, ResidualMode, SolveOptions, SolveReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairMethod {
    /// `T_m y = β e_1` and `T_m* h = γ e_1`.
    Galerkin,
    /// Least squares with the augmented `T_m` and `T_m*`.
    #[default]
    MinimumResidual,
}

/// Minimum-residual pair solve. `opts.x0` and `opts.z0` seed the two systems.
pub fn solve_adjoint_pair(
    a: &QuatMatrix,
    b: &QuatVector,
    c: &QuatVector,
    opts: &SolveOptions,
) -> Result<(SolveReport, SolveReport)> {
    solve_adjoint_pair_with(a, b, c, opts, PairMethod::MinimumResidual, &NoClock)
}

pub fn solve_adjoint_pair_with(
    a: &QuatMatrix,
    b: &QuatVector,
    c: &QuatVector,
    opts: &SolveOptions,
    method: PairMethod,
    clock: &dyn Clock,
) -> Result<(SolveReport, SolveReport)> {
    check_system(a, b, opts)?;
    if c.len() != a.rows() {
        return Err(Error::dim("solve_adjoint_pair: right-hand side c", a.rows(), c.len()));
    }
    let (method, default_mode) = match method {
        PairMethod::Galerkin => (Method::Galerkin, ResidualMode::Recomputed),
        PairMethod::MinimumResidual => (Method::MinRes, ResidualMode::Recurrence),
    };
    let mode = opts.residual_mode.unwrap_or(default_mode);
    let primal = SideSpec {
        method,
        rhs: b,
        x0: opts.x0.as_ref(),
        mode,
    };
    let adjoint = SideSpec {
        method,
        rhs: c,
        x0: opts.z0.as_ref(),
        mode,
    };
    let (x, z) = run(a, Some(primal), Some(adjoint), None, opts, clock)?;
    Ok((x.expect("primal side requested"), z.expect("adjoint side requested")))
}
