//! Starting vector that makes the tridiagonal factor real symmetric.
//!
//! With `A = U Σ V*`, choosing `q_1 = V U* p_1` gives a `T_m` with real diagonal and
//! `β_i = γ_i`. `V U*` is the unitary polar factor of `A*`, obtained here by the
//! Newton iteration `X <- (X + X^{-T}) / 2` on `R(A*) = R(A)^T`. The polar factor of
//! a real representation is again one, so the result maps back to a quaternion
//! matrix.

use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::matrix::QuatMatrix;
use crate::real_rep::{from_real_rep, real_rep, RealMatrix};
use crate::vector::QuatVector;

const MAX_ITERS: usize = 100;

/// Orthogonal polar factor of a square invertible real matrix.
pub fn polar_factor(x0: &RealMatrix) -> Result<RealMatrix> {
    let mut x = x0.clone();
    let mut prev = f64::INFINITY;
    for _ in 0..MAX_ITERS {
        let inv_t = Lu::new(&x)?.inverse()?.transpose();
        let mut next = x.add(&inv_t)?;
        next.scale(0.5);
        let delta = next.sub(&x)?.max_abs();
        x = next;
        // Quadratic convergence ends at rounding level; stop there or on stagnation.
        if delta <= 16.0 * f64::EPSILON || (delta < 1e-9 && delta >= prev) {
            return Ok(x);
        }
        prev = delta;
    }
    Err(Error::Numerical("polar iteration did not converge"))
}

/// `q_1 = V U* p_1` for `A = U Σ V*`.
pub fn symmetric_initial_q1(a: &QuatMatrix, p1: &QuatVector) -> Result<QuatVector> {
    if a.rows() != a.cols() {
        return Err(Error::dim("symmetric_initial_q1", a.rows(), a.cols()));
    }
    if p1.len() != a.rows() {
        return Err(Error::dim("symmetric_initial_q1", a.rows(), p1.len()));
    }
    let w = polar_factor(&real_rep(a).transpose())?;
    from_real_rep(&w)?.matvec(p1)
}
