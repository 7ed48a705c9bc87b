//! Minimum-residual updates (QNHERQR).
//!
//! Column `k` of the augmented tridiagonal holds `(γ_{k-1}, α_k, β_k)` in rows
//! `k-1, k, k+1`. Applying the two previous column rotations and a new one leaves
//! the band `(ε_{k-2}, δ_{k-1}, σ_k)` of `R`, and the rotated right-hand side
//! splits into `τ_k = c_k ρ_{k-1}` and `ρ_k = -conj(s_k) ρ_{k-1}`, with `|ρ_k|` the
//! residual norm. The search directions `N = Q R^{-1}` obey
//! `n_k = (q_k - n_{k-2} ε_{k-2} - n_{k-1} δ_{k-1}) σ_k^{-1}` and the iterate moves by
//! `n_k τ_k`.

use crate::error::Result;
use crate::givens::{quat_givens, GivensQ};
use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;
use crate::vector::QuatVector;

use super::engine::{run, Method, SideSpec};
use super::{check_system, Clock, NoClock, ResidualMode, SolveOptions, SolveReport};

/// Band entries and right-hand side produced by one column update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrColumn {
    pub eps: Quaternion,
    pub delta: Quaternion,
    pub sigma: Quaternion,
    pub rotation: GivensQ,
    pub tau: Quaternion,
    pub rho: Quaternion,
}

/// Scalar state of the QR recurrence: the last two rotations and `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrScalars {
    g_prev2: GivensQ,
    g_prev: GivensQ,
    rho: Quaternion,
}

impl QrScalars {
    /// Starts with `ρ_0 = β` and identity rotations.
    pub fn new(beta: f64) -> Self {
        Self {
            g_prev2: GivensQ::IDENTITY,
            g_prev: GivensQ::IDENTITY,
            rho: Quaternion::real(beta),
        }
    }

    pub fn rho(&self) -> Quaternion {
        self.rho
    }

    /// Processes the column `(super_prev, diag, sub)`. The new rotation takes the
    /// zero branch `c = 0, s = 1, σ = sub` when the rotated diagonal vanishes.
    pub fn update(&mut self, super_prev: f64, diag: Quaternion, sub: f64) -> Result<QrColumn> {
        let (eps, gamma_hat) = self.g_prev2.apply(Quaternion::ZERO, Quaternion::real(super_prev));
        let (delta, alpha_tilde) = self.g_prev.apply(gamma_hat, diag);
        let (g, sigma) = quat_givens(alpha_tilde, Quaternion::real(sub))?;
        let (tau, rho) = g.apply(self.rho, Quaternion::ZERO);
        self.g_prev2 = self.g_prev;
        self.g_prev = g;
        self.rho = rho;
        Ok(QrColumn {
            eps,
            delta,
            sigma,
            rotation: g,
            tau,
            rho,
        })
    }
}

/// Scalar recurrence plus the two direction vectors.
#[derive(Debug, Clone)]
pub(crate) struct QrSide {
    scalars: QrScalars,
    n_prev2: QuatVector,
    n_prev: QuatVector,
}

impl QrSide {
    pub(crate) const VECTORS: u64 = 2;

    pub(crate) fn new(n: usize, beta: f64) -> Self {
        Self {
            scalars: QrScalars::new(beta),
            n_prev2: QuatVector::zeros(n),
            n_prev: QuatVector::zeros(n),
        }
    }

    /// Folds in one column and moves `x`; returns `|ρ_k|`.
    pub(crate) fn column(
        &mut self,
        super_prev: f64,
        diag: Quaternion,
        sub: f64,
        basis: &QuatVector,
        x: &mut QuatVector,
    ) -> Result<f64> {
        let col = self.scalars.update(super_prev, diag, sub)?;
        let sigma_inv = col.sigma.inv()?;
        // n_{k-2} buffer becomes n_k.
        let nk = &mut self.n_prev2;
        nk.scale_right(-col.eps);
        nk.axpy(1.0, basis)?;
        nk.add_scaled_right(&self.n_prev, -col.delta)?;
        nk.scale_right(sigma_inv);
        core::mem::swap(&mut self.n_prev2, &mut self.n_prev);
        x.add_scaled_right(&self.n_prev, col.tau)?;
        Ok(col.rho.norm())
    }
}

pub fn qnherqr_solve(a: &QuatMatrix, b: &QuatVector, opts: &SolveOptions) -> Result<SolveReport> {
    qnherqr_solve_timed(a, b, opts, &NoClock)
}

pub fn qnherqr_solve_timed(
    a: &QuatMatrix,
    b: &QuatVector,
    opts: &SolveOptions,
    clock: &dyn Clock,
) -> Result<SolveReport> {
    check_system(a, b, opts)?;
    let spec = SideSpec {
        method: Method::MinRes,
        rhs: b,
        x0: opts.x0.as_ref(),
        mode: opts.residual_mode.unwrap_or(ResidualMode::Recurrence),
    };
    let (report, _) = run(a, Some(spec), None, opts.q1.as_ref(), opts, clock)?;
    Ok(report.expect("primal side requested"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QuatDense;
    use crate::problems::random::rng;
    use alloc::vec::Vec;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn first_column_without_coupling() {
        let mut s = QrScalars::new(2.0);
        let col = s.update(0.0, Quaternion::real(3.0), 0.0).unwrap();
        assert_eq!(col.rotation.c, 1.0);
        assert_eq!(col.sigma, Quaternion::real(3.0));
        assert_eq!(col.tau, Quaternion::real(2.0));
        assert_eq!(col.rho, Quaternion::ZERO);
    }

    #[test]
    fn zero_branch() {
        let mut s = QrScalars::new(1.0);
        let col = s.update(0.0, Quaternion::ZERO, 0.7).unwrap();
        assert_eq!(col.rotation, GivensQ { c: 0.0, s: Quaternion::ONE });
        assert_eq!(col.sigma, Quaternion::real(0.7));
        assert_eq!(col.tau, Quaternion::ZERO);
        assert_eq!(col.rho, Quaternion::real(-1.0));
    }

    // Rebuild G_m ... G_1 T~_m densely and compare with the recorded band.
    #[test]
    fn rotations_triangularize_the_augmented_matrix() {
        let m = 6;
        let mut r = rng(77);
        let mut nq = || Quaternion::new(
            StandardNormal.sample(&mut r),
            StandardNormal.sample(&mut r),
            StandardNormal.sample(&mut r),
            StandardNormal.sample(&mut r),
        );
        let alpha: Vec<Quaternion> = (0..m).map(|_| nq()).collect();
        let beta: Vec<f64> = (0..m).map(|i| 0.5 + i as f64 * 0.3).collect();
        let gamma: Vec<f64> = (0..m).map(|i| 1.5 - i as f64 * 0.1).collect();
        let mut t = QuatDense::zeros(m + 1, m);
        for k in 0..m {
            t.set(k, k, alpha[k]);
            t.set(k + 1, k, Quaternion::real(beta[k]));
            if k + 1 < m {
                t.set(k, k + 1, Quaternion::real(gamma[k]));
            }
        }
        let mut s = QrScalars::new(1.0);
        let mut cols = Vec::new();
        for k in 0..m {
            let sp = if k == 0 { 0.0 } else { gamma[k - 1] };
            cols.push(s.update(sp, alpha[k], beta[k]).unwrap());
        }
        let mut r_mat = t.clone();
        for (k, col) in cols.iter().enumerate() {
            for c in 0..m {
                let (a, b) = col.rotation.apply(r_mat.get(k, c), r_mat.get(k + 1, c));
                r_mat.set(k, c, a);
                r_mat.set(k + 1, c, b);
            }
        }
        for row in 0..=m {
            for c in 0..m {
                let v = r_mat.get(row, c);
                if row > c {
                    assert!(v.norm() < 1e-12, "({row},{c}) = {v}");
                }
            }
        }
        for (k, col) in cols.iter().enumerate() {
            assert!((r_mat.get(k, k) - col.sigma).norm() < 1e-12);
            if k >= 1 {
                assert!((r_mat.get(k - 1, k) - col.delta).norm() < 1e-12);
            }
            if k >= 2 {
                assert!((r_mat.get(k - 2, k) - col.eps).norm() < 1e-12);
            }
            let cg = col.rotation;
            assert!((cg.c * cg.c + cg.s.norm_sqr() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
    }
}
