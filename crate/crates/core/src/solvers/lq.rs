//! Galerkin updates (QNHERLQ).
//!
//! Row rotations `G_k = [c_k, s_k; conj(s_k), -c_k]` applied from the right turn
//! `T_m` into a lower triangular band with rows `(η_k, δ_k, ν_k)`; the last
//! diagonal entry is left unrotated as `ν'_m`. Forward substitution gives
//! `ζ_k = ν_k^{-1} (β δ_{k1} - η_k ζ_{k-2} - δ_k ζ_{k-1})` and the provisional
//! `ζ~_k` with `ν'_k` in place of `ν_k`. Two iterates are carried: `x~_k`, built
//! from the settled directions `w_k`, and the Galerkin iterate
//! `x_k = x~_{k-1} + w~_k ζ~_k`, whose residual norm is `β_k |e_k* y_k|`.

use crate::error::{Error, Result};
use crate::givens::{quat_givens_row, RowGivens};
use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;
use crate::vector::QuatVector;

use super::engine::{run, Method, SideSpec};
use super::{check_system, Clock, NoClock, ResidualMode, SolveOptions, SolveReport};

/// Rotation `[ν', γ] G = [ν, 0]` with `c = |ν'| / r`, `s = (conj(ν') / |ν'|) γ / r`,
/// `ν = (ν' / |ν'|) r`, `r = sqrt(|ν'|^2 + γ^2)`. For `ν' = 0` it returns
/// `c = 0, s = 1, ν = γ`.
pub fn lq_rotation(nu_prime: Quaternion, gamma: f64) -> Result<(f64, Quaternion, Quaternion)> {
    let (g, nu) = quat_givens_row(nu_prime, Quaternion::real(gamma))?;
    Ok((g.c, g.s, nu))
}

/// Scalars produced by one LQ step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqStep {
    pub nu_prime: Quaternion,
    /// `ζ~_k`, undefined when `ν'_k = 0`.
    pub zeta_tilde: Option<Quaternion>,
    /// Last component of `y_k`, undefined when `ν'_k = 0`.
    pub y_last: Option<Quaternion>,
    pub rotation: RowGivens,
    pub zeta: Quaternion,
}

/// Scalar state of the LQ recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LqScalars {
    beta0: f64,
    k: usize,
    g_prev: RowGivens,
    delta_tilde: f64,
    eta: Quaternion,
    zeta_prev2: Quaternion,
    zeta_prev: Quaternion,
}

impl LqScalars {
    pub fn new(beta0: f64) -> Self {
        Self {
            beta0,
            k: 0,
            g_prev: RowGivens { c: 1.0, s: Quaternion::ZERO },
            delta_tilde: 0.0,
            eta: Quaternion::ZERO,
            zeta_prev2: Quaternion::ZERO,
            zeta_prev: Quaternion::ZERO,
        }
    }

    /// Processes row `k` of `T` with diagonal `alpha`, sub-diagonal `sub` (below the
    /// diagonal in column `k`) and super-diagonal `sup` (right of the diagonal).
    pub fn step(&mut self, alpha: Quaternion, sub: f64, sup: f64) -> Result<LqStep> {
        self.k += 1;
        let first = self.k == 1;
        let (delta, nu_prime) = if first {
            (Quaternion::ZERO, alpha)
        } else {
            self.g_prev.apply(Quaternion::real(self.delta_tilde), alpha)
        };
        let rhs = if first {
            Quaternion::real(self.beta0)
        } else {
            -(self.eta * self.zeta_prev2 + delta * self.zeta_prev)
        };
        let zeta_tilde = if nu_prime.is_zero() {
            None
        } else {
            Some(nu_prime.inv()? * rhs)
        };
        let y_last = zeta_tilde.map(|zt| {
            if first {
                zt
            } else {
                self.g_prev.s.conj() * self.zeta_prev - zt * self.g_prev.c
            }
        });
        let (rotation, nu) = quat_givens_row(nu_prime, Quaternion::real(sup))
            .map_err(|_| Error::Numerical("singular tridiagonal in LQ update"))?;
        let zeta = nu.inv()? * rhs;
        // Row k+1 after the previous rotation: (η_{k+1}, δ~_{k+1}) from (0, β_k).
        if first {
            self.eta = Quaternion::ZERO;
            self.delta_tilde = sub;
        } else {
            self.eta = self.g_prev.s.conj() * sub;
            self.delta_tilde = -sub * self.g_prev.c;
        }
        self.g_prev = rotation;
        self.zeta_prev2 = self.zeta_prev;
        self.zeta_prev = zeta;
        Ok(LqStep {
            nu_prime,
            zeta_tilde,
            y_last,
            rotation,
            zeta,
        })
    }
}

/// Scalar recurrence plus `x~` and `w~`.
#[derive(Debug, Clone)]
pub(crate) struct LqSide {
    scalars: LqScalars,
    x_settled: QuatVector,
    w_tilde: QuatVector,
}

impl LqSide {
    pub(crate) const VECTORS: u64 = 2;

    /// `x0` seeds `x~_0`, `basis1` is the first search direction.
    pub(crate) fn new(beta0: f64, x0: &QuatVector, basis1: &QuatVector) -> Self {
        Self {
            scalars: LqScalars::new(beta0),
            x_settled: x0.clone(),
            w_tilde: basis1.clone(),
        }
    }

    /// Updates the Galerkin iterate `x`; returns `sub |e_k* y_k|` when defined.
    /// `next` is the following basis vector, absent after a breakdown.
    pub(crate) fn step(
        &mut self,
        alpha: Quaternion,
        sub: f64,
        sup: f64,
        next: Option<&QuatVector>,
        x: &mut QuatVector,
    ) -> Result<Option<f64>> {
        let st = self.scalars.step(alpha, sub, sup)?;
        if let Some(zt) = st.zeta_tilde {
            x.copy_from(&self.x_settled)?;
            x.add_scaled_right(&self.w_tilde, zt)?;
        }
        if let Some(q_next) = next {
            let (c, s) = (st.rotation.c, st.rotation.s);
            // x~_k = x~_{k-1} + (w~_k c + q_{k+1} conj(s)) ζ_k
            self.x_settled.add_scaled_right(&self.w_tilde, st.zeta * c)?;
            self.x_settled.add_scaled_right(q_next, s.conj() * st.zeta)?;
            // w~_{k+1} = w~_k s - q_{k+1} c
            self.w_tilde.scale_right(s);
            self.w_tilde.axpy(-c, q_next)?;
        }
        Ok(st.y_last.map(|y| sub * y.norm()))
    }
}

pub fn qnherlq_solve(a: &QuatMatrix, b: &QuatVector, opts: &SolveOptions) -> Result<SolveReport> {
    qnherlq_solve_timed(a, b, opts, &NoClock)
}

pub fn qnherlq_solve_timed(
    a: &QuatMatrix,
    b: &QuatVector,
    opts: &SolveOptions,
    clock: &dyn Clock,
) -> Result<SolveReport> {
    check_system(a, b, opts)?;
    let spec = SideSpec {
        method: Method::Galerkin,
        rhs: b,
        x0: opts.x0.as_ref(),
        mode: opts.residual_mode.unwrap_or(ResidualMode::Recomputed),
    };
    let (report, _) = run(a, Some(spec), None, opts.q1.as_ref(), opts, clock)?;
    Ok(report.expect("primal side requested"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QuatDense;
    use alloc::vec::Vec;

    #[test]
    fn rotation_examples() {
        assert_eq!(lq_rotation(Quaternion::ONE, 0.0).unwrap(), (1.0, Quaternion::ZERO, Quaternion::ONE));
        let (c, s, nu) = lq_rotation(Quaternion::real(3.0), 4.0).unwrap();
        assert!((c - 0.6).abs() < 1e-15 && (s - Quaternion::real(0.8)).norm() < 1e-15);
        assert!((nu - Quaternion::real(5.0)).norm() < 1e-15);
        let (c, s, nu) = lq_rotation(Quaternion::I, 1.0).unwrap();
        let g = RowGivens { c, s };
        let (first, second) = g.apply(Quaternion::I, Quaternion::ONE);
        assert!(second.norm() < 1e-15);
        assert!((first - nu).norm() < 1e-15);
        assert!((nu.norm() - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(lq_rotation(Quaternion::ZERO, 2.0).unwrap(), (0.0, Quaternion::ONE, Quaternion::real(2.0)));
        assert!(lq_rotation(Quaternion::ZERO, 0.0).is_err());
    }

    // The scalar recurrence reproduces the solution of T_m y = β e_1 densely.
    #[test]
    fn scalars_solve_the_tridiagonal_system() {
        let m = 5;
        let alpha: Vec<Quaternion> = (0..m)
            .map(|i| Quaternion::new(1.0 + i as f64, 0.3 * i as f64, -0.2, 0.1 * i as f64))
            .collect();
        let beta: Vec<f64> = (0..m).map(|i| 0.4 + 0.1 * i as f64).collect();
        let gamma: Vec<f64> = (0..m).map(|i| 0.9 - 0.05 * i as f64).collect();
        let mut sc = LqScalars::new(2.0);
        let mut steps = Vec::new();
        for k in 0..m {
            steps.push(sc.step(alpha[k], beta[k], gamma[k]).unwrap());
        }
        // Dense T_m and the rotations applied to its columns give L~ z~ = β e1.
        let mut t = QuatDense::zeros(m, m);
        for k in 0..m {
            t.set(k, k, alpha[k]);
            if k + 1 < m {
                t.set(k + 1, k, Quaternion::real(beta[k]));
                t.set(k, k + 1, Quaternion::real(gamma[k]));
            }
        }
        // y = G_1 ... G_{m-1} z~ ; check T y = β e1.
        let mut y: Vec<Quaternion> = steps[..m - 1].iter().map(|s| s.zeta).collect();
        y.push(steps[m - 1].zeta_tilde.unwrap());
        for k in (0..m - 1).rev() {
            let g = steps[k].rotation;
            let (a, b) = (y[k], y[k + 1]);
            y[k] = a * g.c + g.s * b;
            y[k + 1] = g.s.conj() * a - b * g.c;
        }
        for r in 0..m {
            let mut acc = Quaternion::ZERO;
            for c in 0..m {
                acc += t.get(r, c) * y[c];
            }
            let target = if r == 0 { Quaternion::real(2.0) } else { Quaternion::ZERO };
            assert!((acc - target).norm() < 1e-12, "row {r}: {acc}");
        }
        assert!((steps[m - 1].y_last.unwrap() - y[m - 1]).norm() < 1e-12);
    }
}
