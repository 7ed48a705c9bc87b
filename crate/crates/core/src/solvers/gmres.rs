//! Full quaternion GMRES: Arnoldi with modified Gram-Schmidt and a Hessenberg least
//! squares problem reduced by column rotations. No restarts.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::givens::{quat_givens, GivensQ};
use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;
use crate::vector::QuatVector;

use super::{check_system, Clock, NoClock, OpCounts, ResidualMode, SolveOptions, SolveReport, SolveStatus};

pub fn qgmres_solve(a: &QuatMatrix, b: &QuatVector, opts: &SolveOptions) -> Result<SolveReport> {
    qgmres_solve_timed(a, b, opts, &NoClock)
}

struct Residual<'a> {
    a: &'a QuatMatrix,
    b: &'a QuatVector,
    denom: f64,
    work: QuatVector,
    count: u64,
}

impl Residual<'_> {
    fn eval(&mut self, x: &QuatVector) -> Result<f64> {
        self.a.matvec_into(x, &mut self.work)?;
        self.count += 1;
        self.work.scale(-1.0);
        self.work.axpy(1.0, self.b)?;
        Ok(self.work.norm2() / self.denom)
    }
}

// x = x0 + V y with R y = g over the leading k columns.
fn assemble(x0: &QuatVector, basis: &[QuatVector], r: &[Vec<Quaternion>], g: &[Quaternion], k: usize) -> Result<QuatVector> {
    let mut y = vec![Quaternion::ZERO; k];
    for i in (0..k).rev() {
        let mut acc = g[i];
        for j in i + 1..k {
            acc -= r[j][i] * y[j];
        }
        y[i] = r[i][i].inv()? * acc;
    }
    let mut x = x0.clone();
    for (v, yi) in basis.iter().zip(&y) {
        x.add_scaled_right(v, *yi)?;
    }
    Ok(x)
}

pub fn qgmres_solve_timed(
    a: &QuatMatrix,
    b: &QuatVector,
    opts: &SolveOptions,
    clock: &dyn Clock,
) -> Result<SolveReport> {
    check_system(a, b, opts)?;
    let t0 = clock.now();
    let n = a.rows();
    let mode = opts.residual_mode.unwrap_or(ResidualMode::Recurrence);
    let bnorm = b.norm2();
    let x0 = opts.x0.clone().unwrap_or_else(|| QuatVector::zeros(n));
    let mut res = Residual {
        a,
        b,
        denom: if bnorm > 0.0 { bnorm } else { 1.0 },
        work: QuatVector::zeros(n),
        count: 0,
    };
    let mut r0 = b.clone();
    if opts.x0.is_some() {
        res.eval(&x0)?;
        r0.copy_from(&res.work)?;
    }
    let beta = r0.norm2();
    let mut report = SolveReport {
        x: x0.clone(),
        status: SolveStatus::MaxIt,
        iters: 0,
        rr_history: Vec::new(),
        rr_estimate_history: Vec::new(),
        rr_true_history: Vec::new(),
        wall_history: Vec::new(),
        final_rr: beta / res.denom,
        wall_seconds: 0.0,
        ops: OpCounts::default(),
    };
    if beta / res.denom <= opts.tol {
        report.status = SolveStatus::Converged;
        report.ops.residual_matvecs = res.count;
        report.ops.workspace_vectors = 3;
        report.wall_seconds = clock.now() - t0;
        return Ok(report);
    }

    r0.scale(1.0 / beta);
    let mut basis = vec![r0];
    // Columns of the rotated Hessenberg matrix, each of length j + 2.
    let mut r: Vec<Vec<Quaternion>> = Vec::new();
    let mut rotations: Vec<GivensQ> = Vec::new();
    let mut g = vec![Quaternion::real(beta)];
    let mut w = QuatVector::zeros(n);
    let mut matvecs = 0u64;
    let mut hmax = 0.0f64;
    let mut x = x0.clone();
    let mut done = None;

    for j in 0..opts.maxit {
        a.matvec_into(&basis[j], &mut w)?;
        matvecs += 1;
        let mut h = vec![Quaternion::ZERO; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij = w.inner(v)?;
            w.add_scaled_right(v, -hij)?;
            h[i] = hij;
        }
        let hnext = w.norm2();
        h[j + 1] = Quaternion::real(hnext);
        hmax = hmax.max(hnext).max(h.iter().map(|q| q.norm()).fold(0.0, f64::max));
        for (i, rot) in rotations.iter().enumerate() {
            let (u, v) = rot.apply(h[i], h[i + 1]);
            h[i] = u;
            h[i + 1] = v;
        }
        let (rot, sigma) = quat_givens(h[j], h[j + 1])?;
        h[j] = sigma;
        h[j + 1] = Quaternion::ZERO;
        let (tau, rho) = rot.apply(g[j], Quaternion::ZERO);
        g[j] = tau;
        g.push(rho);
        rotations.push(rot);
        r.push(h);
        report.iters = j + 1;

        let est = rho.norm() / res.denom;
        report.rr_estimate_history.push(est);
        let happy = hnext <= opts.tau_b * hmax.max(1.0);
        let mut true_rr = None;
        let monitored = if mode == ResidualMode::Recomputed || happy {
            x = assemble(&x0, &basis, &r, &g, j + 1)?;
            let rr = res.eval(&x)?;
            if mode == ResidualMode::Recomputed {
                report.rr_true_history.push(rr);
            }
            true_rr = Some(rr);
            if mode == ResidualMode::Recomputed { rr } else { est }
        } else {
            est
        };
        report.rr_history.push(monitored);
        report.wall_history.push(clock.now() - t0);

        if happy {
            let rr = true_rr.expect("evaluated on breakdown");
            let status = if rr <= opts.tol { SolveStatus::BreakdownExact } else { SolveStatus::Breakdown };
            done = Some((status, rr));
            break;
        }
        if monitored <= opts.tol {
            let rr = match true_rr {
                Some(v) => v,
                None => {
                    x = assemble(&x0, &basis, &r, &g, j + 1)?;
                    res.eval(&x)?
                }
            };
            if rr <= opts.tol {
                done = Some((SolveStatus::Converged, rr));
                break;
            }
        }
        if j + 1 < opts.maxit {
            let mut next = w.clone();
            next.scale(1.0 / hnext);
            basis.push(next);
        }
    }

    let (status, rr) = match done {
        Some(v) => v,
        None => {
            x = assemble(&x0, &basis, &r, &g, report.iters)?;
            (SolveStatus::MaxIt, res.eval(&x)?)
        }
    };
    report.x = x;
    report.status = status;
    report.final_rr = rr;
    report.wall_seconds = clock.now() - t0;
    report.ops = OpCounts {
        matvecs,
        adj_matvecs: 0,
        residual_matvecs: res.count,
        workspace_vectors: basis.len() as u64 + 4,
    };
    Ok(report)
}
