//! One tridiagonalization pass driving up to two solves: the primal system with
//! basis `q` and matrix `T`, and the adjoint system with basis `p` and matrix `T*`.

use alloc::vec::Vec;

use crate::error::Result;
use crate::matrix::QuatMatrix;
use crate::quaternion::Quaternion;
use crate::ssy::{SsyState, StepKind, StepResult};
use crate::vector::QuatVector;

use super::lq::LqSide;
use super::qr::QrSide;
use super::{Clock, OpCounts, ResidualMode, SolveOptions, SolveReport, SolveStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Method {
    Galerkin,
    MinRes,
}

pub(crate) struct SideSpec<'v> {
    pub method: Method,
    pub rhs: &'v QuatVector,
    pub x0: Option<&'v QuatVector>,
    pub mode: ResidualMode,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Primal,
    Adjoint,
}

enum Rec {
    Lq(LqSide),
    Qr(QrSide),
}

struct Side<'v> {
    dir: Dir,
    rhs: &'v QuatVector,
    denom: f64,
    mode: ResidualMode,
    x: QuatVector,
    work: QuatVector,
    rec: Option<Rec>,
    active: bool,
    status: SolveStatus,
    iters: usize,
    rr: Vec<f64>,
    rr_est: Vec<f64>,
    rr_true: Vec<f64>,
    wall: Vec<f64>,
    final_rr: f64,
    residual_matvecs: u64,
    vectors: u64,
}

impl<'v> Side<'v> {
    fn new(a: &QuatMatrix, dir: Dir, spec: &SideSpec<'v>) -> Result<(Self, QuatVector)> {
        let n = spec.rhs.len();
        let bnorm = spec.rhs.norm2();
        let denom = if bnorm > 0.0 { bnorm } else { 1.0 };
        let mut side = Side {
            dir,
            rhs: spec.rhs,
            denom,
            mode: spec.mode,
            x: spec.x0.cloned().unwrap_or_else(|| QuatVector::zeros(n)),
            work: QuatVector::zeros(n),
            rec: None,
            active: true,
            status: SolveStatus::MaxIt,
            iters: 0,
            rr: Vec::new(),
            rr_est: Vec::new(),
            rr_true: Vec::new(),
            wall: Vec::new(),
            final_rr: f64::NAN,
            residual_matvecs: 0,
            vectors: 2,
        };
        let r0 = if spec.x0.is_some() {
            side.residual(a)?;
            side.work.clone()
        } else {
            spec.rhs.clone()
        };
        side.vectors += 1;
        Ok((side, r0))
    }

    // work <- rhs - op(A) x, returns the relative norm.
    fn residual(&mut self, a: &QuatMatrix) -> Result<f64> {
        match self.dir {
            Dir::Primal => a.matvec_into(&self.x, &mut self.work)?,
            Dir::Adjoint => a.matvec_adj_into(&self.x, &mut self.work)?,
        }
        self.residual_matvecs += 1;
        self.work.scale(-1.0);
        self.work.axpy(1.0, self.rhs)?;
        Ok(self.work.norm2() / self.denom)
    }

    fn finish(&mut self, status: SolveStatus, true_rr: f64) {
        self.status = status;
        self.final_rr = true_rr;
        self.active = false;
    }

    fn report(self, ssy: Option<&SsyState<'_>>, wall_seconds: f64) -> SolveReport {
        let (mv, amv) = ssy.map_or((0, 0), SsyState::matvec_counts);
        let ssy_vectors = ssy.map_or(0, |_| SsyState::WORKSPACE_VECTORS as u64);
        SolveReport {
            x: self.x,
            status: self.status,
            iters: self.iters,
            rr_history: self.rr,
            rr_estimate_history: self.rr_est,
            rr_true_history: self.rr_true,
            wall_history: self.wall,
            final_rr: self.final_rr,
            wall_seconds,
            ops: OpCounts {
                matvecs: mv,
                adj_matvecs: amv,
                residual_matvecs: self.residual_matvecs,
                workspace_vectors: self.vectors + ssy_vectors,
            },
        }
    }

    // Coefficients of this side's tridiagonal for the current step.
    fn coefficients(&self, step: &StepResult, prev: (f64, f64)) -> (f64, Quaternion, f64, f64) {
        match self.dir {
            Dir::Primal => (prev.1, step.alpha, step.beta, step.gamma),
            Dir::Adjoint => (prev.0, step.alpha.conj(), step.gamma, step.beta),
        }
    }

    fn advance(
        &mut self,
        a: &QuatMatrix,
        ssy: &SsyState<'_>,
        step: &StepResult,
        prev: (f64, f64),
        opts: &SolveOptions,
        elapsed: f64,
    ) -> Result<()> {
        let (super_prev, diag, sub, sup) = self.coefficients(step, prev);
        let (p_k, q_k) = ssy.last_inputs();
        let advanced = step.kind == StepKind::Advanced;
        let (basis, next) = match self.dir {
            Dir::Primal => (q_k, advanced.then(|| ssy.q())),
            Dir::Adjoint => (p_k, advanced.then(|| ssy.p())),
        };
        let estimate = match self.rec.as_mut().expect("recurrence initialized") {
            Rec::Qr(r) => match r.column(super_prev, diag, sub, basis, &mut self.x) {
                Ok(v) => Some(v),
                Err(_) => {
                    let rr = self.residual(a)?;
                    self.iters += 1;
                    self.finish(SolveStatus::Breakdown, rr);
                    return Ok(());
                }
            },
            Rec::Lq(r) => match r.step(diag, sub, sup, next, &mut self.x) {
                Ok(v) => v,
                Err(_) => {
                    let rr = self.residual(a)?;
                    self.iters += 1;
                    self.finish(SolveStatus::Breakdown, rr);
                    return Ok(());
                }
            },
        };
        self.iters += 1;
        let est_rr = estimate.map_or(f64::NAN, |e| e / self.denom);
        self.rr_est.push(est_rr);

        let mut true_now = None;
        let monitored = match (self.mode, estimate) {
            (ResidualMode::Recurrence, Some(_)) => est_rr,
            _ => {
                let rr = self.residual(a)?;
                true_now = Some(rr);
                if self.mode == ResidualMode::Recomputed {
                    self.rr_true.push(rr);
                }
                rr
            }
        };
        self.rr.push(monitored);
        self.wall.push(elapsed);

        let exact_break = matches!(
            (self.dir, step.kind),
            (Dir::Primal, StepKind::BreakdownP) | (Dir::Adjoint, StepKind::BreakdownQ)
        );
        if exact_break {
            let rr = match true_now {
                Some(v) => v,
                None => self.residual(a)?,
            };
            let status = if rr <= opts.tol {
                SolveStatus::BreakdownExact
            } else {
                SolveStatus::Breakdown
            };
            self.finish(status, rr);
            return Ok(());
        }
        if monitored <= opts.tol {
            let rr = match true_now {
                Some(v) => v,
                None => self.residual(a)?,
            };
            if rr <= opts.tol {
                self.finish(SolveStatus::Converged, rr);
                return Ok(());
            }
            true_now = Some(rr);
        }
        if !advanced {
            let rr = match true_now {
                Some(v) => v,
                None => self.residual(a)?,
            };
            self.finish(SolveStatus::Breakdown, rr);
        }
        Ok(())
    }
}

/// Runs the requested sides. `q1` overrides the second starting vector when only
/// the primal side is requested.
pub(crate) fn run<'v>(
    a: &QuatMatrix,
    primal: Option<SideSpec<'v>>,
    adjoint: Option<SideSpec<'v>>,
    q1: Option<&QuatVector>,
    opts: &SolveOptions,
    clock: &dyn Clock,
) -> Result<(Option<SolveReport>, Option<SolveReport>)> {
    let t0 = clock.now();
    let mut sides: Vec<(Side<'v>, QuatVector)> = Vec::new();
    let mut slots = [None, None];
    for (slot, (dir, spec)) in [(Dir::Primal, primal), (Dir::Adjoint, adjoint)].into_iter().enumerate() {
        if let Some(spec) = spec {
            let method = spec.method;
            let (side, r0) = Side::new(a, dir, &spec)?;
            slots[slot] = Some((sides.len(), method));
            sides.push((side, r0));
        }
    }

    // Sides whose initial residual already meets the tolerance are done.
    let mut norms = [0.0f64; 2];
    for (slot, entry) in slots.iter().enumerate() {
        if let Some((idx, _)) = entry {
            let (side, r0) = &mut sides[*idx];
            let nrm = r0.norm2();
            norms[slot] = nrm;
            let rr = nrm / side.denom;
            if rr <= opts.tol {
                side.finish(SolveStatus::Converged, rr);
            }
        }
    }

    let any_active = sides.iter().any(|(s, _)| s.active);
    if !any_active {
        let elapsed = clock.now() - t0;
        return Ok(collect(sides, slots, None, elapsed));
    }

    // Starting vectors: p_1 from the primal residual, q_1 from the adjoint residual
    // (or the override, or p_1). A finished side lends its partner's vector.
    let primal_r0 = slots[0].map(|(i, _)| &sides[i].1).filter(|v| v.norm2() > 0.0);
    let adjoint_r0 = slots[1].map(|(i, _)| &sides[i].1).filter(|v| v.norm2() > 0.0);
    let p_start = primal_r0.or(adjoint_r0).expect("an active side has a nonzero residual");
    let q_start = adjoint_r0.or(q1).unwrap_or(p_start);
    let mut ssy = SsyState::new(a, p_start, q_start, opts.tau_b)?.without_history();

    for (slot, entry) in slots.iter().enumerate() {
        if let Some((idx, method)) = entry {
            let (side, _) = &mut sides[*idx];
            let beta0 = norms[slot];
            side.rec = Some(match method {
                Method::MinRes => {
                    side.vectors += QrSide::VECTORS;
                    Rec::Qr(QrSide::new(a.rows(), beta0))
                }
                Method::Galerkin => {
                    side.vectors += LqSide::VECTORS;
                    let first = if side.dir == Dir::Primal { ssy.q() } else { ssy.p() };
                    Rec::Lq(LqSide::new(beta0, &side.x, first))
                }
            });
        }
    }

    let mut prev = (0.0, 0.0);
    for _ in 0..opts.maxit {
        if !sides.iter().any(|(s, _)| s.active) {
            break;
        }
        let step = ssy.step()?;
        let elapsed = clock.now() - t0;
        for (side, _) in sides.iter_mut().filter(|(s, _)| s.active) {
            side.advance(a, &ssy, &step, prev, opts, elapsed)?;
        }
        prev = (step.beta, step.gamma);
        if step.kind != StepKind::Advanced {
            break;
        }
    }
    for (side, _) in sides.iter_mut().filter(|(s, _)| s.active) {
        let rr = side.residual(a)?;
        side.finish(SolveStatus::MaxIt, rr);
    }
    let elapsed = clock.now() - t0;
    Ok(collect(sides, slots, Some(&ssy), elapsed))
}

fn collect(
    sides: Vec<(Side<'_>, QuatVector)>,
    slots: [Option<(usize, Method)>; 2],
    ssy: Option<&SsyState<'_>>,
    elapsed: f64,
) -> (Option<SolveReport>, Option<SolveReport>) {
    let mut out: [Option<SolveReport>; 2] = [None, None];
    let mut reports: Vec<Option<SolveReport>> =
        sides.into_iter().map(|(s, _)| Some(s.report(ssy, elapsed))).collect();
    for (slot, entry) in slots.iter().enumerate() {
        if let Some((idx, _)) = entry {
            out[slot] = reports[*idx].take();
        }
    }
    let [p, d] = out;
    (p, d)
}
