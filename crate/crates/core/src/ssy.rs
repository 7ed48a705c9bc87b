//! Incremental quaternion Saunders-Simon-Yip tridiagonalization.
//!
//! Starting from unit vectors `p_1 = b/|b|` and `q_1 = c/|c|`, step `i` computes
//!
//! ```text
//! α_i     = <A q_i, p_i>
//! p~      = A q_i  - p_i α_i       - p_{i-1} γ_{i-1},   β_i = |p~|,  p_{i+1} = p~ / β_i
//! q~      = A* p_i - q_i conj(α_i) - q_{i-1} β_{i-1},   γ_i = |q~|,  q_{i+1} = q~ / γ_i
//! ```
//!
//! so that `A Q_m = P_m T_m + β_m p_{m+1} e_m*` and
//! `A* P_m = Q_m T_m* + γ_m q_{m+1} e_m*` with `T_m` tridiagonal, quaternion on the
//! diagonal and real nonnegative off the diagonal. Only the last two vectors of
//! each sequence are kept unless full bases are requested.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{KernelStats, QuatDense, QuatMatrix};
use crate::quaternion::Quaternion;
use crate::vector::QuatVector;

/// Default relative breakdown threshold.
pub const DEFAULT_BREAKDOWN_TOL: f64 = 1e-13;

/// Tridiagonal `T` with quaternion diagonal `alpha`, sub-diagonal `beta` and
/// super-diagonal `gamma`.
///
/// In the square form `beta` and `gamma` have `m - 1` entries. The augmented form
/// carries a trailing `β_m`, which becomes the single entry of an extra last row.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictTridiagonal {
    pub alpha: Vec<Quaternion>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl StrictTridiagonal {
    #[inline]
    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_augmented(&self) -> bool {
        self.beta.len() == self.alpha.len() && !self.alpha.is_empty()
    }

    /// Dense `m x m`, or `(m + 1) x m` when augmented.
    pub fn to_dense(&self) -> QuatDense {
        let m = self.dim();
        let rows = if self.is_augmented() { m + 1 } else { m };
        let mut t = QuatDense::zeros(rows, m);
        for (i, &a) in self.alpha.iter().enumerate() {
            t.set(i, i, a);
        }
        for (i, &b) in self.beta.iter().enumerate() {
            t.set(i + 1, i, Quaternion::real(b));
        }
        for (i, &g) in self.gamma.iter().enumerate().take(m.saturating_sub(1)) {
            t.set(i, i + 1, Quaternion::real(g));
        }
        t
    }

    /// Largest imaginary component on the diagonal.
    pub fn max_imag(&self) -> f64 {
        self.alpha.iter().fold(0.0f64, |m, a| m.max(a.imag_max()))
    }

    /// `max_i |β_i - γ_i|` over the square part.
    pub fn max_offdiag_asymmetry(&self) -> f64 {
        let k = self.dim().saturating_sub(1);
        self.beta
            .iter()
            .zip(&self.gamma)
            .take(k)
            .fold(0.0f64, |m, (b, g)| m.max((b - g).abs()))
    }

    /// True when every off-diagonal entry is nonnegative.
    pub fn offdiag_nonnegative(&self) -> bool {
        self.beta.iter().chain(&self.gamma).all(|v| *v >= 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Advanced,
    /// `β_i` fell below the breakdown threshold.
    BreakdownP,
    /// `γ_i` fell below the breakdown threshold.
    BreakdownQ,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub kind: StepKind,
    pub alpha: Quaternion,
    pub beta: f64,
    pub gamma: f64,
}

/// Residuals of the two factorization identities and the orthogonality defects of
/// the retained bases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCheck {
    pub res1: f64,
    pub res2: f64,
    pub orth_p: f64,
    pub orth_q: f64,
}

/// Running state of the three-term recurrences.
#[derive(Debug, Clone)]
pub struct SsyState<'a> {
    a: &'a QuatMatrix,
    p_prev: QuatVector,
    p_curr: QuatVector,
    q_prev: QuatVector,
    q_curr: QuatVector,
    pt: QuatVector,
    qt: QuatVector,
    beta0: f64,
    gamma0: f64,
    last_beta: f64,
    last_gamma: f64,
    alpha: Vec<Quaternion>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    record: bool,
    steps: usize,
    stopped: Option<StepKind>,
    tau_b: f64,
    scale: f64,
    bases: Option<(Vec<QuatVector>, Vec<QuatVector>)>,
    stats: KernelStats,
    matvecs: u64,
    adj_matvecs: u64,
}

impl<'a> SsyState<'a> {
    /// Normalizes the starting vectors. `tau_b` is relative to the running maximum of
    /// `|A q_i|` (floored at one).
    pub fn new(a: &'a QuatMatrix, b: &QuatVector, c: &QuatVector, tau_b: f64) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::dim("ssy: square matrix", n, a.cols()));
        }
        if b.len() != n {
            return Err(Error::dim("ssy: b", n, b.len()));
        }
        if c.len() != n {
            return Err(Error::dim("ssy: c", n, c.len()));
        }
        let beta0 = b.norm2();
        let gamma0 = c.norm2();
        if beta0 == 0.0 || gamma0 == 0.0 {
            return Err(Error::Domain("starting vectors must be nonzero"));
        }
        if !(tau_b >= 0.0) {
            return Err(Error::Parameter("breakdown tolerance must be nonnegative"));
        }
        let mut p_curr = b.clone();
        p_curr.scale(1.0 / beta0);
        let mut q_curr = c.clone();
        q_curr.scale(1.0 / gamma0);
        Ok(Self {
            a,
            p_prev: QuatVector::zeros(n),
            p_curr,
            q_prev: QuatVector::zeros(n),
            q_curr,
            pt: QuatVector::zeros(n),
            qt: QuatVector::zeros(n),
            beta0,
            gamma0,
            last_beta: 0.0,
            last_gamma: 0.0,
            alpha: Vec::new(),
            beta: Vec::new(),
            gamma: Vec::new(),
            record: true,
            steps: 0,
            stopped: None,
            tau_b,
            scale: 1.0,
            bases: None,
            stats: KernelStats::default(),
            matvecs: 0,
            adj_matvecs: 0,
        })
    }

    /// Keeps every `p_i` and `q_i`. Must be requested before the first step.
    pub fn retain_bases(mut self) -> Self {
        if self.steps == 0 {
            self.bases = Some((alloc::vec![self.p_curr.clone()], alloc::vec![self.q_curr.clone()]));
        }
        self
    }

    /// Stops recording the coefficient sequences; only the latest values are kept.
    pub fn without_history(mut self) -> Self {
        self.record = false;
        self
    }

    /// Number of `n`-vectors held by the state itself, excluding retained bases.
    pub const WORKSPACE_VECTORS: usize = 6;

    pub fn dim(&self) -> usize {
        self.p_curr.len()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn stopped(&self) -> Option<StepKind> {
        self.stopped
    }

    pub fn breakdown_threshold(&self) -> f64 {
        self.tau_b * self.scale
    }

    /// Current `p_{i+1}` (or `p_i` after a breakdown).
    pub fn p(&self) -> &QuatVector {
        &self.p_curr
    }

    /// Current `q_{i+1}` (or `q_i` after a breakdown).
    pub fn q(&self) -> &QuatVector {
        &self.q_curr
    }

    /// The pair `(p_i, q_i)` consumed by the most recent step.
    pub fn last_inputs(&self) -> (&QuatVector, &QuatVector) {
        match self.stopped {
            Some(_) => (&self.p_curr, &self.q_curr),
            None => (&self.p_prev, &self.q_prev),
        }
    }

    pub fn alpha(&self) -> &[Quaternion] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn bases(&self) -> Option<(&[QuatVector], &[QuatVector])> {
        self.bases.as_ref().map(|(p, q)| (p.as_slice(), q.as_slice()))
    }

    /// `(A x, A* x)` products performed so far.
    pub fn matvec_counts(&self) -> (u64, u64) {
        (self.matvecs, self.adj_matvecs)
    }

    pub fn kernel_stats(&self) -> KernelStats {
        self.stats
    }

    /// One step of the recurrences.
    pub fn step(&mut self) -> Result<StepResult> {
        if self.stopped.is_some() {
            return Err(Error::State("tridiagonalization already broke down"));
        }
        let a = self.a;
        a.matvec_with_stats(&self.q_curr, &mut self.pt, &mut self.stats)?;
        a.matvec_adj_with_stats(&self.p_curr, &mut self.qt, &mut self.stats)?;
        self.matvecs += 1;
        self.adj_matvecs += 1;
        self.scale = self.scale.max(self.pt.norm2());

        let alpha = self.pt.inner(&self.p_curr)?;
        self.pt.add_scaled_right(&self.p_curr, -alpha)?;
        self.qt.add_scaled_right(&self.q_curr, -alpha.conj())?;
        if self.steps > 0 {
            self.pt.axpy(-self.last_gamma, &self.p_prev)?;
            self.qt.axpy(-self.last_beta, &self.q_prev)?;
        }
        let beta = self.pt.norm2();
        let gamma = self.qt.norm2();
        let tau = self.breakdown_threshold();
        let kind = if beta <= tau {
            StepKind::BreakdownP
        } else if gamma <= tau {
            StepKind::BreakdownQ
        } else {
            StepKind::Advanced
        };

        self.steps += 1;
        self.last_beta = beta;
        self.last_gamma = gamma;
        if self.record {
            self.alpha.push(alpha);
            self.beta.push(beta);
            self.gamma.push(gamma);
        } else {
            self.alpha.clear();
            self.alpha.push(alpha);
        }

        if kind == StepKind::Advanced {
            core::mem::swap(&mut self.p_prev, &mut self.p_curr);
            core::mem::swap(&mut self.p_curr, &mut self.pt);
            self.p_curr.scale(1.0 / beta);
            core::mem::swap(&mut self.q_prev, &mut self.q_curr);
            core::mem::swap(&mut self.q_curr, &mut self.qt);
            self.q_curr.scale(1.0 / gamma);
            if let Some((ps, qs)) = &mut self.bases {
                ps.push(self.p_curr.clone());
                qs.push(self.q_curr.clone());
            }
        } else {
            self.stopped = Some(kind);
        }
        Ok(StepResult {
            kind,
            alpha,
            beta,
            gamma,
        })
    }

    fn check_recorded(&self, m: usize) -> Result<()> {
        if m == 0 || m > self.steps {
            return Err(Error::Parameter("requested size exceeds the number of steps"));
        }
        if !self.record {
            return Err(Error::State("coefficient history was not recorded"));
        }
        Ok(())
    }

    /// Leading `m x m` tridiagonal `T_m`.
    pub fn assemble_t(&self, m: usize) -> Result<StrictTridiagonal> {
        self.check_recorded(m)?;
        Ok(StrictTridiagonal {
            alpha: self.alpha[..m].to_vec(),
            beta: self.beta[..m - 1].to_vec(),
            gamma: self.gamma[..m - 1].to_vec(),
        })
    }

    /// `(m + 1) x m` tridiagonal with the trailing row `β_m e_m*`.
    pub fn assemble_t_augmented(&self, m: usize) -> Result<StrictTridiagonal> {
        self.check_recorded(m)?;
        Ok(StrictTridiagonal {
            alpha: self.alpha[..m].to_vec(),
            beta: self.beta[..m].to_vec(),
            gamma: self.gamma[..m - 1].to_vec(),
        })
    }

    /// Frobenius residuals of both factorization identities after `m` steps and the
    /// max-entry orthogonality defects of `P_m` and `Q_m`.
    pub fn check_factorization(&self, m: usize) -> Result<FactorizationCheck> {
        self.check_recorded(m)?;
        let (ps, qs) = self
            .bases
            .as_ref()
            .ok_or(Error::State("bases were not retained"))?;
        let n = self.dim();
        let zero = QuatVector::zeros(n);
        let pick = |v: &[QuatVector], k: usize| -> QuatVector { v.get(k).cloned().unwrap_or_else(|| zero.clone()) };

        let mut res1 = 0.0;
        let mut res2 = 0.0;
        for j in 0..m {
            let mut r1 = self.a.matvec(&pick(qs, j))?;
            r1.add_scaled_right(&pick(ps, j), -self.alpha[j])?;
            r1.axpy(-self.beta[j], &pick(ps, j + 1))?;
            let mut r2 = self.a.matvec_adj(&pick(ps, j))?;
            r2.add_scaled_right(&pick(qs, j), -self.alpha[j].conj())?;
            r2.axpy(-self.gamma[j], &pick(qs, j + 1))?;
            if j > 0 {
                r1.axpy(-self.gamma[j - 1], &pick(ps, j - 1))?;
                r2.axpy(-self.beta[j - 1], &pick(qs, j - 1))?;
            }
            res1 += r1.norm_sqr();
            res2 += r2.norm_sqr();
        }
        Ok(FactorizationCheck {
            res1: libm::sqrt(res1),
            res2: libm::sqrt(res2),
            orth_p: orthogonality_defect(&ps[..m.min(ps.len())])?,
            orth_q: orthogonality_defect(&qs[..m.min(qs.len())])?,
        })
    }
}

/// `max_{i,j} |<v_j, v_i> - δ_ij|`.
pub fn orthogonality_defect(vs: &[QuatVector]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate().skip(i) {
            let mut g = vj.inner(vi)?;
            if i == j {
                g -= Quaternion::ONE;
            }
            worst = worst.max(g.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random::{random_hermitian, random_quat_matrix, random_quat_vector};

    #[test]
    fn init_normalizes() {
        let a = QuatMatrix::identity(3);
        let mut b = QuatVector::unit(3, 0);
        b.scale(2.0);
        let c = QuatVector::unit(3, 1);
        let st = SsyState::new(&a, &b, &c, DEFAULT_BREAKDOWN_TOL).unwrap();
        assert_eq!(st.p(), &QuatVector::unit(3, 0));
        assert_eq!(st.q(), &QuatVector::unit(3, 1));
        assert_eq!((st.beta0(), st.gamma0()), (2.0, 1.0));

        let r = random_quat_vector(9, 4);
        let st = SsyState::new(&a, &r, &r, DEFAULT_BREAKDOWN_TOL);
        let a9 = QuatMatrix::identity(9);
        let st9 = SsyState::new(&a9, &r, &r, DEFAULT_BREAKDOWN_TOL).unwrap();
        assert!(st.is_err());
        assert!((st9.p().norm2() - 1.0).abs() < 1e-15);
        assert_eq!(st9.p(), st9.q());
    }

    #[test]
    fn zero_start_is_rejected() {
        let a = QuatMatrix::identity(2);
        let z = QuatVector::zeros(2);
        let e = QuatVector::unit(2, 0);
        assert!(matches!(SsyState::new(&a, &z, &e, 1e-13), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_breaks_down_immediately() {
        let a = QuatMatrix::identity(4);
        let e = QuatVector::unit(4, 0);
        let mut st = SsyState::new(&a, &e, &e, DEFAULT_BREAKDOWN_TOL).unwrap();
        let r = st.step().unwrap();
        assert_eq!(r.kind, StepKind::BreakdownP);
        assert_eq!(r.alpha, Quaternion::ONE);
        assert_eq!(r.beta, 0.0);
        assert!(matches!(st.step(), Err(Error::State(_))));
    }

    // Explicit dense assembly of both identities, independent of check_factorization.
    #[test]
    fn dense_identities_hold() {
        let a = random_quat_matrix(6, 6, 17);
        let b = random_quat_vector(6, 18);
        let c = random_quat_vector(6, 19);
        let mut st = SsyState::new(&a, &b, &c, DEFAULT_BREAKDOWN_TOL).unwrap().retain_bases();
        for _ in 0..5 {
            assert_eq!(st.step().unwrap().kind, StepKind::Advanced);
        }
        let (ps, qs) = st.bases().unwrap();
        let ad = a.to_dense();
        let p5 = QuatDense::from_columns(&ps[..5]).unwrap();
        let q5 = QuatDense::from_columns(&qs[..5]).unwrap();
        let t5 = st.assemble_t(5).unwrap().to_dense();
        let mut lhs1 = ad.mul(&q5).unwrap().sub(&p5.mul(&t5).unwrap()).unwrap();
        let mut lhs2 = ad.adjoint().mul(&p5).unwrap().sub(&q5.mul(&t5.adjoint()).unwrap()).unwrap();
        for r in 0..6 {
            let v1 = lhs1.get(r, 4) - ps[5].get(r) * st.beta()[4];
            lhs1.set(r, 4, v1);
            let v2 = lhs2.get(r, 4) - qs[5].get(r) * st.gamma()[4];
            lhs2.set(r, 4, v2);
        }
        let af = a.frobenius();
        assert!(lhs1.frobenius() < 1e-12 * af, "{}", lhs1.frobenius());
        assert!(lhs2.frobenius() < 1e-12 * af, "{}", lhs2.frobenius());
    }

    #[test]
    fn check_factorization_examples() {
        let a = random_quat_matrix(8, 8, 3);
        let b = random_quat_vector(8, 5);
        let c = random_quat_vector(8, 6);
        let mut st = SsyState::new(&a, &b, &c, DEFAULT_BREAKDOWN_TOL).unwrap().retain_bases();
        st.step().unwrap();
        let f1 = st.check_factorization(1).unwrap();
        assert!(f1.orth_p < 1e-15 && f1.orth_q < 1e-15);
        for _ in 1..6 {
            st.step().unwrap();
        }
        let f = st.check_factorization(6).unwrap();
        for v in [f.res1, f.res2, f.orth_p, f.orth_q] {
            assert!(v < 1e-10, "{f:?}");
        }
        assert!(st.check_factorization(7).is_err());
    }

    #[test]
    fn bases_required_for_check() {
        let a = random_quat_matrix(4, 4, 1);
        let b = random_quat_vector(4, 2);
        let mut st = SsyState::new(&a, &b, &b, DEFAULT_BREAKDOWN_TOL).unwrap();
        st.step().unwrap();
        assert!(matches!(st.check_factorization(1), Err(Error::State(_))));
    }

    #[test]
    fn hermitian_case_is_real_symmetric() {
        let a = random_hermitian(10, 7);
        let b = random_quat_vector(10, 8);
        let mut st = SsyState::new(&a, &b, &b, DEFAULT_BREAKDOWN_TOL).unwrap().retain_bases();
        for _ in 0..8 {
            st.step().unwrap();
        }
        let t = st.assemble_t(8).unwrap();
        assert!(t.max_imag() < 1e-12);
        assert!(t.max_offdiag_asymmetry() < 1e-12);
        let (ps, qs) = st.bases().unwrap();
        for (p, q) in ps.iter().zip(qs) {
            assert!(p.sub(q).unwrap().max_abs() < 1e-12);
        }
        let f = st.check_factorization(8).unwrap();
        assert!((f.res1 - f.res2).abs() < 1e-12);
        let dense = t.to_dense();
        assert_eq!(dense.get(1, 0), Quaternion::real(t.beta[0]));
        assert_eq!(dense.get(0, 1), Quaternion::real(t.gamma[0]));
    }

    #[test]
    fn assembled_entries_match_recorded() {
        let a = random_quat_matrix(7, 7, 31);
        let b = random_quat_vector(7, 32);
        let c = random_quat_vector(7, 33);
        let mut st = SsyState::new(&a, &b, &c, DEFAULT_BREAKDOWN_TOL).unwrap();
        for _ in 0..4 {
            st.step().unwrap();
        }
        let t1 = st.assemble_t(1).unwrap().to_dense();
        assert_eq!((t1.rows(), t1.cols()), (1, 1));
        assert_eq!(t1.get(0, 0), st.alpha()[0]);
        let t = st.assemble_t(4).unwrap().to_dense();
        for i in 0..3 {
            assert_eq!(t.get(i + 1, i), Quaternion::real(st.beta()[i]));
            assert_eq!(t.get(i, i + 1), Quaternion::real(st.gamma()[i]));
        }
        let aug = st.assemble_t_augmented(4).unwrap();
        assert!(aug.is_augmented());
        assert_eq!(aug.to_dense().get(4, 3), Quaternion::real(st.beta()[3]));
        assert!(st.assemble_t(5).is_err());
    }
}
