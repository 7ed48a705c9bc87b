//! Dense unitary reductions built from two structure-preserving primitives: unit
//! quaternion phases on single rows or columns, and real Householder reflectors
//! applied identically to all four planes.
//!
//! [`hessenberg_reduce`] computes `W* M W = H` with `H` upper Hessenberg and a real
//! nonnegative sub-diagonal. [`dense_ssy_reduce`] computes `P* M Q = T` with `T`
//! strictly tridiagonal, by induction on the trailing block: at each level the
//! trailing block is brought to Hessenberg form, the leading row is phased to real
//! entries and compressed by a reflector, leaving one real nonnegative entry on
//! each side of the diagonal. Both factors fix `e_1`, so `T` is the matrix the
//! three-term recurrences produce from `p_1 = q_1 = e_1`.
//!
//! The cost is `O(n^4)`; these routines are meant for verification-sized matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{QuatDense, QuatMatrix};
use crate::quaternion::Quaternion;
use crate::ssy::StrictTridiagonal;

struct Work {
    h: QuatDense,
    p: QuatDense,
    q: QuatDense,
}

impl Work {
    fn new(m: &QuatMatrix) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::dim("reduction of a square matrix", n, m.cols()));
        }
        Ok(Self {
            h: m.to_dense(),
            p: QuatDense::identity(n),
            q: QuatDense::identity(n),
        })
    }

    fn n(&self) -> usize {
        self.h.rows()
    }

    // H <- D* H with D = diag(.., u, ..) at t; P <- P D.
    fn left_phase(&mut self, t: usize, u: Quaternion) {
        let uc = u.conj();
        for c in 0..self.n() {
            self.h.set(t, c, uc * self.h.get(t, c));
        }
        for r in 0..self.n() {
            self.p.set(r, t, self.p.get(r, t) * u);
        }
    }

    // H <- H D; Q <- Q D.
    fn right_phase(&mut self, t: usize, v: Quaternion) {
        for r in 0..self.n() {
            self.h.set(r, t, self.h.get(r, t) * v);
            self.q.set(r, t, self.q.get(r, t) * v);
        }
    }

    // H <- F H on rows k0.., P <- P F, with F = I - tau v v^T.
    fn left_reflect(&mut self, k0: usize, v: &[f64], tau: f64) {
        let n = self.n();
        for c in 0..n {
            let mut s = Quaternion::ZERO;
            for (i, vi) in v.iter().enumerate() {
                s += self.h.get(k0 + i, c) * *vi;
            }
            for (i, vi) in v.iter().enumerate() {
                let x = self.h.get(k0 + i, c) - s * (tau * vi);
                self.h.set(k0 + i, c, x);
            }
        }
        reflect_columns(&mut self.p, k0, v, tau);
    }

    // H <- H F on columns k0.., Q <- Q F.
    fn right_reflect(&mut self, k0: usize, v: &[f64], tau: f64) {
        reflect_columns(&mut self.h, k0, v, tau);
        reflect_columns(&mut self.q, k0, v, tau);
    }

    // Similarity steps reducing column j to Hessenberg form, for j = start..n-2.
    fn hessenberg_from(&mut self, start: usize) {
        let n = self.n();
        for j in start..n.saturating_sub(1) {
            for t in j + 1..n {
                let u = self.h.get(t, j).phase();
                self.left_phase(t, u);
                self.right_phase(t, u);
            }
            let x: Vec<f64> = (j + 1..n).map(|t| self.h.get(t, j).w).collect();
            if let Some((v, tau)) = positive_reflector(&x) {
                self.left_reflect(j + 1, &v, tau);
                self.right_reflect(j + 1, &v, tau);
            }
            for t in j + 2..n {
                self.h.set(t, j, Quaternion::ZERO);
            }
            let sub = self.h.get(j + 1, j);
            self.h.set(j + 1, j, Quaternion::real(sub.w));
        }
    }

    // Phases then a reflector on columns k+1.. leaving row k as (.., h_kk, |row|, 0, ..).
    fn compress_row(&mut self, k: usize) {
        let n = self.n();
        for t in k + 1..n {
            let v = self.h.get(k, t).conj().phase();
            self.right_phase(t, v);
        }
        let x: Vec<f64> = (k + 1..n).map(|t| self.h.get(k, t).w).collect();
        if let Some((v, tau)) = positive_reflector(&x) {
            self.right_reflect(k + 1, &v, tau);
        }
        for t in k + 2..n {
            self.h.set(k, t, Quaternion::ZERO);
        }
        let sup = self.h.get(k, k + 1);
        self.h.set(k, k + 1, Quaternion::real(sup.w));
    }
}

fn reflect_columns(m: &mut QuatDense, k0: usize, v: &[f64], tau: f64) {
    for r in 0..m.rows() {
        let mut s = Quaternion::ZERO;
        for (i, vi) in v.iter().enumerate() {
            s += m.get(r, k0 + i) * *vi;
        }
        for (i, vi) in v.iter().enumerate() {
            let x = m.get(r, k0 + i) - s * (tau * vi);
            m.set(r, k0 + i, x);
        }
    }
}

/// Reflector `F = I - tau v v^T` with `F x = |x| e_1`, or `None` when `x` already has
/// that form.
fn positive_reflector(x: &[f64]) -> Option<(Vec<f64>, f64)> {
    let tail: f64 = x[1..].iter().map(|v| v * v).sum();
    if tail == 0.0 && x[0] >= 0.0 {
        return None;
    }
    let alpha = libm::sqrt(x[0] * x[0] + tail);
    let mut v = vec![0.0; x.len()];
    v[0] = if x[0] <= 0.0 {
        x[0] - alpha
    } else {
        -tail / (x[0] + alpha)
    };
    v[1..].copy_from_slice(&x[1..]);
    let vv: f64 = v.iter().map(|a| a * a).sum();
    Some((v, 2.0 / vv))
}

/// `W* M W = H` with `W` unitary, `H` upper Hessenberg with real nonnegative
/// sub-diagonal, and `W e_1 = e_1`. Returns `(W, H)`.
pub fn hessenberg_reduce(m: &QuatMatrix) -> Result<(QuatMatrix, QuatMatrix)> {
    let mut w = Work::new(m)?;
    w.hessenberg_from(0);
    Ok((w.p.to_quat_matrix(), w.h.to_quat_matrix()))
}

/// `P* M Q = T` with `P`, `Q` unitary, `P e_1 = Q e_1 = e_1`, and `T` strictly
/// tridiagonal with real nonnegative off-diagonals. Returns `(P, Q, T)`.
pub fn dense_ssy_reduce(m: &QuatMatrix) -> Result<(QuatMatrix, QuatMatrix, StrictTridiagonal)> {
    let mut w = Work::new(m)?;
    let n = w.n();
    for k in 0..n.saturating_sub(1) {
        w.hessenberg_from(k);
        w.compress_row(k);
    }
    let t = StrictTridiagonal {
        alpha: (0..n).map(|i| w.h.get(i, i)).collect(),
        beta: (0..n.saturating_sub(1)).map(|i| w.h.get(i + 1, i).w).collect(),
        gamma: (0..n.saturating_sub(1)).map(|i| w.h.get(i, i + 1).w).collect(),
    };
    Ok((w.p.to_quat_matrix(), w.q.to_quat_matrix(), t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random::random_quat_matrix;
    use crate::real_rep::{jrs_check, real_rep};
    use crate::ssy::{SsyState, StepKind};
    use crate::vector::QuatVector;

    fn unitary_defect(u: &QuatMatrix) -> f64 {
        let d = u.to_dense();
        d.adjoint().mul(&d).unwrap().sub(&QuatDense::identity(d.rows())).unwrap().max_modulus()
    }

    #[test]
    fn one_by_one_is_untouched() {
        let m = QuatMatrix::from_quats(1, 1, &[Quaternion::new(1.0, 2.0, 3.0, 4.0)]).unwrap();
        let (p, q, t) = dense_ssy_reduce(&m).unwrap();
        assert_eq!(p.get(0, 0), Quaternion::ONE);
        assert_eq!(q.get(0, 0), Quaternion::ONE);
        assert_eq!(t.alpha, vec![Quaternion::new(1.0, 2.0, 3.0, 4.0)]);
        assert!(t.beta.is_empty() && t.gamma.is_empty());
    }

    #[test]
    fn reflector_maps_to_positive_axis() {
        for x in [vec![3.0, 4.0], vec![-3.0, 4.0], vec![0.0, -2.0, 1.0], vec![-5.0]] {
            let (v, tau) = positive_reflector(&x).unwrap();
            let s: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
            let y: Vec<f64> = x.iter().zip(&v).map(|(xi, vi)| xi - tau * s * vi).collect();
            let nrm = libm::sqrt(x.iter().map(|a| a * a).sum());
            assert!((y[0] - nrm).abs() < 1e-14);
            assert!(y[1..].iter().all(|a| a.abs() < 1e-14));
        }
        assert!(positive_reflector(&[2.0, 0.0]).is_none());
    }

    #[test]
    fn hessenberg_form() {
        let m = random_quat_matrix(7, 7, 40);
        let (w, h) = hessenberg_reduce(&m).unwrap();
        assert!(unitary_defect(&w) < 1e-13);
        let wd = w.to_dense();
        let back = wd.adjoint().mul(&m.to_dense()).unwrap().mul(&wd).unwrap();
        assert!(back.sub(&h.to_dense()).unwrap().max_modulus() < 1e-12);
        for r in 0..7 {
            for c in 0..7 {
                let e = h.get(r, c);
                if r > c + 1 {
                    assert_eq!(e, Quaternion::ZERO);
                }
                if r == c + 1 {
                    assert!(e.imag_max() == 0.0 && e.w >= 0.0);
                }
            }
        }
        assert_eq!(w.get(0, 0), Quaternion::ONE);
    }

    #[test]
    fn factorization_holds() {
        let m = random_quat_matrix(5, 5, 41);
        let (p, q, t) = dense_ssy_reduce(&m).unwrap();
        let rp = real_rep(&p);
        let rq = real_rep(&q);
        assert!(rp.orthogonality_defect() < 1e-11);
        assert!(rq.orthogonality_defect() < 1e-11);
        let rt = real_rep(&t.to_dense().to_quat_matrix());
        let lhs = rp.transpose().matmul(&real_rep(&m)).unwrap().matmul(&rq).unwrap();
        assert!(lhs.sub(&rt).unwrap().max_abs() < 1e-10);
        assert!(jrs_check(&rp).unwrap() && jrs_check(&rq).unwrap() && jrs_check(&rt).unwrap());
        assert!(t.offdiag_nonnegative());
    }

    // Uniqueness: the reduction fixes e_1 on both sides, so it must agree with the
    // recurrences started from p_1 = q_1 = e_1.
    #[test]
    fn agrees_with_recurrences() {
        let n = 6;
        let m = random_quat_matrix(n, n, 42);
        let (_, _, t) = dense_ssy_reduce(&m).unwrap();
        let e1 = QuatVector::unit(n, 0);
        let mut st = SsyState::new(&m, &e1, &e1, 1e-13).unwrap();
        for _ in 0..n - 1 {
            assert_eq!(st.step().unwrap().kind, StepKind::Advanced);
        }
        st.step().unwrap();
        for i in 0..n {
            assert!((st.alpha()[i] - t.alpha[i]).norm() < 1e-10);
        }
        for i in 0..n - 1 {
            assert!((st.beta()[i] - t.beta[i]).abs() < 1e-10);
            assert!((st.gamma()[i] - t.gamma[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_rectangular() {
        let m = random_quat_matrix(3, 4, 1);
        assert!(dense_ssy_reduce(&m).is_err());
        assert!(hessenberg_reduce(&m).is_err());
    }
}
