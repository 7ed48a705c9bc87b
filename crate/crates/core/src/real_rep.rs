//! The `4m x 4n` real representation of a quaternion matrix.
//!
//! With `M = M0 + M1 i + M2 j + M3 k` the representation is
//!
//! ```text
//!        [  M0   M2   M1   M3 ]
//! R(M) = [ -M2   M0   M3  -M1 ]
//!        [ -M1  -M3   M0   M2 ]
//!        [ -M3   M1  -M2   M0 ]
//! ```
//!
//! It is multiplicative, `R(AB) = R(A) R(B)`, and `R(A*) = R(A)^T`. Real matrices of
//! this shape are characterised by invariance under three signed block
//! permutations, checked by [`jrs_check`]. Nothing in the solvers forms `R(M)`;
//! it exists for tests and reference solutions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::QuatMatrix;

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.data[i * n + i] = 1.0;
        }
        out
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("RealMatrix::from_row_major", rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim("RealMatrix::matmul", self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::dim("RealMatrix::matvec", self.cols, x.len()));
        }
        Ok(self
            .data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim("RealMatrix elementwise", self.data.len(), other.data.len()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// `max |W^T W - I|`, the orthogonality defect of the columns.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = self.transpose().matmul(self).expect("square by construction");
        gram.sub(&Self::identity(self.cols)).expect("same shape").max_abs()
    }
}

// Block (row, col) of R(M) is sign * plane.
const BLOCKS: [[(usize, f64); 4]; 4] = [
    [(0, 1.0), (2, 1.0), (1, 1.0), (3, 1.0)],
    [(2, -1.0), (0, 1.0), (3, 1.0), (1, -1.0)],
    [(1, -1.0), (3, -1.0), (0, 1.0), (2, 1.0)],
    [(3, -1.0), (1, 1.0), (2, -1.0), (0, 1.0)],
];

/// Full real representation `R(M)`.
pub fn real_rep(mat: &QuatMatrix) -> RealMatrix {
    let (m, n) = (mat.rows(), mat.cols());
    let planes: [Vec<f64>; 4] = core::array::from_fn(|p| mat.plane_dense(p));
    let mut out = RealMatrix::zeros(4 * m, 4 * n);
    for (bi, brow) in BLOCKS.iter().enumerate() {
        for (bj, &(p, s)) in brow.iter().enumerate() {
            for r in 0..m {
                for c in 0..n {
                    out.set(bi * m + r, bj * n + c, s * planes[p][r * n + c]);
                }
            }
        }
    }
    out
}

/// First block column `[M0; -M2; -M1; -M3]` of `R(M)`.
pub fn real_rep_col(mat: &QuatMatrix) -> RealMatrix {
    let (m, n) = (mat.rows(), mat.cols());
    let planes: [Vec<f64>; 4] = core::array::from_fn(|p| mat.plane_dense(p));
    let mut out = RealMatrix::zeros(4 * m, n);
    for (bi, brow) in BLOCKS.iter().enumerate() {
        let (p, s) = brow[0];
        for r in 0..m {
            for c in 0..n {
                out.set(bi * m + r, c, s * planes[p][r * n + c]);
            }
        }
    }
    out
}

/// Recovers `M` from the first block row of a real representation.
pub fn from_real_rep(w: &RealMatrix) -> Result<QuatMatrix> {
    if !w.rows().is_multiple_of(4) || !w.cols().is_multiple_of(4) {
        return Err(Error::Parameter("real representation dimensions must be multiples of 4"));
    }
    let (m, n) = (w.rows() / 4, w.cols() / 4);
    let mut planes: [Vec<f64>; 4] = core::array::from_fn(|_| vec![0.0; m * n]);
    for (bj, &(p, s)) in BLOCKS[0].iter().enumerate() {
        for r in 0..m {
            for c in 0..n {
                planes[p][r * n + c] = s * w.get(r, bj * n + c);
            }
        }
    }
    QuatMatrix::from_dense_planes(m, n, planes)
}

// The operators J, R, S as signed block permutations: block row `a` holds `sign * I`
// in block column `perm[a]`.
const JRS: [([usize; 4], [f64; 4]); 3] = [
    ([2, 3, 0, 1], [-1.0, -1.0, 1.0, 1.0]),
    ([1, 0, 3, 2], [-1.0, 1.0, 1.0, -1.0]),
    ([3, 2, 1, 0], [-1.0, 1.0, -1.0, 1.0]),
];

/// Largest entry of `|P W P^T - W|` over the three operators `P ∈ {J, R, S}`.
pub fn jrs_defect(w: &RealMatrix) -> Result<f64> {
    if !w.rows().is_multiple_of(4) || !w.cols().is_multiple_of(4) {
        return Err(Error::Parameter("JRS check needs dimensions that are multiples of 4"));
    }
    let (m, n) = (w.rows() / 4, w.cols() / 4);
    let mut worst = 0.0f64;
    for (perm, sign) in &JRS {
        for a in 0..4 {
            for b in 0..4 {
                let s = sign[a] * sign[b];
                for r in 0..m {
                    for c in 0..n {
                        let lhs = s * w.get(perm[a] * m + r, perm[b] * n + c);
                        worst = worst.max((lhs - w.get(a * m + r, b * n + c)).abs());
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// True iff `W` is invariant under `J`, `R` and `S` to within `1e-12`.
pub fn jrs_check(w: &RealMatrix) -> Result<bool> {
    Ok(jrs_defect(w)? <= 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::QuatDense;
    use crate::quaternion::Quaternion;
    use proptest::prelude::*;

    fn quat_matrix(m: usize, n: usize) -> impl Strategy<Value = QuatDense> {
        proptest::collection::vec(proptest::array::uniform4(-3.0f64..3.0), m * n).prop_map(move |v| {
            QuatDense::from_rows(m, n, v.into_iter().map(Quaternion::from_array).collect()).unwrap()
        })
    }

    fn scalar(q: Quaternion) -> QuatMatrix {
        QuatMatrix::from_quats(1, 1, &[q]).unwrap()
    }

    #[test]
    fn scalar_one_is_identity() {
        assert_eq!(real_rep(&scalar(Quaternion::ONE)), RealMatrix::identity(4));
        assert_eq!(real_rep_col(&scalar(Quaternion::ONE)).data(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn scalar_i_layout() {
        let r = real_rep(&scalar(Quaternion::I));
        #[rustfmt::skip]
        let expect = [
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        ];
        assert_eq!(r.data(), &expect);
        assert_eq!(real_rep_col(&scalar(Quaternion::I)).data(), &[0.0, 0.0, -1.0, 0.0]);
    }

    #[test]
    fn jrs_examples() {
        assert!(jrs_check(&RealMatrix::identity(4)).unwrap());
        let q = QuatMatrix::from_quats(
            2,
            2,
            &[
                Quaternion::new(1.0, 2.0, 3.0, 4.0),
                Quaternion::new(-1.0, 0.5, 0.0, 2.0),
                Quaternion::new(0.0, 0.0, 7.0, 0.0),
                Quaternion::new(3.0, -2.0, 1.0, 0.0),
            ],
        )
        .unwrap();
        let mut w = real_rep(&q);
        assert!(jrs_check(&w).unwrap());
        w.set(5, 2, w.get(5, 2) + 1.0);
        assert!(!jrs_check(&w).unwrap());
        assert!(jrs_check(&RealMatrix::zeros(3, 4)).is_err());
    }

    #[test]
    fn inverse_mapping_roundtrip() {
        let q = QuatMatrix::from_quats(1, 2, &[Quaternion::new(1.0, 2.0, 3.0, 4.0), Quaternion::K]).unwrap();
        let back = from_real_rep(&real_rep(&q)).unwrap();
        assert_eq!(back.to_dense(), q.to_dense());
    }

    proptest! {
        #[test]
        fn homomorphism(a in quat_matrix(3, 3), b in quat_matrix(3, 3)) {
            let ra = real_rep(&a.to_quat_matrix());
            let rb = real_rep(&b.to_quat_matrix());
            let prod = real_rep(&a.mul(&b).unwrap().to_quat_matrix());
            prop_assert!(prod.sub(&ra.matmul(&rb).unwrap()).unwrap().max_abs() < 1e-12);
            let mut sum = a.clone();
            for r in 0..3 { for c in 0..3 { sum.set(r, c, a.get(r, c) + b.get(r, c)); } }
            let rsum = real_rep(&sum.to_quat_matrix());
            prop_assert!(rsum.sub(&ra.add(&rb).unwrap()).unwrap().max_abs() < 1e-12);
        }

        #[test]
        fn adjoint_is_transpose(a in quat_matrix(2, 4)) {
            let lhs = real_rep(&a.adjoint().to_quat_matrix());
            prop_assert_eq!(lhs, real_rep(&a.to_quat_matrix()).transpose());
        }

        #[test]
        fn first_block_column(a in quat_matrix(3, 2)) {
            let full = real_rep(&a.to_quat_matrix());
            let col = real_rep_col(&a.to_quat_matrix());
            for r in 0..12 { for c in 0..2 { prop_assert_eq!(full.get(r, c), col.get(r, c)); } }
        }

        #[test]
        fn every_representation_is_jrs(a in quat_matrix(2, 3)) {
            prop_assert!(jrs_check(&real_rep(&a.to_quat_matrix())).unwrap());
        }

        #[test]
        fn matvec_is_first_block_column_product(a in quat_matrix(3, 3), x in quat_matrix(3, 1)) {
            let am = a.to_quat_matrix();
            let xv = x.column(0);
            let lhs = am.matvec(&xv).unwrap().real_rep_col();
            let rhs = real_rep(&am).matvec(&xv.real_rep_col()).unwrap();
            for (l, r) in lhs.iter().zip(&rhs) { prop_assert!((l - r).abs() < 1e-12); }
        }
    }
}
