//! Quaternion matrices as four real planes `A = A0 + A1 i + A2 j + A3 k`.
//!
//! Each plane is dense (row-major) or compressed sparse row, and planes carry
//! independent patterns. The products `A x` and `A* x` are computed by a fused
//! kernel that visits every stored plane entry once and feeds it to all four
//! output planes, so the cost is that of sixteen real plane products and the
//! `4n x 4n` real representation is never formed.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::vector::QuatVector;

/// Real sparse matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            vals: vec![1.0; n],
        }
    }

    /// Builds from raw CSR arrays, validating offsets and indices.
    pub fn from_raw(
        rows: usize,
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        vals: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != rows + 1 {
            return Err(Error::dim("CsrMatrix::from_raw row_ptr", rows + 1, row_ptr.len()));
        }
        if col_idx.len() != vals.len() {
            return Err(Error::dim("CsrMatrix::from_raw values", col_idx.len(), vals.len()));
        }
        if row_ptr[0] != 0 || row_ptr[rows] != vals.len() {
            return Err(Error::Parameter("row offsets do not span the value array"));
        }
        if row_ptr.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parameter("row offsets are not monotone"));
        }
        if col_idx.iter().any(|&c| c >= cols) {
            return Err(Error::Parameter("column index out of range"));
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        })
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed, explicit
    /// zeros are kept.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; rows + 1];
        for &(r, c, _) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::Parameter("triplet index out of range"));
            }
            counts[r + 1] += 1;
        }
        for i in 0..rows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols_raw = vec![0usize; triplets.len()];
        let mut vals_raw = vec![0.0; triplets.len()];
        for &(r, c, v) in triplets {
            let slot = next[r];
            cols_raw[slot] = c;
            vals_raw[slot] = v;
            next[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut vals = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut order: Vec<usize> = Vec::new();
        for r in 0..rows {
            order.clear();
            order.extend(counts[r]..counts[r + 1]);
            order.sort_by_key(|&k| cols_raw[k]);
            for &k in &order {
                let c = cols_raw[k];
                match col_idx.last() {
                    Some(&last) if last == c && col_idx.len() > row_ptr[r] => {
                        *vals.last_mut().unwrap() += vals_raw[k];
                    }
                    _ => {
                        col_idx.push(c);
                        vals.push(vals_raw[k]);
                    }
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        })
    }

    /// Builds from a row-major dense array, dropping exact zeros.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("CsrMatrix::from_dense", rows * cols, data.len()));
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..rows {
            for c in 0..cols {
                let v = data[r * cols + c];
                if v != 0.0 {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                out[r * self.cols + self.col_idx[k]] += self.vals[k];
            }
        }
        out
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
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    /// Entry `(r, c)`, summing duplicates.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        (self.row_ptr[r]..self.row_ptr[r + 1])
            .filter(|&k| self.col_idx[k] == c)
            .map(|k| self.vals[k])
            .sum()
    }

    /// Copy with every value multiplied by `s`; the pattern is unchanged.
    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.vals {
            *v *= s;
        }
        out
    }

    /// Real product `y = self x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::dim("CsrMatrix::matvec", self.cols, x.len()));
        }
        Ok((0..self.rows)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.vals[k] * x[self.col_idx[k]])
                    .sum()
            })
            .collect())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() * other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() * other.nnz());
        row_ptr.push(0);
        for r1 in 0..self.rows {
            for r2 in 0..other.rows {
                for k1 in self.row_ptr[r1]..self.row_ptr[r1 + 1] {
                    let (c1, v1) = (self.col_idx[k1], self.vals[k1]);
                    for k2 in other.row_ptr[r2]..other.row_ptr[r2 + 1] {
                        col_idx.push(c1 * other.cols + other.col_idx[k2]);
                        vals.push(v1 * other.vals[k2]);
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
        Self {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        }
    }
}

/// One real plane of a quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Plane {
    /// Row-major `rows x cols` storage.
    Dense(Vec<f64>),
    Sparse(CsrMatrix),
}

/// Operation counters filled by the instrumented kernels.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KernelStats {
    /// Number of stored plane entries read.
    pub entries_read: u64,
    /// Number of multiply-accumulates into output planes.
    pub entry_uses: u64,
}

trait Tally {
    fn entry(&mut self);
}

struct NoTally;

impl Tally for NoTally {
    #[inline(always)]
    fn entry(&mut self) {}
}

impl Tally for KernelStats {
    #[inline(always)]
    fn entry(&mut self) {
        self.entries_read += 1;
        self.entry_uses += 4;
    }
}

/// Quaternion `m x n` matrix stored as four real planes.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    m: usize,
    n: usize,
    planes: [Plane; 4],
}

// Sign of plane `p`'s contribution to output plane `o` when multiplying from the
// left, together with the input plane it reads: `(A_p e_p)(x_q e_q)` lands in `o`.
// Row `p` lists, for outputs 0..4, (input plane, sign).
const LEFT: [[(usize, f64); 4]; 4] = [
    [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
    [(1, -1.0), (0, 1.0), (3, -1.0), (2, 1.0)],
    [(2, -1.0), (3, 1.0), (0, 1.0), (1, -1.0)],
    [(3, -1.0), (2, -1.0), (1, 1.0), (0, 1.0)],
];

impl QuatMatrix {
    pub fn from_planes(m: usize, n: usize, planes: [Plane; 4]) -> Result<Self> {
        for p in &planes {
            match p {
                Plane::Dense(d) if d.len() != m * n => {
                    return Err(Error::dim("QuatMatrix::from_planes", m * n, d.len()));
                }
                Plane::Sparse(s) if s.rows() != m || s.cols() != n => {
                    return Err(Error::dim("QuatMatrix::from_planes", m * n, s.rows() * s.cols()));
                }
                _ => {}
            }
        }
        Ok(Self { m, n, planes })
    }

    pub fn from_dense_planes(m: usize, n: usize, planes: [Vec<f64>; 4]) -> Result<Self> {
        let [a, b, c, d] = planes;
        Self::from_planes(m, n, [Plane::Dense(a), Plane::Dense(b), Plane::Dense(c), Plane::Dense(d)])
    }

    pub fn from_sparse_planes(planes: [CsrMatrix; 4]) -> Result<Self> {
        let (m, n) = (planes[0].rows(), planes[0].cols());
        let [a, b, c, d] = planes;
        Self::from_planes(m, n, [Plane::Sparse(a), Plane::Sparse(b), Plane::Sparse(c), Plane::Sparse(d)])
    }

    /// Dense matrix from row-major quaternion entries.
    pub fn from_quats(m: usize, n: usize, data: &[Quaternion]) -> Result<Self> {
        if data.len() != m * n {
            return Err(Error::dim("QuatMatrix::from_quats", m * n, data.len()));
        }
        let mut planes = [vec![0.0; m * n], vec![0.0; m * n], vec![0.0; m * n], vec![0.0; m * n]];
        for (k, q) in data.iter().enumerate() {
            for (p, v) in planes.iter_mut().zip(q.to_array()) {
                p[k] = v;
            }
        }
        Self::from_dense_planes(m, n, planes)
    }

    /// Sparse quaternion identity.
    pub fn identity(n: usize) -> Self {
        Self {
            m: n,
            n,
            planes: [
                Plane::Sparse(CsrMatrix::identity(n)),
                Plane::Sparse(CsrMatrix::zeros(n, n)),
                Plane::Sparse(CsrMatrix::zeros(n, n)),
                Plane::Sparse(CsrMatrix::zeros(n, n)),
            ],
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn planes(&self) -> &[Plane; 4] {
        &self.planes
    }

    pub fn is_sparse(&self) -> bool {
        self.planes.iter().all(|p| matches!(p, Plane::Sparse(_)))
    }

    /// Number of stored plane entries over all four planes.
    pub fn stored_entries(&self) -> usize {
        self.planes
            .iter()
            .map(|p| match p {
                Plane::Dense(d) => d.len(),
                Plane::Sparse(s) => s.nnz(),
            })
            .sum()
    }

    /// Plane `p` as a row-major dense array.
    pub fn plane_dense(&self, p: usize) -> Vec<f64> {
        match &self.planes[p] {
            Plane::Dense(d) => d.clone(),
            Plane::Sparse(s) => s.to_dense(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        let mut out = [0.0; 4];
        for (o, p) in out.iter_mut().zip(&self.planes) {
            *o = match p {
                Plane::Dense(d) => d[r * self.n + c],
                Plane::Sparse(s) => s.get(r, c),
            };
        }
        Quaternion::from_array(out)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        let s: f64 = self
            .planes
            .iter()
            .map(|p| match p {
                Plane::Dense(d) => d.iter().map(|v| v * v).sum::<f64>(),
                Plane::Sparse(s) => s.values().iter().map(|v| v * v).sum::<f64>(),
            })
            .sum();
        libm::sqrt(s)
    }

    pub fn to_dense(&self) -> QuatDense {
        let mut out = QuatDense::zeros(self.m, self.n);
        for r in 0..self.m {
            for c in 0..self.n {
                out.set(r, c, self.get(r, c));
            }
        }
        out
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &QuatVector) -> Result<QuatVector> {
        let mut y = QuatVector::zeros(self.m);
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = A* x`.
    pub fn matvec_adj(&self, x: &QuatVector) -> Result<QuatVector> {
        let mut y = QuatVector::zeros(self.n);
        self.matvec_adj_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = A x` into a caller-owned buffer.
    pub fn matvec_into(&self, x: &QuatVector, y: &mut QuatVector) -> Result<()> {
        self.gather(x, y, &mut NoTally)
    }

    /// `y = A* x` into a caller-owned buffer.
    pub fn matvec_adj_into(&self, x: &QuatVector, y: &mut QuatVector) -> Result<()> {
        self.scatter(x, y, &mut NoTally)
    }

    /// `y = A x`, accumulating kernel counters into `stats`.
    pub fn matvec_with_stats(&self, x: &QuatVector, y: &mut QuatVector, stats: &mut KernelStats) -> Result<()> {
        self.gather(x, y, stats)
    }

    /// `y = A* x`, accumulating kernel counters into `stats`.
    pub fn matvec_adj_with_stats(
        &self,
        x: &QuatVector,
        y: &mut QuatVector,
        stats: &mut KernelStats,
    ) -> Result<()> {
        self.scatter(x, y, stats)
    }

    fn gather<T: Tally>(&self, x: &QuatVector, y: &mut QuatVector, tally: &mut T) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::dim("matvec input", self.n, x.len()));
        }
        if y.len() != self.m {
            return Err(Error::dim("matvec output", self.m, y.len()));
        }
        y.fill_zero();
        let xp = x.planes();
        let yp = y.planes_mut();
        for (p, plane) in self.planes.iter().enumerate() {
            let map = &LEFT[p];
            let ins = [&xp[map[0].0], &xp[map[1].0], &xp[map[2].0], &xp[map[3].0]];
            let sg = [map[0].1, map[1].1, map[2].1, map[3].1];
            match plane {
                Plane::Dense(d) => {
                    for r in 0..self.m {
                        let row = &d[r * self.n..(r + 1) * self.n];
                        let mut acc = [0.0f64; 4];
                        for (c, &v) in row.iter().enumerate() {
                            tally.entry();
                            acc[0] += v * ins[0][c];
                            acc[1] += v * ins[1][c];
                            acc[2] += v * ins[2][c];
                            acc[3] += v * ins[3][c];
                        }
                        for o in 0..4 {
                            yp[o][r] += sg[o] * acc[o];
                        }
                    }
                }
                Plane::Sparse(s) => {
                    let (rp, ci, vals) = (s.row_ptr(), s.col_idx(), s.values());
                    for r in 0..self.m {
                        let mut acc = [0.0f64; 4];
                        for k in rp[r]..rp[r + 1] {
                            tally.entry();
                            let (c, v) = (ci[k], vals[k]);
                            acc[0] += v * ins[0][c];
                            acc[1] += v * ins[1][c];
                            acc[2] += v * ins[2][c];
                            acc[3] += v * ins[3][c];
                        }
                        for o in 0..4 {
                            yp[o][r] += sg[o] * acc[o];
                        }
                    }
                }
            }
        }
        Ok(())
    }

    // (A*)_{cr} = conj(A_{rc}): imaginary planes flip sign and the product scatters
    // along rows of the stored planes.
    fn scatter<T: Tally>(&self, x: &QuatVector, y: &mut QuatVector, tally: &mut T) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::dim("matvec_adj input", self.m, x.len()));
        }
        if y.len() != self.n {
            return Err(Error::dim("matvec_adj output", self.n, y.len()));
        }
        y.fill_zero();
        let xp = x.planes();
        let yp = y.planes_mut();
        for (p, plane) in self.planes.iter().enumerate() {
            let map = &LEFT[p];
            let conj = if p == 0 { 1.0 } else { -1.0 };
            let sg = [conj * map[0].1, conj * map[1].1, conj * map[2].1, conj * map[3].1];
            let srcs = [map[0].0, map[1].0, map[2].0, map[3].0];
            match plane {
                Plane::Dense(d) => {
                    for r in 0..self.m {
                        let row = &d[r * self.n..(r + 1) * self.n];
                        let xs = [
                            sg[0] * xp[srcs[0]][r],
                            sg[1] * xp[srcs[1]][r],
                            sg[2] * xp[srcs[2]][r],
                            sg[3] * xp[srcs[3]][r],
                        ];
                        for (c, &v) in row.iter().enumerate() {
                            tally.entry();
                            yp[0][c] += v * xs[0];
                            yp[1][c] += v * xs[1];
                            yp[2][c] += v * xs[2];
                            yp[3][c] += v * xs[3];
                        }
                    }
                }
                Plane::Sparse(s) => {
                    let (rp, ci, vals) = (s.row_ptr(), s.col_idx(), s.values());
                    for r in 0..self.m {
                        let xs = [
                            sg[0] * xp[srcs[0]][r],
                            sg[1] * xp[srcs[1]][r],
                            sg[2] * xp[srcs[2]][r],
                            sg[3] * xp[srcs[3]][r],
                        ];
                        for k in rp[r]..rp[r + 1] {
                            tally.entry();
                            let (c, v) = (ci[k], vals[k]);
                            yp[0][c] += v * xs[0];
                            yp[1][c] += v * xs[1];
                            yp[2][c] += v * xs[2];
                            yp[3][c] += v * xs[3];
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Dense quaternion matrix with row-major quaternion entries, for small
/// reductions and reference computations.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatDense {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuatDense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out.set(i, i, Quaternion::ONE);
        }
        out
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("QuatDense::from_rows", rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[QuatVector]) -> Result<Self> {
        let rows = cols.first().map_or(0, QuatVector::len);
        let mut out = Self::zeros(rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            if v.len() != rows {
                return Err(Error::dim("QuatDense::from_columns", rows, v.len()));
            }
            for r in 0..rows {
                out.set(r, c, v.get(r));
            }
        }
        Ok(out)
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
    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.data[r * self.cols + c] = q;
    }

    pub fn data(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn column(&self, c: usize) -> QuatVector {
        let mut v = QuatVector::zeros(self.rows);
        for r in 0..self.rows {
            v.set(r, self.get(r, c));
        }
        v
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dim("QuatDense::mul", self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim("QuatDense::sub", self.rows * self.cols, other.rows * other.cols));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| *a - *b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|q| q.norm_sqr()).sum())
    }

    /// Largest entry modulus.
    pub fn max_modulus(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, q| m.max(q.norm()))
    }

    /// Definitional product `sum_j A_ij x_j`.
    pub fn matvec(&self, x: &QuatVector) -> Result<QuatVector> {
        if x.len() != self.cols {
            return Err(Error::dim("QuatDense::matvec", self.cols, x.len()));
        }
        let mut y = QuatVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = Quaternion::ZERO;
            for c in 0..self.cols {
                acc += self.get(r, c) * x.get(c);
            }
            y.set(r, acc);
        }
        Ok(y)
    }

    pub fn to_quat_matrix(&self) -> QuatMatrix {
        QuatMatrix::from_quats(self.rows, self.cols, &self.data).expect("shape is consistent")
    }
}
