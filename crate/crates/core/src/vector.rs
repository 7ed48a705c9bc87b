//! Quaternion vectors stored as four real planes.
//!
//! Scalars always act from the right: `x.scale_right(a)` is `x a`, and the inner
//! product is `<x, y> = sum_i conj(y_i) x_i`, which is right-linear in `x`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

#[derive(Debug, Clone, PartialEq)]
pub struct QuatVector {
    planes: [Vec<f64>; 4],
}

impl QuatVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            planes: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
        }
    }

    /// Unit vector `e_i` of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.planes[0][i] = 1.0;
        v
    }

    /// Vector with every entry equal to `q`.
    pub fn filled(n: usize, q: Quaternion) -> Self {
        let c = q.to_array();
        Self {
            planes: [vec![c[0]; n], vec![c[1]; n], vec![c[2]; n], vec![c[3]; n]],
        }
    }

    pub fn from_planes(planes: [Vec<f64>; 4]) -> Result<Self> {
        let n = planes[0].len();
        for p in &planes[1..] {
            if p.len() != n {
                return Err(Error::dim("QuatVector::from_planes", n, p.len()));
            }
        }
        Ok(Self { planes })
    }

    pub fn from_quats(q: &[Quaternion]) -> Self {
        let mut v = Self::zeros(q.len());
        for (i, &qi) in q.iter().enumerate() {
            v.set(i, qi);
        }
        v
    }

    pub fn to_quats(&self) -> Vec<Quaternion> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.planes[0].len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn planes(&self) -> &[Vec<f64>; 4] {
        &self.planes
    }

    #[inline]
    pub fn planes_mut(&mut self) -> &mut [Vec<f64>; 4] {
        &mut self.planes
    }

    pub fn into_planes(self) -> [Vec<f64>; 4] {
        self.planes
    }

    #[inline]
    pub fn get(&self, i: usize) -> Quaternion {
        let p = &self.planes;
        Quaternion::new(p[0][i], p[1][i], p[2][i], p[3][i])
    }

    #[inline]
    pub fn set(&mut self, i: usize, q: Quaternion) {
        let p = &mut self.planes;
        p[0][i] = q.w;
        p[1][i] = q.x;
        p[2][i] = q.y;
        p[3][i] = q.z;
    }

    fn check_len(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::dim(op, self.len(), other.len()));
        }
        Ok(())
    }

    /// `<self, y> = sum_i conj(y_i) self_i`.
    pub fn inner(&self, y: &Self) -> Result<Quaternion> {
        self.check_len(y, "inner")?;
        let [x0, x1, x2, x3] = &self.planes;
        let [y0, y1, y2, y3] = &y.planes;
        let mut acc = [0.0f64; 4];
        for i in 0..self.len() {
            let (a0, a1, a2, a3) = (y0[i], -y1[i], -y2[i], -y3[i]);
            let (b0, b1, b2, b3) = (x0[i], x1[i], x2[i], x3[i]);
            acc[0] += a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3;
            acc[1] += a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2;
            acc[2] += a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1;
            acc[3] += a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0;
        }
        Ok(Quaternion::from_array(acc))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.planes
            .iter()
            .flat_map(|p| p.iter())
            .map(|v| v * v)
            .sum()
    }

    /// Euclidean norm, computed with scaling so that tiny or huge entries do not
    /// underflow or overflow.
    pub fn norm2(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let inv = 1.0 / scale;
        let s: f64 = self
            .planes
            .iter()
            .flat_map(|p| p.iter())
            .map(|v| {
                let t = v * inv;
                t * t
            })
            .sum();
        scale * libm::sqrt(s)
    }

    /// Largest absolute plane entry.
    pub fn max_abs(&self) -> f64 {
        self.planes
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest entry modulus.
    pub fn max_modulus(&self) -> f64 {
        (0..self.len()).fold(0.0f64, |m, i| m.max(self.get(i).norm()))
    }

    pub fn fill_zero(&mut self) {
        for p in &mut self.planes {
            p.fill(0.0);
        }
    }

    pub fn copy_from(&mut self, other: &Self) -> Result<()> {
        self.check_len(other, "copy_from")?;
        for (d, s) in self.planes.iter_mut().zip(&other.planes) {
            d.copy_from_slice(s);
        }
        Ok(())
    }

    /// `self <- self * s` for a real `s`.
    pub fn scale(&mut self, s: f64) {
        for p in &mut self.planes {
            for v in p.iter_mut() {
                *v *= s;
            }
        }
    }

    /// `self <- self * a`.
    pub fn scale_right(&mut self, a: Quaternion) {
        let [p0, p1, p2, p3] = &mut self.planes;
        for i in 0..p0.len() {
            let q = Quaternion::new(p0[i], p1[i], p2[i], p3[i]) * a;
            p0[i] = q.w;
            p1[i] = q.x;
            p2[i] = q.y;
            p3[i] = q.z;
        }
    }

    /// `self <- self + x * a`.
    pub fn add_scaled_right(&mut self, x: &Self, a: Quaternion) -> Result<()> {
        self.check_len(x, "add_scaled_right")?;
        let [y0, y1, y2, y3] = &mut self.planes;
        let [x0, x1, x2, x3] = &x.planes;
        let (a0, a1, a2, a3) = (a.w, a.x, a.y, a.z);
        for i in 0..y0.len() {
            let (b0, b1, b2, b3) = (x0[i], x1[i], x2[i], x3[i]);
            y0[i] += b0 * a0 - b1 * a1 - b2 * a2 - b3 * a3;
            y1[i] += b0 * a1 + b1 * a0 + b2 * a3 - b3 * a2;
            y2[i] += b0 * a2 - b1 * a3 + b2 * a0 + b3 * a1;
            y3[i] += b0 * a3 + b1 * a2 - b2 * a1 + b3 * a0;
        }
        Ok(())
    }

    /// `self <- self + x * s` for a real `s`.
    pub fn axpy(&mut self, s: f64, x: &Self) -> Result<()> {
        self.check_len(x, "axpy")?;
        for (d, src) in self.planes.iter_mut().zip(&x.planes) {
            for (a, b) in d.iter_mut().zip(src) {
                *a += s * b;
            }
        }
        Ok(())
    }

    /// Entrywise `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// Entrywise `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(1.0, other)?;
        Ok(out)
    }

    /// Stacked first block column `[v0; -v2; -v1; -v3]` of the real representation.
    pub fn real_rep_col(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = Vec::with_capacity(4 * n);
        out.extend_from_slice(&self.planes[0]);
        out.extend(self.planes[2].iter().map(|v| -v));
        out.extend(self.planes[1].iter().map(|v| -v));
        out.extend(self.planes[3].iter().map(|v| -v));
        out
    }

    /// Inverse of [`QuatVector::real_rep_col`].
    pub fn from_real_rep_col(col: &[f64]) -> Result<Self> {
        if !col.len().is_multiple_of(4) {
            return Err(Error::Parameter("stacked column length is not a multiple of 4"));
        }
        let n = col.len() / 4;
        let planes = [
            col[..n].to_vec(),
            col[2 * n..3 * n].iter().map(|v| -v).collect(),
            col[n..2 * n].iter().map(|v| -v).collect(),
            col[3 * n..].iter().map(|v| -v).collect(),
        ];
        Self::from_planes(planes)
    }
}
