//! Dense real LU factorization with partial pivoting.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real_rep::RealMatrix;

/// `P A = L U` packed into one matrix, with the row permutation.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &RealMatrix) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::dim("Lu::new", n, a.cols()));
        }
        let mut lu = a.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (piv, pval) = (k..n)
                .map(|r| (r, lu[r * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pval <= f64::EPSILON * scale * n as f64 || pval == 0.0 {
                return Err(Error::Domain("matrix is numerically singular"));
            }
            if piv != k {
                for c in 0..n {
                    lu.swap(k * n + c, piv * n + c);
                }
                perm.swap(k, piv);
            }
            let d = lu[k * n + k];
            for r in k + 1..n {
                let f = lu[r * n + k] / d;
                lu[r * n + k] = f;
                if f != 0.0 {
                    for c in k + 1..n {
                        lu[r * n + c] -= f * lu[k * n + c];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::dim("Lu::solve", n, b.len()));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 0..n {
            let s: f64 = (0..r).map(|c| self.lu[r * n + c] * x[c]).sum();
            x[r] -= s;
        }
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| self.lu[r * n + c] * x[c]).sum();
            x[r] = (x[r] - s) / self.lu[r * n + r];
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<RealMatrix> {
        let n = self.n;
        let mut out = RealMatrix::zeros(n, n);
        let mut e = alloc::vec![0.0; n];
        for c in 0..n {
            e.fill(0.0);
            e[c] = 1.0;
            let col = self.solve(&e)?;
            for (r, v) in col.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        Ok(out)
    }
}
