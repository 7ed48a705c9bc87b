//! Quaternion Givens rotations with a real cosine and a quaternion sine.
//!
//! The column form `[c, s; -conj(s), c]` sends `(x1, x2)^T` to `(ξ, 0)^T`; the row
//! form `[c, s; conj(s), -c]` sends the row `[y1, y2]` to `[ξ, 0]` by right
//! multiplication. When the leading entry is zero both use `c = 0, s = 1`, so
//! `ξ` is the second entry unchanged.

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Column rotation `G = [c, s; -conj(s), c]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensQ {
    pub c: f64,
    pub s: Quaternion,
}

impl GivensQ {
    pub const IDENTITY: Self = Self {
        c: 1.0,
        s: Quaternion::ZERO,
    };

    /// `G (a, b)^T = (c a + s b, -conj(s) a + c b)`.
    #[inline]
    pub fn apply(&self, a: Quaternion, b: Quaternion) -> (Quaternion, Quaternion) {
        (a * self.c + self.s * b, -(self.s.conj() * a) + b * self.c)
    }
}

/// Row rotation `G' = [c, s; conj(s), -c]`, applied from the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowGivens {
    pub c: f64,
    pub s: Quaternion,
}

impl RowGivens {
    /// `[a, b] G' = [a c + b conj(s), a s - b c]`.
    #[inline]
    pub fn apply(&self, a: Quaternion, b: Quaternion) -> (Quaternion, Quaternion) {
        (a * self.c + b * self.s.conj(), a * self.s - b * self.c)
    }
}

/// `sqrt(|a|^2 + |b|^2)` without intermediate overflow.
fn pair_norm(a: Quaternion, b: Quaternion) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    libm::hypot(na, nb)
}

/// Rotation annihilating `x2` in the column `(x1, x2)^T`.
pub fn quat_givens(x1: Quaternion, x2: Quaternion) -> Result<(GivensQ, Quaternion)> {
    let nrm = pair_norm(x1, x2);
    if nrm == 0.0 {
        return Err(Error::Domain("Givens rotation of a zero pair"));
    }
    let n1 = x1.norm();
    if n1 == 0.0 {
        return Ok((GivensQ { c: 0.0, s: Quaternion::ONE }, x2));
    }
    let u = x1 / n1;
    let g = GivensQ {
        c: n1 / nrm,
        s: u * (x2.conj() / nrm),
    };
    Ok((g, u * nrm))
}

/// Rotation annihilating `y2` in the row `[y1, y2]`.
pub fn quat_givens_row(y1: Quaternion, y2: Quaternion) -> Result<(RowGivens, Quaternion)> {
    let nrm = pair_norm(y1, y2);
    if nrm == 0.0 {
        return Err(Error::Domain("Givens rotation of a zero pair"));
    }
    let n1 = y1.norm();
    if n1 == 0.0 {
        return Ok((RowGivens { c: 0.0, s: Quaternion::ONE }, y2));
    }
    let g = RowGivens {
        c: n1 / nrm,
        s: (y1.conj() / n1) * (y2 / nrm),
    };
    Ok((g, (y1 / n1) * nrm))
}
