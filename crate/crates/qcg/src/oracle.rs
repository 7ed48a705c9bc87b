//! Dense reference computations on the real representation, via `nalgebra`.

use nalgebra::DMatrix;
use qcg_core::real_rep::{real_rep, RealMatrix};
use qcg_core::{Error, QuatMatrix, QuatVector};

fn to_nalgebra(m: &RealMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

fn solve_real(m: &RealMatrix, rhs: &QuatVector) -> qcg_core::Result<QuatVector> {
    let col = nalgebra::DVector::from_vec(rhs.real_rep_col());
    let sol = to_nalgebra(m)
        .lu()
        .solve(&col)
        .ok_or(Error::Domain("singular real representation"))?;
    QuatVector::from_real_rep_col(sol.as_slice())
}

/// `x` with `A x = b`, from LU on the `4n x 4n` real system.
pub fn direct_solve(a: &QuatMatrix, b: &QuatVector) -> qcg_core::Result<QuatVector> {
    solve_real(&real_rep(a), b)
}

/// `z` with `A* z = c`.
pub fn direct_solve_adjoint(a: &QuatMatrix, c: &QuatVector) -> qcg_core::Result<QuatVector> {
    solve_real(&real_rep(a).transpose(), c)
}

/// Singular values of a real matrix, descending.
pub fn singular_values_real(m: &RealMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Quaternion singular values, descending: every fourth value of the real
/// representation's spectrum, together with the largest spread inside a group of
/// four (each quaternion singular value appears four times).
pub fn singular_values(a: &QuatMatrix) -> (Vec<f64>, f64) {
    let s = singular_values_real(&real_rep(a));
    let spread = s
        .chunks(4)
        .map(|c| c.iter().copied().fold(f64::MIN, f64::max) - c.iter().copied().fold(f64::MAX, f64::min))
        .fold(0.0, f64::max);
    (s.iter().step_by(4).copied().collect(), spread)
}
