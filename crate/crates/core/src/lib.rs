//! Structure-preserving quaternion linear algebra.
//!
//! Quaternion matrices are stored as four real planes `A = A0 + A1 i + A2 j + A3 k`
//! and every kernel works on those planes directly, which is the same as working with
//! the first block column of the real representation without ever forming it.
//!
//! On top of the kernels the crate provides:
//!
//! * the quaternion Saunders-Simon-Yip tridiagonalization, both as the incremental
//!   three-term recurrence ([`ssy`]) and as a dense unitary reduction ([`reduce`]);
//! * the two conjugate-gradient-type solvers QNHERLQ (Galerkin condition, LQ
//!   updates) and QNHERQR (minimum residual, QR updates), the adjoint-pair solve and a
//!   quaternion GMRES baseline ([`solvers`]);
//! * generators for the experiment problem classes ([`problems`]) and the image
//!   quality metrics used to score restorations ([`image`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

mod error;
pub mod givens;
pub mod image;
pub mod linalg;
pub mod matrix;
pub mod polar;
pub mod problems;
pub mod quaternion;
pub mod real_rep;
pub mod reduce;
pub mod solvers;
pub mod ssy;
pub mod vector;

pub use error::{Error, Result};
pub use givens::{quat_givens, quat_givens_row, GivensQ, RowGivens};
pub use matrix::{CsrMatrix, KernelStats, Plane, QuatDense, QuatMatrix};
pub use quaternion::Quaternion;
pub use real_rep::{from_real_rep, jrs_check, real_rep, real_rep_col, RealMatrix};
pub use vector::QuatVector;
pub use ssy::{SsyState, StepKind, StepResult, StrictTridiagonal};
