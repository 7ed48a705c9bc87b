//! Generated problems with a known solution of all ones are recovered by both solvers.

use qcg_core::problems::blur::{motion_blur_matrix, multichannel_blur, scale_to_quaternion, EXTERNAL_SCALES};
use qcg_core::problems::filter::{build_filter_system, default_noise_sigma};
use qcg_core::problems::lorenz::lorenz_trajectory;
use qcg_core::problems::random::{random_sparse, random_well_conditioned};
use qcg_core::solvers::{SolveOptions, SolverKind};
use qcg_core::{QuatMatrix, QuatVector, Quaternion};

fn recovers_ones(name: &str, a: &QuatMatrix, tol: f64, err_tol: f64) {
    let ones = QuatVector::filled(a.cols(), Quaternion::new(1.0, 1.0, 1.0, 1.0));
    let b = a.matvec(&ones).unwrap();
    let opts = SolveOptions::default().with_tol(tol).with_maxit(20_000);
    for kind in [SolverKind::Qnherlq, SolverKind::Qnherqr] {
        let rep = kind.solve(a, &b, &opts, &qcg_core::solvers::NoClock).unwrap();
        assert!(rep.status.is_success(), "{name} {}: {:?}", kind.name(), rep.status);
        let err = rep.x.sub(&ones).unwrap().norm2() / ones.norm2();
        assert!(err <= err_tol, "{name} {}: error {err:e}", kind.name());
    }
}

#[test]
fn well_conditioned_dense() {
    recovers_ones("dense", &random_well_conditioned(24, 5), 1e-10, 1e-8);
}

#[test]
fn sparse_shifted() {
    recovers_ones("sparse", &random_sparse(200, 0.02, 4.0, 6).unwrap(), 1e-10, 1e-8);
}

#[test]
fn multichannel_blur_small() {
    recovers_ones("multichannel", &multichannel_blur(8, 1.0, 2, 2).unwrap(), 1e-10, 1e-6);
}

#[test]
fn motion_blur_small() {
    let a0 = motion_blur_matrix(10, 3).unwrap();
    let [s1, s2, s3] = EXTERNAL_SCALES;
    recovers_ones("motion", &scale_to_quaternion(&a0, s1, s2, s3).unwrap(), 1e-10, 1e-6);
}

#[test]
fn lorenz_filter_matrix() {
    let series = lorenz_trajectory(5.0, 0.01, (1.0, 1.0, 1.0)).unwrap();
    let sys = build_filter_system(&series, default_noise_sigma(&series), 19, 19, 4).unwrap();
    recovers_ones("filter", &sys.x, 1e-10, 1e-5);
}
