//! Seeded random quaternion matrices and systems.

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::error::{Error, Result};
use crate::givens::quat_givens;
use crate::matrix::{CsrMatrix, QuatDense, QuatMatrix};
use crate::quaternion::Quaternion;
use crate::vector::QuatVector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn normal_quat(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(normal(rng), normal(rng), normal(rng), normal(rng))
}

/// Dense `m x n` matrix with independent standard normal components.
pub fn random_quat_matrix(m: usize, n: usize, seed: u64) -> QuatMatrix {
    let mut r = rng(seed);
    let data: Vec<Quaternion> = (0..m * n).map(|_| normal_quat(&mut r)).collect();
    QuatMatrix::from_quats(m, n, &data).expect("shape is consistent")
}

/// Vector with independent standard normal components.
pub fn random_quat_vector(n: usize, seed: u64) -> QuatVector {
    let mut r = rng(seed);
    let data: Vec<Quaternion> = (0..n).map(|_| normal_quat(&mut r)).collect();
    QuatVector::from_quats(&data)
}

/// `3 I + G / (4 sqrt(n))` with `G` standard normal; singular values cluster in
/// roughly `[2, 4]`.
pub fn random_well_conditioned(n: usize, seed: u64) -> QuatMatrix {
    let g = random_quat_matrix(n, n, seed).to_dense();
    let s = 1.0 / (4.0 * libm::sqrt(n as f64));
    let mut out = QuatDense::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut v = g.get(r, c) * s;
            if r == c {
                v += Quaternion::real(3.0);
            }
            out.set(r, c, v);
        }
    }
    out.to_quat_matrix()
}

/// `(G + G*) / 2` with `G` standard normal.
pub fn random_hermitian(n: usize, seed: u64) -> QuatMatrix {
    let g = random_quat_matrix(n, n, seed).to_dense();
    let mut out = QuatDense::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, (g.get(r, c) + g.get(c, r).conj()) * 0.5);
        }
    }
    out.to_quat_matrix()
}

/// Unitary matrix built as a product of quaternion Givens rotations on random
/// index pairs followed by random unit phases.
pub fn random_unitary(n: usize, seed: u64) -> QuatMatrix {
    let mut r = rng(seed);
    let mut u = QuatDense::identity(n);
    if n >= 2 {
        let pick = Uniform::new(0, n).expect("nonempty range");
        for _ in 0..4 * n * n {
            let i = pick.sample(&mut r);
            let j = pick.sample(&mut r);
            if i == j {
                continue;
            }
            let (g, _) = quat_givens(normal_quat(&mut r), normal_quat(&mut r)).expect("nonzero pair");
            for c in 0..n {
                let (a, b) = g.apply(u.get(i, c), u.get(j, c));
                u.set(i, c, a);
                u.set(j, c, b);
            }
        }
    }
    for i in 0..n {
        let ph = normal_quat(&mut r).phase();
        for c in 0..n {
            u.set(i, c, ph * u.get(i, c));
        }
    }
    u.to_quat_matrix()
}

/// Sparse `n x n` matrix: each plane gets entries with probability `density`,
/// plus a dominant real diagonal of size `shift`.
pub fn random_sparse(n: usize, density: f64, shift: f64, seed: u64) -> Result<QuatMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parameter("density must lie in [0, 1]"));
    }
    let mut r = rng(seed);
    let unit = Uniform::new(0.0, 1.0).expect("valid range");
    let planes: [CsrMatrix; 4] = core::array::from_fn(|p| {
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if unit.sample(&mut r) < density {
                    trip.push((i, j, normal(&mut r)));
                }
            }
            if p == 0 {
                trip.push((i, i, shift));
            }
        }
        CsrMatrix::from_triplets(n, n, &trip).expect("indices in range")
    });
    QuatMatrix::from_sparse_planes(planes)
}

/// A system `A x = b` with known solution.
#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub a: QuatMatrix,
    pub x_true: QuatVector,
    pub b: QuatVector,
}

/// Well-conditioned dense system whose exact solution is the all-ones vector.
pub fn random_system(n: usize, seed: u64) -> RandomSystem {
    let a = random_well_conditioned(n, seed);
    let x_true = QuatVector::filled(n, Quaternion::ONE);
    let b = a.matvec(&x_true).expect("square");
    RandomSystem { a, x_true, b }
}
