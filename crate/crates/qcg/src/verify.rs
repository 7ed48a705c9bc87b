//! Reference checks run by `qcg verify`.

use qcg_core::polar::symmetric_initial_q1;
use qcg_core::problems::random::{random_hermitian, random_quat_matrix, random_quat_vector, random_well_conditioned};
use qcg_core::real_rep::{jrs_check, real_rep};
use qcg_core::reduce::dense_ssy_reduce;
use qcg_core::solvers::{NoClock, SolveOptions, SolverKind};
use qcg_core::ssy::{orthogonality_defect, DEFAULT_BREAKDOWN_TOL};
use qcg_core::{QuatMatrix, QuatVector, SsyState};

use crate::oracle::{direct_solve, singular_values};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n: usize,
    pub seed: u64,
    /// Use a Hermitian test matrix and check that `T` is real symmetric.
    pub hermitian: bool,
    /// Perturb one entry of the real representation before the structure check.
    pub corrupt: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            n: 12,
            seed: 1,
            hermitian: false,
            corrupt: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn check(name: &str, value: f64, limit: f64) -> Check {
    Check {
        name: name.into(),
        passed: value <= limit,
        detail: format!("{value:.3e} (limit {limit:.0e})"),
    }
}

fn failed(name: &str, err: impl std::fmt::Display) -> Check {
    Check {
        name: name.into(),
        passed: false,
        detail: format!("error: {err}"),
    }
}

fn unit(v: &QuatVector) -> QuatVector {
    let mut u = v.clone();
    u.scale(1.0 / v.norm2());
    u
}

pub fn run_checks(opts: &VerifyOptions) -> Vec<Check> {
    let n = opts.n.max(2);
    let a: QuatMatrix = if opts.hermitian {
        random_hermitian(n, opts.seed)
    } else {
        random_quat_matrix(n, n, opts.seed)
    };
    let b = random_quat_vector(n, opts.seed.wrapping_add(1));
    let fro = a.frobenius();
    let mut out = Vec::new();

    let mut w = real_rep(&a);
    if opts.corrupt {
        w.set(0, 1, w.get(0, 1) + 0.5);
    }
    out.push(match jrs_check(&w) {
        Ok(ok) => Check {
            name: "jrs_structure".into(),
            passed: ok,
            detail: if ok { "real representation is JRS-symmetric".into() } else { "JRS symmetry violated".into() },
        },
        Err(e) => failed("jrs_structure", e),
    });

    let m = n.min(30);
    let start = unit(&b);
    let ssy = (|| {
        let mut st = SsyState::new(&a, &start, &start, DEFAULT_BREAKDOWN_TOL)?.retain_bases();
        let mut steps = 0;
        while steps < m && st.stopped().is_none() {
            st.step()?;
            steps += 1;
        }
        let fc = st.check_factorization(steps)?;
        let t = st.assemble_t(steps)?;
        Ok::<_, qcg_core::Error>((fc, t))
    })();
    match ssy {
        Ok((fc, t)) => {
            out.push(check("factorization_AQ=PT", fc.res1, 1e-10 * fro));
            out.push(check("factorization_A*P=QT*", fc.res2, 1e-10 * fro));
            out.push(check("orthogonality_P", fc.orth_p, 1e-8));
            out.push(check("orthogonality_Q", fc.orth_q, 1e-8));
            if opts.hermitian {
                out.push(check("hermitian_T_imaginary", t.max_imag(), 1e-12));
                out.push(check("hermitian_T_symmetric", t.max_offdiag_asymmetry(), 1e-12));
            }
        }
        Err(e) => out.push(failed("ssy_tridiagonalization", e)),
    }

    match dense_ssy_reduce(&a) {
        Ok((p, q, t)) => {
            let pd: Vec<QuatVector> = (0..n).map(|c| p.to_dense().column(c)).collect();
            let qd: Vec<QuatVector> = (0..n).map(|c| q.to_dense().column(c)).collect();
            let orth = orthogonality_defect(&pd).unwrap_or(f64::INFINITY).max(orthogonality_defect(&qd).unwrap_or(f64::INFINITY));
            out.push(check("dense_reduction_unitary", orth, 1e-11));
            out.push(Check {
                name: "dense_reduction_strict".into(),
                passed: t.offdiag_nonnegative(),
                detail: "real nonnegative off-diagonals".into(),
            });
            let (sa, _) = singular_values(&a);
            let (st, _) = singular_values(&t.to_dense().to_quat_matrix());
            let dev = sa.iter().zip(&st).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            out.push(check("dense_reduction_singular_values", dev, 1e-10 * sa[0].max(1.0)));
        }
        Err(e) => out.push(failed("dense_reduction", e)),
    }

    if !opts.hermitian {
        let m = 6.min(n - 1);
        let q1 = symmetric_initial_q1(&a, &start).and_then(|q1| {
            let mut st = SsyState::new(&a, &start, &q1, DEFAULT_BREAKDOWN_TOL)?;
            for _ in 0..m {
                st.step()?;
            }
            st.assemble_t(m)
        });
        match q1 {
            Ok(t) => out.push(check("symmetric_start_T_imaginary", t.max_imag(), 1e-8)),
            Err(e) => out.push(failed("symmetric_start", e)),
        }
    }

    let sys_a = random_well_conditioned(n, opts.seed.wrapping_add(2));
    match direct_solve(&sys_a, &b) {
        Ok(expect) => {
            for kind in SolverKind::ALL {
                let name = format!("oracle_{}", kind.name());
                match kind.solve(&sys_a, &b, &SolveOptions::default().with_tol(1e-10), &NoClock) {
                    Ok(rep) => {
                        let err = rep.x.sub(&expect).map(|d| d.norm2() / expect.norm2()).unwrap_or(f64::INFINITY);
                        let mut c = check(&name, err, 1e-6);
                        c.passed &= rep.status.is_success();
                        c.detail = format!("{} [{} after {} iterations]", c.detail, rep.status.as_str(), rep.iters);
                        out.push(c);
                    }
                    Err(e) => out.push(failed(&name, e)),
                }
            }
        }
        Err(e) => out.push(failed("oracle_direct_solve", e)),
    }
    out
}
