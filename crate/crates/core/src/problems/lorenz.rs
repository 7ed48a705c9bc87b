//! Lorenz system integrated with the classical fourth-order Runge-Kutta scheme.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    pub alpha: f64,
    pub beta: f64,
    pub rho: f64,
}

impl Default for LorenzParams {
    fn default() -> Self {
        Self {
            alpha: 10.0,
            beta: 8.0 / 3.0,
            rho: 28.0,
        }
    }
}

/// Time derivative `(α(y - x), x(ρ - z) - y, xy - βz)`.
pub fn lorenz_rhs(s: [f64; 3], p: &LorenzParams) -> [f64; 3] {
    let [x, y, z] = s;
    [p.alpha * (y - x), x * (p.rho - z) - y, x * y - p.beta * z]
}

/// Samples on the uniform grid `t_k = k dt`, `k = 0..=round(t_end / dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzSeries {
    pub t: Vec<f64>,
    pub xr: Vec<f64>,
    pub xg: Vec<f64>,
    pub xb: Vec<f64>,
}

impl LorenzSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Root mean square over all three coordinates.
    pub fn rms(&self) -> f64 {
        let n = 3 * self.len();
        if n == 0 {
            return 0.0;
        }
        let ss: f64 = self
            .xr
            .iter()
            .chain(&self.xg)
            .chain(&self.xb)
            .map(|v| v * v)
            .sum();
        libm::sqrt(ss / n as f64)
    }
}

fn rk4_step(s: [f64; 3], dt: f64, p: &LorenzParams) -> [f64; 3] {
    let add = |a: [f64; 3], b: [f64; 3], h: f64| [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]];
    let k1 = lorenz_rhs(s, p);
    let k2 = lorenz_rhs(add(s, k1, dt / 2.0), p);
    let k3 = lorenz_rhs(add(s, k2, dt / 2.0), p);
    let k4 = lorenz_rhs(add(s, k3, dt), p);
    core::array::from_fn(|i| s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

pub fn lorenz_trajectory(t_end: f64, dt: f64, init: (f64, f64, f64)) -> Result<LorenzSeries> {
    lorenz_trajectory_with(t_end, dt, init, &LorenzParams::default())
}

pub fn lorenz_trajectory_with(
    t_end: f64,
    dt: f64,
    init: (f64, f64, f64),
    params: &LorenzParams,
) -> Result<LorenzSeries> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Parameter("dt must be positive"));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Parameter("t_end must be positive"));
    }
    let steps = libm::round(t_end / dt) as usize;
    let mut out = LorenzSeries {
        t: Vec::with_capacity(steps + 1),
        xr: Vec::with_capacity(steps + 1),
        xg: Vec::with_capacity(steps + 1),
        xb: Vec::with_capacity(steps + 1),
    };
    let mut s = [init.0, init.1, init.2];
    for k in 0..=steps {
        out.t.push(k as f64 * dt);
        out.xr.push(s[0]);
        out.xg.push(s[1]);
        out.xb.push(s[2]);
        if k < steps {
            s = rk4_step(s, dt, params);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_initial_state() {
        let s = lorenz_trajectory(1.0, 0.01, (2.0, 3.0, 4.0)).unwrap();
        assert_eq!(s.len(), 101);
        assert_eq!((s.xr[0], s.xg[0], s.xb[0]), (2.0, 3.0, 4.0));
        assert!((s.t[100] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn origin_is_fixed() {
        let s = lorenz_trajectory(5.0, 0.01, (0.0, 0.0, 0.0)).unwrap();
        assert!(s.xr.iter().chain(&s.xg).chain(&s.xb).all(|v| *v == 0.0));
    }

    #[test]
    fn derivative_at_start() {
        let d = lorenz_rhs([2.0, 3.0, 4.0], &LorenzParams::default());
        assert_eq!(d[0], 10.0);
        assert_eq!(d[1], 2.0 * 24.0 - 3.0);
        assert!((d[2] - (6.0 - 8.0 / 3.0 * 4.0)).abs() < 1e-15);
    }

    // Halving dt shrinks the one-step-to-t error by about 2^4.
    #[test]
    fn fourth_order_convergence() {
        let at = |dt: f64| {
            let s = lorenz_trajectory(0.2, dt, (2.0, 3.0, 4.0)).unwrap();
            let k = s.len() - 1;
            [s.xr[k], s.xg[k], s.xb[k]]
        };
        let fine = at(1e-5);
        let e1 = (at(0.01)[0] - fine[0]).abs();
        let e2 = (at(0.005)[0] - fine[0]).abs();
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "{ratio}");
    }

    #[test]
    fn stays_on_attractor() {
        let s = lorenz_trajectory(30.0, 0.01, (2.0, 3.0, 4.0)).unwrap();
        assert!(s.xr.iter().all(|v| v.abs() < 30.0));
        assert!(s.xb.iter().all(|v| *v > -1.0 && *v < 60.0));
        assert!(s.rms() > 5.0);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(lorenz_trajectory(1.0, 0.0, (1.0, 1.0, 1.0)).is_err());
        assert!(lorenz_trajectory(-1.0, 0.1, (1.0, 1.0, 1.0)).is_err());
    }
}
