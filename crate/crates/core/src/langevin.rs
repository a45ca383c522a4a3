//! Exact Gaussian steady state of the full linearized system.
//!
//! The four modes (main cavity, two auxiliary cavities, mechanics) are
//! written in quadratures `x = (a + a^dag)/sqrt2`, `p = -i(a - a^dag)/sqrt2`,
//! ordered `[x_c, p_c, x_1, p_1, x_2, p_2, x_m, p_m]`. The covariance obeys
//!
//! ```text
//! dV/dt = A(t) V + V A(t)^T + D
//! ```
//!
//! with `A(t) = A_0 + A_c cos(2 omega t) + A_s sin(2 omega t)`; the
//! counter-rotating terms make `A` periodic with period `pi/omega`.
//!
//! The periodic steady state is found from the one-period map
//! `V -> F V F^T + Q`, where `F` and `Q` come from integrating the
//! propagator and the accumulated noise over a single period. The map is
//! iterated with period doubling (`F_{2n} = F_n^2`, `Q_{2n} = F_n Q_n F_n^T + Q_n`)
//! so that slow mechanical relaxation costs only logarithmically many steps.

use nalgebra::{DMatrix, SMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lyapunov;
use crate::model::SystemParams;
use crate::ode::{self, Tolerance};

pub const DIM: usize = 8;
pub type Mat8 = SMatrix<f64, DIM, DIM>;
type Cmat4 = SMatrix<Complex64, 4, 4>;

/// Mode order within the quadrature vector.
pub const MODES: [&str; 4] = ["cavity", "aux1", "aux2", "mechanics"];
const CAV: usize = 0;
const MECH: usize = 3;

/// Linear drift and white-noise diffusion of the quadrature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftDiffusion {
    pub drift_static: Mat8,
    pub drift_cos: Mat8,
    pub drift_sin: Mat8,
    pub diffusion: Mat8,
    pub omega_m: f64,
    pub n_th: f64,
}

impl DriftDiffusion {
    pub fn drift(&self, t: f64) -> Mat8 {
        if !self.is_time_dependent() {
            return self.drift_static;
        }
        let phase = 2.0 * self.omega_m * t;
        self.drift_static + self.drift_cos * phase.cos() + self.drift_sin * phase.sin()
    }

    pub fn is_time_dependent(&self) -> bool {
        self.drift_cos.iter().any(|&v| v != 0.0) || self.drift_sin.iter().any(|&v| v != 0.0)
    }

    /// `pi/omega`, the period of the counter-rotating modulation. Used as the
    /// stroboscopic interval for time-independent drifts too.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI / self.omega_m
    }

    /// Covariance of the decoupled modes: vacuum cavities, thermal mechanics.
    pub fn uncoupled_fixed_point(&self) -> Mat8 {
        let mut v = Mat8::identity() * 0.5;
        v[(2 * MECH, 2 * MECH)] = self.n_th + 0.5;
        v[(2 * MECH + 1, 2 * MECH + 1)] = self.n_th + 0.5;
        v
    }
}

/// Real quadrature drift of `da_j/dt = -i (M a + N a^dag)_j`.
fn quadrature_drift(m: &Cmat4, n: &Cmat4) -> Mat8 {
    let mut a = Mat8::zeros();
    for j in 0..4 {
        for k in 0..4 {
            let (mr, mi) = (m[(j, k)].re, m[(j, k)].im);
            let (nr, ni) = (n[(j, k)].re, n[(j, k)].im);
            let (xj, pj, xk, pk) = (2 * j, 2 * j + 1, 2 * k, 2 * k + 1);
            a[(xj, xk)] += mi + ni;
            a[(xj, pk)] += mr - nr;
            a[(pj, xk)] += -mr - nr;
            a[(pj, pk)] += mi - ni;
        }
    }
    a
}

/// Assembles the quadrature drift and diffusion of the linearized system.
/// With `include_cr = false` the terms oscillating at `2 omega` are dropped.
pub fn assemble(p: &SystemParams, include_cr: bool) -> DriftDiffusion {
    let c = |re: f64| Complex64::new(re, 0.0);
    let i = Complex64::i();
    let mut m0 = Cmat4::zeros();
    let mut n0 = Cmat4::zeros();
    // d^dag (G+ d_m^dag + G- d_m) + h.c.
    m0[(CAV, MECH)] = c(p.g_minus);
    m0[(MECH, CAV)] = c(p.g_minus);
    n0[(CAV, MECH)] = c(p.g_plus);
    n0[(MECH, CAV)] = c(p.g_plus);
    // -Delta_i d_i^dag d_i + J_i (d^dag d_i + h.c.)
    for (k, (delta, j)) in [(p.delta_1, p.j_1), (p.delta_2, p.j_2)].into_iter().enumerate() {
        m0[(k + 1, k + 1)] = c(-delta);
        m0[(CAV, k + 1)] = c(j);
        m0[(k + 1, CAV)] = c(j);
    }
    let mut drift_static = quadrature_drift(&m0, &n0);
    let kappas = [p.kappa_c, p.kappa_1, p.kappa_2, p.gamma_m];
    let occupations = [0.0, 0.0, 0.0, p.n_th];
    let mut diffusion = Mat8::zeros();
    for (k, (&kappa, &n)) in kappas.iter().zip(&occupations).enumerate() {
        for q in [2 * k, 2 * k + 1] {
            drift_static[(q, q)] -= kappa / 2.0;
            diffusion[(q, q)] = kappa * (n + 0.5);
        }
    }

    let (drift_cos, drift_sin) = if include_cr {
        // d^dag (G+ d_m e^{-2i w t} + G- d_m^dag e^{2i w t}) + h.c., split
        // into cos(2wt) and sin(2wt) parts.
        let mut mc = Cmat4::zeros();
        let mut ms = Cmat4::zeros();
        let mut nc = Cmat4::zeros();
        let mut ns = Cmat4::zeros();
        mc[(CAV, MECH)] = c(p.g_plus);
        mc[(MECH, CAV)] = c(p.g_plus);
        ms[(CAV, MECH)] = -i * p.g_plus;
        ms[(MECH, CAV)] = i * p.g_plus;
        nc[(CAV, MECH)] = c(p.g_minus);
        nc[(MECH, CAV)] = c(p.g_minus);
        ns[(CAV, MECH)] = i * p.g_minus;
        ns[(MECH, CAV)] = i * p.g_minus;
        (quadrature_drift(&mc, &nc), quadrature_drift(&ms, &ns))
    } else {
        (Mat8::zeros(), Mat8::zeros())
    };

    DriftDiffusion {
        drift_static,
        drift_cos,
        drift_sin,
        diffusion,
        omega_m: p.omega_m,
        n_th: p.n_th,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeTag {
    /// Stroboscopic sample at `t = phase (mod period)`.
    Phase(f64),
    PeriodAveraged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub cov: Mat8,
    pub time_tag: TimeTag,
}

impl GaussianState {
    pub fn mech_block(&self) -> SMatrix<f64, 2, 2> {
        self.cov.fixed_view::<2, 2>(2 * MECH, 2 * MECH).into_owned()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.cov.symmetric_eigenvalues().min()
    }

    /// Smallest eigenvalue of `V + (i/2) Sigma`, computed from its real
    /// symmetric embedding; nonnegative for every physical state.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let mut sigma = Mat8::zeros();
        for k in 0..4 {
            sigma[(2 * k, 2 * k + 1)] = 0.5;
            sigma[(2 * k + 1, 2 * k)] = -0.5;
        }
        let mut emb = DMatrix::<f64>::zeros(2 * DIM, 2 * DIM);
        emb.view_mut((0, 0), (DIM, DIM)).copy_from(&self.cov);
        emb.view_mut((DIM, DIM), (DIM, DIM)).copy_from(&self.cov);
        emb.view_mut((0, DIM), (DIM, DIM)).copy_from(&(-sigma));
        emb.view_mut((DIM, 0), (DIM, DIM)).copy_from(&sigma);
        emb.symmetric_eigenvalues().min()
    }

    /// Positive covariance and mechanical `det >= 1/4 - tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_eigenvalue() > 0.0
            && self.mech_block().determinant() >= 0.25 - tol
            && self.uncertainty_min_eigenvalue() >= -tol
    }
}

/// Variance of `X_theta = X1 cos(theta) + X2 sin(theta)` of the mechanics.
pub fn mech_quadrature_variance(gs: &GaussianState, theta: f64) -> f64 {
    let b = gs.mech_block();
    let (c, s) = (theta.cos(), theta.sin());
    c * c * b[(0, 0)] + s * s * b[(1, 1)] + 2.0 * s * c * b[(0, 1)]
}

/// Solves `A V + V A^T + D = 0` for a time-independent drift.
pub fn steady_state_algebraic(dd: &DriftDiffusion) -> Result<GaussianState> {
    if dd.is_time_dependent() {
        return Err(Error::TimeDependentDrift);
    }
    let a = DMatrix::from_column_slice(DIM, DIM, dd.drift_static.as_slice());
    let q = DMatrix::from_column_slice(DIM, DIM, dd.diffusion.as_slice());
    let v = lyapunov::solve_continuous(&a, &q)?;
    Ok(GaussianState {
        cov: Mat8::from_column_slice(v.as_slice()),
        time_tag: TimeTag::PeriodAveraged,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct PeriodicOptions {
    /// Relative Frobenius tolerance on `V(t + T) - V(t)`.
    pub tol: f64,
    pub max_periods: u64,
    pub integrator: Tolerance,
}

impl Default for PeriodicOptions {
    fn default() -> Self {
        PeriodicOptions {
            tol: 1e-8,
            max_periods: 1_000_000,
            integrator: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSteadyState {
    /// Sampled at phase 0 of the modulation.
    pub strobe: GaussianState,
    pub average: GaussianState,
    pub periods_used: u64,
    pub residual: f64,
}

/// One-period propagator `F` and accumulated noise `Q`:
/// `V(t0 + T) = F V(t0) F^T + Q`.
pub fn period_map(dd: &DriftDiffusion, tol: Tolerance) -> (Mat8, Mat8) {
    const N: usize = DIM * DIM;
    let mut y = vec![0.0; 2 * N];
    y[..N].copy_from_slice(Mat8::identity().as_slice());
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let a = dd.drift(t);
        let f = Mat8::from_column_slice(&y[..N]);
        let q = Mat8::from_column_slice(&y[N..]);
        let df = a * f;
        let aq = a * q;
        let dq = aq + aq.transpose() + dd.diffusion;
        dy[..N].copy_from_slice(df.as_slice());
        dy[N..].copy_from_slice(dq.as_slice());
    };
    ode::integrate(rhs, 0.0, dd.period(), &mut y, tol, 1e-3 * dd.period());
    let f = Mat8::from_column_slice(&y[..N]);
    let q = Mat8::from_column_slice(&y[N..]);
    (f, (q + q.transpose()) * 0.5)
}

/// Period average of `V(t)` started from `v0` at phase 0.
fn period_average(dd: &DriftDiffusion, v0: &Mat8, tol: Tolerance) -> Mat8 {
    const N: usize = DIM * DIM;
    let mut y = vec![0.0; 2 * N];
    y[..N].copy_from_slice(v0.as_slice());
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let a = dd.drift(t);
        let v = Mat8::from_column_slice(&y[..N]);
        let av = a * v;
        let dv = av + av.transpose() + dd.diffusion;
        dy[..N].copy_from_slice(dv.as_slice());
        dy[N..].copy_from_slice(&y[..N]);
    };
    let period = dd.period();
    ode::integrate(rhs, 0.0, period, &mut y, tol, 1e-3 * period);
    let s = Mat8::from_column_slice(&y[N..]) / period;
    (s + s.transpose()) * 0.5
}

fn symmetrize(m: &Mat8) -> Mat8 {
    (m + m.transpose()) * 0.5
}

/// Integrates the covariance equation from the uncoupled fixed point until
/// the state repeats over one period to relative tolerance `opts.tol`.
pub fn steady_state_periodic(dd: &DriftDiffusion, opts: &PeriodicOptions) -> Result<PeriodicSteadyState> {
    let (f, q) = period_map(dd, opts.integrator);
    let fd = DMatrix::from_column_slice(DIM, DIM, f.as_slice());
    let rho = lyapunov::spectral_radius(&fd);
    if rho >= 1.0 {
        return Err(Error::UnstablePeriodic {
            spectral_radius: rho,
        });
    }

    let v0 = dd.uncoupled_fixed_point();
    let initial_norm = v0.norm();
    let mut v = v0;
    let (mut fk, mut qk) = (f, q);
    let mut step: u64 = 1;
    let mut periods: u64 = 0;
    let mut last_norm = v.norm();
    let mut growth_streak = 0;
    loop {
        let one = symmetrize(&(f * v * f.transpose() + q));
        let res_one = (one - v).norm() / v.norm();
        let jump = symmetrize(&(fk * v * fk.transpose() + qk));
        let res_jump = (jump - v).norm() / v.norm();
        periods = periods.saturating_add(step);
        if res_one < opts.tol && res_jump < opts.tol {
            let strobe = jump;
            let average = period_average(dd, &strobe, opts.integrator);
            return Ok(PeriodicSteadyState {
                strobe: GaussianState {
                    cov: strobe,
                    time_tag: TimeTag::Phase(0.0),
                },
                average: GaussianState {
                    cov: average,
                    time_tag: TimeTag::PeriodAveraged,
                },
                periods_used: periods,
                residual: res_one.max(res_jump),
            });
        }
        v = jump;
        let norm = v.norm();
        growth_streak = if norm > last_norm { growth_streak + 1 } else { 0 };
        last_norm = norm;
        if norm > 1e6 * initial_norm && growth_streak > 3 {
            return Err(Error::UnstablePeriodic {
                spectral_radius: rho,
            });
        }
        if periods >= opts.max_periods {
            return Err(Error::NonConvergent {
                periods,
                residual: res_one.max(res_jump),
            });
        }
        qk = symmetrize(&(fk * qk * fk.transpose() + qk));
        fk *= fk;
        step = step.saturating_mul(2);
    }
}

/// Period-averaged `X1` variance of the mechanics from the full dynamics.
pub fn mech_variance(p: &SystemParams, include_cr: bool, opts: &PeriodicOptions) -> Result<f64> {
    let dd = assemble(p, include_cr);
    let ss = steady_state_periodic(&dd, opts)?;
    Ok(mech_quadrature_variance(&ss.average, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::symmetric_setting;

    fn fig1b(j: f64, r: f64) -> SystemParams {
        symmetric_setting(10.0, 0.5, j, 0.1, r, 1e-5, 0.0).unwrap()
    }

    #[test]
    fn single_mode_quadrature_rotation() {
        let mut m = Cmat4::zeros();
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        let a = quadrature_drift(&m, &Cmat4::zeros());
        assert_eq!(a[(0, 1)], 2.0);
        assert_eq!(a[(1, 0)], -2.0);
    }

    #[test]
    fn decoupled_fixed_point() {
        let mut p = fig1b(0.0, 0.0);
        p.g_minus = 0.0;
        p.n_th = 7.0;
        let dd = assemble(&p, true);
        let gs = steady_state_algebraic(&assemble(&p, false)).unwrap();
        assert!((gs.cov - dd.uncoupled_fixed_point()).norm() < 1e-10);
        let ss = steady_state_periodic(&dd, &PeriodicOptions::default()).unwrap();
        assert_eq!(ss.periods_used, 1);
        assert!((ss.average.cov - dd.uncoupled_fixed_point()).norm() < 1e-10);
        assert!((mech_quadrature_variance(&ss.average, 0.7) - 7.5).abs() < 1e-10);
    }

    #[test]
    fn periodicity_of_drift() {
        let dd = assemble(&fig1b(10.0, 0.8), true);
        assert!(dd.is_time_dependent());
        for t in [0.0, 0.3, 1.7, 12.9] {
            let diff = dd.drift(t + dd.period()) - dd.drift(t);
            assert!(diff.norm() < 1e-12, "{}", diff.norm());
        }
        assert!(!assemble(&fig1b(10.0, 0.8), false).is_time_dependent());
    }

    #[test]
    fn uncoupled_drift_is_block_diagonal() {
        let mut p = fig1b(10.0, 0.0);
        p.g_minus = 0.0;
        let dd = assemble(&p, true);
        for i in 0..6 {
            for j in 6..8 {
                assert_eq!(dd.drift_static[(i, j)], 0.0);
                assert_eq!(dd.drift_static[(j, i)], 0.0);
            }
        }
    }

    #[test]
    fn periodic_map_matches_discrete_lyapunov() {
        let dd = assemble(&fig1b(10.0, 0.7), true);
        let (f, q) = period_map(&dd, Tolerance::default());
        let fd = DMatrix::from_column_slice(8, 8, f.as_slice());
        let qd = DMatrix::from_column_slice(8, 8, q.as_slice());
        let direct = lyapunov::solve_discrete(&fd, &qd).unwrap();
        let ss = steady_state_periodic(&dd, &PeriodicOptions::default()).unwrap();
        let diff = DMatrix::from_column_slice(8, 8, ss.strobe.cov.as_slice()) - &direct;
        assert!(diff.norm() < 1e-6 * direct.norm(), "{}", diff.norm() / direct.norm());
        assert!(ss.strobe.is_physical(1e-9));
        assert!(ss.average.is_physical(1e-9));
    }

    #[test]
    fn rwa_instability_is_detected() {
        let p = symmetric_setting(0.1, 0.5, 0.0, 0.01, 1.05, 1e-7, 0.0).unwrap();
        let dd = assemble(&p, false);
        assert!(matches!(
            steady_state_algebraic(&dd),
            Err(Error::UnstableDrift { .. })
        ));
        assert!(steady_state_periodic(&dd, &PeriodicOptions::default()).is_err());
    }

    #[test]
    fn algebraic_rejects_time_dependent_drift() {
        let dd = assemble(&fig1b(10.0, 0.5), true);
        assert_eq!(steady_state_algebraic(&dd), Err(Error::TimeDependentDrift));
    }
}
