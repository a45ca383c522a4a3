//! Effective master equation for the mechanics in the weak-coupling regime.
//!
//! The optical modes act as a structured bath producing cooling (`Gamma-`),
//! heating (`Gamma+`) and two-phonon squeezing (`Gamma_S`) rates. The steady
//! state is a thermal state of a Bogoliubov mode `B'`, which this module
//! reaches by two independent routes: the closed-form quadrature variance in
//! terms of `(zeta, eps+-, C_e, n_th)` and the explicit Lindblad
//! diagonalization.

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::spectrum::EnvSummary;

/// Largest drive ratio accepted by the `zeta`-parametrized formulas.
pub const MAX_RATIO: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    /// Cooling rate.
    pub gamma_minus: f64,
    /// Heating rate.
    pub gamma_plus: f64,
    /// Squeezing rate.
    pub gamma_s: f64,
}

pub fn rates(p: &SystemParams, env: &EnvSummary) -> RateSet {
    let (gp2, gm2) = (p.g_plus * p.g_plus, p.g_minus * p.g_minus);
    RateSet {
        gamma_minus: p.gamma_m * (1.0 + p.n_th) + gm2 * env.s0 + gp2 * env.s_plus,
        gamma_plus: p.gamma_m * p.n_th + gp2 * env.s0 + gm2 * env.s_minus,
        gamma_s: p.g_plus * p.g_minus * env.s0,
    }
}

impl RateSet {
    pub fn is_stable(&self) -> bool {
        self.gamma_minus > self.gamma_plus
    }

    /// Steady-state `<dX1^2>` of the master equation, read off the
    /// first moments `<d^dag d>` and `<d d>` directly:
    /// `(Gamma- + Gamma+ - 2 Gamma_S) / (2 (Gamma- - Gamma+))`.
    ///
    /// Valid for any stable rate set, including drive ratios `r >= 1`.
    pub fn steady_variance(&self) -> Result<f64> {
        let gap = self.gamma_minus - self.gamma_plus;
        if !(gap > 0.0) {
            return Err(Error::Unstable { gap });
        }
        Ok((self.gamma_minus + self.gamma_plus - 2.0 * self.gamma_s) / (2.0 * gap))
    }
}

/// Lindblad diagonalization of the squeezing master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladForm {
    pub a: f64,
    pub b: f64,
    /// `d_m = u B' + v B'^dag`.
    pub u: f64,
    pub v: f64,
    pub gamma_bp_minus: f64,
    pub gamma_bp_plus: f64,
    /// Thermal occupation of `B'` in the steady state (`+inf` when unstable).
    pub n_bp: f64,
}

pub fn lindblad_form(rs: &RateSet) -> Result<LindbladForm> {
    let a = rs.gamma_minus + rs.gamma_plus;
    let disc = a * a - 4.0 * rs.gamma_s * rs.gamma_s;
    if !(disc > 0.0) || disc.sqrt() <= 1e-12 * a {
        return Err(Error::NonLindbladizable { discriminant: disc });
    }
    let b = disc.sqrt();
    // u^2 = (a+b)/2b, v^2 = (a-b)/2b. Written without a - b in a denominator
    // so that gamma_s -> 0 reaches (u, v) = (1, 0) continuously.
    let u = ((a + b) / (2.0 * b)).sqrt();
    let v = -rs.gamma_s / (b * u);
    let gamma_bp_minus = (rs.gamma_minus - rs.gamma_plus + b) / 2.0;
    let gamma_bp_plus = (rs.gamma_plus - rs.gamma_minus + b) / 2.0;
    let gap = gamma_bp_minus - gamma_bp_plus;
    let n_bp = if gap > 0.0 {
        gamma_bp_plus / gap
    } else {
        f64::INFINITY
    };
    Ok(LindbladForm {
        a,
        b,
        u,
        v,
        gamma_bp_minus,
        gamma_bp_plus,
        n_bp,
    })
}

/// `X1` variance of the thermal `B'` state: `(u+v)^2 (2 n_B' + 1) / 2`.
pub fn variance_via_lindblad(rs: &RateSet) -> Result<f64> {
    if !rs.is_stable() {
        return Err(Error::Unstable {
            gap: rs.gamma_minus - rs.gamma_plus,
        });
    }
    let lf = lindblad_form(rs)?;
    Ok((lf.u + lf.v).powi(2) * (2.0 * lf.n_bp + 1.0) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    /// `Gamma- > Gamma+`.
    pub stable: bool,
    /// `(1 - eps- + 1/C_e)/(1 - eps+) - r^2`; meaningful as a bound only
    /// when `eps+ < 1`.
    pub margin: f64,
}

pub fn stability(p: &SystemParams, env: &EnvSummary) -> Stability {
    let r = p.ratio();
    let rhs = (1.0 - env.eps_minus + 1.0 / env.c_e) / (1.0 - env.eps_plus);
    Stability {
        stable: rates(p, env).is_stable(),
        margin: rhs - r * r,
    }
}

/// Largest stable drive ratio in the weak-coupling picture, from the
/// stability bound. `+inf` when `eps+ >= 1`.
pub fn stability_ratio(env: &EnvSummary) -> f64 {
    if env.eps_plus >= 1.0 {
        return f64::INFINITY;
    }
    ((1.0 - env.eps_minus + 1.0 / env.c_e) / (1.0 - env.eps_plus)).sqrt()
}

/// Steady-state variance of the squeezed quadrature in terms of the squeeze
/// parameter `zeta = atanh(r)`, the counter-rotating ratios and the
/// effective cooperativity. `c_e` may be `+inf`.
pub fn variance_from_ratios(
    r: f64,
    eps_plus: f64,
    eps_minus: f64,
    c_e: f64,
    n_th: f64,
) -> Result<f64> {
    if !(0.0..=MAX_RATIO).contains(&r) {
        return Err(Error::RatioOutOfRange(r));
    }
    let zeta = r.atanh();
    let (ch2, sh2) = (zeta.cosh().powi(2), zeta.sinh().powi(2));
    let inv_ce = 1.0 / c_e;
    let den = 1.0 + (inv_ce - eps_minus) * ch2 + eps_plus * sh2;
    if !(den > 0.0) {
        return Err(Error::Unstable { gap: den });
    }
    let num = (-2.0 * zeta).exp() + (eps_minus + (1.0 + 2.0 * n_th) * inv_ce) * ch2 + eps_plus * sh2;
    Ok(0.5 * num / den)
}

pub fn variance_x1(p: &SystemParams, env: &EnvSummary) -> Result<f64> {
    variance_from_ratios(p.ratio(), env.eps_plus, env.eps_minus, env.c_e, p.n_th)
}

/// Squeezing in dB relative to the vacuum variance 1/2.
pub fn squeezing_db(variance: f64) -> Result<f64> {
    if !(variance > 0.0) {
        return Err(Error::NonpositiveVariance(variance));
    }
    Ok(-10.0 * (2.0 * variance).log10())
}

/// Variance of `X_theta = X1 cos(theta) + X2 sin(theta)` in the squeezed
/// vacuum `exp[r (e^{i beta} d^2 - e^{-i beta} d^dag^2)/2]|0>`.
pub fn quadrature_variance_squeezed(r: f64, beta: f64, theta: f64) -> f64 {
    let (sh, ch) = (r.sinh(), r.cosh());
    let sc = sh * ch;
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    (sh * sh - beta.cos() * sc + 0.5) * c2 + (sh * sh + beta.cos() * sc + 0.5) * s2
        - (2.0 * theta).sin() * beta.sin() * sc
}

/// Dependence of the variance on `eps+` at fixed `eps-`, `zeta`, `C_e`, `n_th`.
///
/// The variance is `(A + B x)/(C + D x)` in `x = eps+` with `B/D = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsPlusCase {
    /// Pole at negative `x`, variance at `x = 0` below 1/2: the variance
    /// grows with `eps+` toward 1/2.
    SqueezedBelowHalf,
    /// Pole at negative `x`, variance at `x = 0` above 1/2: the variance
    /// falls with `eps+` toward 1/2; no squeezing.
    AboveHalf,
    /// Pole at positive `x`: negative or unsqueezed variance only.
    PoleInPhysicalRegion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    /// Largest thermal occupation allowing squeezing.
    pub n_th_bound: f64,
    pub n_th_ok: bool,
    /// Largest `eps-` allowing squeezing.
    pub eps_minus_bound: f64,
    pub eps_minus_ok: bool,
    /// Pole position `C/D` (may be `+inf` at `zeta = 0`).
    pub pole: f64,
    /// Variance at `eps+ = 0`, `A/C`.
    pub intercept: f64,
    pub case: EpsPlusCase,
}

pub fn feasibility_from_ratios(r: f64, eps_minus: f64, c_e: f64, n_th: f64) -> Result<Feasibility> {
    if !(0.0..=MAX_RATIO).contains(&r) {
        return Err(Error::RatioOutOfRange(r));
    }
    let zeta = r.atanh();
    let (ch2, sh2) = (zeta.cosh().powi(2), zeta.sinh().powi(2));
    let gain = (1.0 - (-2.0 * zeta).exp()) / (2.0 * ch2);
    let n_th_bound = c_e * gain;
    let eps_minus_bound = gain - n_th / c_e;
    let c_coef = 1.0 + (1.0 / c_e - eps_minus) * ch2;
    let a_coef = 0.5 * ((-2.0 * zeta).exp() + (eps_minus + (1.0 + 2.0 * n_th) / c_e) * ch2);
    let intercept = a_coef / c_coef;
    let case = if c_coef < 0.0 {
        EpsPlusCase::PoleInPhysicalRegion
    } else if intercept < 0.5 {
        EpsPlusCase::SqueezedBelowHalf
    } else {
        EpsPlusCase::AboveHalf
    };
    Ok(Feasibility {
        n_th_bound,
        n_th_ok: n_th < n_th_bound,
        eps_minus_bound,
        eps_minus_ok: eps_minus < eps_minus_bound,
        pole: c_coef / sh2,
        intercept,
        case,
    })
}

pub fn feasibility(p: &SystemParams, env: &EnvSummary) -> Result<Feasibility> {
    feasibility_from_ratios(p.ratio(), env.eps_minus, env.c_e, p.n_th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::symmetric_setting;
    use crate::spectrum::env_summary;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn env(s0: f64, s_pm: f64) -> EnvSummary {
        EnvSummary {
            s0,
            s_plus: s_pm,
            s_minus: s_pm,
            eps_plus: s_pm / s0,
            eps_minus: s_pm / s0,
            c_e: f64::NAN,
        }
    }

    #[test]
    fn single_drive_rates() {
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let e = env_summary(&p);
        let rs = rates(&p, &e);
        assert_eq!(rs.gamma_s, 0.0);
        assert!(rel(rs.gamma_plus, 0.01 * e.s_minus) < 1e-15);
    }

    #[test]
    fn resolved_sideband_optical_damping() {
        let mut p = symmetric_setting(0.1, 0.5, 0.0, 0.02, 0.6, 1e-5, 0.0).unwrap();
        p.gamma_m = 0.0;
        let rs = rates(&p, &env(4.0 / p.kappa_c, 0.0));
        let gamma_opt = 4.0 * (p.g_minus.powi(2) - p.g_plus.powi(2)) / p.kappa_c;
        assert!(rel(rs.gamma_minus - rs.gamma_plus, gamma_opt) < 1e-13);
    }

    #[test]
    fn thermal_rates_by_hand() {
        let p = SystemParams {
            n_th: 10.0,
            ..symmetric_setting(10.0, 0.2, 5.0, 0.1, 0.8, 1e-5, 10.0).unwrap()
        };
        let rs = rates(&p, &env(0.32, 0.008));
        assert!(rel(rs.gamma_minus, 1.1e-4 + 0.0032 + 5.12e-5) < 1e-12);
        assert!(rel(rs.gamma_minus, 3.3612e-3) < 1e-12);
        assert!(rel(rs.gamma_plus, 1e-4 + 0.0064 * 0.32 + 0.01 * 0.008) < 1e-12);
        assert!(rel(rs.gamma_s, 0.008 * 0.32) < 1e-12);
    }

    #[test]
    fn lindblad_limits_and_canonicity() {
        let rs = RateSet {
            gamma_minus: 2.0,
            gamma_plus: 0.3,
            gamma_s: 0.0,
        };
        let lf = lindblad_form(&rs).unwrap();
        assert_eq!((lf.u, lf.v), (1.0, 0.0));
        assert!(rel(lf.gamma_bp_minus, 2.0) < 1e-15);
        assert!(rel(lf.gamma_bp_plus, 0.3) < 1e-15);

        let rs = RateSet {
            gamma_minus: 2.0,
            gamma_plus: 0.0,
            gamma_s: 0.5,
        };
        let lf = lindblad_form(&rs).unwrap();
        let b = 3f64.sqrt();
        // printed normalization: u = (Gs/b) sqrt(2b/(a-b)), v = -sqrt((a-b)/2b)
        let u_printed = (0.5 / b) * (2.0 * b / (2.0 - b)).sqrt();
        let v_printed = -((2.0 - b) / (2.0 * b)).sqrt();
        assert!(rel(lf.u, u_printed) < 1e-13);
        assert!(rel(lf.v, v_printed) < 1e-13);
        assert!((lf.u * lf.u - lf.v * lf.v - 1.0).abs() < 1e-12);
        assert!((lf.u - 1.0380).abs() < 1e-4);
        assert!((lf.v + 0.2782).abs() < 1e-4);
        // the off-diagonal D_S coefficient vanishes
        let off = lf.u * lf.v * lf.a + (lf.u * lf.u + lf.v * lf.v) * rs.gamma_s;
        assert!(off.abs() < 1e-13);
    }

    #[test]
    fn lindblad_boundary_is_rejected() {
        let rs = RateSet {
            gamma_minus: 1.0,
            gamma_plus: 0.0,
            gamma_s: 0.5,
        };
        assert!(matches!(
            lindblad_form(&rs),
            Err(Error::NonLindbladizable { .. })
        ));
    }

    #[test]
    fn lindblad_route_fixed_points() {
        let vac = RateSet {
            gamma_minus: 1.0,
            gamma_plus: 0.0,
            gamma_s: 0.0,
        };
        assert_eq!(variance_via_lindblad(&vac).unwrap(), 0.5);
        let thermal = RateSet {
            gamma_minus: 3.0,
            gamma_plus: 1.0,
            gamma_s: 0.0,
        };
        let lf = lindblad_form(&thermal).unwrap();
        assert!((lf.n_bp - 0.5).abs() < 1e-15);
        assert!((variance_via_lindblad(&thermal).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stability_examples() {
        // eps = 0, C_e -> inf: stable iff r < 1
        for (r, stable) in [(0.99, true), (1.01, false)] {
            let rhs = (1.0 - 0.0 + 0.0) / (1.0 - 0.0);
            assert_eq!(r * r < rhs, stable);
        }
        let rhs: f64 = (1.0 - 0.025 + 1.0 / 100.0) / (1.0 - 0.025);
        assert!((rhs - 1.010_256).abs() < 1e-6);
        assert!(0.99f64 * 0.99 < rhs);
    }

    #[test]
    fn stability_equality_is_unstable() {
        let rs = RateSet {
            gamma_minus: 0.5,
            gamma_plus: 0.5,
            gamma_s: 0.1,
        };
        assert!(!rs.is_stable());
        assert!(rs.steady_variance().is_err());
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance_from_ratios(0.0, 0.0, 0.0, f64::INFINITY, 0.0).unwrap(), 0.5);
        let v = variance_from_ratios(0.0, 0.0, 0.0, 100.0, 10.0).unwrap();
        assert!(rel(v, 0.5 * 1.21 / 1.01) < 1e-14);
        assert!((v - 0.59901).abs() < 1e-5);
        for r in [0.3, 0.7, 0.95] {
            let v = variance_from_ratios(r, 0.0, 0.0, f64::INFINITY, 0.0).unwrap();
            assert!(rel(v, (-2.0 * r.atanh()).exp() / 2.0) < 1e-12);
        }
        assert!(variance_from_ratios(1.0, 0.0, 0.0, 10.0, 0.0).is_err());
    }

    #[test]
    fn decibels() {
        assert_eq!(squeezing_db(0.5).unwrap(), 0.0);
        assert!((squeezing_db(0.25).unwrap() - 3.0103).abs() < 1e-4);
        assert!((squeezing_db(0.125).unwrap() - 6.0206).abs() < 1e-4);
        assert!(squeezing_db(0.0).is_err());
        assert!(squeezing_db(-1.0).is_err());
    }

    #[test]
    fn squeezed_vacuum_quadratures() {
        for theta in [0.0, 0.4, 1.3, 2.9] {
            for beta in [0.0, 1.0, -2.0] {
                assert!((quadrature_variance_squeezed(0.0, beta, theta) - 0.5).abs() < 1e-15);
            }
        }
        assert!((quadrature_variance_squeezed(1.0, 0.0, 0.0) - 0.067_668).abs() < 1e-6);
        let v = quadrature_variance_squeezed(1.0, 0.0, std::f64::consts::FRAC_PI_2);
        assert!((v - 3.694_53).abs() < 1e-5);
    }

    #[test]
    fn squeezed_vacuum_matches_rotated_ellipse() {
        // Independent route: the state is the beta = 0 squeezed vacuum with
        // its axes rotated by beta/2.
        for &(r, beta, theta) in &[(0.7f64, 0.9, 0.3), (1.2, -2.0, 1.1), (0.3, 3.0, -0.7)] {
            let phi: f64 = theta - beta / 2.0;
            let oracle = 0.5 * ((-2.0 * r).exp() * phi.cos().powi(2) + (2.0 * r).exp() * phi.sin().powi(2));
            assert!(rel(quadrature_variance_squeezed(r, beta, theta), oracle) < 1e-12);
        }
    }

    #[test]
    fn feasibility_examples() {
        let f = feasibility_from_ratios(0.5f64.tanh(), 0.01, 400.0, 10.0).unwrap();
        assert!((f.n_th_bound - 99.42).abs() < 0.01);
        assert!(f.n_th_ok);
        let f = feasibility_from_ratios(0.0, 0.01, 400.0, 0.0).unwrap();
        assert_eq!(f.n_th_bound, 0.0);
        assert!(!f.n_th_ok);
        let f = feasibility_from_ratios(0.6, 0.0, 50.0, 0.0).unwrap();
        assert!(f.n_th_ok);
        assert_eq!(f.case, EpsPlusCase::SqueezedBelowHalf);
        let f = feasibility_from_ratios(0.9, 0.9, 1e3, 0.0).unwrap();
        assert_eq!(f.case, EpsPlusCase::PoleInPhysicalRegion);
    }
}
