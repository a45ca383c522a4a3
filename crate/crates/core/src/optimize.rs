//! Optimal drive ratio, optimal inter-cavity coupling and the asymmetric
//! coupling search.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::langevin::{self, PeriodicOptions};
use crate::model::SystemParams;
use crate::search::{self, Refined};
use crate::spectrum::{env_summary, EnvSummary};
use crate::weakcoupling::{self, squeezing_db, stability_ratio, MAX_RATIO};

/// Grid size of the coarse scan preceding golden-section refinement.
pub const COARSE_POINTS: usize = 33;
/// Grid size of the drive-ratio scan on the full dynamics.
pub const LANGEVIN_POINTS: usize = 61;
pub const LANGEVIN_R_MAX: f64 = 0.99;
const GOLDEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Grid,
    GoldenSection,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Grid => "grid",
            Method::GoldenSection => "golden-section",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    /// Optimum sits on the search range boundary.
    pub on_boundary: bool,
    /// Approximations used outside `C_e >> 1`, `eps << 1`.
    pub outside_regime: bool,
}

impl Flags {
    pub fn labels(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.on_boundary {
            v.push("boundary");
        }
        if self.outside_regime {
            v.push("outside-regime");
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    /// Optimized variable: `r`, `J` or `J1/J2` depending on the search.
    pub argmin: f64,
    /// Drive ratio at the optimum, when it is part of the result.
    pub r: Option<f64>,
    pub variance: f64,
    pub s_db: f64,
    pub method: Method,
    pub flags: Flags,
    /// Objective at the two coarse-grid neighbours of the optimum.
    pub neighbours: (f64, f64),
}

impl OptResult {
    fn from_refined(rf: &Refined, r: Option<f64>) -> Self {
        OptResult {
            argmin: rf.argmin,
            r,
            variance: rf.min,
            s_db: squeezing_db(rf.min).unwrap_or(f64::NAN),
            method: Method::GoldenSection,
            flags: Flags {
                on_boundary: rf.on_boundary,
                outside_regime: false,
            },
            neighbours: rf.neighbours,
        }
    }
}

fn symmetric_eps(env: &EnvSummary) -> Result<f64> {
    let scale = env.eps_plus.abs().max(env.eps_minus.abs()).max(1e-300);
    if (env.eps_plus - env.eps_minus).abs() > 1e-9 * scale {
        return Err(Error::NotSymmetric);
    }
    Ok(0.5 * (env.eps_plus + env.eps_minus))
}

/// Exact minimizer over `r` of the steady variance when `eps+ = eps- = eps`.
pub fn r_opt_from(eps: f64, c_e: f64, n_th: f64) -> Result<f64> {
    if !(eps < 1.0) {
        return Err(Error::EpsilonOutOfDomain(eps));
    }
    let k = c_e * (1.0 - eps);
    let d = c_e * (1.0 - eps * eps) + n_th * (1.0 - eps) + 1.0;
    Ok((d - (d * d - k * (k + 1.0)).sqrt()) / k)
}

pub fn r_opt_exact(env: &EnvSummary, n_th: f64) -> Result<f64> {
    r_opt_from(symmetric_eps(env)?, env.c_e, n_th)
}

/// Closed-form variance at `r_opt`.
pub fn variance_at_r(r: f64, eps: f64, c_e: f64, n_th: f64) -> f64 {
    let num = 1.0 + 2.0 * n_th + c_e * ((r - 1.0).powi(2) + eps * (r * r + 1.0));
    let den = 2.0 * (1.0 + c_e * (eps - 1.0) * (r * r - 1.0));
    num / den
}

pub fn variance_at_ropt(env: &EnvSummary, n_th: f64) -> Result<f64> {
    let eps = symmetric_eps(env)?;
    let r = r_opt_from(eps, env.c_e, n_th)?;
    Ok(variance_at_r(r, eps, env.c_e, n_th))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOptimum {
    pub r: f64,
    pub variance: f64,
    /// `C_e < 10` or `eps > 0.1`.
    pub outside_regime: bool,
}

/// Large-cooperativity expansion of the optimum.
pub fn r_opt_approx_from(eps: f64, c_e: f64, n_th: f64) -> ApproxOptimum {
    let q = 1.0 + 2.0 * c_e * eps + 2.0 * n_th;
    ApproxOptimum {
        r: 1.0 - (q / c_e).sqrt() + (1.0 + c_e * eps + n_th) / c_e,
        variance: (q / (4.0 * c_e)).sqrt() + n_th / (2.0 * c_e),
        outside_regime: c_e < 10.0 || eps > 0.1,
    }
}

pub fn r_opt_approx(env: &EnvSummary, n_th: f64) -> Result<ApproxOptimum> {
    Ok(r_opt_approx_from(symmetric_eps(env)?, env.c_e, n_th))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceBound {
    /// `sqrt(eps/2)` with the exact `eps`.
    pub exact: f64,
    /// Same bound with `eps` replaced by its small-`kappa` approximation.
    pub approx: f64,
    /// `kappa / (4 omega)`, the `J -> inf` limit.
    pub floor: f64,
}

/// Infinite-cooperativity floor of the optimal variance.
pub fn variance_bound(p: &SystemParams) -> Result<VarianceBound> {
    if !p.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let eps = symmetric_eps(&env_summary(p))?;
    let (kc, k, j, w) = (p.kappa_c, p.kappa_1, p.j_1, p.omega_m);
    Ok(VarianceBound {
        exact: (eps / 2.0).sqrt(),
        approx: (kc * k / (8.0 * j * j) + k * k / (16.0 * w * w)).sqrt(),
        floor: k / (4.0 * w),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormJ {
    /// Bare cooperativity `4 G-^2 / (gamma kappa_c)`.
    pub c: f64,
    /// Thermal cooperativity `C / (2 n_th + 1)`.
    pub c_th: f64,
    pub j_opt: f64,
    pub variance_opt: f64,
}

pub fn j_opt_closed_form(p: &SystemParams) -> ClosedFormJ {
    let c = 4.0 * p.g_minus * p.g_minus / (p.gamma_m * p.kappa_c);
    let c_th = c / (2.0 * p.n_th + 1.0);
    ClosedFormJ {
        c,
        c_th,
        j_opt: c_th.powf(0.25) * (p.omega_m * p.kappa_c).sqrt(),
        variance_opt: 0.5 * (c_th.powf(-0.5) + p.kappa_1 / (2.0 * p.omega_m)),
    }
}

/// Small-`kappa` estimate of the effective cooperativity at coupling `j`.
pub fn c_e_approx(p: &SystemParams, j: f64) -> f64 {
    let c = 4.0 * p.g_minus * p.g_minus / (p.gamma_m * p.kappa_c);
    c / (1.0 + j * j * p.kappa_1 / (2.0 * p.omega_m.powi(2) * p.kappa_c))
}

/// Optimal variance as an explicit function of `j` in the small-`kappa`,
/// large-cooperativity regime.
pub fn variance_of_j_approx(p: &SystemParams, j: f64) -> f64 {
    let cf = j_opt_closed_form(p);
    let (k, kc, w) = (p.kappa_1, p.kappa_c, p.omega_m);
    0.5 * ((1.0 + j * j * k / (2.0 * w * w * kc)) / cf.c_th + k * kc / (2.0 * j * j) + k * k / (4.0 * w * w)).sqrt()
}

fn with_symmetric_j(p: &SystemParams, j: f64) -> SystemParams {
    SystemParams {
        j_1: j,
        j_2: j,
        ..*p
    }
}

/// Optimal variance (with `r` at its optimum) as a function of `J`;
/// `+inf` where the optimum does not exist.
pub fn optimal_variance_at_j(p: &SystemParams, j: f64) -> f64 {
    variance_at_ropt(&env_summary(&with_symmetric_j(p, j)), p.n_th).unwrap_or(f64::INFINITY)
}

fn checked_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "range",
            value: lo,
            reason: "search range must be a finite positive interval",
        });
    }
    Ok(())
}

fn log_search<F>(f: F, lo: f64, hi: f64) -> Result<Refined>
where
    F: Fn(f64) -> f64 + Sync,
{
    checked_range(lo, hi)?;
    if lo == hi {
        let v = f(lo);
        return Ok(Refined {
            argmin: lo,
            min: v,
            grid_index: 0,
            on_boundary: true,
            neighbours: (f64::INFINITY, f64::INFINITY),
        });
    }
    let grid = search::spaced(lo, hi, COARSE_POINTS, true);
    Ok(refine_parallel(&f, &grid))
}

/// Parallel coarse scan followed by sequential golden-section refinement.
fn refine_parallel<F>(f: &F, grid: &[f64]) -> Refined
where
    F: Fn(f64) -> f64 + Sync,
{
    let values: Vec<f64> = grid.par_iter().map(|&x| f(x)).collect();
    let lookup = |x: f64| -> f64 {
        match grid.iter().position(|&g| g == x) {
            Some(i) => values[i],
            None => f(x),
        }
    };
    search::grid_then_golden(lookup, grid, GOLDEN_TOL)
}

/// Minimizes the optimal variance over `J` in `[lo, hi]`.
pub fn j_opt_numeric(p: &SystemParams, lo: f64, hi: f64) -> Result<OptResult> {
    if !p.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let rf = log_search(|j| optimal_variance_at_j(p, j), lo, hi)?;
    if lo == hi {
        let mut res = OptResult::from_refined(&rf, None);
        res.method = Method::Grid;
        res.r = r_opt_exact(&env_summary(&with_symmetric_j(p, lo)), p.n_th).ok();
        return Ok(res);
    }
    if rf.on_boundary {
        return Err(Error::NoInteriorMinimum { argmin: rf.argmin });
    }
    let env = env_summary(&with_symmetric_j(p, rf.argmin));
    Ok(OptResult::from_refined(&rf, r_opt_exact(&env, p.n_th).ok()))
}

/// Numerical minimizer over `r` of the steady variance for general
/// `eps+-`, restricted to the stable part of `[0, 1)`.
pub fn r_opt_numeric(env: &EnvSummary, n_th: f64) -> Result<OptResult> {
    let r_max = stability_ratio(env).min(MAX_RATIO);
    let f = |r: f64| {
        weakcoupling::variance_from_ratios(r, env.eps_plus, env.eps_minus, env.c_e, n_th)
            .unwrap_or(f64::INFINITY)
    };
    // Stay strictly inside the stable region, where the objective is finite.
    let grid = search::spaced(0.0, r_max * (1.0 - 1e-9), COARSE_POINTS, false);
    let rf = refine_parallel(&f, &grid);
    if !rf.min.is_finite() {
        return Err(Error::Unstable { gap: 0.0 });
    }
    Ok(OptResult::from_refined(&rf, Some(rf.argmin)))
}

fn with_ratio_j(p: &SystemParams, j2: f64, ratio: f64) -> SystemParams {
    SystemParams {
        j_1: ratio * j2,
        j_2: j2,
        ..*p
    }
}

/// Variance at coupling ratio `J1/J2 = ratio` and fixed `r`; `+inf` when
/// unstable.
pub fn variance_at_coupling_ratio(p: &SystemParams, j2: f64, ratio: f64) -> f64 {
    let q = with_ratio_j(p, j2, ratio);
    let env = env_summary(&q);
    if !weakcoupling::rates(&q, &env).is_stable() {
        return f64::INFINITY;
    }
    weakcoupling::rates(&q, &env).steady_variance().unwrap_or(f64::INFINITY)
}

/// Optimal `J1/J2` at fixed `J2` over `[lo, hi]`. With `reoptimize_r` the
/// drive ratio is optimized at every trial ratio instead of held at the
/// value in `p`.
pub fn asymmetric_j_opt(
    p: &SystemParams,
    j2: f64,
    lo: f64,
    hi: f64,
    reoptimize_r: bool,
) -> Result<OptResult> {
    let objective = |ratio: f64| -> f64 {
        if reoptimize_r {
            let q = with_ratio_j(p, j2, ratio);
            r_opt_numeric(&env_summary(&q), p.n_th)
                .map(|o| o.variance)
                .unwrap_or(f64::INFINITY)
        } else {
            variance_at_coupling_ratio(p, j2, ratio)
        }
    };
    let rf = log_search(objective, lo, hi)?;
    if lo != hi && rf.on_boundary {
        return Err(Error::NoInteriorMinimum { argmin: rf.argmin });
    }
    let r = if reoptimize_r {
        r_opt_numeric(&env_summary(&with_ratio_j(p, j2, rf.argmin)), p.n_th)
            .ok()
            .and_then(|o| o.r)
    } else {
        Some(p.ratio())
    };
    let mut res = OptResult::from_refined(&rf, r);
    if lo == hi {
        res.method = Method::Grid;
    }
    Ok(res)
}

/// Minimizes the period-averaged mechanical variance of the full dynamics
/// over `r = G+/G-` in `[0, 0.99]` at fixed `G-`. Points where the dynamics
/// is unstable or fails to converge count as `+inf`.
pub fn r_opt_langevin(p: &SystemParams, include_cr: bool, opts: &PeriodicOptions) -> Result<OptResult> {
    let f = |r: f64| {
        langevin::mech_variance(&p.with_ratio(r), include_cr, opts).unwrap_or(f64::INFINITY)
    };
    let grid = search::spaced(0.0, LANGEVIN_R_MAX, LANGEVIN_POINTS, false);
    let values: Vec<f64> = grid.par_iter().map(|&r| f(r)).collect();
    let lookup = |x: f64| match grid.iter().position(|&g| g == x) {
        Some(i) => values[i],
        None => f(x),
    };
    let rf = search::grid_then_golden(lookup, &grid, 1e-6);
    if !rf.min.is_finite() {
        return Err(Error::Unstable { gap: 0.0 });
    }
    Ok(OptResult::from_refined(&rf, Some(rf.argmin)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::symmetric_setting;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn r_opt_direct_evaluation() {
        let r = r_opt_from(0.0, 1.0, 0.0).unwrap();
        assert!((r - (2.0 - 2f64.sqrt())).abs() < 1e-14);
        let v = variance_at_r(r, 0.0, 1.0, 0.0);
        let oracle = weakcoupling::variance_from_ratios(r, 0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(rel(v, oracle) < 1e-12);
        assert_eq!(r_opt_from(1.0, 10.0, 0.0), Err(Error::EpsilonOutOfDomain(1.0)));
    }

    #[test]
    fn r_opt_ideal_limit() {
        let c_e = 1e8;
        let r = r_opt_from(0.0, c_e, 0.0).unwrap();
        assert!((r - (1.0 - c_e.powf(-0.5))).abs() < 2.0 / c_e);
        assert!(variance_at_r(r, 0.0, c_e, 0.0) < 1e-3);
    }

    #[test]
    fn r_opt_matches_fine_grid() {
        let (eps, c_e, n_th) = (0.025, 400.0, 10.0);
        let r = r_opt_from(eps, c_e, n_th).unwrap();
        let mut best = (0.0, f64::INFINITY);
        for i in 0..100_000 {
            let x = i as f64 * 1e-5;
            let v = weakcoupling::variance_from_ratios(x, eps, eps, c_e, n_th).unwrap_or(f64::INFINITY);
            if v < best.1 {
                best = (x, v);
            }
        }
        assert!((r - best.0).abs() < 1e-4);
    }

    #[test]
    fn fig1b_working_point() {
        let v = variance_at_r(r_opt_from(0.044, 115.6, 0.0).unwrap(), 0.044, 115.6, 0.0);
        assert!((v - 0.16359).abs() < 1e-5, "{v}");
        assert!(squeezing_db(v).unwrap() > 3.0);
        // The large-cooperativity expansion lands near 0.155.
        let a = r_opt_approx_from(0.044, 115.6, 0.0);
        assert!((a.variance - 0.1554).abs() < 1e-4, "{}", a.variance);
    }

    #[test]
    fn approximation_direct_evaluation() {
        let a = r_opt_approx_from(0.0, 400.0, 0.0);
        assert!((a.r - 0.9525).abs() < 1e-12);
        assert!((a.variance - 0.025).abs() < 1e-12);
        assert!(!a.outside_regime);
        assert!(r_opt_approx_from(0.2, 400.0, 0.0).outside_regime);
    }

    #[test]
    fn bound_direct_evaluation() {
        let p = symmetric_setting(10.0, 0.2, 5.0, 0.1, 0.5, 1e-5, 0.0).unwrap();
        let b = variance_bound(&p).unwrap();
        assert!((b.approx - 0.0125f64.sqrt()).abs() < 1e-12);
        assert!(rel(b.exact, b.approx) < 0.1);
        assert!((b.floor - 0.05).abs() < 1e-15);
        let p = symmetric_setting(10.0, 1.0, 5.0, 0.1, 0.5, 1e-5, 0.0).unwrap();
        assert_eq!(variance_bound(&p).unwrap().floor, 0.25);
    }

    #[test]
    fn closed_form_j_direct_evaluation() {
        let p = symmetric_setting(10.0, 0.1, 5.0, 0.1, 0.5, 1e-5, 10.0).unwrap();
        let cf = j_opt_closed_form(&p);
        assert!(rel(cf.c, 400.0) < 1e-12);
        assert!(rel(cf.c_th, 400.0 / 21.0) < 1e-12);
        assert!((cf.j_opt - 6.606).abs() < 1e-3);
        assert!((cf.variance_opt - 0.13957).abs() < 1e-5);
        let p0 = SystemParams { n_th: 0.0, ..p };
        assert_eq!(j_opt_closed_form(&p0).c_th, j_opt_closed_form(&p0).c);
    }

    #[test]
    fn numeric_j_has_interior_minimum() {
        let p = symmetric_setting(10.0, 0.1, 5.0, 0.1, 0.5, 1e-5, 10.0).unwrap();
        let res = j_opt_numeric(&p, 0.5, 100.0).unwrap();
        assert!(!res.flags.on_boundary);
        assert!(res.variance <= res.neighbours.0 && res.variance <= res.neighbours.1);
        let cf = j_opt_closed_form(&p);
        assert!(rel(res.argmin, cf.j_opt) < 0.2, "{} vs {}", res.argmin, cf.j_opt);
        assert!(matches!(
            j_opt_numeric(&p, 0.5, 2.0),
            Err(Error::NoInteriorMinimum { .. })
        ));
        let single = j_opt_numeric(&p, 3.0, 3.0).unwrap();
        assert_eq!(single.argmin, 3.0);
        assert!(single.flags.on_boundary);
    }

    #[test]
    fn numeric_r_matches_exact_in_symmetric_setting() {
        let p = symmetric_setting(10.0, 0.2, 5.0, 0.1, 0.5, 1e-5, 10.0).unwrap();
        let env = env_summary(&p);
        let exact = r_opt_exact(&env, p.n_th).unwrap();
        let num = r_opt_numeric(&env, p.n_th).unwrap();
        assert!((num.argmin - exact).abs() < 1e-6);
        assert!(rel(num.variance, variance_at_ropt(&env, p.n_th).unwrap()) < 1e-9);
    }

    #[test]
    fn symmetric_large_j2_prefers_equal_couplings() {
        let mut p = symmetric_setting(10.0, 0.2, 8.0, 0.1, 0.8, 0.2, 10.0).unwrap();
        p.j_1 = 8.0;
        let res = asymmetric_j_opt(&p, 8.0, 0.2, 5.0, false).unwrap();
        assert!((res.argmin - 1.0).abs() < 0.05, "{}", res.argmin);
        assert!((res.r.unwrap() - 0.8).abs() < 1e-12);
    }
}
