//! Figure-reproduction presets. Each preset writes one CSV per curve.
//!
//! Horizontal ranges not fixed by the physical parameters are chosen to
//! span the plotted domain and are written to each file's header.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{symmetric_setting, SystemParams};
use crate::optimize;
use crate::search;
use crate::spectrum::{self, env_summary};
use crate::sweep::{self, Axis, Engine, LangevinSettings, Metric, Scale, SweepSpec};
use crate::table::{self, num, Table};
use crate::weakcoupling::{self, squeezing_db};

pub const PRESETS: [&str; 9] = ["fig1b", "fig2a", "fig2b", "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig6"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetOptions {
    pub langevin: LangevinSettings,
    /// Mechanical damping of the asymmetric-coupling preset.
    pub fig6_gamma: f64,
}

impl Default for PresetOptions {
    fn default() -> Self {
        PresetOptions {
            langevin: LangevinSettings {
                tol: 1e-8,
                max_periods: 1_000_000_000_000,
                cr: true,
            },
            fig6_gamma: 0.2,
        }
    }
}

/// Named output tables of a preset, in curve order.
pub type Curves = Vec<(String, Table)>;

pub fn run_preset(name: &str, opts: &PresetOptions) -> Result<Curves> {
    match name {
        "fig1b" => fig1b(opts),
        "fig2a" => fig2a(),
        "fig2b" => fig2b(),
        "fig3" => fig3(opts),
        "fig4" => fig4(opts),
        "fig5a" => fig5a(),
        "fig5b" => fig5bc(true),
        "fig5c" => fig5bc(false),
        "fig6" => fig6(opts),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

pub fn write_preset(name: &str, dir: &Path, opts: &PresetOptions) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (file, t) in run_preset(name, opts)? {
        let path = dir.join(format!("{file}.csv"));
        t.write(&path)?;
        paths.push(path);
    }
    Ok(paths)
}

fn header(t: &mut Table, preset: &str, engine: &str, opts: Option<&PresetOptions>, lines: &[String]) {
    for l in table::provenance("preset") {
        t.comment(l);
    }
    t.comment(format!("preset: {preset}"));
    t.comment(format!("engine: {engine}"));
    if let Some(o) = opts {
        t.comment(format!(
            "tolerances: langevin_tol={:e} max_periods={} counter_rotating={}",
            o.langevin.tol, o.langevin.max_periods, o.langevin.cr
        ));
    }
    for l in lines {
        t.comment(l.clone());
    }
}

fn describe(p: &SystemParams) -> String {
    format!(
        "params: kappa_c={} kappa={} j_1={} j_2={} g_minus={} gamma={} n_th={}",
        p.kappa_c, p.kappa_1, p.j_1, p.j_2, p.g_minus, p.gamma_m, p.n_th
    )
}

fn db(v: Option<f64>) -> Option<f64> {
    v.and_then(|v| squeezing_db(v).ok())
}

/// Squeezing versus main-cavity damping with and without the auxiliary
/// cavities, `G+` optimized at every point on both engines.
fn fig1b(opts: &PresetOptions) -> Result<Curves> {
    let kcs = search::spaced(0.5, 10.0, 12, true);
    let popts = opts.langevin.options();
    let mut out = Vec::new();
    for j in [0.0, 10.0] {
        let mut t = Table::new(&[
            "kappa_c", "r_opt_numeric", "variance_numeric", "s_db_numeric", "r_opt_analytic",
            "variance_analytic", "s_db_analytic", "rel_diff", "flags",
        ]);
        let p0 = symmetric_setting(10.0, 0.5, j, 0.1, 0.0, 1e-5, 0.0)?;
        header(&mut t, "fig1b", "both", Some(opts), &[
            describe(&p0),
            "axis: kappa_c 0.5..10 log x12 (range read off the figure)".into(),
            "optimization: numeric r on a 61-point grid in [0, 0.99] + golden section; analytic r from the closed-form optimum".into(),
        ]);
        let rows: Vec<Vec<String>> = kcs
            .par_iter()
            .map(|&kc| {
                let p = SystemParams { kappa_c: kc, ..p0 };
                let mut flags = Vec::new();
                let numeric = optimize::r_opt_langevin(&p, opts.langevin.cr, &popts)
                    .map_err(|e| flags.push(format!("numeric: {e}")))
                    .ok();
                let env = env_summary(&p);
                let r_a = optimize::r_opt_exact(&env, p.n_th).ok();
                let v_a = optimize::variance_at_ropt(&env, p.n_th).ok();
                let v_n = numeric.map(|o| o.variance);
                let rel = match (v_a, v_n) {
                    (Some(a), Some(n)) => Some((n - a).abs() / a),
                    _ => None,
                };
                vec![
                    num(Some(kc)),
                    num(numeric.map(|o| o.argmin)),
                    num(v_n),
                    num(db(v_n)),
                    num(r_a),
                    num(v_a),
                    num(db(v_a)),
                    num(rel),
                    flags.join(";").replace(',', ";"),
                ]
            })
            .collect();
        for r in rows {
            t.push(r);
        }
        out.push((format!("fig1b_j{j}"), t));
    }
    Ok(out)
}

pub fn spectrum_table(p: &SystemParams, lo: f64, hi: f64, n: usize) -> Table {
    let mut t = Table::new(&["omega", "s_op", "re_A", "im_A"]);
    for w in search::spaced(lo, hi, n, false) {
        let s = spectrum::sample(p, w);
        t.push(vec![num(Some(w)), num(Some(s.s_op)), num(Some(s.a_value.re)), num(Some(s.a_value.im))]);
    }
    t
}

fn spectra(preset: &str, couplings: &[(f64, f64)]) -> Result<Curves> {
    let mut out = Vec::new();
    for &(j1, j2) in couplings {
        let mut p = symmetric_setting(10.0, 0.1, j2, 0.1, 0.0, 1e-5, 0.0)?;
        p.j_1 = j1;
        let mut t = spectrum_table(&p, -20.0, 20.0, 4001);
        let mut h = Table::default();
        header(&mut h, preset, "spectrum", None, &[describe(&p), "axis: omega -20..20 linear x4001".into()]);
        t.comments = h.comments;
        let name = if j1 == j2 {
            format!("{preset}_j{j1}")
        } else {
            format!("{preset}_j1_{j1}_j2_{j2}")
        };
        out.push((name, t));
    }
    Ok(out)
}

fn fig2a() -> Result<Curves> {
    spectra("fig2a", &[(0.0, 0.0), (0.5, 0.5), (10.0, 10.0)])
}

fn fig2b() -> Result<Curves> {
    spectra("fig2b", &[(1.0, 3.0), (3.0, 3.0), (0.0, 0.0)])
}

fn fig34_params(g_minus: f64) -> Result<SystemParams> {
    symmetric_setting(10.0, 0.2, 5.0, g_minus, 0.0, 1e-5, 10.0)
}

/// Variance versus `r` for three drive strengths on both engines, plus the
/// large-cooperativity optimum per drive strength.
fn fig3(opts: &PresetOptions) -> Result<Curves> {
    let mut out = Vec::new();
    let mut approx = Table::new(&[
        "g_minus", "r_opt_approx", "variance_approx", "r_opt_exact", "variance_exact", "flags",
    ]);
    header(&mut approx, "fig3", "weakcoupling", None, &[describe(&fig34_params(0.01)?)]);
    for g in [0.005, 0.01, 0.02] {
        let p = fig34_params(g)?;
        let env = env_summary(&p);
        let r_stab = weakcoupling::stability_ratio(&env);
        let mut spec = SweepSpec::new(
            p,
            vec![Axis {
                name: "r".into(),
                start: 0.0,
                stop: 0.95 * r_stab,
                count: 25,
                scale: Scale::Linear,
            }],
            Engine::Both,
        );
        spec.metrics = vec![
            Metric::VarianceAnalytic,
            Metric::VarianceNumeric,
            Metric::RelDiff,
            Metric::SDbAnalytic,
            Metric::SDbNumeric,
        ];
        spec.langevin = opts.langevin;
        spec.preset = Some("fig3".into());
        let mut t = sweep::run_sweep(&spec)?.to_table();
        t.comment("axis range: r in [0, 0.95 r_stab]");
        out.push((format!("fig3_g{g}"), t));

        let a = optimize::r_opt_approx(&env, p.n_th)?;
        approx.push(vec![
            num(Some(g)),
            num(Some(a.r)),
            num(Some(a.variance)),
            num(optimize::r_opt_exact(&env, p.n_th).ok()),
            num(optimize::variance_at_ropt(&env, p.n_th).ok()),
            if a.outside_regime { "outside-regime".into() } else { String::new() },
        ]);
    }
    out.push(("fig3_optimum".into(), approx));
    Ok(out)
}

/// Optimized variance versus `G-` across the weak/strong coupling boundary.
fn fig4(opts: &PresetOptions) -> Result<Curves> {
    let gs = search::spaced(0.005, 0.5, 15, true);
    let popts = opts.langevin.options();
    let mut t = Table::new(&[
        "g_minus", "r_opt_approx", "variance_approx", "s_db_approx", "r_opt_exact", "variance_exact",
        "r_opt_numeric", "variance_numeric", "s_db_numeric", "rel_diff", "flags",
    ]);
    header(&mut t, "fig4", "both", Some(opts), &[
        describe(&fig34_params(0.1)?),
        "axis: g_minus 0.005..0.5 log x15 (range read off the figure); n_th as in the r-scan preset".into(),
        "rel_diff: |variance_numeric - variance_approx| / variance_approx".into(),
    ]);
    let rows: Vec<Result<Vec<String>>> = gs
        .par_iter()
        .map(|&g| {
            let p = fig34_params(g)?;
            let env = env_summary(&p);
            let a = optimize::r_opt_approx(&env, p.n_th)?;
            let mut flags = Vec::new();
            if a.outside_regime {
                flags.push("outside-regime".to_string());
            }
            if g > p.kappa_1 {
                flags.push("strong-coupling".to_string());
            }
            let numeric = optimize::r_opt_langevin(&p, opts.langevin.cr, &popts)
                .map_err(|e| flags.push(format!("numeric: {e}").replace(',', ";")))
                .ok();
            let v_n = numeric.map(|o| o.variance);
            Ok(vec![
                num(Some(g)),
                num(Some(a.r)),
                num(Some(a.variance)),
                num(db(Some(a.variance))),
                num(optimize::r_opt_exact(&env, p.n_th).ok()),
                num(optimize::variance_at_ropt(&env, p.n_th).ok()),
                num(numeric.map(|o| o.argmin)),
                num(v_n),
                num(db(v_n)),
                num(v_n.map(|n| (n - a.variance).abs() / a.variance)),
                flags.join(";"),
            ])
        })
        .collect();
    for r in rows {
        t.push(r?);
    }
    Ok(vec![("fig4".into(), t)])
}

fn fig5_params(n_th: f64) -> Result<SystemParams> {
    symmetric_setting(10.0, 0.1, 5.0, 0.1, 0.0, 1e-5, n_th)
}

/// Optimal variance versus `J`, with `1/C_e`, `eps` and the explicit
/// small-`kappa` approximation.
fn fig5a() -> Result<Curves> {
    let p0 = fig5_params(10.0)?;
    let mut t = Table::new(&["j", "r_opt", "variance", "s_db", "inv_c_e", "eps", "variance_approx"]);
    header(&mut t, "fig5a", "weakcoupling", None, &[
        describe(&p0),
        "axis: j 0.5..100 log x40 (range read off the figure)".into(),
    ]);
    for j in search::spaced(0.5, 100.0, 40, true) {
        let p = SystemParams { j_1: j, j_2: j, ..p0 };
        let env = env_summary(&p);
        let v = optimize::variance_at_ropt(&env, p.n_th).ok();
        t.push(vec![
            num(Some(j)),
            num(optimize::r_opt_exact(&env, p.n_th).ok()),
            num(v),
            num(db(v)),
            num(Some(1.0 / env.c_e)),
            num(Some(env.eps_plus)),
            num(Some(optimize::variance_of_j_approx(&p, j))),
        ]);
    }
    Ok(vec![("fig5a".into(), t)])
}

/// Optimal coupling (`b`) or optimal variance (`c`) versus `kappa_c`.
fn fig5bc(coupling: bool) -> Result<Curves> {
    let preset = if coupling { "fig5b" } else { "fig5c" };
    let mut out = Vec::new();
    for n_th in [0.0, 10.0] {
        let p0 = fig5_params(n_th)?;
        let mut t = if coupling {
            Table::new(&["kappa_c", "j_opt_numeric", "j_opt_closed", "flags"])
        } else {
            Table::new(&["kappa_c", "variance_numeric", "variance_closed", "s_db_numeric", "s_db_closed", "flags"])
        };
        header(&mut t, preset, "weakcoupling", None, &[
            describe(&p0),
            "axis: kappa_c 1..100 log x15 (range read off the figure); numeric J search on [0.1, 1000]".into(),
        ]);
        for kc in search::spaced(1.0, 100.0, 15, true) {
            let p = SystemParams { kappa_c: kc, ..p0 };
            let cf = optimize::j_opt_closed_form(&p);
            let res = optimize::j_opt_numeric(&p, 0.1, 1000.0);
            let flags = res.as_ref().err().map(|e| e.to_string().replace(',', ";")).unwrap_or_default();
            let res = res.ok();
            let row = if coupling {
                vec![num(Some(kc)), num(res.map(|o| o.argmin)), num(Some(cf.j_opt)), flags]
            } else {
                let v = res.map(|o| o.variance);
                vec![
                    num(Some(kc)),
                    num(v),
                    num(Some(cf.variance_opt)),
                    num(db(v)),
                    num(db(Some(cf.variance_opt))),
                    flags,
                ]
            };
            t.push(row);
        }
        out.push((format!("{preset}_nth{n_th}"), t));
    }
    Ok(out)
}

/// Optimal `J1/J2` versus `J2` at fixed `G+ = 4/5 G-`.
fn fig6(opts: &PresetOptions) -> Result<Curves> {
    let p = symmetric_setting(10.0, 0.2, 1.0, 0.1, 0.8, opts.fig6_gamma, 10.0)?;
    let mut t = Table::new(&["j2", "ratio_opt", "variance", "s_db", "flags"]);
    header(&mut t, "fig6", "weakcoupling", None, &[
        describe(&p),
        "axis: j2 0.2..10 log x25 (range read off the figure); ratio search on [0.05, 20]".into(),
    ]);
    for j2 in search::spaced(0.2, 10.0, 25, true) {
        let res = optimize::asymmetric_j_opt(&p, j2, 0.05, 20.0, false);
        let flags = res.as_ref().err().map(|e| e.to_string().replace(',', ";")).unwrap_or_default();
        let res = res.ok();
        t.push(vec![
            num(Some(j2)),
            num(res.map(|o| o.argmin)),
            num(res.map(|o| o.variance)),
            num(res.map(|o| o.s_db)),
            flags,
        ]);
    }
    Ok(vec![("fig6".into(), t)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_preset() {
        assert_eq!(
            run_preset("fig9", &PresetOptions::default()),
            Err(Error::UnknownPreset("fig9".into()))
        );
    }

    #[test]
    fn spectra_presets_have_one_file_per_curve() {
        let curves = run_preset("fig2a", &PresetOptions::default()).unwrap();
        let names: Vec<_> = curves.iter().map(|c| c.0.as_str()).collect();
        assert_eq!(names, ["fig2a_j0", "fig2a_j0.5", "fig2a_j10"]);
        assert_eq!(curves[0].1.headers, ["omega", "s_op", "re_A", "im_A"]);
        assert_eq!(curves[0].1.rows.len(), 4001);
    }

    #[test]
    fn fig6_ratio_tends_to_one() {
        let curves = run_preset("fig6", &PresetOptions::default()).unwrap();
        let t = &curves[0].1;
        let ratio = t.column("ratio_opt").unwrap();
        assert!(ratio[0].unwrap() > 1.0);
        assert!((ratio.last().unwrap().unwrap() - 1.0).abs() < 0.05);
    }
}
