//! Parameter sweeps over a mixed-radix grid of axes.
//!
//! A sweep file is TOML:
//!
//! ```toml
//! params = "base.toml"        # or an inline [base] table with the same keys
//! engine = "both"             # weakcoupling | langevin | both
//! metrics = ["variance_analytic", "variance_numeric", "rel_diff"]
//!
//! [[axis]]
//! name = "r"
//! start = 0.0
//! stop = 0.9
//! count = 10
//! scale = "linear"            # or "log"
//! ```
//!
//! Rows are ordered with the first axis varying slowest.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::config;
use crate::error::{Error, Result};
use crate::langevin::{self, PeriodicOptions};
use crate::model::{self, Diagnostic, SystemParams, Warning};
use crate::optimize;
use crate::search;
use crate::spectrum::env_summary;
use crate::table::{self, Table};
use crate::weakcoupling::{self, MAX_RATIO};

/// Names accepted as sweep axes.
pub const AXIS_NAMES: [&str; 15] = [
    "kappa_c", "kappa_1", "kappa_2", "kappa", "delta_1", "delta_2", "j_1", "j_2", "j", "j_ratio",
    "g_minus", "r", "gamma", "n_th", "omega",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    WeakCoupling,
    Langevin,
    Both,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::WeakCoupling => "weakcoupling",
            Engine::Langevin => "langevin",
            Engine::Both => "both",
        }
    }

    fn analytic(self) -> bool {
        self != Engine::Langevin
    }

    fn numeric(self) -> bool {
        self != Engine::WeakCoupling
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        search::spaced(self.start, self.stop, self.count, self.scale == Scale::Log)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    VarianceAnalytic,
    VarianceNumeric,
    RelDiff,
    SDbAnalytic,
    SDbNumeric,
    EpsPlus,
    EpsMinus,
    CE,
    ROpt,
    Stable,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::VarianceAnalytic => "variance_analytic",
            Metric::VarianceNumeric => "variance_numeric",
            Metric::RelDiff => "rel_diff",
            Metric::SDbAnalytic => "s_db_analytic",
            Metric::SDbNumeric => "s_db_numeric",
            Metric::EpsPlus => "eps_plus",
            Metric::EpsMinus => "eps_minus",
            Metric::CE => "c_e",
            Metric::ROpt => "r_opt",
            Metric::Stable => "stable",
        }
    }

    fn needs_analytic(self) -> bool {
        matches!(self, Metric::VarianceAnalytic | Metric::SDbAnalytic | Metric::RelDiff)
    }

    fn needs_numeric(self) -> bool {
        matches!(self, Metric::VarianceNumeric | Metric::SDbNumeric | Metric::RelDiff)
    }
}

pub fn default_metrics(engine: Engine) -> Vec<Metric> {
    use Metric::*;
    match engine {
        Engine::WeakCoupling => vec![VarianceAnalytic, SDbAnalytic, EpsPlus, EpsMinus, CE, ROpt, Stable],
        Engine::Langevin => vec![VarianceNumeric, SDbNumeric],
        Engine::Both => vec![
            VarianceAnalytic,
            VarianceNumeric,
            RelDiff,
            SDbAnalytic,
            SDbNumeric,
            EpsPlus,
            EpsMinus,
            CE,
            Stable,
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LangevinSettings {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_periods")]
    pub max_periods: u64,
    /// Keep the counter-rotating terms.
    #[serde(default = "default_true")]
    pub cr: bool,
}

fn default_tol() -> f64 {
    PeriodicOptions::default().tol
}

fn default_max_periods() -> u64 {
    PeriodicOptions::default().max_periods
}

fn default_true() -> bool {
    true
}

impl Default for LangevinSettings {
    fn default() -> Self {
        LangevinSettings {
            tol: default_tol(),
            max_periods: default_max_periods(),
            cr: true,
        }
    }
}

impl LangevinSettings {
    pub fn options(&self) -> PeriodicOptions {
        PeriodicOptions {
            tol: self.tol,
            max_periods: self.max_periods,
            ..PeriodicOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    params: Option<String>,
    base: Option<toml::Table>,
    #[serde(default)]
    engine: Engine,
    #[serde(default)]
    metrics: Vec<Metric>,
    #[serde(default)]
    langevin: LangevinSettings,
    #[serde(default)]
    axis: Vec<Axis>,
    preset: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub metrics: Vec<Metric>,
    pub engine: Engine,
    pub langevin: LangevinSettings,
    /// Label written to the provenance header.
    pub preset: Option<String>,
}

impl SweepSpec {
    pub fn new(base: SystemParams, axes: Vec<Axis>, engine: Engine) -> Self {
        SweepSpec {
            base,
            axes,
            metrics: default_metrics(engine),
            engine,
            langevin: LangevinSettings::default(),
            preset: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::Config("sweep needs at least one axis".into()));
        }
        for a in &self.axes {
            if !AXIS_NAMES.contains(&a.name.as_str()) {
                return Err(Error::Config(format!("unknown axis {:?}", a.name)));
            }
            if a.count < 2 {
                return Err(Error::Config(format!("axis {:?}: count must be at least 2", a.name)));
            }
            if !(a.start.is_finite() && a.stop.is_finite()) {
                return Err(Error::Config(format!("axis {:?}: range must be finite", a.name)));
            }
            if a.scale == Scale::Log && !(a.start > 0.0 && a.stop > 0.0) {
                return Err(Error::Config(format!("axis {:?}: log scale needs a positive range", a.name)));
            }
        }
        if self.metrics.is_empty() {
            return Err(Error::Config("no metrics selected".into()));
        }
        for m in &self.metrics {
            if (m.needs_analytic() && !self.engine.analytic()) || (m.needs_numeric() && !self.engine.numeric()) {
                return Err(Error::Config(format!(
                    "metric {} is not available with engine {}",
                    m.label(),
                    self.engine.label()
                )));
            }
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    /// Axis values of row `index`, first axis slowest.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut rem = index;
        let mut out = vec![0.0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            let v = a.values();
            out[k] = v[rem % a.count];
            rem /= a.count;
        }
        out
    }
}

pub fn parse_sweep(text: &str, dir: &Path) -> Result<SweepSpec> {
    let file: SweepFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let base = match (file.params, file.base) {
        (Some(path), None) => config::load_params(&dir.join(path))?,
        (None, Some(table)) => config::params_from_map(&config::table_to_map(table, &config::PARAM_KEYS)?)?,
        _ => return Err(Error::Config("exactly one of `params` and `[base]` is required".into())),
    };
    let spec = SweepSpec {
        base,
        axes: file.axis,
        metrics: if file.metrics.is_empty() {
            default_metrics(file.engine)
        } else {
            file.metrics
        },
        engine: file.engine,
        langevin: file.langevin,
        preset: file.preset,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_sweep(path: &Path) -> Result<SweepSpec> {
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_sweep(&std::fs::read_to_string(path)?, dir)
}

/// Applies axis values to the base parameters. `g_minus` keeps `r` fixed;
/// `j_ratio` sets `J1 = j_ratio * J2` after every other axis.
pub fn apply_axes(base: &SystemParams, names: &[&str], values: &[f64]) -> Result<SystemParams> {
    let mut p = *base;
    let mut r = if base.g_minus > 0.0 { base.ratio() } else { 0.0 };
    let mut j_ratio = None;
    for (&name, &v) in names.iter().zip(values) {
        match name {
            "kappa_c" => p.kappa_c = v,
            "kappa_1" => p.kappa_1 = v,
            "kappa_2" => p.kappa_2 = v,
            "kappa" => (p.kappa_1, p.kappa_2) = (v, v),
            "delta_1" => p.delta_1 = v,
            "delta_2" => p.delta_2 = v,
            "j_1" => p.j_1 = v,
            "j_2" => p.j_2 = v,
            "j" => (p.j_1, p.j_2) = (v, v),
            "j_ratio" => j_ratio = Some(v),
            "g_minus" => p.g_minus = v,
            "r" => r = v,
            "gamma" => p.gamma_m = v,
            "n_th" => p.n_th = v,
            "omega" => p.omega_m = v,
            other => return Err(Error::Config(format!("unknown axis {other:?}"))),
        }
    }
    p.g_plus = r * p.g_minus;
    if let Some(q) = j_ratio {
        p.j_1 = q * p.j_2;
    }
    p.normalized().checked()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axes: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<Row>,
}

/// Evaluates the requested metrics at one parameter point.
pub fn evaluate(p: &SystemParams, metrics: &[Metric], engine: Engine, lv: &LangevinSettings) -> (Vec<Option<f64>>, Vec<String>) {
    let mut flags = Vec::new();
    for d in model::validate(p) {
        if let Diagnostic::Warning(w) = d {
            flags.push(
                match w {
                    Warning::WeakCouplingViolated { .. } => "weak-coupling-violated",
                    Warning::LinearizationBound { .. } => "linearization-bound",
                }
                .to_string(),
            );
        }
    }
    let env = env_summary(p);
    let analytic = if engine.analytic() && metrics.iter().any(|m| m.needs_analytic()) {
        let rs = weakcoupling::rates(p, &env);
        let v = if p.ratio() <= MAX_RATIO {
            weakcoupling::variance_x1(p, &env)
        } else {
            rs.steady_variance()
        };
        match v {
            Ok(v) if rs.is_stable() => Some(v),
            _ => {
                flags.push("unstable-analytic".into());
                None
            }
        }
    } else {
        None
    };
    let numeric = if engine.numeric() && metrics.iter().any(|m| m.needs_numeric()) {
        match langevin::mech_variance(p, lv.cr, &lv.options()) {
            Ok(v) => Some(v),
            Err(Error::NonConvergent { .. }) => {
                flags.push("nonconvergent-numeric".into());
                None
            }
            Err(_) => {
                flags.push("unstable-numeric".into());
                None
            }
        }
    } else {
        None
    };
    let db = |v: Option<f64>| v.and_then(|v| weakcoupling::squeezing_db(v).ok());
    let values = metrics
        .iter()
        .map(|m| match m {
            Metric::VarianceAnalytic => analytic,
            Metric::VarianceNumeric => numeric,
            Metric::RelDiff => match (analytic, numeric) {
                (Some(a), Some(n)) => Some((n - a).abs() / a),
                _ => None,
            },
            Metric::SDbAnalytic => db(analytic),
            Metric::SDbNumeric => db(numeric),
            Metric::EpsPlus => Some(env.eps_plus),
            Metric::EpsMinus => Some(env.eps_minus),
            Metric::CE => Some(env.c_e),
            Metric::ROpt => {
                if p.is_symmetric() {
                    optimize::r_opt_exact(&env, p.n_th).ok()
                } else {
                    optimize::r_opt_numeric(&env, p.n_th).ok().map(|o| o.argmin)
                }
            }
            Metric::Stable => Some(if weakcoupling::rates(p, &env).is_stable() { 1.0 } else { 0.0 }),
        })
        .collect();
    (values, flags)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let names: Vec<&str> = spec.axes.iter().map(|a| a.name.as_str()).collect();
    let rows = (0..spec.row_count())
        .into_par_iter()
        .map(|i| {
            let axes = spec.point(i);
            match apply_axes(&spec.base, &names, &axes) {
                Ok(p) => {
                    let (values, flags) = evaluate(&p, &spec.metrics, spec.engine, &spec.langevin);
                    Row { axes, values, flags }
                }
                Err(e) => Row {
                    axes,
                    values: vec![None; spec.metrics.len()],
                    flags: vec![format!("invalid: {e}").replace(',', ";")],
                },
            }
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}

impl SweepResult {
    pub fn headers(&self) -> Vec<String> {
        let mut h: Vec<String> = self.spec.axes.iter().map(|a| a.name.clone()).collect();
        h.extend(self.spec.metrics.iter().map(|m| m.label().to_string()));
        h.push("flags".into());
        h
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&self.headers());
        for line in table::provenance("sweep") {
            t.comment(line);
        }
        t.comment(format!("preset: {}", self.spec.preset.as_deref().unwrap_or("-")));
        t.comment(format!("engine: {}", self.spec.engine.label()));
        let lv = &self.spec.langevin;
        t.comment(format!(
            "tolerances: langevin_tol={:e} max_periods={} counter_rotating={}",
            lv.tol, lv.max_periods, lv.cr
        ));
        for a in &self.spec.axes {
            t.comment(format!(
                "axis: {} {:?} {:?} {} {}",
                a.name, a.start, a.stop, a.count,
                if a.scale == Scale::Log { "log" } else { "linear" }
            ));
        }
        t.comment(format!("base: {}", config::write_params(&self.spec.base).trim().replace('\n', "; ")));
        for row in &self.rows {
            let mut cells: Vec<String> = row.axes.iter().map(|&x| table::num(Some(x))).collect();
            cells.extend(row.values.iter().map(|&v| table::num(v)));
            cells.push(row.flags.join(";"));
            t.push(cells);
        }
        t
    }

    /// Column of metric `m`, one entry per row.
    pub fn metric(&self, m: Metric) -> Option<Vec<Option<f64>>> {
        let i = self.spec.metrics.iter().position(|&x| x == m)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }
}

/// Metric names accepted in sweep files, for help text.
pub fn metric_names() -> BTreeMap<&'static str, Metric> {
    use Metric::*;
    [VarianceAnalytic, VarianceNumeric, RelDiff, SDbAnalytic, SDbNumeric, EpsPlus, EpsMinus, CE, ROpt, Stable]
        .into_iter()
        .map(|m| (m.label(), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::symmetric_setting;

    fn base() -> SystemParams {
        symmetric_setting(10.0, 0.2, 5.0, 0.01, 0.5, 1e-5, 10.0).unwrap()
    }

    fn axis(name: &str, start: f64, stop: f64, count: usize) -> Axis {
        Axis {
            name: name.into(),
            start,
            stop,
            count,
            scale: Scale::Linear,
        }
    }

    #[test]
    fn mixed_radix_order() {
        let spec = SweepSpec::new(base(), vec![axis("r", 0.0, 0.5, 2), axis("j", 1.0, 3.0, 3)], Engine::WeakCoupling);
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 6);
        let pts: Vec<_> = res.rows.iter().map(|r| (r.axes[0], r.axes[1])).collect();
        assert_eq!(pts, vec![(0.0, 1.0), (0.0, 2.0), (0.0, 3.0), (0.5, 1.0), (0.5, 2.0), (0.5, 3.0)]);
    }

    #[test]
    fn degenerate_specs_are_rejected() {
        let spec = SweepSpec::new(base(), vec![axis("r", 0.0, 0.5, 1)], Engine::WeakCoupling);
        assert!(matches!(run_sweep(&spec), Err(Error::Config(_))));
        let spec = SweepSpec::new(base(), vec![], Engine::WeakCoupling);
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        let mut spec = SweepSpec::new(base(), vec![axis("r", 0.0, 0.5, 2)], Engine::WeakCoupling);
        spec.metrics = vec![Metric::VarianceNumeric];
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
        let spec = SweepSpec::new(base(), vec![axis("bogus", 0.0, 0.5, 2)], Engine::WeakCoupling);
        assert!(matches!(spec.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn unstable_points_are_flagged_with_empty_metrics() {
        let spec = SweepSpec::new(base(), vec![axis("r", 0.5, 3.0, 2)], Engine::WeakCoupling);
        let res = run_sweep(&spec).unwrap();
        assert!(res.rows[0].values[0].is_some());
        assert!(res.rows[1].values[0].is_none());
        assert!(res.rows[1].flags.contains(&"unstable-analytic".to_string()));
        let csv = res.to_table().to_csv();
        assert!(csv.contains("\nr,variance_analytic,s_db_analytic,eps_plus,eps_minus,c_e,r_opt,stable,flags\n"));
    }

    #[test]
    fn parse_inline_base() {
        let text = r#"
engine = "weakcoupling"
metrics = ["variance_analytic", "c_e"]
[base]
kappa_c = 10
kappa = 0.2
j = 5
g_minus = 0.01
r = 0.5
gamma = 1e-5
n_th = 10
[[axis]]
name = "j_ratio"
start = 0.5
stop = 2.0
count = 4
scale = "log"
"#;
        let spec = parse_sweep(text, Path::new(".")).unwrap();
        assert_eq!(spec.base, base());
        let res = run_sweep(&spec).unwrap();
        assert_eq!(res.rows.len(), 4);
        assert!(res.rows.iter().all(|r| r.values.iter().all(|v| v.is_some())));
    }

    #[test]
    fn rows_are_deterministic() {
        let spec = SweepSpec::new(base(), vec![axis("r", 0.0, 0.9, 7), axis("n_th", 0.0, 10.0, 3)], Engine::WeakCoupling);
        let strip = |s: String| s.lines().filter(|l| !l.starts_with("# timestamp")).collect::<Vec<_>>().join("\n");
        let a = strip(run_sweep(&spec).unwrap().to_table().to_csv());
        let b = strip(run_sweep(&spec).unwrap().to_table().to_csv());
        assert_eq!(a, b);
    }
}
