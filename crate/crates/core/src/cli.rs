//! Command-line front end. The binary only forwards `std::env::args` here.
//!
//! Every command builds named tables. With `--out DIR` each table is
//! written to `DIR/<name>.csv`; otherwise all tables are printed to stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::classical;
use crate::config;
use crate::error::{Error, Result};
use crate::langevin::{self, GaussianState};
use crate::model::{self, Diagnostic, SystemParams};
use crate::optimize::{self, Method, OptResult};
use crate::presets::{self, PresetOptions};
use crate::spectrum::{self, env_summary};
use crate::sweep::{self, LangevinSettings};
use crate::table::{self, flag, num, Table};
use crate::weakcoupling::{self, squeezing_db};

#[derive(Debug, Parser)]
#[command(name = "optosqueeze", version, about = "Mechanical squeezing with an engineered three-cavity optical bath")]
pub struct Cli {
    /// System parameter file.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    /// Output directory; tables go to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for grids and sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optical spectrum S_op and the dip/peak report.
    Spectrum {
        #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
        omega_min: f64,
        #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
        omega_max: f64,
        #[arg(long, default_value_t = 4001)]
        points: usize,
    },
    /// Weak-coupling steady variance and rates.
    Variance,
    /// Steady state of the full linearized dynamics.
    Langevin {
        #[command(flatten)]
        lv: LangevinArgs,
        /// Also tabulate the mechanical variance on N angles in [0, pi).
        #[arg(long, value_name = "N")]
        theta_scan: Option<usize>,
    },
    /// Convert a drive file into a parameter file and validity report.
    Drive { file: PathBuf },
    /// Optimize the squeezing over r, J or J1/J2.
    Optimize {
        #[arg(long, value_enum, default_value_t = Over::R)]
        over: Over,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Search range for J or J1/J2.
        #[arg(long)]
        min: Option<f64>,
        #[arg(long)]
        max: Option<f64>,
        /// For r: minimize the full dynamics instead of the rate equations.
        #[arg(long)]
        langevin: bool,
        /// For j-ratio: optimize r at every trial ratio.
        #[arg(long)]
        reoptimize_r: bool,
        #[command(flatten)]
        lv: LangevinArgs,
    },
    /// Run a sweep file.
    Sweep { spec: PathBuf },
    /// Regenerate the data of one figure.
    Preset {
        name: String,
        #[command(flatten)]
        lv: LangevinArgs,
        #[arg(long, default_value_t = PresetOptions::default().fig6_gamma)]
        fig6_gamma: f64,
    },
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct LangevinArgs {
    /// Keep the counter-rotating terms (default).
    #[arg(long, overrides_with = "no_cr")]
    pub cr: bool,
    #[arg(long)]
    pub no_cr: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000_000_000)]
    pub max_periods: u64,
}

impl LangevinArgs {
    pub fn settings(&self) -> LangevinSettings {
        LangevinSettings {
            tol: self.tol,
            max_periods: self.max_periods,
            cr: !self.no_cr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Over {
    R,
    J,
    JRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Numeric,
    Both,
}

/// Exit status for an error: 2 for numerical failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergent { .. }
        | Error::Singular(_)
        | Error::NoExtremum(_)
        | Error::NoInteriorMinimum { .. } => 2,
        _ => 1,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        // Fails only when a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (tables, failure) = match &cli.command {
        Command::Spectrum { omega_min, omega_max, points } => {
            (spectrum_cmd(&params(cli)?, *omega_min, *omega_max, *points)?, None)
        }
        Command::Variance => (vec![variance_cmd(&params(cli)?)?], None),
        Command::Langevin { lv, theta_scan } => langevin_cmd(&params(cli)?, lv, *theta_scan)?,
        Command::Drive { file } => {
            let (report, p) = drive_cmd(file)?;
            let text = config::write_params(&p);
            match &cli.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    std::fs::write(dir.join("params.toml"), text)?;
                }
                None => print!("{text}\n"),
            }
            (vec![report], None)
        }
        Command::Optimize { over, method, min, max, langevin, reoptimize_r, lv } => {
            let p = params(cli)?;
            let range = (min.unwrap_or(0.1), max.unwrap_or(1000.0));
            let range = match over {
                Over::JRatio => (min.unwrap_or(0.05), max.unwrap_or(20.0)),
                _ => range,
            };
            (vec![optimize_cmd(&p, *over, *method, range, *langevin, *reoptimize_r, lv)?], None)
        }
        Command::Sweep { spec } => {
            let s = sweep::load_sweep(spec)?;
            (vec![("sweep".to_string(), sweep::run_sweep(&s)?.to_table())], None)
        }
        Command::Preset { name, lv, fig6_gamma } => {
            let opts = PresetOptions {
                langevin: lv.settings(),
                fig6_gamma: *fig6_gamma,
            };
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in presets::write_preset(name, &dir, &opts)? {
                eprintln!("wrote {}", path.display());
            }
            return Ok(());
        }
    };
    emit(&tables, cli.out.as_deref())?;
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn emit(tables: &[(String, Table)], out: Option<&Path>) -> Result<()> {
    match out {
        Some(dir) => {
            for (name, t) in tables {
                t.write(&dir.join(format!("{name}.csv")))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            for (i, (_, t)) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(stdout)?;
                }
                stdout.write_all(t.to_csv().as_bytes())?;
            }
        }
    }
    Ok(())
}

/// Loads and validates `--params`, printing warnings to stderr.
fn params(cli: &Cli) -> Result<SystemParams> {
    let path = cli
        .params
        .as_ref()
        .ok_or_else(|| Error::Config("--params FILE is required".into()))?;
    let p = config::load_params(path)?;
    checked_params(p)
}

fn checked_params(p: SystemParams) -> Result<SystemParams> {
    for d in model::validate(&p) {
        match d {
            Diagnostic::Error(e) => return Err(e),
            w => eprintln!("{w}"),
        }
    }
    Ok(p)
}

fn with_header(mut t: Table, kind: &str, p: Option<&SystemParams>) -> Table {
    let mut lines = table::provenance(kind);
    if let Some(p) = p {
        lines.push(format!("params: {}", config::write_params(p).trim_end().replace('\n', ", ")));
    }
    lines.append(&mut t.comments);
    t.comments = lines;
    t
}

pub fn spectrum_cmd(p: &SystemParams, lo: f64, hi: f64, n: usize) -> Result<Vec<(String, Table)>> {
    if !(lo < hi) || n < 2 {
        return Err(Error::Config(format!("need omega_min < omega_max and at least 2 points, got {lo}..{hi} x{n}")));
    }
    let mut out = vec![("spectrum".to_string(), with_header(presets::spectrum_table(p, lo, hi, n), "spectrum", Some(p)))];
    if p.is_symmetric() {
        let report = spectrum::spectral_features(p)?;
        let mut t = Table::new(&["kind", "location_predicted", "location_measured", "width_predicted", "width_measured"]);
        t.comment(format!("regime: {:?}", report.regime));
        t.comment(format!("grid spacing: {:e}; widths are half widths at half maximum", report.grid_spacing));
        for f in &report.features {
            t.push(vec![
                f.kind.label().to_string(),
                num(Some(f.location_predicted)),
                num(f.location_measured),
                num(f.width_predicted),
                num(f.width_measured),
            ]);
        }
        out.push(("features".to_string(), with_header(t, "features", Some(p))));
    } else {
        eprintln!("note: feature report needs the symmetric setting; skipped");
    }
    Ok(out)
}

pub fn variance_cmd(p: &SystemParams) -> Result<(String, Table)> {
    let env = env_summary(p);
    let rs = weakcoupling::rates(p, &env);
    let v = rs.steady_variance().ok();
    let mut t = Table::new(&[
        "variance_x1", "s_db", "stable", "c_e", "eps_plus", "eps_minus", "gamma_minus", "gamma_plus", "gamma_s",
    ]);
    t.push(vec![
        num(v),
        num(v.and_then(|v| squeezing_db(v).ok())),
        flag(rs.is_stable()),
        num(Some(env.c_e)),
        num(Some(env.eps_plus)),
        num(Some(env.eps_minus)),
        num(Some(rs.gamma_minus)),
        num(Some(rs.gamma_plus)),
        num(Some(rs.gamma_s)),
    ]);
    Ok(("variance".to_string(), with_header(t, "variance", Some(p))))
}

type Failure = Option<Error>;

pub fn langevin_cmd(p: &SystemParams, lv: &LangevinArgs, theta_scan: Option<usize>) -> Result<(Vec<(String, Table)>, Failure)> {
    let s = lv.settings();
    let dd = langevin::assemble(p, s.cr);
    let res = langevin::steady_state_periodic(&dd, &s.options());
    let mut t = Table::new(&["variance_x1_avg", "variance_x1_strobe", "s_db_avg", "converged", "periods_used"]);
    t.comment(format!(
        "tolerances: tol={:e} max_periods={} counter_rotating={}",
        s.tol, s.max_periods, s.cr
    ));
    let (row, failure, avg): (Vec<String>, Failure, Option<GaussianState>) = match res {
        Ok(ss) => {
            let va = langevin::mech_quadrature_variance(&ss.average, 0.0);
            let vs = langevin::mech_quadrature_variance(&ss.strobe, 0.0);
            if !ss.average.is_physical(1e-9) {
                eprintln!("warning: returned covariance fails the physicality check");
            }
            (
                vec![num(Some(va)), num(Some(vs)), num(squeezing_db(va).ok()), flag(true), ss.periods_used.to_string()],
                None,
                Some(ss.average),
            )
        }
        Err(e @ Error::NonConvergent { periods, .. }) => (
            vec![String::new(), String::new(), String::new(), flag(false), periods.to_string()],
            Some(e),
            None,
        ),
        Err(e) => return Err(e),
    };
    t.push(row);
    let mut out = vec![("langevin".to_string(), with_header(t, "langevin", Some(p)))];
    if let (Some(n), Some(gs)) = (theta_scan, avg) {
        let mut ts = Table::new(&["theta", "variance"]);
        for k in 0..n {
            let theta = std::f64::consts::PI * k as f64 / n as f64;
            ts.push(vec![num(Some(theta)), num(Some(langevin::mech_quadrature_variance(&gs, theta)))]);
        }
        out.push(("theta_scan".to_string(), with_header(ts, "theta-scan", Some(p))));
    }
    Ok((out, failure))
}

/// Validity report and the parameters implied by a drive file.
pub fn drive_cmd(path: &Path) -> Result<((String, Table), SystemParams)> {
    let (ds, base) = config::parse_drive(&std::fs::read_to_string(path)?)?;
    let dc = classical::dressed_couplings(&ds, &base);
    let p = classical::apply(&base, &dc).normalized().checked()?;
    let p = checked_params(p)?;
    let disp = classical::mech_displacement(&ds, &base, &dc);
    let mut t = Table::new(&[
        "g_plus", "g_minus", "r", "phase_plus", "phase_minus", "validity_ratio", "cavity_shift", "delta_1", "delta_2",
    ]);
    t.comment("phases of the dressed amplitudes are reported and dropped from the parameters");
    t.push(vec![
        num(Some(dc.g_plus)),
        num(Some(dc.g_minus)),
        num(if dc.g_minus > 0.0 { Some(dc.g_plus / dc.g_minus) } else { None }),
        num(Some(dc.phase_plus)),
        num(Some(dc.phase_minus)),
        num(Some(classical::validity_ratio(&p))),
        num(Some(disp.cavity_shift(ds.g0))),
        num(Some(p.delta_1)),
        num(Some(p.delta_2)),
    ]);
    Ok((("drive".to_string(), with_header(t, "drive", None)), p))
}

fn opt_row(t: &mut Table, res: &OptResult) {
    t.push(vec![
        num(Some(res.argmin)),
        num(Some(res.variance)),
        num(Some(res.s_db)),
        res.method.label().to_string(),
        res.flags.labels().join(";"),
    ]);
}

pub fn optimize_cmd(
    p: &SystemParams,
    over: Over,
    method: MethodArg,
    (lo, hi): (f64, f64),
    use_langevin: bool,
    reoptimize_r: bool,
    lv: &LangevinArgs,
) -> Result<(String, Table)> {
    let mut t = Table::new(&["argmin", "variance", "s_db", "method", "flags"]);
    let closed = matches!(method, MethodArg::Closed | MethodArg::Both);
    let numeric = matches!(method, MethodArg::Numeric | MethodArg::Both);
    let env = env_summary(p);
    match over {
        Over::R => {
            t.comment("argmin: r = G+/G-");
            if closed {
                let r = optimize::r_opt_exact(&env, p.n_th)?;
                let v = optimize::variance_at_ropt(&env, p.n_th)?;
                let approx = optimize::r_opt_approx(&env, p.n_th)?;
                opt_row(&mut t, &OptResult {
                    argmin: r,
                    r: Some(r),
                    variance: v,
                    s_db: squeezing_db(v).unwrap_or(f64::NAN),
                    method: Method::ClosedForm,
                    flags: optimize::Flags { on_boundary: false, outside_regime: approx.outside_regime },
                    neighbours: (v, v),
                });
            }
            if numeric {
                let res = if use_langevin {
                    t.comment("numeric: full dynamics");
                    let s = lv.settings();
                    optimize::r_opt_langevin(p, s.cr, &s.options())?
                } else {
                    optimize::r_opt_numeric(&env, p.n_th)?
                };
                opt_row(&mut t, &res);
            }
        }
        Over::J => {
            t.comment("argmin: J = J_1 = J_2, r optimized at every J");
            if closed {
                let cf = optimize::j_opt_closed_form(p);
                opt_row(&mut t, &OptResult {
                    argmin: cf.j_opt,
                    r: None,
                    variance: cf.variance_opt,
                    s_db: squeezing_db(cf.variance_opt).unwrap_or(f64::NAN),
                    method: Method::ClosedForm,
                    flags: optimize::Flags::default(),
                    neighbours: (cf.variance_opt, cf.variance_opt),
                });
            }
            if numeric {
                opt_row(&mut t, &optimize::j_opt_numeric(p, lo, hi)?);
            }
        }
        Over::JRatio => {
            t.comment(format!("argmin: J_1/J_2 at J_2 = {}", p.j_2));
            if method == MethodArg::Closed {
                return Err(Error::Config("no closed form for the coupling ratio; use --method numeric".into()));
            }
            opt_row(&mut t, &optimize::asymmetric_j_opt(p, p.j_2, lo, hi, reoptimize_r)?);
        }
    }
    Ok(("optimize".to_string(), with_header(t, "optimize", Some(p))))
}
