use proptest::prelude::*;

use optosqueeze::classical::{self, DriveSpec};
use optosqueeze::config;
use optosqueeze::langevin::{self, PeriodicOptions};
use optosqueeze::model::SystemParams;
use optosqueeze::optimize;
use optosqueeze::spectrum::{self, env_summary};
use optosqueeze::sweep::{self, Axis, Engine, Metric, Scale, SweepSpec};
use optosqueeze::symmetric_setting;
use optosqueeze::table::num;
use optosqueeze::weakcoupling::{self, squeezing_db};

fn log_range(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

fn symmetric() -> impl Strategy<Value = SystemParams> {
    (
        log_range(0.1, 100.0),
        log_range(1e-3, 1.0),
        log_range(1e-2, 50.0),
        log_range(1e-3, 0.3),
        0.0..0.99,
        log_range(1e-6, 1e-2),
        0.0..100.0,
    )
        .prop_map(|(kc, k, j, g, r, gamma, n)| symmetric_setting(kc, k, j, g, r, gamma, n).unwrap())
}

/// Weak-coupling draws with a moderate linewidth spread, cheap to integrate.
fn weak() -> impl Strategy<Value = SystemParams> {
    (log_range(0.5, 20.0), log_range(0.05, 1.0), 0.0..15.0, 0.0..0.9, log_range(1e-4, 1e-2), 0.0..20.0)
        .prop_map(|(kc, k, j, r, gamma, n)| {
            let g = 0.1 * k.min(kc);
            symmetric_setting(kc, k, j, g, r, gamma, n).unwrap()
        })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spectrum_is_even_and_positive(p in symmetric(), w in -30.0..30.0f64) {
        let (a, b) = (spectrum::s_op(&p, w), spectrum::s_op(&p, -w));
        prop_assert!(a > 0.0);
        prop_assert!(rel(a, b) < 1e-12);
        let (ra, rb) = (spectrum::response(&p, w), spectrum::response(&p, -w));
        prop_assert!((ra - rb.conj()).norm() <= 1e-12 * ra.norm());
    }

    #[test]
    fn lindblad_coefficients_are_bogoliubov(p in symmetric()) {
        let env = env_summary(&p);
        let rs = weakcoupling::rates(&p, &env);
        prop_assume!(rs.is_stable());
        let lf = weakcoupling::lindblad_form(&rs).unwrap();
        prop_assert!((lf.u * lf.u - lf.v * lf.v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn optimum_beats_every_ratio(p in symmetric(), r in 0.0..0.999f64) {
        let env = env_summary(&p);
        let Ok(best) = optimize::variance_at_ropt(&env, p.n_th) else { return Ok(()) };
        if let Ok(v) = weakcoupling::variance_from_ratios(r, env.eps_plus, env.eps_minus, env.c_e, p.n_th) {
            prop_assume!(r < weakcoupling::stability_ratio(&env));
            prop_assert!(best <= v * (1.0 + 1e-12));
        }
    }

    #[test]
    fn squeezed_variance_grows_with_counter_rotating_heating(
        r in 0.0..0.95f64, e1 in 0.0..0.5f64, de in 0.0..0.2f64, c_e in log_range(10.0, 1e5), n in 0.0..10.0f64,
    ) {
        let f = |e: f64| weakcoupling::variance_from_ratios(r, e, 0.0, c_e, n);
        if let (Ok(a), Ok(b)) = (f(e1), f(e1 + de)) {
            prop_assume!(a < 0.5);
            prop_assert!(b >= a * (1.0 - 1e-12));
        }
    }

    #[test]
    fn params_file_round_trip(p in symmetric()) {
        let back = config::parse_params(&config::write_params(&p)).unwrap();
        prop_assert_eq!(back.kappa_c, p.kappa_c);
        prop_assert_eq!(back.j_1, p.j_1);
        prop_assert_eq!(back.n_th, p.n_th);
        prop_assert!(rel(back.g_plus, p.g_plus) < 1e-15 || p.g_plus == 0.0);
    }

    #[test]
    fn csv_numbers_round_trip(x in any::<f64>()) {
        let s = num(Some(x));
        if x.is_finite() {
            prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        } else {
            prop_assert_eq!(s, "");
        }
    }

    #[test]
    fn no_drive_no_coupling(j in 0.0..20.0f64, kc in 0.1..20.0f64) {
        let ds = DriveSpec {
            alpha_plus: 0.0.into(),
            alpha_minus: 0.0.into(),
            omega_c: 100.0,
            omega_1: 98.0,
            omega_2: 102.0,
            g0: 1e-3,
        };
        let p = symmetric_setting(kc, 0.5, j, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let dc = classical::dressed_couplings(&ds, &p);
        prop_assert_eq!((dc.g_plus, dc.g_minus), (0.0, 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn periodic_machinery_matches_algebraic_solve(p in weak()) {
        let dd = langevin::assemble(&p, false);
        let Ok(alg) = langevin::steady_state_algebraic(&dd) else { return Ok(()) };
        let per = langevin::steady_state_periodic(&dd, &PeriodicOptions::default()).unwrap();
        let scale = alg.cov.norm();
        prop_assert!((per.average.cov - alg.cov).norm() < 1e-6 * scale);
        prop_assert!((per.strobe.cov - alg.cov).norm() < 1e-6 * scale);
    }

    #[test]
    fn steady_states_are_physical(p in weak()) {
        let Ok(ss) = langevin::steady_state_periodic(&langevin::assemble(&p, true), &PeriodicOptions::default())
        else { return Ok(()) };
        prop_assert!(ss.average.is_physical(1e-9));
        prop_assert!(ss.strobe.is_physical(1e-9));
    }

    #[test]
    fn weak_coupling_layers_agree(p in weak()) {
        let env = env_summary(&p);
        prop_assume!(p.ratio() < 0.9 * weakcoupling::stability_ratio(&env));
        let analytic = weakcoupling::rates(&p, &env).steady_variance().unwrap();
        let numeric = langevin::mech_variance(&p, true, &PeriodicOptions::default()).unwrap();
        prop_assert!(rel(numeric, analytic) < 0.05, "numeric {} analytic {}", numeric, analytic);
    }
}

#[test]
fn three_db_is_a_quarter() {
    assert!((squeezing_db(0.25).unwrap() - 3.0103).abs() < 1e-4);
    assert!(squeezing_db(0.0).is_err());
}

#[test]
fn sweeps_are_deterministic() {
    let base = symmetric_setting(10.0, 0.2, 5.0, 0.02, 0.0, 1e-5, 10.0).unwrap();
    let mut spec = SweepSpec::new(
        base,
        vec![
            Axis { name: "j".into(), start: 1.0, stop: 10.0, count: 3, scale: Scale::Log },
            Axis { name: "r".into(), start: 0.0, stop: 0.6, count: 4, scale: Scale::Linear },
        ],
        Engine::Both,
    );
    spec.metrics = vec![Metric::VarianceAnalytic, Metric::VarianceNumeric, Metric::RelDiff];
    let a = sweep::run_sweep(&spec).unwrap();
    let b = sweep::run_sweep(&spec).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.rows.len(), 12);
    assert_eq!(a.rows[1].axes[0], 1.0);
    assert!((a.rows[1].axes[1] - 0.2).abs() < 1e-15);
    let rel_diff = a.metric(Metric::RelDiff).unwrap();
    assert!(rel_diff.iter().all(|d| d.unwrap() < 0.05));
}

#[test]
fn empty_axis_is_rejected() {
    let base = symmetric_setting(10.0, 0.2, 5.0, 0.02, 0.0, 1e-5, 10.0).unwrap();
    let spec = SweepSpec::new(
        base,
        vec![Axis { name: "r".into(), start: 0.0, stop: 0.5, count: 0, scale: Scale::Linear }],
        Engine::WeakCoupling,
    );
    assert!(spec.validate().is_err());
}
