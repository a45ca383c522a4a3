//! Periodic steady state of the full linearized dynamics compared with the
//! weak-coupling prediction.

use optosqueeze::langevin::{self, PeriodicOptions};
use optosqueeze::spectrum::env_summary;
use optosqueeze::symmetric_setting;
use optosqueeze::weakcoupling;

fn main() -> optosqueeze::Result<()> {
    let opts = PeriodicOptions::default();
    for g in [0.005, 0.02, 0.3] {
        let p = symmetric_setting(10.0, 0.2, 5.0, g, 0.5, 1e-5, 10.0)?;
        let dd = langevin::assemble(&p, true);
        let ss = langevin::steady_state_periodic(&dd, &opts)?;
        let numeric = langevin::mech_quadrature_variance(&ss.average, 0.0);
        let analytic = weakcoupling::variance_x1(&p, &env_summary(&p))?;
        println!(
            "G- = {g:<5}  numeric {numeric:.5}  analytic {analytic:.5}  rel. diff {:.2e}  physical {}",
            (numeric - analytic).abs() / analytic,
            ss.average.is_physical(1e-9)
        );
    }
    Ok(())
}
