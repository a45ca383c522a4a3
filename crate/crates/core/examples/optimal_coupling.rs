//! Optimal inter-cavity coupling J: closed form against direct minimization.

use optosqueeze::optimize;
use optosqueeze::symmetric_setting;

fn main() -> optosqueeze::Result<()> {
    for n_th in [0.0, 10.0] {
        for kc in [1.0, 10.0, 100.0] {
            let p = symmetric_setting(kc, 0.1, 1.0, 0.1, 0.0, 1e-5, n_th)?;
            let cf = optimize::j_opt_closed_form(&p);
            let num = optimize::j_opt_numeric(&p, 0.1, 1000.0)?;
            println!(
                "n_th = {n_th:<4} kappa_c = {kc:<5} J_opt {:.3} vs {:.3}   variance {:.4} vs {:.4}",
                cf.j_opt, num.argmin, cf.variance_opt, num.variance
            );
        }
    }
    Ok(())
}
