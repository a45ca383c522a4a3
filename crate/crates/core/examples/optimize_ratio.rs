//! Optimal drive ratio r = G+/G-: exact, large-cooperativity and numeric.

use optosqueeze::optimize;
use optosqueeze::spectrum::env_summary;
use optosqueeze::symmetric_setting;

fn main() -> optosqueeze::Result<()> {
    for g in [0.005, 0.01, 0.02, 0.1] {
        let p = symmetric_setting(10.0, 0.2, 5.0, g, 0.0, 1e-5, 10.0)?;
        let env = env_summary(&p);
        let exact = optimize::r_opt_exact(&env, p.n_th)?;
        let approx = optimize::r_opt_approx(&env, p.n_th)?;
        let numeric = optimize::r_opt_numeric(&env, p.n_th)?;
        println!(
            "G- = {g:<5} r_opt {exact:.4} (approx {:.4}, numeric {:.4})  variance {:.4} (approx {:.4})",
            approx.r,
            numeric.argmin,
            optimize::variance_at_ropt(&env, p.n_th)?,
            approx.variance
        );
    }
    Ok(())
}
