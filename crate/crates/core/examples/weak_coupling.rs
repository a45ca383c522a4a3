//! Rates, steady variance and the Bogoliubov-mode picture in the weak-coupling limit.

use optosqueeze::spectrum::env_summary;
use optosqueeze::symmetric_setting;
use optosqueeze::weakcoupling::{self, squeezing_db};

fn main() -> optosqueeze::Result<()> {
    let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.8, 1e-5, 0.0)?;
    let env = env_summary(&p);
    let rs = weakcoupling::rates(&p, &env);
    println!("C_e = {:.2}, eps+ = {:.4}, eps- = {:.4}", env.c_e, env.eps_plus, env.eps_minus);
    println!("Gamma- = {:.4e}, Gamma+ = {:.4e}, Gamma_S = {:.4e}", rs.gamma_minus, rs.gamma_plus, rs.gamma_s);

    let v = weakcoupling::variance_x1(&p, &env)?;
    println!("<dX1^2> = {v:.5} ({:.2} dB)", squeezing_db(v)?);

    let lf = weakcoupling::lindblad_form(&rs)?;
    println!("u = {:.4}, v = {:.4}, n_B' = {:.4}", lf.u, lf.v, lf.n_bp);
    println!("via Lindblad form: {:.5}", weakcoupling::variance_via_lindblad(&rs)?);
    Ok(())
}
