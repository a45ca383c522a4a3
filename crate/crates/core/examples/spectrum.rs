//! Optical spectrum seen by the mechanics, with and without auxiliary cavities.

use optosqueeze::spectrum::{env_summary, spectral_features};
use optosqueeze::symmetric_setting;

fn main() -> optosqueeze::Result<()> {
    for j in [0.0, 0.5, 10.0] {
        let p = symmetric_setting(10.0, 0.1, j, 0.1, 0.0, 1e-5, 0.0)?;
        let env = env_summary(&p);
        let report = spectral_features(&p)?;
        println!("J = {j}: {:?}, S(0) = {:.4}, eps = {:.4}", report.regime, env.s0, env.eps_plus);
        for f in &report.features {
            println!(
                "  {:<12} predicted {:>8.3}  measured {:>8.3}",
                f.kind.label(),
                f.location_predicted,
                f.location_measured.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}
