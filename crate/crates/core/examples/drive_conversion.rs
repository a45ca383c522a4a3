//! From laser drive amplitudes to the dressed couplings used everywhere else.

use num_complex::Complex64;
use optosqueeze::classical::{self, DriveSpec};
use optosqueeze::symmetric_setting;

fn main() -> optosqueeze::Result<()> {
    let ds = DriveSpec {
        alpha_plus: Complex64::new(800.0, 0.0),
        alpha_minus: Complex64::new(1000.0, 0.0),
        omega_c: 100.0,
        omega_1: 98.0,
        omega_2: 102.0,
        g0: 1e-3,
    };
    let base = symmetric_setting(10.0, 0.5, 10.0, 0.0, 0.0, 1e-5, 0.0)?;
    let dc = classical::dressed_couplings(&ds, &base);
    let p = classical::apply(&base, &dc);
    let beta = classical::mech_displacement(&ds, &base, &dc);
    println!("G+ = {:.5}, G- = {:.5}, r = {:.4}", dc.g_plus, dc.g_minus, dc.g_plus / dc.g_minus);
    println!("phases: {:.4}, {:.4}", dc.phase_plus, dc.phase_minus);
    println!("validity ratio = {:.2e}", classical::validity_ratio(&p));
    println!("cavity shift g(beta + beta*) = {:.3e}", beta.cavity_shift(ds.g0));
    Ok(())
}
