//! Best ratio J1/J2 between the two auxiliary couplings.

use optosqueeze::optimize;
use optosqueeze::symmetric_setting;

fn main() -> optosqueeze::Result<()> {
    let p = symmetric_setting(10.0, 0.2, 1.0, 0.1, 0.8, 0.2, 10.0)?;
    for j2 in [0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let res = optimize::asymmetric_j_opt(&p, j2, 0.05, 20.0, false)?;
        println!("J2 = {j2:<4}  J1/J2 = {:.3}  variance {:.4}", res.argmin, res.variance);
    }
    Ok(())
}
