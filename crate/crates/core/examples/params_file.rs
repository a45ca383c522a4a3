//! Reading and writing parameter files.

use optosqueeze::config;
use optosqueeze::model;

fn main() -> optosqueeze::Result<()> {
    let text = "omega = 2.0\nkappa_c = 20\nkappa = 1\nj = 20\ng_minus = 0.6\nr = 0.8\ngamma = 2e-5\nn_th = 3\n";
    let p = config::parse_params(text)?;
    for d in model::validate(&p) {
        println!("{d}");
    }
    print!("{}", config::write_params(&p));
    Ok(())
}
