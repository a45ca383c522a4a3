//! A two-axis parameter sweep from a sweep file, printed as CSV.

use std::path::Path;

use optosqueeze::sweep;

const SPEC: &str = r#"
engine = "weakcoupling"
metrics = ["variance_analytic", "s_db_analytic", "r_opt", "stable"]

[base]
kappa_c = 10
kappa = 0.2
j = 5
g_minus = 0.02
gamma = 1e-5
n_th = 10

[[axis]]
name = "j"
start = 1
stop = 20
count = 4
scale = "log"

[[axis]]
name = "r"
start = 0.2
stop = 0.8
count = 3
"#;

fn main() -> optosqueeze::Result<()> {
    let spec = sweep::parse_sweep(SPEC, Path::new("."))?;
    let result = sweep::run_sweep(&spec)?;
    print!("{}", result.to_table().to_csv());
    Ok(())
}
