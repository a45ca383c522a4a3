//! Scalar minimization helpers: golden-section refinement on a bracket,
//! coarse grid scans, and bisection on a sign change.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimization of `f` on `[a, b]`.
///
/// Returns `(argmin, min)`. Stops when the bracket is narrower than
/// `tol * (1 + |x|)`.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + 0.5 * (a + b).abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `n` points from `lo` to `hi` inclusive, linearly or logarithmically spaced.
pub fn spaced(lo: f64, hi: f64, n: usize, log: bool) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    hi
                } else if log {
                    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
                } else {
                    lo + t * (hi - lo)
                }
            })
            .collect(),
    }
}

/// Result of a grid scan followed by golden-section refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub argmin: f64,
    pub min: f64,
    /// Index of the best grid point.
    pub grid_index: usize,
    /// True when the best grid point is the first or last grid point.
    pub on_boundary: bool,
    /// Objective at the grid neighbours of the best point (`+inf` off-grid).
    pub neighbours: (f64, f64),
}

/// Evaluates `f` on `grid`, then refines the best point on its bracketing
/// neighbours with golden section.
pub fn grid_then_golden<F>(mut f: F, grid: &[f64], tol: f64) -> Refined
where
    F: FnMut(f64) -> f64,
{
    assert!(!grid.is_empty());
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (best, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| {
            if v < bv {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    let n = grid.len();
    let neighbours = (
        if best > 0 { values[best - 1] } else { f64::INFINITY },
        if best + 1 < n { values[best + 1] } else { f64::INFINITY },
    );
    if n < 3 {
        return Refined {
            argmin: grid[best],
            min: values[best],
            grid_index: best,
            on_boundary: true,
            neighbours,
        };
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(n - 1)];
    let (x, fx) = golden_section(&mut f, lo, hi, tol);
    let (argmin, min) = if fx <= values[best] {
        (x, fx)
    } else {
        (grid[best], values[best])
    };
    Refined {
        argmin,
        min,
        grid_index: best,
        on_boundary: best == 0 || best == n - 1,
        neighbours,
    }
}

/// Bisection for a root of `f` on `[a, b]`, assuming a sign change.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol {
            return m;
        }
        let fm = f(m);
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
