//! Dense Lyapunov solvers for small systems.
//!
//! - Continuous: `A X + X A^T + Q = 0`
//! - Discrete: `X = F X F^T + Q`
//!
//! Both go through the Kronecker-product linear system; the matrices here
//! are at most 8x8, so the 64x64 LU solve is cheap and exact to rounding.

use nalgebra::{Complex, DMatrix, Schur};

use crate::error::{Error, Result};

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues from a Schur decomposition with bounded iterations; `None`
/// when the QR iteration does not settle.
pub fn eigenvalues(m: &DMatrix<f64>) -> Option<Vec<Complex<f64>>> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, SCHUR_MAX_ITER)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

/// `lim ||F^n||^(1/n)` evaluated at `n = 2^64` by repeated normalized squaring.
pub fn gelfand_radius(f: &DMatrix<f64>) -> f64 {
    let mut m = f.clone();
    let n0 = m.norm();
    if n0 == 0.0 {
        return 0.0;
    }
    m /= n0;
    // F^(2^k) = c_k M_k with ||M_k|| = 1; track ln(c_k) / 2^k.
    let mut log_radius = n0.ln();
    let mut power = 1.0;
    for _ in 0..64 {
        m = &m * &m;
        power *= 2.0;
        let n = m.norm();
        if n == 0.0 {
            return 0.0;
        }
        m /= n;
        log_radius += n.ln() / power;
    }
    log_radius.exp()
}

/// Largest real part over the eigenvalues of `a`.
pub fn max_real_eigenvalue(a: &DMatrix<f64>) -> f64 {
    match eigenvalues(a) {
        Some(ev) => ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max),
        None => gelfand_radius(&a.clone().exp()).ln(),
    }
}

/// Largest modulus over the eigenvalues of `f`.
pub fn spectral_radius(f: &DMatrix<f64>) -> f64 {
    match eigenvalues(f) {
        Some(ev) => ev.iter().map(|z| z.norm()).fold(0.0, f64::max),
        None => gelfand_radius(f),
    }
}

fn kron_solve(op: DMatrix<f64>, q: &DMatrix<f64>, what: &'static str) -> Result<DMatrix<f64>> {
    let n = q.nrows();
    let rhs = nalgebra::DVector::from_column_slice(q.as_slice());
    let x = op.lu().solve(&rhs).ok_or(Error::Singular(what))?;
    let x = DMatrix::from_column_slice(n, n, x.as_slice());
    Ok((&x + x.transpose()) * 0.5)
}

/// Solves `A X + X A^T + Q = 0` for Hurwitz `A`.
pub fn solve_continuous(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    assert_eq!((a.ncols(), q.nrows(), q.ncols()), (n, n, n));
    let max_re = max_real_eigenvalue(a);
    if max_re >= 0.0 {
        return Err(Error::UnstableDrift {
            max_real_part: max_re,
        });
    }
    let id = DMatrix::<f64>::identity(n, n);
    // vec(A X) = (I ⊗ A) vec X, vec(X A^T) = (A ⊗ I) vec X
    let op = id.kronecker(a) + a.kronecker(&id);
    kron_solve(-op, q, "continuous Lyapunov")
}

/// Solves `X = F X F^T + Q` for Schur-stable `F`.
pub fn solve_discrete(f: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = f.nrows();
    let rho = spectral_radius(f);
    if rho >= 1.0 {
        return Err(Error::UnstablePeriodic {
            spectral_radius: rho,
        });
    }
    let op = DMatrix::<f64>::identity(n * n, n * n) - f.kronecker(f);
    kron_solve(op, q, "discrete Lyapunov")
}
