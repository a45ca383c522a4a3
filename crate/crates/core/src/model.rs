//! Parameter space of the driven three-cavity optomechanical system.
//!
//! Every rate, detuning and coupling is stored in units of the mechanical
//! frequency, so a normalized [`SystemParams`] always has `omega_m == 1`.

use crate::classical;
use crate::error::{Error, Result};

/// Physical parameters of the linearized system, in units of the mechanical frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_m: f64,
    pub kappa_c: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    /// Detuning `omega_c - omega_1`.
    pub delta_1: f64,
    /// Detuning `omega_c - omega_2`.
    pub delta_2: f64,
    pub j_1: f64,
    pub j_2: f64,
    /// Dressed coupling of the blue-detuned drive.
    pub g_plus: f64,
    /// Dressed coupling of the red-detuned drive.
    pub g_minus: f64,
    pub gamma_m: f64,
    pub n_th: f64,
}

impl SystemParams {
    /// Drive ratio `G+/G-`.
    pub fn ratio(&self) -> f64 {
        self.g_plus / self.g_minus
    }

    pub fn with_ratio(mut self, r: f64) -> Self {
        self.g_plus = r * self.g_minus;
        self
    }

    /// Rescales every frequency-like quantity by `omega_m`, leaving `omega_m == 1`.
    pub fn normalized(&self) -> Self {
        let w = self.omega_m;
        SystemParams {
            omega_m: 1.0,
            kappa_c: self.kappa_c / w,
            kappa_1: self.kappa_1 / w,
            kappa_2: self.kappa_2 / w,
            delta_1: self.delta_1 / w,
            delta_2: self.delta_2 / w,
            j_1: self.j_1 / w,
            j_2: self.j_2 / w,
            g_plus: self.g_plus / w,
            g_minus: self.g_minus / w,
            gamma_m: self.gamma_m / w,
            n_th: self.n_th,
        }
    }

    /// True when the dips sit at `-delta_{1,2} = -/+ 2 omega_m` with equal
    /// auxiliary couplings and linewidths.
    pub fn is_symmetric(&self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        close(self.delta_1, 2.0 * self.omega_m)
            && close(self.delta_2, -2.0 * self.omega_m)
            && close(self.j_1, self.j_2)
            && close(self.kappa_1, self.kappa_2)
    }

    /// Returns the first hard-error diagnostic as an `Err`.
    pub fn checked(self) -> Result<Self> {
        for d in validate(&self) {
            if let Diagnostic::Error(e) = d {
                return Err(e);
            }
        }
        Ok(self)
    }
}

/// Drive ratio and the matching squeeze parameter, `r = tanh(zeta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    pub r: f64,
    /// `None` when `r >= 1`.
    pub zeta: Option<f64>,
}

impl SqueezeParam {
    pub fn from_ratio(r: f64) -> Self {
        let zeta = if (0.0..1.0).contains(&r) {
            Some(r.atanh())
        } else {
            None
        };
        SqueezeParam { r, zeta }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    Error(Error),
    Warning(Warning),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// `G-` exceeds the smallest optical linewidth; the effective
    /// master-equation layer loses accuracy.
    WeakCouplingViolated { g_minus: f64, kappa_min: f64 },
    /// `max(G+, G-) / max(sqrt(omega kappa_c), J_1, J_2)` above 0.1.
    LinearizationBound { ratio: f64 },
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Diagnostic::Error(e) => write!(f, "error: {e}"),
            Diagnostic::Warning(Warning::WeakCouplingViolated { g_minus, kappa_min }) => write!(
                f,
                "warning: weak coupling violated, G- = {g_minus} > min(kappa_c, kappa_1, kappa_2) = {kappa_min} \
                 (threshold is a heuristic of this library)"
            ),
            Diagnostic::Warning(Warning::LinearizationBound { ratio }) => write!(
                f,
                "warning: linearization bound G/max(sqrt(omega kappa_c), J) = {ratio:.4} > 0.1"
            ),
        }
    }
}

pub const LINEARIZATION_RATIO_LIMIT: f64 = 0.1;

/// Checks the parameter invariants and the regime conditions of the
/// linearized and weak-coupling treatments.
pub fn validate(p: &SystemParams) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let rates = [
        ("omega_m", p.omega_m),
        ("kappa_c", p.kappa_c),
        ("kappa_1", p.kappa_1),
        ("kappa_2", p.kappa_2),
        ("gamma_m", p.gamma_m),
    ];
    for (name, value) in rates {
        if !(value > 0.0) || !value.is_finite() {
            out.push(Diagnostic::Error(Error::NonpositiveDamping { name, value }));
        }
    }
    let nonneg = [
        ("g_plus", p.g_plus),
        ("g_minus", p.g_minus),
        ("n_th", p.n_th),
    ];
    for (name, value) in nonneg {
        if !(value >= 0.0) || !value.is_finite() {
            out.push(Diagnostic::Error(Error::InvalidParameter {
                name,
                value,
                reason: "must be finite and nonnegative",
            }));
        }
    }
    for (name, value) in [
        ("delta_1", p.delta_1),
        ("delta_2", p.delta_2),
        ("j_1", p.j_1),
        ("j_2", p.j_2),
    ] {
        if !value.is_finite() {
            out.push(Diagnostic::Error(Error::InvalidParameter {
                name,
                value,
                reason: "must be finite",
            }));
        }
    }
    if !out.is_empty() {
        return out;
    }

    let kappa_min = p.kappa_c.min(p.kappa_1).min(p.kappa_2);
    if p.g_minus > kappa_min {
        out.push(Diagnostic::Warning(Warning::WeakCouplingViolated {
            g_minus: p.g_minus,
            kappa_min,
        }));
    }
    let ratio = classical::validity_ratio(p);
    if ratio > LINEARIZATION_RATIO_LIMIT {
        out.push(Diagnostic::Warning(Warning::LinearizationBound { ratio }));
    }
    out
}

/// Builds the symmetric configuration: dips at `+/- 2 omega`, peak at 0.
pub fn symmetric_setting(
    kappa_c: f64,
    kappa: f64,
    j: f64,
    g_minus: f64,
    r: f64,
    gamma_m: f64,
    n_th: f64,
) -> Result<SystemParams> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "drive ratio must be nonnegative",
        });
    }
    SystemParams {
        omega_m: 1.0,
        kappa_c,
        kappa_1: kappa,
        kappa_2: kappa,
        delta_1: 2.0,
        delta_2: -2.0,
        j_1: j,
        j_2: j,
        g_plus: r * g_minus,
        g_minus,
        gamma_m,
        n_th,
    }
    .checked()
}
