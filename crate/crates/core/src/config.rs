//! Flat `key = value` parameter files.
//!
//! System parameter keys: `omega, kappa_c, kappa_1, kappa_2, delta_1,
//! delta_2, j_1, j_2, g_minus, r, gamma, n_th`. `kappa` and `j` set both
//! auxiliary values at once; missing detunings default to `+/- 2 omega`.
//! Frequencies are absolute when `omega` is given and in units of the
//! mechanical frequency otherwise.
//!
//! Drive files add `omega_c, omega_1, omega_2, g0, alpha_plus, alpha_minus`
//! (plus optional `alpha_plus_im`, `alpha_minus_im`) and drop `g_minus`,
//! `r` and the detunings, which follow from the drive.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use crate::classical::DriveSpec;
use crate::error::{Error, Result};
use crate::model::SystemParams;

pub const PARAM_KEYS: [&str; 14] = [
    "omega", "kappa_c", "kappa_1", "kappa_2", "kappa", "delta_1", "delta_2", "j_1", "j_2", "j",
    "g_minus", "r", "gamma", "n_th",
];

const DRIVE_KEYS: [&str; 15] = [
    "omega", "kappa_c", "kappa_1", "kappa_2", "kappa", "j_1", "j_2", "j", "gamma", "n_th",
    "omega_c", "omega_1", "omega_2", "g0", "alpha_plus",
];

const DRIVE_EXTRA_KEYS: [&str; 3] = ["alpha_plus_im", "alpha_minus", "alpha_minus_im"];

/// Parses flat `key = value` text into numbers, rejecting keys outside
/// `allowed`.
pub fn parse_flat(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    table_to_map(table, allowed)
}

pub fn table_to_map(table: toml::Table, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (key, value) in table {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!("unknown key {key:?}")));
        }
        let x = match value {
            toml::Value::Float(f) => f,
            toml::Value::Integer(i) => i as f64,
            other => return Err(Error::Config(format!("{key}: expected a number, got {other}"))),
        };
        out.insert(key, x);
    }
    Ok(out)
}

struct Keys<'a>(&'a BTreeMap<String, f64>);

impl Keys<'_> {
    fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }

    fn require(&self, key: &str) -> Result<f64> {
        self.get(key).ok_or_else(|| Error::Config(format!("missing key {key:?}")))
    }

    /// `key`, falling back to `shared`.
    fn paired(&self, key: &str, shared: &str) -> Result<f64> {
        self.get(key)
            .or_else(|| self.get(shared))
            .ok_or_else(|| Error::Config(format!("missing key {key:?} (or {shared:?})")))
    }
}

pub fn params_from_map(map: &BTreeMap<String, f64>) -> Result<SystemParams> {
    let k = Keys(map);
    let omega = k.get("omega").unwrap_or(1.0);
    let g_minus = k.require("g_minus")?;
    let r = k.get("r").unwrap_or(0.0);
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "drive ratio must be nonnegative",
        });
    }
    SystemParams {
        omega_m: omega,
        kappa_c: k.require("kappa_c")?,
        kappa_1: k.paired("kappa_1", "kappa")?,
        kappa_2: k.paired("kappa_2", "kappa")?,
        delta_1: k.get("delta_1").unwrap_or(2.0 * omega),
        delta_2: k.get("delta_2").unwrap_or(-2.0 * omega),
        j_1: k.paired("j_1", "j")?,
        j_2: k.paired("j_2", "j")?,
        g_plus: r * g_minus,
        g_minus,
        gamma_m: k.require("gamma")?,
        n_th: k.get("n_th").unwrap_or(0.0),
    }
    .normalized()
    .checked()
}

pub fn parse_params(text: &str) -> Result<SystemParams> {
    params_from_map(&parse_flat(text, &PARAM_KEYS)?)
}

pub fn load_params(path: &Path) -> Result<SystemParams> {
    parse_params(&std::fs::read_to_string(path)?)
}

/// Writes normalized parameters in the file format read by `parse_params`.
pub fn write_params(p: &SystemParams) -> String {
    let p = p.normalized();
    let entries = [
        ("omega", p.omega_m),
        ("kappa_c", p.kappa_c),
        ("kappa_1", p.kappa_1),
        ("kappa_2", p.kappa_2),
        ("delta_1", p.delta_1),
        ("delta_2", p.delta_2),
        ("j_1", p.j_1),
        ("j_2", p.j_2),
        ("g_minus", p.g_minus),
        ("r", if p.g_minus > 0.0 { p.ratio() } else { 0.0 }),
        ("gamma", p.gamma_m),
        ("n_th", p.n_th),
    ];
    entries
        .iter()
        .map(|(k, v)| format!("{k} = {}\n", toml_float(*v)))
        .collect()
}

fn toml_float(v: f64) -> String {
    // toml needs a fractional part or exponent to read the value back as a float.
    let s = format!("{v:?}");
    if s.contains(['.', 'e', 'i', 'N']) {
        s
    } else {
        format!("{s}.0")
    }
}

/// Drive description plus the optical and mechanical parameters that do
/// not depend on the drive. `g_plus`, `g_minus` and the detunings of the
/// returned parameters are placeholders until the drive is applied.
pub fn parse_drive(text: &str) -> Result<(DriveSpec, SystemParams)> {
    let allowed: Vec<&str> = DRIVE_KEYS.iter().chain(&DRIVE_EXTRA_KEYS).copied().collect();
    let map = parse_flat(text, &allowed)?;
    let k = Keys(&map);
    let omega = k.get("omega").unwrap_or(1.0);
    let ds = DriveSpec {
        alpha_plus: Complex64::new(k.require("alpha_plus")?, k.get("alpha_plus_im").unwrap_or(0.0)),
        alpha_minus: Complex64::new(k.get("alpha_minus").unwrap_or(0.0), k.get("alpha_minus_im").unwrap_or(0.0)),
        omega_c: k.require("omega_c")?,
        omega_1: k.require("omega_1")?,
        omega_2: k.require("omega_2")?,
        g0: k.require("g0")?,
    };
    let (delta_1, delta_2) = ds.detunings();
    let p = SystemParams {
        omega_m: omega,
        kappa_c: k.require("kappa_c")?,
        kappa_1: k.paired("kappa_1", "kappa")?,
        kappa_2: k.paired("kappa_2", "kappa")?,
        delta_1,
        delta_2,
        j_1: k.paired("j_1", "j")?,
        j_2: k.paired("j_2", "j")?,
        g_plus: 0.0,
        g_minus: 0.0,
        gamma_m: k.require("gamma")?,
        n_th: k.get("n_th").unwrap_or(0.0),
    };
    Ok((ds, p))
}
