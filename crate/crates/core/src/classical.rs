//! Coherent amplitudes of the driven system to leading order in the
//! single-photon coupling: conversion from laser drive amplitudes to the
//! dressed couplings `G+-`, auxiliary-cavity amplitudes, the mechanical
//! displacement and the bound under which the linearization holds.

use num_complex::Complex64;

use crate::model::SystemParams;

/// Two-tone drive of the main cavity at `omega_c +/- omega_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    pub omega_c: f64,
    pub omega_1: f64,
    pub omega_2: f64,
    /// Single-photon optomechanical coupling.
    pub g0: f64,
}

impl DriveSpec {
    /// Drive frequencies `(omega_+, omega_-)` for mechanical frequency `omega_m`.
    pub fn drive_frequencies(&self, omega_m: f64) -> (f64, f64) {
        (self.omega_c + omega_m, self.omega_c - omega_m)
    }

    /// Detunings `omega_c - omega_i`.
    pub fn detunings(&self) -> (f64, f64) {
        (self.omega_c - self.omega_1, self.omega_c - self.omega_2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedCouplings {
    pub g_plus: f64,
    pub g_minus: f64,
    pub alpha_bar_plus: Complex64,
    pub alpha_bar_minus: Complex64,
    /// Phases of `g0 * alpha_bar_+-`; discarded by the main pipeline.
    pub phase_plus: f64,
    pub phase_minus: f64,
}

/// Lorentzian denominator of an auxiliary cavity seen at frequency `omega`.
fn aux_denominator(omega: f64, omega_i: f64, kappa_i: f64) -> Complex64 {
    Complex64::new(omega - omega_i, kappa_i / 2.0)
}

fn intracavity_amplitude(alpha: Complex64, omega: f64, ds: &DriveSpec, p: &SystemParams) -> Complex64 {
    let den = Complex64::new(omega - ds.omega_c, p.kappa_c / 2.0)
        - p.j_1 * p.j_1 / aux_denominator(omega, ds.omega_1, p.kappa_1)
        - p.j_2 * p.j_2 / aux_denominator(omega, ds.omega_2, p.kappa_2);
    alpha / den
}

pub fn dressed_couplings(ds: &DriveSpec, p: &SystemParams) -> DressedCouplings {
    let (wp, wm) = ds.drive_frequencies(p.omega_m);
    let alpha_bar_plus = intracavity_amplitude(ds.alpha_plus, wp, ds, p);
    let alpha_bar_minus = intracavity_amplitude(ds.alpha_minus, wm, ds, p);
    let gp = ds.g0 * alpha_bar_plus;
    let gm = ds.g0 * alpha_bar_minus;
    DressedCouplings {
        g_plus: gp.norm(),
        g_minus: gm.norm(),
        alpha_bar_plus,
        alpha_bar_minus,
        phase_plus: gp.arg(),
        phase_minus: gm.arg(),
    }
}

/// Fourier coefficients of an auxiliary-cavity amplitude:
/// `alpha_i(t) = plus * e^{-i omega_+ t} + minus * e^{-i omega_- t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxAmplitude {
    pub plus: Complex64,
    pub minus: Complex64,
}

pub fn auxiliary_amplitudes(ds: &DriveSpec, p: &SystemParams, dc: &DressedCouplings) -> [AuxAmplitude; 2] {
    let (wp, wm) = ds.drive_frequencies(p.omega_m);
    [(p.j_1, ds.omega_1, p.kappa_1), (p.j_2, ds.omega_2, p.kappa_2)].map(|(j, wi, ki)| AuxAmplitude {
        plus: j * dc.alpha_bar_plus / aux_denominator(wp, wi, ki),
        minus: j * dc.alpha_bar_minus / aux_denominator(wm, wi, ki),
    })
}

/// Mechanical displacement `beta(t) = static + minus_2 e^{-2 i omega t} + plus_2 e^{2 i omega t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement {
    pub stat: Complex64,
    pub minus_2: Complex64,
    pub plus_2: Complex64,
}

impl Displacement {
    /// Static frequency shift `g (beta + beta^*)` of the main cavity. Reported
    /// only; the linearized dynamics neglects it.
    pub fn cavity_shift(&self, g0: f64) -> f64 {
        2.0 * g0 * self.stat.re
    }
}

/// Leading-order mechanical displacement driven by the intracavity
/// intensity `|alpha|^2`, including the beat note between the two drives.
/// Reduces to the usual `alpha_bar^2` expressions for real amplitudes.
pub fn mech_displacement(ds: &DriveSpec, p: &SystemParams, dc: &DressedCouplings) -> Displacement {
    let (w, g, gam) = (p.omega_m, ds.g0, p.gamma_m);
    let (ap, am) = (dc.alpha_bar_plus, dc.alpha_bar_minus);
    let intensity = ap.norm_sqr() + am.norm_sqr();
    Displacement {
        stat: -g * intensity / Complex64::new(w, -gam / 2.0),
        minus_2: g * ap * am.conj() / Complex64::new(w, gam / 2.0),
        plus_2: -g * ap.conj() * am / Complex64::new(3.0 * w, -gam / 2.0),
    }
}

/// `max(G+, G-) / max(sqrt(omega kappa_c), J_1, J_2)`; must be small for the
/// linearized treatment.
pub fn validity_ratio(p: &SystemParams) -> f64 {
    let g = p.g_plus.max(p.g_minus);
    if g == 0.0 {
        return 0.0;
    }
    g / (p.omega_m * p.kappa_c).sqrt().max(p.j_1).max(p.j_2)
}

/// Copies the dressed couplings into a parameter set.
pub fn apply(p: &SystemParams, dc: &DressedCouplings) -> SystemParams {
    SystemParams {
        g_plus: dc.g_plus,
        g_minus: dc.g_minus,
        ..*p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::symmetric_setting;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn drive(ap: Complex64, am: Complex64) -> DriveSpec {
        DriveSpec {
            alpha_plus: ap,
            alpha_minus: am,
            omega_c: 100.0,
            omega_1: 98.0,
            omega_2: 102.0,
            g0: 1e-3,
        }
    }

    #[test]
    fn bare_cavity_amplitude() {
        let p = symmetric_setting(10.0, 0.5, 0.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let dc = dressed_couplings(&drive(c(30.0, 0.0), c(50.0, 0.0)), &p);
        let expected = c(30.0, 0.0) / c(1.0, 5.0);
        assert!((dc.alpha_bar_plus - expected).norm() < 1e-13);
        assert!((dc.g_plus - 1e-3 * expected.norm()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_denominator_substitution() {
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let ds = drive(c(30.0, 0.0), c(0.0, 0.0));
        assert_eq!(ds.detunings(), (p.delta_1, p.delta_2));
        let dc = dressed_couplings(&ds, &p);
        // omega_+ - omega_1 = 3, omega_+ - omega_2 = -1
        let den = c(1.0, 5.0) - 100.0 / c(3.0, 0.25) - 100.0 / c(-1.0, 0.25);
        assert!((dc.alpha_bar_plus - c(30.0, 0.0) / den).norm() < 1e-12);
        assert_eq!(dc.g_minus, 0.0);
    }

    #[test]
    fn no_drive_no_coupling() {
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let ds = drive(c(0.0, 0.0), c(0.0, 0.0));
        let dc = dressed_couplings(&ds, &p);
        assert_eq!((dc.g_plus, dc.g_minus), (0.0, 0.0));
        let d = mech_displacement(&ds, &p, &dc);
        assert_eq!(d.stat, c(0.0, 0.0));
    }

    #[test]
    fn auxiliary_amplitudes_vanish_without_coupling() {
        let p = symmetric_setting(10.0, 0.5, 0.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let ds = drive(c(3.0, 1.0), c(5.0, 0.0));
        let dc = dressed_couplings(&ds, &p);
        for a in auxiliary_amplitudes(&ds, &p, &dc) {
            assert_eq!((a.plus, a.minus), (c(0.0, 0.0), c(0.0, 0.0)));
        }
        let p = symmetric_setting(10.0, 0.5, 4.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let ds = drive(c(3.0, 0.0), c(0.0, 0.0));
        let dc = dressed_couplings(&ds, &p);
        let aux = auxiliary_amplitudes(&ds, &p, &dc);
        assert_eq!(aux[0].minus, c(0.0, 0.0));
        let expected = 4.0 * dc.alpha_bar_plus / c(3.0, 0.25);
        assert!((aux[0].plus - expected).norm() < 1e-14);
    }

    #[test]
    fn displacement_matches_real_amplitude_form() {
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.0, 0.01, 0.0).unwrap();
        let dc = DressedCouplings {
            g_plus: 0.0,
            g_minus: 0.0,
            alpha_bar_plus: c(2.0, 0.0),
            alpha_bar_minus: c(3.0, 0.0),
            phase_plus: 0.0,
            phase_minus: 0.0,
        };
        let ds = drive(c(0.0, 0.0), c(0.0, 0.0));
        let d = mech_displacement(&ds, &p, &dc);
        let g = ds.g0;
        assert!((d.stat + g * 13.0 / c(1.0, -0.005)).norm() < 1e-15);
        assert!((d.minus_2 - g * 6.0 / c(1.0, 0.005)).norm() < 1e-15);
        assert!((d.plus_2 + g * 6.0 / c(3.0, -0.005)).norm() < 1e-15);
        assert!(d.cavity_shift(g) < 0.0);
    }

    #[test]
    fn single_tone_has_no_beat_note() {
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.0, 1e-5, 0.0).unwrap();
        let ds = drive(c(30.0, 0.0), c(0.0, 0.0));
        let dc = dressed_couplings(&ds, &p);
        let d = mech_displacement(&ds, &p, &dc);
        assert_eq!(d.minus_2.norm(), 0.0);
        assert_eq!(d.plus_2.norm(), 0.0);
    }

    #[test]
    fn validity_ratio_values() {
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.0, 0.0, 1e-5, 0.0).unwrap();
        assert_eq!(validity_ratio(&p), 0.0);
        let p = symmetric_setting(10.0, 0.5, 10.0, 0.1, 0.8, 1e-5, 0.0).unwrap();
        assert!((validity_ratio(&p) - 0.01).abs() < 1e-15);
        let p = symmetric_setting(10.0, 0.5, 0.0, 0.1, 0.8, 1e-5, 0.0).unwrap();
        assert!((validity_ratio(&p) - 0.1 / 10f64.sqrt()).abs() < 1e-15);
        assert!((validity_ratio(&p) - 0.0316).abs() < 1e-4);
    }

    #[test]
    fn vanishing_j_is_continuous() {
        let ds = drive(c(30.0, 0.0), c(40.0, 0.0));
        let bare = dressed_couplings(&ds, &symmetric_setting(10.0, 0.5, 0.0, 0.1, 0.0, 1e-5, 0.0).unwrap());
        let tiny = dressed_couplings(&ds, &symmetric_setting(10.0, 0.5, 1e-6, 0.1, 0.0, 1e-5, 0.0).unwrap());
        assert!((bare.alpha_bar_plus - tiny.alpha_bar_plus).norm() < 1e-10);
        assert!((bare.alpha_bar_minus - tiny.alpha_bar_minus).norm() < 1e-10);
    }
}
