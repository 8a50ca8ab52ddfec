use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::{ghz, mhz};

/// Level truncation per subsystem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub jqf: usize,
    pub qubit: usize,
    pub resonator: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { jqf: 2, qubit: 4, resonator: 3 }
    }
}

/// Device parameters. Frequencies and rates are angular, in rad/ns; phases in
/// radians.
///
/// `phi` is the single-leg delay of the symmetric models. The full device
/// uses `phi1` (mean) and `phi2` (difference) with
/// `phi_left = phi1 + phi2/2` and `phi_right = phi1 - phi2/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    pub omega_q: f64,
    pub omega_r: f64,
    pub omega_j: f64,
    pub alpha: f64,
    pub g_qr: f64,
    pub kappa_r: f64,
    pub kappa_j: f64,
    /// Effective direct qubit-waveguide rate of the simplified models.
    pub kappa_q: f64,
    pub phi: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// Rotating-frame frequency; every bare frequency enters H as a detuning
    /// from it.
    pub frame_freq: f64,
    pub truncation: Truncation,
}

impl SystemParams {
    /// Giant-atom chip. The JQF sits at the qubit frequency (its working
    /// point); all waveguide phases at the design value pi.
    pub fn giant_atom_chip() -> Self {
        let omega_q = mhz(5011.7);
        Self {
            omega_q,
            omega_r: mhz(6621.0),
            omega_j: omega_q,
            alpha: mhz(-302.0),
            g_qr: mhz(144.0),
            kappa_r: mhz(2.1),
            kappa_j: mhz(12.7),
            kappa_q: mhz(0.015),
            phi: PI,
            phi1: PI,
            phi2: 0.0,
            frame_freq: omega_q,
            truncation: Truncation::default(),
        }
    }

    /// Reflective-JQF chip.
    pub fn reflective_chip() -> Self {
        let omega_q = mhz(4431.9);
        Self {
            omega_q,
            omega_r: mhz(6497.0),
            omega_j: omega_q,
            alpha: mhz(-270.0),
            g_qr: mhz(137.0),
            kappa_r: mhz(1.8),
            kappa_j: mhz(24.0),
            kappa_q: mhz(0.010),
            phi: PI,
            phi1: PI,
            phi2: 0.0,
            frame_freq: omega_q,
            truncation: Truncation::default(),
        }
    }

    pub fn phi_left(&self) -> f64 {
        self.phi1 + self.phi2 / 2.0
    }

    pub fn phi_right(&self) -> f64 {
        self.phi1 - self.phi2 / 2.0
    }

    pub fn with_frame(mut self, frame_freq: f64) -> Self {
        self.frame_freq = frame_freq;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("kappa_r", self.kappa_r),
            ("kappa_j", self.kappa_j),
            ("kappa_q", self.kappa_q),
        ] {
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be a finite non-negative rate")));
            }
        }
        for (name, v) in [
            ("omega_q", self.omega_q),
            ("omega_r", self.omega_r),
            ("omega_j", self.omega_j),
            ("alpha", self.alpha),
            ("g_qr", self.g_qr),
            ("phi", self.phi),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
            ("frame_freq", self.frame_freq),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        let t = self.truncation;
        if t.jqf != 2 {
            return Err(Error::InvalidArgument("the JQF is a two-level system".into()));
        }
        if t.qubit < 2 || t.resonator < 2 {
            return Err(Error::InvalidArgument("qubit and resonator need at least 2 levels".into()));
        }
        Ok(())
    }
}

/// Waveguide phase for a length given in units of half a 5 GHz wavelength:
/// `phi = pi * ratio * omega / omega_5GHz`.
pub fn phase_from_length(length_ratio: f64, omega: f64) -> Result<f64> {
    if !(length_ratio > 0.0) {
        return Err(Error::InvalidArgument("length ratio must be positive".into()));
    }
    Ok(PI * length_ratio * omega / ghz(5.0))
}
