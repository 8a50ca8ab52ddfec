//! Qubit decay through the readout resonator.

use crate::error::{Error, Result};
use crate::linalg::eig2;
use crate::operator::{c, CMatrix, C64};
use crate::units::ns_to_us;

/// Minimum gap between the qubit weights of the two eigenvectors.
pub const SELECTION_GAP: f64 = 1e-6;

/// Complex eigenfrequency of the qubit-like mode of
/// `[[omega_q, g], [g, omega_r - i kappa_r / 2]]`.
pub fn qubit_mode(omega_q: f64, omega_r: f64, g_qr: f64, kappa_r: f64) -> Result<C64> {
    if !(kappa_r > 0.0) {
        return Err(Error::InvalidArgument("kappa_r must be positive".into()));
    }
    let m = CMatrix::from_row_slice(2, 2, &[c(omega_q, 0.0), c(g_qr, 0.0), c(g_qr, 0.0), c(omega_r, -kappa_r / 2.0)]);
    let e = eig2(&m);
    let w0 = e.vectors[(0, 0)].norm_sqr();
    let w1 = e.vectors[(0, 1)].norm_sqr();
    if (w0 - w1).abs() < SELECTION_GAP {
        return Err(Error::AmbiguousMode(w0, w1));
    }
    Ok(if w0 > w1 { e.values[0] } else { e.values[1] })
}

/// Purcell-limited `T1 = 1 / (-2 Im omega_q~)` in microseconds; `+inf` when
/// the qubit is decoupled.
pub fn purcell_limit(omega_q: f64, omega_r: f64, g_qr: f64, kappa_r: f64) -> Result<f64> {
    if g_qr == 0.0 {
        if !(kappa_r > 0.0) {
            return Err(Error::InvalidArgument("kappa_r must be positive".into()));
        }
        return Ok(f64::INFINITY);
    }
    let im = qubit_mode(omega_q, omega_r, g_qr, kappa_r)?.im;
    Ok(if im >= 0.0 { f64::INFINITY } else { ns_to_us(-1.0 / (2.0 * im)) })
}

/// Dispersive estimate `Delta^2 / (g^2 kappa_r)` in microseconds.
pub fn dispersive_purcell_limit(omega_q: f64, omega_r: f64, g_qr: f64, kappa_r: f64) -> f64 {
    let delta = omega_r - omega_q;
    ns_to_us(delta * delta / (g_qr * g_qr * kappa_r))
}

/// Real part of [`qubit_mode`]: the resonator-dressed qubit frequency.
pub fn dressed_qubit_frequency(omega_q: f64, omega_r: f64, g_qr: f64, kappa_r: f64) -> Result<f64> {
    Ok(qubit_mode(omega_q, omega_r, g_qr, kappa_r)?.re)
}
