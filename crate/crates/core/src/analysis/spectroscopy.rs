//! Weak-probe transmission and saturation of a waveguide-coupled network.

use crate::dynamics::asymptotic_state;
use crate::error::{Error, Result};
use crate::operator::{expectation, DensityMatrix, Operator, C64};
use crate::slh::{drive_on_port, series, SlhTriplet, SystemParams};
use crate::units::PLANCK;

use super::fit::{fit_lorentzian, LorentzFit};

/// Complex transmission `<L_out> / (S beta)` of `port` for a coherent probe
/// of amplitude `beta` (sqrt(photons/ns)) at angular frequency `probe_freq`.
///
/// The network is rebuilt in the frame rotating at the probe, so the drive
/// is static. Normalizing by the bare scattering element removes the
/// waveguide's own phase, leaving `t = 1` for a decoupled network. The
/// state is the stationary state reached from the ground state, which
/// stays well defined when part of the network is decoupled.
pub fn transmission<F>(builder: F, params: &SystemParams, probe_freq: f64, beta: C64, port: usize) -> Result<C64>
where
    F: Fn(&SystemParams) -> Result<SlhTriplet>,
{
    if beta.norm() == 0.0 {
        return Err(Error::InvalidArgument("probe amplitude must be non-zero".into()));
    }
    let g = builder(&params.clone().with_frame(probe_freq))?;
    if port >= g.n_ports() {
        return Err(Error::InvalidArgument(format!("port {port} out of range for {} ports", g.n_ports())));
    }
    let s = g.scattering()[(port, port)];
    let driven = series(&g, &drive_on_port(g.n_ports(), port, beta)?)?;
    let ground = DensityMatrix::basis(driven.space().clone(), &vec![0; driven.space().subsystems().len()])?;
    let rho = asymptotic_state(&driven, &ground)?;
    let out = expectation(&driven.coupling()[port], &rho)?;
    Ok(out / (s * beta))
}

/// Transmission at each probe frequency.
pub fn transmission_spectrum<F>(
    builder: F,
    params: &SystemParams,
    probe_freqs: &[f64],
    beta: C64,
    port: usize,
) -> Result<Vec<C64>>
where
    F: Fn(&SystemParams) -> Result<SlhTriplet>,
{
    probe_freqs.iter().map(|&f| transmission(&builder, params, f, beta, port)).collect()
}

/// Lorentzian fit of `|1 - t|^2` over the scan, restricted to +-5 widths
/// around the deepest point when the scan is wider than that.
pub fn dip_linewidth(freqs: &[f64], t: &[C64]) -> Result<LorentzFit> {
    let y: Vec<f64> = t.iter().map(|z| (C64::new(1.0, 0.0) - z).norm_sqr()).collect();
    let first = fit_lorentzian(freqs, &y)?;
    let (lo, hi) = (first.center - 5.0 * first.fwhm, first.center + 5.0 * first.fwhm);
    let (x, y): (Vec<f64>, Vec<f64>) =
        freqs.iter().zip(&y).filter(|(f, _)| (lo..=hi).contains(*f)).map(|(a, b)| (*a, *b)).unzip();
    if x.len() >= 5 && x.len() < freqs.len() {
        fit_lorentzian(&x, &y)
    } else {
        Ok(first)
    }
}

/// Total decay rate `<e| sum_j L_j^dag L_j |e>` of the first excited level
/// of `label`.
pub fn emitter_decay_rate(g: &SlhTriplet, label: &str) -> Result<f64> {
    let idx = g.space().single_excitation_index(label, 1)?;
    Ok(g.total_decay().matrix()[(idx, idx)].re)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaturationPoint {
    pub beta: f64,
    /// `|beta|^2 / kappa_total`.
    pub photons_per_relaxation: f64,
    pub dip_depth: f64,
}

/// Dip depth `|1 - t|` at `probe_freq` for each probe amplitude. The grid
/// must span at least three decades of photon flux.
pub fn saturation_curve<F>(
    builder: F,
    params: &SystemParams,
    probe_freq: f64,
    betas: &[f64],
    emitter: &str,
    port: usize,
) -> Result<Vec<SaturationPoint>>
where
    F: Fn(&SystemParams) -> Result<SlhTriplet>,
{
    let (lo, hi) = betas.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v.abs()), b.max(v.abs())));
    if betas.is_empty() || !(lo > 0.0) || (hi / lo).powi(2) < 1e3 * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument("probe grid must span at least 3 decades of photon flux".into()));
    }
    let kappa = emitter_decay_rate(&builder(params)?, emitter)?;
    if !(kappa > 0.0) {
        return Err(Error::InvalidArgument(format!("`{emitter}` does not decay into the waveguide")));
    }
    betas
        .iter()
        .map(|&b| {
            let t = transmission(&builder, params, probe_freq, C64::new(b, 0.0), port)?;
            Ok(SaturationPoint { beta: b, photons_per_relaxation: b * b / kappa, dip_depth: (C64::new(1.0, 0.0) - t).norm() })
        })
        .collect()
}

/// Photon flux (photons/s) of a tone of `power_dbm` at `frequency_hz`.
pub fn photon_flux(power_dbm: f64, frequency_hz: f64) -> Result<f64> {
    if !(frequency_hz > 0.0) {
        return Err(Error::InvalidArgument("frequency must be positive".into()));
    }
    let watts = 10f64.powf((power_dbm - 30.0) / 10.0);
    Ok(watts / (PLANCK * frequency_hz))
}

/// Inverse of [`photon_flux`].
pub fn power_dbm(photons_per_s: f64, frequency_hz: f64) -> Result<f64> {
    if !(frequency_hz > 0.0) {
        return Err(Error::InvalidArgument("frequency must be positive".into()));
    }
    Ok(10.0 * (photons_per_s * PLANCK * frequency_hz).log10() + 30.0)
}

/// Number operator of `label` on the triplet's space.
pub fn population_operator(g: &SlhTriplet, label: &str) -> Result<Operator> {
    Operator::number(g.space(), label)
}
