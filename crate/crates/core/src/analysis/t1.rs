//! Qubit lifetime from the single-excitation spectrum or from a fit to a
//! simulated decay.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{excitation_number, max_abs, ExcitationSector, C64};
use crate::slh::SlhTriplet;
use crate::units::ns_to_us;

use super::fit::fit_exponential;

/// Two eigenvectors whose bare-qubit weights differ by less than this make
/// the qubit-like mode ambiguous.
pub const QUBIT_WEIGHT_GAP: f64 = 1e-3;

/// Samples before this time (ns) are excluded from decay fits by default.
pub const DEFAULT_TRANSIENT_CUT_NS: f64 = 200.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T1Method {
    Spectral,
    TrajectoryFit,
}

impl fmt::Display for T1Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            T1Method::Spectral => "spectral",
            T1Method::TrajectoryFit => "trajectory-fit",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitDiagnostics {
    pub amplitude: f64,
    pub offset: f64,
    pub residual_rms: f64,
    pub transient_cut_ns: f64,
    pub samples: usize,
    /// Fitted window length in units of the fitted lifetime.
    pub window_over_t1: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct T1Result {
    /// Microseconds; `+inf` for a mode that does not decay.
    pub t1_us: f64,
    pub method: T1Method,
    /// Single-excitation eigenvalue of the selected mode (spectral only).
    pub eigenvalue: Option<C64>,
    pub qubit_weight: Option<f64>,
    pub fit: Option<FitDiagnostics>,
}

/// Require `[H, N] = 0` and `[N, L_j] = -L_j` for the total excitation
/// number `N`.
pub fn check_excitation_conserving(g: &SlhTriplet) -> Result<()> {
    let n = excitation_number(g.space());
    let h = g.hamiltonian();
    let scale = h.max_abs().max(1.0);
    let comm = max_abs(h.commutator(&n).matrix());
    if comm > 1e-12 * scale {
        return Err(Error::NotExcitationConserving(format!("|[H, N]| = {comm:.3e}")));
    }
    for (j, l) in g.coupling().iter().enumerate() {
        let dev = max_abs(&(n.commutator(l).matrix() + l.matrix()));
        if dev > 1e-12 * l.max_abs().max(1.0) {
            return Err(Error::NotExcitationConserving(format!("L_{j} is not a pure lowering operator ({dev:.3e})")));
        }
    }
    Ok(())
}

/// `T1 = 1 / (-2 Im lambda)` for the eigenvalue of the single-excitation
/// effective Hamiltonian whose eigenvector has the largest weight on the
/// bare `|qubit = 1>` state.
pub fn t1_spectral(g: &SlhTriplet, qubit_label: &str) -> Result<T1Result> {
    check_excitation_conserving(g)?;
    let space = g.space();
    let sector = ExcitationSector::new(space, 1)?;
    let heff = crate::dynamics::effective_hamiltonian(g);
    let block = sector.restrict_matrix(heff.matrix());
    let flat = space.single_excitation_index(qubit_label, 1)?;
    let pos = sector.position(flat).expect("single-excitation state lies in the sector");
    let eig = linalg::eig(&block)?;
    let mut weights: Vec<(usize, f64)> =
        (0..eig.values.len()).map(|k| (k, eig.vectors[(pos, k)].norm_sqr())).collect();
    weights.sort_by(|a, b| b.1.total_cmp(&a.1));
    if weights.len() > 1 && weights[0].1 - weights[1].1 < QUBIT_WEIGHT_GAP {
        return Err(Error::AmbiguousMode(weights[0].1, weights[1].1));
    }
    let (k, weight) = weights[0];
    let lambda = eig.values[k];
    let t1_us = if lambda.im < 0.0 { ns_to_us(-1.0 / (2.0 * lambda.im)) } else { f64::INFINITY };
    Ok(T1Result { t1_us, method: T1Method::Spectral, eigenvalue: Some(lambda), qubit_weight: Some(weight), fit: None })
}

/// Fit `A exp(-t/T1) + C` (`C` in [0, 0.05]) to an excited-state
/// population sampled at `times_ns`, ignoring samples before
/// `transient_cut_ns`.
pub fn t1_fit(times_ns: &[f64], population: &[f64], transient_cut_ns: f64) -> Result<T1Result> {
    if times_ns.len() != population.len() {
        return Err(Error::InvalidArgument("times and populations differ in length".into()));
    }
    let (t, y): (Vec<f64>, Vec<f64>) =
        times_ns.iter().zip(population).filter(|(ti, _)| **ti >= transient_cut_ns).map(|(a, b)| (*a, *b)).unzip();
    if t.len() < 10 {
        return Err(Error::Fit(format!("only {} samples after the {transient_cut_ns} ns cut; need 10", t.len())));
    }
    let fit = fit_exponential(&t, &y)?;
    let window = t[t.len() - 1] - t[0];
    let window_over_t1 = window / fit.tau;
    if window_over_t1 < std::f64::consts::LN_10 {
        return Err(Error::Fit(format!(
            "window covers {window_over_t1:.2} lifetimes, less than one decade of decay"
        )));
    }
    // Robust noise scale (normalized median absolute residual), so that a
    // single rising sample cannot hide inside its own residual.
    let mut abs_res: Vec<f64> = t
        .iter()
        .zip(&y)
        .map(|(ti, yi)| (yi - fit.amplitude * (-(ti - t[0]) / fit.tau).exp() - fit.offset).abs())
        .collect();
    abs_res.sort_by(f64::total_cmp);
    let noise = 1.4826 * abs_res[abs_res.len() / 2];
    let slack = 6.0 * noise + 1e-9 * y.iter().cloned().fold(0.0, f64::max);
    let mut running_min = f64::INFINITY;
    for (ti, yi) in t.iter().zip(&y) {
        if *yi - running_min > slack {
            return Err(Error::Fit(format!("population rises by more than the noise level at t = {ti} ns")));
        }
        running_min = running_min.min(*yi);
    }
    Ok(T1Result {
        t1_us: ns_to_us(fit.tau),
        method: T1Method::TrajectoryFit,
        eigenvalue: None,
        qubit_weight: None,
        fit: Some(FitDiagnostics {
            amplitude: fit.amplitude,
            offset: fit.offset,
            residual_rms: fit.rms,
            transient_cut_ns,
            samples: t.len(),
            window_over_t1,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slh::{build_full_giant_atom, build_giant_atom_simplified, SystemParams, QUBIT};
    use crate::units::mhz;

    #[test]
    fn synthetic_single_exponential() {
        let t: Vec<f64> = (0..=300).map(|i| i as f64 * 100.0).collect();
        let y: Vec<f64> = t.iter().map(|ti| (-ti / 10_000.0).exp()).collect();
        let r = t1_fit(&t, &y, 0.0).unwrap();
        assert!((r.t1_us / 10.0 - 1.0).abs() < 1e-3);
        assert_eq!(r.method, T1Method::TrajectoryFit);
    }

    #[test]
    fn synthetic_transient_is_cut() {
        let t: Vec<f64> = (0..=400).map(|i| i as f64 * 1000.0).chain((0..40).map(|i| i as f64 * 5.0)).collect();
        let mut t = t;
        t.sort_by(f64::total_cmp);
        t.dedup();
        let y: Vec<f64> = t.iter().map(|ti| 0.1 * (-ti / 50.0).exp() + 0.9 * (-ti / 100_000.0).exp()).collect();
        let r = t1_fit(&t, &y, DEFAULT_TRANSIENT_CUT_NS).unwrap();
        assert!((r.t1_us / 100.0 - 1.0).abs() < 0.02, "{}", r.t1_us);
    }

    #[test]
    fn fit_rejects_bad_windows() {
        let t: Vec<f64> = (0..20).map(|i| i as f64 * 10.0).collect();
        let flat: Vec<f64> = t.iter().map(|ti| (-ti / 1e5).exp()).collect();
        assert!(matches!(t1_fit(&t, &flat, 0.0), Err(Error::Fit(_))));
        assert!(matches!(t1_fit(&t[..5], &flat[..5], 0.0), Err(Error::Fit(_))));
        let mut bumpy: Vec<f64> = t.iter().map(|ti| (-ti / 20.0).exp()).collect();
        bumpy[15] = 0.3;
        assert!(matches!(t1_fit(&t, &bumpy, 0.0), Err(Error::Fit(_))));
    }

    #[test]
    fn spectral_matches_purcell_without_jqf() {
        let mut p = SystemParams::giant_atom_chip();
        p.kappa_j = 0.0;
        let r = t1_spectral(&build_full_giant_atom(&p).unwrap(), QUBIT).unwrap();
        let purcell = super::super::purcell_limit(p.omega_q, p.omega_r, p.g_qr, p.kappa_r).unwrap();
        assert!((r.t1_us / purcell - 1.0).abs() < 0.02);
    }

    #[test]
    fn detuned_jqf_gives_purcell_lifetime() {
        let mut p = SystemParams::giant_atom_chip();
        p.omega_j = p.omega_q + mhz(100.0);
        let r = t1_spectral(&build_full_giant_atom(&p).unwrap(), QUBIT).unwrap();
        assert!(r.t1_us > 5.0 && r.t1_us < 15.0, "{}", r.t1_us);
    }

    #[test]
    fn non_conserving_triplet_is_rejected() {
        let p = SystemParams::giant_atom_chip();
        let g = build_giant_atom_simplified(&p).unwrap();
        let drive = crate::slh::drive_on_port(2, 0, crate::operator::c(0.1, 0.0)).unwrap();
        let driven = crate::slh::series(&g, &drive).unwrap();
        assert!(matches!(t1_spectral(&driven, QUBIT), Err(Error::NotExcitationConserving(_))));
    }
}
