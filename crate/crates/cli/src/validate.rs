//! Release gate: every analytic cross-check in one report.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use slhnet::analysis::{dark_states, dispersive_purcell_limit, purcell_limit, t1_spectral};
use slhnet::dynamics::{evolve, Liouvillian, SolverOptions};
use slhnet::operator::{c, ladder, CMatrix};
use slhnet::slh::*;
use slhnet::{make_space, DensityMatrix, Operator, C64};

use crate::config::{DeviceKind, ScenarioConfig};
use crate::sweep::{Cell, Manifest, SweepResult};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: Tolerance,
}

impl Check {
    pub fn delta(&self) -> f64 {
        match self.tolerance {
            Tolerance::Relative(_) => ((self.measured - self.expected) / self.expected).abs(),
            Tolerance::Absolute(_) => (self.measured - self.expected).abs(),
        }
    }

    pub fn passed(&self) -> bool {
        let d = self.delta();
        match self.tolerance {
            Tolerance::Relative(t) | Tolerance::Absolute(t) => d <= t,
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Relative(t) => write!(f, "rel {t:e}"),
            Tolerance::Absolute(t) => write!(f, "abs {t:e}"),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} measured={:<14.8e} expected={:<14.8e} tol={} delta={:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.expected,
            self.tolerance,
            self.delta()
        )
    }
}

fn failed(name: &'static str, expected: f64, tolerance: Tolerance) -> Check {
    Check { name, measured: f64::NAN, expected, tolerance }
}

fn closed_form_error(p: &SystemParams) -> slhnet::Result<f64> {
    let mut worst = 0.0f64;
    let mut q = p.clone();
    for i in 0..7 {
        for j in 0..7 {
            q.phi1 = 2.0 * PI * i as f64 / 7.0 + 0.1;
            q.phi2 = -PI + 2.0 * PI * j as f64 / 7.0;
            worst = worst.max(triplet_distance(&build_full_giant_atom(&q)?, &closed_form_full_giant_atom(&q)?)?);
        }
    }
    Ok(worst)
}

/// `|amp(qubit)| / |amp(jqf)|` of the single dark state.
fn dark_ratio(g: &SlhTriplet) -> slhnet::Result<(f64, f64)> {
    let report = dark_states(g)?;
    let s = report.states.first().ok_or_else(|| slhnet::Error::Numerical("no dark state".into()))?;
    let q = s.vector[g.space().single_excitation_index(QUBIT, 1)?].norm();
    let j = s.vector[g.space().single_excitation_index(JQF, 1)?].norm();
    Ok((q / j, s.max_coupling_residual()))
}

fn tls_decay_error() -> slhnet::Result<f64> {
    let kappa = 0.05;
    let g = coupling_point("q", &ladder(2)?, kappa)?;
    let rho0 = DensityMatrix::basis(g.space().clone(), &[1])?;
    let grid: Vec<f64> = (0..=100).map(|i| i as f64).collect();
    let traj = evolve(&g, &rho0, &grid, &SolverOptions::default())?;
    let p = traj.expect_real(&Operator::number(g.space(), "q")?)?;
    Ok(grid.iter().zip(p).map(|(t, v)| (v - (-kappa * t).exp()).abs()).fold(0.0, f64::max))
}

fn bloch_spectrum_error() -> slhnet::Result<f64> {
    let (rabi, kappa) = (0.3f64, 0.5f64);
    let space = Arc::new(make_space(&[("q", 2)])?);
    let sm = Operator::lowering(&space, "q")?;
    let h = (&sm + &sm.adjoint()).scale(c(rabi / 2.0, 0.0));
    let g = SlhTriplet::new(space.clone(), CMatrix::identity(1, 1), vec![sm.scale(c(kappa.sqrt(), 0.0))], h)?;
    let ev = Liouvillian::new(&g)?.eigenvalues()?;
    let root = C64::new(kappa * kappa / 16.0 - rabi * rabi, 0.0).sqrt();
    let expected = [c(0.0, 0.0), c(-kappa / 2.0, 0.0), c(-0.75 * kappa, 0.0) + root, c(-0.75 * kappa, 0.0) - root];
    Ok(expected
        .iter()
        .map(|e| ev.iter().map(|v| (v - e).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// Runs the checks against the configured device (the giant-atom chip
/// when the device is the reflective one, and vice versa for the
/// reflective checks), so `--set` perturbations reach the fixtures.
pub fn validate(cfg: &ScenarioConfig) -> Vec<Check> {
    let (giant, reflective) = match cfg.device.kind {
        DeviceKind::Reflective => (SystemParams::giant_atom_chip(), cfg.device.params.clone()),
        _ => (cfg.device.params.clone(), SystemParams::reflective_chip()),
    };
    let p = &giant;
    let mut checks = Vec::new();
    let mut push = |name, expected, tol, measured: slhnet::Result<f64>| {
        checks.push(match measured {
            Ok(m) => Check { name, measured: m, expected, tolerance: tol },
            Err(_) => failed(name, expected, tol),
        })
    };

    let purcell = purcell_limit(p.omega_q, p.omega_r, p.g_qr, p.kappa_r);
    let exact_purcell = purcell.as_ref().ok().copied();
    push("purcell_limit_us", 9.7, Tolerance::Relative(0.01), purcell);
    if let Some(exact) = exact_purcell {
        let disp = dispersive_purcell_limit(p.omega_q, p.omega_r, p.g_qr, p.kappa_r);
        push("dispersive_purcell_us", exact, Tolerance::Relative(0.05), Ok(disp));
    }
    push("full_device_closed_form", 0.0, Tolerance::Absolute(1e-10), closed_form_error(p));
    let mut s = p.clone();
    s.phi = PI;
    push(
        "simplified_closed_form",
        0.0,
        Tolerance::Absolute(1e-10),
        build_giant_atom_simplified(&s).and_then(|b| triplet_distance(&b, &closed_form_giant_atom(&s)?)),
    );
    let mut r = reflective.clone();
    r.phi = PI;
    push(
        "reflective_closed_form",
        0.0,
        Tolerance::Absolute(1e-10),
        build_reflective_jqf(&r).and_then(|b| triplet_distance(&b, &closed_form_reflective(&r)?)),
    );
    let (ratio, residual) = match build_giant_atom_simplified(&s).and_then(|g| dark_ratio(&g)) {
        Ok((a, b)) => (Ok(a), Ok(b)),
        Err(e) => (Err(slhnet::Error::Numerical(e.to_string())), Err(e)),
    };
    push(
        "dark_state_ratio_simplified",
        2.0 * (s.kappa_j / s.kappa_q).sqrt(),
        Tolerance::Relative(1e-9),
        ratio,
    );
    push("dark_state_residual", 0.0, Tolerance::Absolute(1e-12), residual);
    push(
        "dark_state_ratio_reflective",
        (r.kappa_j / r.kappa_q).sqrt(),
        Tolerance::Relative(1e-9),
        build_reflective_jqf(&r).and_then(|g| dark_ratio(&g)).map(|v| v.0),
    );
    push("tls_decay_trajectory", 0.0, Tolerance::Absolute(1e-6), tls_decay_error());
    push("driven_tls_spectrum", 0.0, Tolerance::Absolute(1e-8), bloch_spectrum_error());
    let mut k0 = p.clone();
    k0.kappa_j = 0.0;
    if let Some(exact) = exact_purcell {
        push(
            "t1_without_jqf_vs_purcell",
            exact,
            Tolerance::Relative(0.02),
            build_full_giant_atom(&k0).and_then(|g| t1_spectral(&g, QUBIT)).map(|t| t.t1_us),
        );
    }
    checks
}

/// The report as a table for CSV output.
pub fn as_table(checks: &[Check], manifest: Manifest) -> SweepResult {
    let columns = ["check", "measured", "expected", "tolerance", "delta", "pass"].map(String::from).to_vec();
    let rows = checks
        .iter()
        .map(|k| {
            vec![
                Cell::Text(k.name.into()),
                Cell::Num(k.measured),
                Cell::Num(k.expected),
                Cell::Text(k.tolerance.to_string()),
                Cell::Num(k.delta()),
                Cell::Text(if k.passed() { "true" } else { "false" }.into()),
            ]
        })
        .collect();
    SweepResult { columns, rows, manifest }
}
