//! Closed-form physics checks of the full pipeline.

use std::f64::consts::PI;
use std::sync::Arc;

use slhnet::analysis::{dark_states, t1_spectral, transmission};
use slhnet::dynamics::{evolve, Liouvillian, SolverOptions};
use slhnet::operator::{c, embed, ladder, max_abs, CMatrix, C64};
use slhnet::slh::*;
use slhnet::units::mhz;
use slhnet::{make_space, DensityMatrix, Operator, Result};

fn closed(h: Operator) -> SlhTriplet {
    let space = h.space().clone();
    SlhTriplet::new(space.clone(), CMatrix::identity(1, 1), vec![Operator::zero(&space)], h).unwrap()
}

#[test]
fn exchange_oscillation_between_detuned_emitters() {
    let (delta, g) = (0.7, 0.25);
    let space = Arc::new(make_space(&[("a", 2), ("b", 2)]).unwrap());
    let a = Operator::lowering(&space, "a").unwrap();
    let b = Operator::lowering(&space, "b").unwrap();
    let hop = (&a.adjoint() * &b).scale(c(g, 0.0));
    let h = &(&(&b.adjoint() * &b).scale(c(delta, 0.0)) + &hop) + &hop.adjoint();
    let rho0 = DensityMatrix::basis(space.clone(), &[1, 0]).unwrap();
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
    let traj = evolve(&closed(h), &rho0, &grid, &SolverOptions::default()).unwrap();
    let pb = traj.expect_real(&Operator::number(&space, "b").unwrap()).unwrap();
    let omega = (delta * delta + 4.0 * g * g).sqrt();
    for (t, p) in grid.iter().zip(pb) {
        let exact = 4.0 * g * g / (omega * omega) * (omega * t / 2.0).sin().powi(2);
        assert!((p - exact).abs() < 1e-7, "t={t}: {p} vs {exact}");
    }
}

#[test]
fn decaying_emitter_follows_exponential() {
    let kappa = 0.05;
    let g = coupling_point("q", &ladder(2).unwrap(), kappa).unwrap();
    let rho0 = DensityMatrix::basis(g.space().clone(), &[1]).unwrap();
    let grid: Vec<f64> = (0..=100).map(|i| i as f64).collect();
    let traj = evolve(&g, &rho0, &grid, &SolverOptions::default()).unwrap();
    let p = traj.expect_real(&Operator::number(g.space(), "q").unwrap()).unwrap();
    for (t, v) in grid.iter().zip(p) {
        assert!((v - (-kappa * t).exp()).abs() < 1e-6);
    }
    assert!(traj.max_trace_drift() < 1e-7);
}

#[test]
fn resonantly_driven_emitter_spectrum() {
    // Bloch equations: 0, -k/2, -3k/4 +- sqrt(k^2/16 - W^2).
    for (rabi, kappa) in [(0.3f64, 0.5f64), (0.05, 0.5)] {
        let space = Arc::new(make_space(&[("q", 2)]).unwrap());
        let sm = Operator::lowering(&space, "q").unwrap();
        let h = (&sm + &sm.adjoint()).scale(c(rabi / 2.0, 0.0));
        let g = SlhTriplet::new(space.clone(), CMatrix::identity(1, 1), vec![sm.scale(c(kappa.sqrt(), 0.0))], h).unwrap();
        let ev = Liouvillian::new(&g).unwrap().eigenvalues().unwrap();
        let root = C64::new(kappa * kappa / 16.0 - rabi * rabi, 0.0).sqrt();
        let expected = [c(0.0, 0.0), c(-kappa / 2.0, 0.0), c(-0.75 * kappa, 0.0) + root, c(-0.75 * kappa, 0.0) - root];
        for e in expected {
            let best = ev.iter().map(|v| (v - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "{e}: {best}");
        }
    }
}

#[test]
fn reflective_qubit_alone_decays_at_twice_its_rate() {
    let mut p = SystemParams::reflective_chip();
    p.kappa_j = 0.0;
    let t1 = t1_spectral(&build_reflective_jqf(&p).unwrap(), QUBIT).unwrap();
    let expected = slhnet::units::ns_to_us(1.0 / (2.0 * p.kappa_q));
    assert!(((t1.t1_us - expected) / expected).abs() < 1e-10);
}

#[test]
fn giant_jqf_is_super_radiant_at_full_wavelength() {
    let p = SystemParams::giant_atom_chip();
    let g = build_giant_jqf(&p).unwrap();
    let sj = Operator::lowering(g.space(), JQF).unwrap();
    let expected = (&sj.adjoint() * &sj).scale(c(4.0 * p.kappa_j, 0.0));
    assert!(max_abs(&(g.total_decay().matrix() - expected.matrix())) < 1e-12);
}

#[test]
fn dark_state_weight_at_large_rate_ratio() {
    let mut p = SystemParams::giant_atom_chip();
    p.kappa_q = 4.0 * p.kappa_j / 3000.0;
    let g = build_giant_atom_simplified(&p).unwrap();
    let report = dark_states(&g).unwrap();
    assert_eq!(report.states.len(), 1);
    let idx = g.space().index(&[1, 0]);
    let w = report.states[0].weight(idx);
    assert!((w - 1.0 / (1.0 + 1.0 / 3000.0)).abs() < 1e-9, "{w}");
}

#[test]
fn effective_hamiltonian_of_simplified_giant_atom() {
    // Single-excitation block in the (|q>, |jqf>) basis at phi = pi:
    // collective decay through L = sqrt(2 kj) sj - sqrt(kq/2) sq on two ports.
    let p = SystemParams::giant_atom_chip();
    let g = build_giant_atom_simplified(&p).unwrap();
    let heff = slhnet::dynamics::effective_hamiltonian(&g);
    let (block, sector) = slhnet::restrict_excitation(&heff, 1).unwrap();
    let q = sector.position(g.space().index(&[1, 0])).unwrap();
    let j = sector.position(g.space().index(&[0, 1])).unwrap();
    let (kj, kq) = (p.kappa_j, p.kappa_q);
    let cross = -(kj * kq).sqrt();
    let dq = p.omega_q - p.frame_freq;
    let dj = p.omega_j - p.frame_freq;
    let expected = [[c(dq, -kq / 2.0), c(0.0, -cross)], [c(0.0, -cross), c(dj, -2.0 * kj)]];
    for (i, r) in [q, j].into_iter().enumerate() {
        for (k, s) in [q, j].into_iter().enumerate() {
            assert!((block[(r, s)] - expected[i][k]).norm() < 1e-12, "({i},{k}) {}", block[(r, s)]);
        }
    }
}

fn chiral_emitter(kappa: f64) -> impl Fn(&SystemParams) -> Result<SlhTriplet> {
    move |p: &SystemParams| {
        let g = coupling_point("e", &ladder(2).unwrap(), kappa)?;
        let n = embed(&CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)])), "e", g.space())?;
        let h = n.scale(c(p.omega_j - p.frame_freq, 0.0));
        g.with_bare_hamiltonian(&h, &["e"])
    }
}

#[test]
fn chiral_emitter_saturates_like_bloch() {
    // On resonance the optical Bloch steady state gives
    // t = 1 - 2 / (1 + 8 |beta|^2 / kappa).
    let kappa = 0.08;
    let p = SystemParams::giant_atom_chip();
    for n in [1e-4f64, 0.01, 0.3, 1.0, 10.0] {
        let beta = (n * kappa as f64).sqrt();
        let t = transmission(chiral_emitter(kappa), &p, p.omega_j, c(beta, 0.0), 0).unwrap();
        let expected = 1.0 - 2.0 / (1.0 + 8.0 * n);
        assert!((t - c(expected, 0.0)).norm() < 1e-9, "n={n}: {t} vs {expected}");
    }
}

#[test]
fn chiral_emitter_detuned_response() {
    // Weak probe: t = 1 - kappa / (kappa/2 + i (omega_j - omega_probe)).
    let kappa = 0.08;
    let p = SystemParams::giant_atom_chip();
    for det in [-20.0, -3.0, 0.5, 7.0] {
        let probe = p.omega_j + mhz(det);
        let t = transmission(chiral_emitter(kappa), &p, probe, c(1e-6, 0.0), 0).unwrap();
        let d = -mhz(det);
        let expected = c(1.0, 0.0) - c(kappa, 0.0) / c(kappa / 2.0, d);
        assert!((t - expected).norm() < 1e-9, "{det}: {t} vs {expected}");
    }
}

#[test]
fn sub_radiant_giant_jqf_is_transparent() {
    let mut p = SystemParams::giant_atom_chip();
    p.phi = 1.5 * PI;
    for det in [-10.0, 0.0, 10.0] {
        let t = transmission(build_giant_jqf, &p, p.omega_j + mhz(det), c(1e-3, 0.0), 0).unwrap();
        assert!((c(1.0, 0.0) - t).norm() < 1e-9);
    }
}

#[test]
fn fitted_and_spectral_lifetimes_agree() {
    let mut p = SystemParams::giant_atom_chip();
    p.omega_j = mhz(5100.0);
    let g = build_full_giant_atom(&p).unwrap();
    let spectral = t1_spectral(&g, QUBIT).unwrap().t1_us;
    let rho0 = DensityMatrix::basis(g.space().clone(), &[0, 1, 0]).unwrap();
    let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 100.0).collect();
    let traj = evolve(&g, &rho0, &grid, &SolverOptions::default()).unwrap();
    let pop = traj.expect_real(&Operator::number(g.space(), QUBIT).unwrap()).unwrap();
    let fit = slhnet::analysis::t1_fit(traj.times(), &pop, 200.0).unwrap();
    assert!((fit.t1_us / spectral - 1.0).abs() < 0.05, "fit {} vs spectral {spectral}", fit.t1_us);
}
