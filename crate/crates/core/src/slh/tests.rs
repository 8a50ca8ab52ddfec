use std::f64::consts::PI;
use std::sync::Arc;

use super::*;
use crate::error::Error;
use crate::operator::{c, embed, sigma_z, CMatrix, Operator, C64};
use crate::space::make_space;

fn tls(label: &str, rate: f64) -> SlhTriplet {
    coupling_point(label, &crate::operator::ladder(2).unwrap(), rate).unwrap()
}

#[test]
fn series_of_two_points_matches_hand_result() {
    // Two TLS cascaded through a phase: the textbook cascaded-system result.
    let (k1, k2, phi) = (0.3, 0.7, 0.4);
    let g = cascade(&[tls("a", k1), phase_shifter(phi), tls("b", k2)]).unwrap();
    let space = g.space().clone();
    assert_eq!(space.subsystems()[0].label, "a");
    let sa = Operator::lowering(&space, "a").unwrap();
    let sb = Operator::lowering(&space, "b").unwrap();
    let e = C64::from_polar(1.0, phi);
    let l = &sa.scale(e * k1.sqrt()) + &sb.scale(c(k2.sqrt(), 0.0));
    assert!(crate::operator::max_abs(&(g.coupling()[0].matrix() - l.matrix())) < 1e-15);
    let x = (&sb.adjoint() * &sa).scale(e * (k1 * k2).sqrt());
    let h = (&x - &x.adjoint()).scale(C64::new(0.0, -0.5));
    assert!(crate::operator::max_abs(&(g.hamiltonian().matrix() - h.matrix())) < 1e-15);
    assert!((g.scattering()[(0, 0)] - e).norm() < 1e-15);
}

#[test]
fn identity_is_series_unit() {
    let g = tls("a", 0.5);
    let left = series(&SlhTriplet::identity(), &g).unwrap();
    let right = series(&g, &SlhTriplet::identity()).unwrap();
    assert!(triplet_distance(&left, &g).unwrap() < 1e-15);
    assert!(triplet_distance(&right, &g).unwrap() < 1e-15);
}

#[test]
fn port_mismatch_is_reported() {
    let two = concatenate(&tls("a", 1.0), &tls("b", 1.0)).unwrap();
    assert!(matches!(series(&two, &tls("c", 1.0)), Err(Error::PortMismatch(2, 1))));
}

#[test]
fn bare_hamiltonian_counted_once() {
    let space = Arc::new(make_space(&[("a", 2)]).unwrap());
    let h = embed(&sigma_z(), "a", &space).unwrap();
    let g1 = tls("a", 1.0).with_bare_hamiltonian(&h, &["a"]).unwrap();
    let g2 = tls("a", 1.0).with_bare_hamiltonian(&h, &["a"]).unwrap();
    assert!(matches!(series(&g2, &g1), Err(Error::HamiltonianDoubleCounted(_))));
    assert!(matches!(concatenate(&g1, &g2), Err(Error::HamiltonianDoubleCounted(_))));
    assert!(matches!(g1.with_bare_hamiltonian(&h, &["a"]), Err(Error::HamiltonianDoubleCounted(_))));
}

#[test]
fn non_unitary_scattering_rejected() {
    let space = Arc::new(crate::space::HilbertSpace::trivial());
    let s = CMatrix::from_element(1, 1, c(1.5, 0.0));
    let r = SlhTriplet::new(space.clone(), s, vec![Operator::zero(&space)], Operator::zero(&space));
    assert!(matches!(r, Err(Error::NotUnitary(_))));
}

#[test]
fn negative_rate_rejected() {
    assert!(matches!(
        coupling_point("a", &crate::operator::ladder(2).unwrap(), -1.0),
        Err(Error::NegativeRate(_))
    ));
}

#[test]
fn drive_on_port_shapes() {
    let d = drive_on_port(2, 1, c(0.5, 0.0)).unwrap();
    assert_eq!(d.n_ports(), 2);
    assert_eq!(d.coupling()[0].max_abs(), 0.0);
    assert!((d.coupling()[1].matrix()[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
    assert!(drive_on_port(2, 2, c(1.0, 0.0)).is_err());
}

#[test]
fn simplified_giant_atom_matches_closed_form() {
    let p = SystemParams::giant_atom_chip();
    let built = build_giant_atom_simplified(&p).unwrap();
    let closed = closed_form_giant_atom(&p).unwrap();
    assert!(triplet_distance(&built, &closed).unwrap() < 1e-12);
}

#[test]
fn simplified_giant_atom_detuned_carries_lamb_shift() {
    // Away from phi = pi each direction adds a JQF self-interaction of
    // kappa_j/2 sin(2 phi) sigma^dag sigma.
    let mut p = SystemParams::giant_atom_chip();
    p.phi = 0.9 * PI;
    let built = build_giant_atom_simplified(&p).unwrap();
    let space = built.space().clone();
    let sj = Operator::lowering(&space, JQF).unwrap();
    let n = &sj.adjoint() * &sj;
    let h = built.hamiltonian();
    let lamb = p.kappa_j * (2.0 * p.phi).sin();
    // The diagonal element on |q=0, jqf=1> holds the JQF bare energy plus the shift.
    let idx = space.index(&[0, 1]);
    let bare = bare_hamiltonian_two_emitter(&p, &space);
    let shift = (h.matrix()[(idx, idx)] - bare.matrix()[(idx, idx)]).re;
    assert!((shift - lamb * n.matrix()[(idx, idx)].re).abs() < 1e-12);
}

#[test]
fn full_device_matches_closed_form_over_phases() {
    let mut p = SystemParams::giant_atom_chip();
    for (p1, p2) in [(PI, 0.0), (0.8 * PI, 0.0), (1.2 * PI, 0.1 * PI), (0.5, -0.3), (2.0, 1.0)] {
        p.phi1 = p1;
        p.phi2 = p2;
        let built = build_full_giant_atom(&p).unwrap();
        let closed = closed_form_full_giant_atom(&p).unwrap();
        let d = triplet_distance(&built, &closed).unwrap();
        assert!(d < 1e-12, "phi1={p1} phi2={p2}: {d}");
    }
}

#[test]
fn full_device_space_is_canonical() {
    let g = build_full_giant_atom(&SystemParams::giant_atom_chip()).unwrap();
    let labels: Vec<_> = g.space().subsystems().iter().map(|s| s.label.as_str()).collect();
    assert_eq!(labels, [JQF, QUBIT, RESONATOR]);
    assert_eq!(g.space().total_dim(), 24);
    assert_eq!(g.n_ports(), 2);
    assert_eq!(g.hamiltonian_owners().len(), 3);
}

#[test]
fn reflective_matches_closed_form() {
    let p = SystemParams::reflective_chip();
    let built = build_reflective_jqf(&p).unwrap();
    let closed = closed_form_reflective(&p).unwrap();
    assert!(triplet_distance(&built, &closed).unwrap() < 1e-12);
    assert_eq!(built.n_ports(), 1);
}

#[test]
fn giant_jqf_decouples_at_half_wavelength_spacing() {
    // Two points pi/2 apart per leg (total 2 phi = pi) interfere destructively.
    let mut p = SystemParams::giant_atom_chip();
    p.phi = PI / 2.0;
    let g = build_giant_jqf(&p).unwrap();
    for l in g.coupling() {
        assert!(l.max_abs() < 1e-12);
    }
    p.phi = PI;
    let g = build_giant_jqf(&p).unwrap();
    let expected = (2.0 * p.kappa_j).sqrt();
    for l in g.coupling() {
        assert!((l.max_abs() - expected).abs() < 1e-12);
    }
}
