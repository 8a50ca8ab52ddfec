use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use slhnet::analysis::{dark_states, purcell_limit, t1_spectral, transmission};
use slhnet::dynamics::{effective_hamiltonian, evolve, propagate_exact, Liouvillian, SolverOptions};
use slhnet::linalg;
use slhnet::operator::{c, embed, excitation_number, hermitize, max_abs, restrict_excitation, CMatrix, C64};
use slhnet::slh::*;
use slhnet::units::mhz;
use slhnet::{make_space, DensityMatrix, HilbertSpace, Operator};

fn complex_matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d * d)
        .prop_map(move |v| CMatrix::from_iterator(d, d, v.into_iter().map(|(a, b)| c(a, b))))
}

fn hermitian(d: usize) -> impl Strategy<Value = CMatrix> {
    complex_matrix(d).prop_map(|m| hermitize(&m))
}

/// 2x2 unitary from three angles and a global phase.
fn unitary2() -> impl Strategy<Value = CMatrix> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(th, a, b, g)| {
        let (s, co) = th.sin_cos();
        let e = |x: f64| C64::from_polar(1.0, x);
        CMatrix::from_row_slice(2, 2, &[e(a + g) * co, -e(b + g) * s, e(-b + g) * s, e(-a + g) * co])
    })
}

/// Random two-port triplet on one two-level subsystem.
fn triplet_on(label: &'static str) -> impl Strategy<Value = SlhTriplet> {
    (unitary2(), complex_matrix(2), complex_matrix(2), hermitian(2)).prop_map(move |(s, l1, l2, h)| {
        let space = Arc::new(make_space(&[(label, 2)]).unwrap());
        let op = |m: CMatrix| Operator::new(space.clone(), m).unwrap();
        SlhTriplet::new(space.clone(), s, vec![op(l1), op(l2)], op(h)).unwrap()
    })
}

/// Maximum element difference after aligning `b` onto `a`'s space.
fn exact_distance(a: &SlhTriplet, b: &SlhTriplet) -> f64 {
    let b = b.align_to(a.space()).unwrap();
    let mut worst = max_abs(&(a.scattering() - b.scattering()));
    for (x, y) in a.coupling().iter().zip(b.coupling()) {
        worst = worst.max(max_abs(&(x.matrix() - y.matrix())));
    }
    worst.max(max_abs(&(a.hamiltonian().matrix() - b.hamiltonian().matrix())))
}

fn space3() -> Arc<HilbertSpace> {
    Arc::new(make_space(&[("x", 2), ("y", 3), ("z", 2)]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_is_associative(g1 in triplet_on("a"), g2 in triplet_on("b"), g3 in triplet_on("c")) {
        let left = series(&series(&g3, &g2).unwrap(), &g1).unwrap();
        let right = series(&g3, &series(&g2, &g1).unwrap()).unwrap();
        prop_assert!(exact_distance(&left, &right) < 1e-12);
    }

    #[test]
    fn composition_keeps_structure(g1 in triplet_on("a"), g2 in triplet_on("b")) {
        for g in [series(&g2, &g1).unwrap(), concatenate(&g1, &g2).unwrap()] {
            let n = g.n_ports();
            let s = g.scattering();
            prop_assert!(max_abs(&(s * s.adjoint() - CMatrix::identity(n, n))) < 1e-12);
            prop_assert!(g.hamiltonian().hermiticity_error() < 1e-12);
        }
    }

    #[test]
    fn concatenating_vacuum_is_identity(g in triplet_on("a")) {
        let h = concatenate(&g, &SlhTriplet::vacuum()).unwrap();
        prop_assert!(exact_distance(&g, &h) < 1e-15);
    }

    #[test]
    fn phases_compose_additively(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let g = series(&phase_shifter(a), &phase_shifter(b)).unwrap();
        prop_assert!((g.scattering()[(0, 0)] - C64::from_polar(1.0, a + b)).norm() < 1e-12);
    }

    #[test]
    fn embed_is_a_homomorphism(a in complex_matrix(3), b in complex_matrix(3)) {
        let sp = space3();
        let lhs = embed(&(&a * &b), "y", &sp).unwrap();
        let rhs = &embed(&a, "y", &sp).unwrap() * &embed(&b, "y", &sp).unwrap();
        prop_assert!(max_abs(&(lhs.matrix() - rhs.matrix())) < 1e-12);
    }

    #[test]
    fn embeddings_on_distinct_labels_commute(a in complex_matrix(2), b in complex_matrix(3)) {
        let sp = space3();
        let x = embed(&a, "x", &sp).unwrap();
        let y = embed(&b, "y", &sp).unwrap();
        prop_assert!(x.commutator(&y).max_abs() < 1e-12);
    }

    #[test]
    fn hermitian_expectations_are_real(h in hermitian(12), m in complex_matrix(12)) {
        let sp = space3();
        let rho = &m * m.adjoint();
        let rho = &rho / rho.trace();
        let rho = DensityMatrix::new(sp.clone(), hermitize(&rho)).unwrap();
        let e = slhnet::expectation(&Operator::new(sp, h).unwrap(), &rho).unwrap();
        prop_assert!(e.im.abs() < 1e-10);
    }

    #[test]
    fn excitation_restriction_commutes_with_projection(
        w in prop::collection::vec(-1.0..1.0f64, 3),
        g in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2),
        n in 0usize..=4,
    ) {
        // number-conserving hopping Hamiltonian on (2, 3, 2)
        let sp = space3();
        let ops: Vec<Operator> = ["x", "y", "z"].iter().map(|l| Operator::lowering(&sp, l).unwrap()).collect();
        let mut h = Operator::zero(&sp);
        for (k, o) in ops.iter().enumerate() {
            h += &(&o.adjoint() * o).scale(c(w[k], 0.0));
        }
        for (k, (re, im)) in g.iter().enumerate() {
            let hop = (&ops[k].adjoint() * &ops[k + 1]).scale(c(*re, *im));
            h += &(&hop + &hop.adjoint());
        }
        prop_assert!(h.commutator(&excitation_number(&sp)).max_abs() < 1e-12);
        let (block, sector) = restrict_excitation(&h, n).unwrap();
        let full = sector.embed_matrix(&block, sp.total_dim());
        for &i in &sector.indices {
            let col = h.matrix().column(i) - full.column(i);
            prop_assert!(col.norm() < 1e-12);
        }
    }

    #[test]
    fn liouvillian_has_trace_zero_mode(g1 in triplet_on("a"), g2 in triplet_on("b")) {
        let g = series(&g2, &g1).unwrap();
        let l = Liouvillian::new(&g).unwrap();
        let id = slhnet::dynamics::vectorize(&CMatrix::identity(4, 4));
        let left = id.transpose() * l.matrix();
        prop_assert!(left.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn evolve_matches_matrix_exponential(g1 in triplet_on("a"), g2 in triplet_on("b"), m in complex_matrix(4)) {
        let g = series(&g2, &g1).unwrap();
        let rho = &m * m.adjoint();
        let rho = DensityMatrix::new(g.space().clone(), hermitize(&(&rho / rho.trace()))).unwrap();
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
        let opts = SolverOptions::default();
        let a = evolve(&g, &rho, &grid, &opts).unwrap();
        let b = propagate_exact(&g, &rho, &grid).unwrap();
        for (x, y) in a.states().iter().zip(b.states()) {
            prop_assert!(max_abs(&(x - y)) < 10.0 * opts.rel_tol);
        }
        prop_assert!(a.max_trace_drift() < 1e-7);
        prop_assert!(a.min_eigenvalue() > -1e-7);
    }

    #[test]
    fn full_device_matches_closed_form(p1 in 0.0..2.0 * PI, p2 in 0.0..2.0 * PI) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi1 = p1;
        p.phi2 = p2;
        let d = triplet_distance(&build_full_giant_atom(&p).unwrap(), &closed_form_full_giant_atom(&p).unwrap()).unwrap();
        prop_assert!(d < 1e-10);
    }

    #[test]
    fn phi2_sign_swaps_ports(p1 in 0.0..2.0 * PI, p2 in -1.0..1.0f64) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi1 = p1;
        p.phi2 = p2;
        let a = build_full_giant_atom(&p).unwrap();
        p.phi2 = -p2;
        let b = build_full_giant_atom(&p).unwrap();
        prop_assert!(max_abs(&(a.coupling()[0].matrix() - b.coupling()[1].matrix())) < 1e-12);
        prop_assert!(max_abs(&(a.coupling()[1].matrix() - b.coupling()[0].matrix())) < 1e-12);
        prop_assert!(max_abs(&(a.hamiltonian().matrix() - b.hamiltonian().matrix())) < 1e-12);
    }

    #[test]
    fn t1_is_even_in_phi2(p1 in 0.7 * PI..1.3 * PI, p2 in 0.02..0.3f64) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi1 = p1;
        p.phi2 = p2;
        let a = t1_spectral(&build_full_giant_atom(&p).unwrap(), QUBIT).unwrap().t1_us;
        p.phi2 = -p2;
        let b = t1_spectral(&build_full_giant_atom(&p).unwrap(), QUBIT).unwrap().t1_us;
        prop_assert!(((a - b) / a).abs() < 1e-8);
    }

    #[test]
    fn effective_hamiltonian_only_decays(p1 in 0.0..2.0 * PI, p2 in 0.0..2.0 * PI) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi1 = p1;
        p.phi2 = p2;
        let heff = effective_hamiltonian(&build_full_giant_atom(&p).unwrap());
        for v in linalg::eigenvalues(heff.matrix()).unwrap() {
            prop_assert!(v.im <= 1e-12);
        }
    }

    #[test]
    fn sub_radiant_spacing_decouples(k in -3i32..3) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi = PI / 2.0 + k as f64 * PI;
        for l in build_giant_jqf(&p).unwrap().coupling() {
            prop_assert!(l.max_abs() < 1e-12);
        }
    }

    #[test]
    fn passive_transmission_has_no_gain(detuning in -40.0..40.0f64, phi in 0.0..2.0 * PI, beta in 1e-3..1.0f64) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi = phi;
        let t = transmission(build_giant_jqf, &p, p.omega_j + mhz(detuning), c(beta, 0.0), 0).unwrap();
        prop_assert!(t.norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn purcell_depends_on_detuning_only(shift in -1000.0..1000.0f64) {
        let (q, r, g, k) = (mhz(5011.7), mhz(6621.0), mhz(144.0), mhz(2.1));
        let a = purcell_limit(q, r, g, k).unwrap();
        let b = purcell_limit(q + mhz(shift), r + mhz(shift), g, k).unwrap();
        prop_assert!(((a - b) / a).abs() < 1e-10);
    }

    #[test]
    fn reported_dark_states_are_dark(phi in 0.0..2.0 * PI, kj in 1.0..30.0f64) {
        let mut p = SystemParams::giant_atom_chip();
        p.phi = phi;
        p.kappa_j = mhz(kj);
        let g = build_giant_atom_simplified(&p).unwrap();
        for s in dark_states(&g).unwrap().states {
            for l in g.coupling() {
                prop_assert!((l.matrix() * &s.vector).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn single_excitation_spectrum_matches_liouvillian_coherences() {
    // With pure-lowering dissipators the coherences |1-sector><ground| evolve
    // under -i Heff; the Liouvillian eigenvalues on that block are -i lambda.
    let mut p = SystemParams::giant_atom_chip();
    p.omega_j = p.omega_q + mhz(20.0);
    p.kappa_q = mhz(0.5);
    let g = build_giant_atom_simplified(&p).unwrap();
    let heff = effective_hamiltonian(&g);
    let (block, sector) = restrict_excitation(&heff, 1).unwrap();
    let ev = linalg::eigenvalues(&block).unwrap();

    let l = Liouvillian::new(&g).unwrap();
    let d = g.space().total_dim();
    // vec index of |i><0| is i + 0 * d
    let idx: Vec<usize> = sector.indices.clone();
    let sub = CMatrix::from_fn(idx.len(), idx.len(), |a, b| l.matrix()[(idx[a], idx[b])]);
    let lv = linalg::eigenvalues(&sub).unwrap();
    for lam in ev {
        let target = lam * c(0.0, -1.0) + c(0.0, 1.0) * heff.matrix()[(0, 0)].conj();
        let best = lv.iter().map(|x| (x - target).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-8, "{lam}: {best}");
    }
    assert_eq!(d, 4);
}
