use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use slhnet::analysis::{dark_states, purcell_limit, t1_spectral, transmission};
use slhnet::slh::{build_full_giant_atom, build_giant_atom_simplified, build_giant_jqf, QUBIT};
use slhnet::C64;
use slhnet_bench::working_point;

fn composition(c: &mut Criterion) {
    let p = working_point();
    c.bench_function("build_full_giant_atom", |b| b.iter(|| build_full_giant_atom(black_box(&p)).unwrap()));
    c.bench_function("build_giant_atom_simplified", |b| {
        b.iter(|| build_giant_atom_simplified(black_box(&p)).unwrap())
    });
}

fn analysis(c: &mut Criterion) {
    let p = working_point();
    c.bench_function("purcell_limit", |b| {
        b.iter(|| purcell_limit(black_box(p.omega_q), p.omega_r, p.g_qr, p.kappa_r).unwrap())
    });
    let g = build_full_giant_atom(&p).unwrap();
    c.bench_function("t1_spectral_full_device", |b| b.iter(|| t1_spectral(black_box(&g), QUBIT).unwrap()));
    let s = build_giant_atom_simplified(&p).unwrap();
    c.bench_function("dark_states_simplified", |b| b.iter(|| dark_states(black_box(&s)).unwrap()));

    let mut phase_scan = c.benchmark_group("t1_phase_scan");
    phase_scan.sample_size(20);
    phase_scan.bench_function("41_points", |b| {
        b.iter(|| {
            let mut q = p.clone();
            (0..41)
                .map(|i| {
                    q.phi2 = -0.1 * PI + 0.2 * PI * i as f64 / 40.0;
                    t1_spectral(&build_full_giant_atom(&q).unwrap(), QUBIT).unwrap().t1_us
                })
                .fold(f64::INFINITY, f64::min)
        })
    });
    phase_scan.finish();
}

fn spectroscopy(c: &mut Criterion) {
    let p = working_point();
    c.bench_function("transmission_giant_jqf", |b| {
        b.iter(|| transmission(build_giant_jqf, black_box(&p), p.omega_j, C64::new(0.01, 0.0), 0).unwrap())
    });
}

criterion_group!(benches, composition, analysis, spectroscopy);
criterion_main!(benches);
