use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wrist_bench::synthetic_loop;
use wrist_core::experiments::{run_trace, simulate_sweep, SweepOptions};
use wrist_core::hysteresis::fit_hysteresis;
use wrist_core::kinematics::{discrete_cell_fk, forward_kinematics, inverse_kinematics, BendState};
use wrist_core::WristConfig;

const L: f64 = 3.75e-3;

fn kinematics(c: &mut Criterion) {
    let state = BendState::new(1.2, 0.7, L).unwrap();
    let target = forward_kinematics(&state).position;
    c.bench_function("forward_kinematics", |b| {
        b.iter(|| forward_kinematics(black_box(&state)))
    });
    c.bench_function("inverse_kinematics", |b| {
        b.iter(|| inverse_kinematics(black_box(&target), L))
    });
    let mut group = c.benchmark_group("discrete_cell_fk");
    for cells in [12usize, 1_000, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(cells), &cells, |b, &n| {
            b.iter(|| discrete_cell_fk(black_box(&state), n))
        });
    }
    group.finish();
}

fn hysteresis(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_hysteresis");
    for legs in [50usize, 400] {
        let data = synthetic_loop(legs);
        group.bench_with_input(BenchmarkId::from_parameter(legs), &data, |b, d| {
            b.iter(|| fit_hysteresis(black_box(d)).unwrap())
        });
    }
    group.finish();
}

fn experiments(c: &mut Criterion) {
    let cfg = WristConfig::paper_default();
    c.bench_function("sweep_default", |b| {
        b.iter(|| simulate_sweep(&cfg, &SweepOptions::default(), || 0.0).unwrap())
    });
    c.bench_function("trace_36", |b| b.iter(|| run_trace(&cfg, FRAC_PI_2, 36).unwrap()));
}

criterion_group!(benches, kinematics, hysteresis, experiments);
criterion_main!(benches);
