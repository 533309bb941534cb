//! Criterion timings for the numerical hot paths.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use infoengine::lp::{solve, LinearProgram};
use infoengine::models::omega_bar::e_pair;
use infoengine::models::sep::MinimizerConfig;
use infoengine::models::{make_classical, make_square_bit, min_over_product_states};
use infoengine::thermo::enumerate_pdp_decompositions;
use infoengine::State;

/// Transportation problem with `n` sources and `n` sinks.
fn transport(n: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(n * n);
    lp.set_objective((0..n * n).map(|k| ((k * 7919) % 13) as f64 + 1.0).collect());
    for i in 0..n {
        let row: Vec<(usize, f64)> = (0..n).map(|j| (i * n + j, 1.0)).collect();
        lp.add_eq_sparse(&row, 1.0);
    }
    for j in 0..n {
        let col: Vec<(usize, f64)> = (0..n).map(|i| (i * n + j, 1.0)).collect();
        lp.add_eq_sparse(&col, 1.0);
    }
    lp
}

fn lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("lp_transport");
    for n in [4, 8, 16] {
        let p = transport(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| solve(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn product_minimum(c: &mut Criterion) {
    let (e1, _) = e_pair();
    let cfg = MinimizerConfig::default();
    c.bench_function("min_over_product_states", |b| {
        b.iter(|| min_over_product_states(black_box(&e1), cfg))
    });
}

fn decompositions(c: &mut Criterion) {
    let square = make_square_bit();
    let center = State::from_coords_unchecked(vec![1.0, 0.0, 0.0]);
    c.bench_function("enumerate_square_bit_center", |b| {
        b.iter(|| enumerate_pdp_decompositions(black_box(&center), &square, 4).unwrap())
    });
    let mut g = c.benchmark_group("enumerate_classical");
    for n in [4, 6, 8] {
        let space = make_classical(n).unwrap();
        let rho = State::from_coords_unchecked(vec![1.0 / n as f64; n]);
        g.bench_with_input(BenchmarkId::from_parameter(n), &rho, |b, rho| {
            b.iter(|| enumerate_pdp_decompositions(black_box(rho), &space, n).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, lp, product_minimum, decompositions);
criterion_main!(benches);
