//! Criterion benchmarks for the numerical kernels: factor evaluation, the
//! adaptive quadrature, the FFT grid path, and monotone inversion.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use tauberkit::construction::{f_eval, f_eval_fft, h_eval, phi_eval, FftParams, FftTimeGrid};
use tauberkit::ratefun::{compose_mk, right_inverse, RateFunction};

fn bench_factors(c: &mut Criterion) {
    let mut group = c.benchmark_group("factors");
    for m in [2u32, 8, 20] {
        group.bench_function(format!("phi_eval/m{m}"), |b| {
            b.iter(|| phi_eval(black_box(m), black_box(Complex64::new(7.3, 0.01))).unwrap())
        });
    }
    group.bench_function("h_eval/m20_log_domain", |b| {
        b.iter(|| h_eval(20, black_box(Complex64::new(3.0, 0.0))).unwrap())
    });
    group.finish();
}

fn bench_quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature");
    group.sample_size(20);
    group.bench_function("f_eval/m2_t1_tol1e-6", |b| {
        b.iter(|| f_eval(2, black_box(1.0), 1e-6).unwrap())
    });
    group.bench_function("f_eval/m4_t20_tol1e-6", |b| {
        b.iter(|| f_eval(4, black_box(20.0), 1e-6).unwrap())
    });
    group.bench_function("fft/m2_n16384", |b| {
        let params = FftParams {
            s_max: 400.0,
            n: 16384,
        };
        let grid = FftTimeGrid {
            dt: params.base_dt(),
            count: 64,
        };
        b.iter(|| f_eval_fft(2, black_box(&grid), &params).unwrap())
    });
    group.finish();
}

fn bench_inversion(c: &mut Criterion) {
    let p2 = RateFunction::parse("poly:2").unwrap();
    let mk = compose_mk(&p2, &p2);
    c.bench_function("right_inverse/mk_poly2_t1e8", |b| {
        b.iter(|| right_inverse(&mk, black_box(1e8)).unwrap())
    });
}

criterion_group!(benches, bench_factors, bench_quadrature, bench_inversion);
criterion_main!(benches);
