use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use qdarwin_core::decoherence::ModelParams;
use qdarwin_core::info::mutual_information;
use qdarwin_core::oracle::check_identities;
use qdarwin_core::redundancy::redundancy;
use qdarwin_core::spectral::{fragment_entropy_closed, fragment_spectrum};
use qdarwin_core::states::{EnvQubit, SystemQubit};

fn mixed_point() -> (SystemQubit, EnvQubit) {
    let sys = SystemQubit::new(0.3, Complex64::new(0.2, 0.1)).unwrap();
    let env = EnvQubit::from_alignment(0.4, 0.6).unwrap();
    (sys, env)
}

fn bench_fragment_spectrum(c: &mut Criterion) {
    let (sys, env) = mixed_point();
    let mut g = c.benchmark_group("fragment_spectrum");
    for n_f in [16u32, 48, 96] {
        g.bench_with_input(BenchmarkId::from_parameter(n_f), &n_f, |b, &n_f| {
            b.iter(|| fragment_spectrum(&sys, &env, n_f, 1.2).unwrap())
        });
    }
    g.finish();
}

fn bench_closed_form(c: &mut Criterion) {
    let sys = SystemQubit::pure(0.5).unwrap();
    let env = EnvQubit::from_alignment(0.0, 0.5).unwrap();
    c.bench_function("fragment_entropy_closed/1000", |b| {
        b.iter(|| fragment_entropy_closed(&sys, &env, 1000).unwrap())
    });
}

fn bench_mutual_information(c: &mut Criterion) {
    let (sys, env) = mixed_point();
    let p = ModelParams::new(sys, env, 200, 1.2).unwrap();
    c.bench_function("mutual_information/nE200_nF64", |b| {
        b.iter(|| mutual_information(&p, 64).unwrap())
    });
}

fn bench_redundancy(c: &mut Criterion) {
    let sys = SystemQubit::pure(0.5).unwrap();
    let env = EnvQubit::with_target_haziness(0.0, 0.5).unwrap();
    let p = ModelParams::new(sys, env, 200, std::f64::consts::FRAC_PI_2).unwrap();
    c.bench_function("redundancy/nE200_delta1e-3", |b| {
        b.iter(|| redundancy(&p, 1e-3).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let (sys, env) = mixed_point();
    c.bench_function("oracle_check_identities/nE8_nF3", |b| {
        b.iter(|| check_identities(&sys, &env, 1.2, 8, 3).unwrap())
    });
}

criterion_group!(
    benches,
    bench_fragment_spectrum,
    bench_closed_form,
    bench_mutual_information,
    bench_redundancy,
    bench_oracle
);
criterion_main!(benches);
