//! Sequential vs rayon execution of the main kernels.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use supernyquist_core::bias::{bias_closed_with, bias_from_weights_with};
use supernyquist_core::diffset::{weight_closed, weight_enumerated_with};
use supernyquist_core::estimator::correlogram_psd_with;
use supernyquist_core::{sample_instants, Execution, SchemeConfig, SignalSpec};

const POLICIES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("weight_enumerated");
    for (label, config) in [
        (
            "sn-11-12-r4",
            SchemeConfig::super_nyquist(11, 12, 4).unwrap(),
        ),
        (
            "ml-5-7-8-9-r2",
            SchemeConfig::multi_level(&[5, 7, 8, 9], 2).unwrap(),
        ),
    ] {
        let instants = sample_instants(&config, 0);
        for exec in POLICIES {
            group.bench_with_input(
                BenchmarkId::new(format!("{exec:?}"), label),
                &instants,
                |b, s| b.iter(|| weight_enumerated_with(exec, black_box(s))),
            );
        }
    }
    group.finish();
}

fn bias(c: &mut Criterion) {
    let config = SchemeConfig::super_nyquist(11, 12, 4).unwrap();
    let z = weight_closed(&config).unwrap();
    let s = config.normalization();
    let mut group = c.benchmark_group("bias_window_4096");
    for exec in POLICIES {
        group.bench_function(BenchmarkId::new("closed", format!("{exec:?}")), |b| {
            b.iter(|| bias_closed_with(exec, black_box(&config), 4096).unwrap())
        });
        group.bench_function(BenchmarkId::new("from_weights", format!("{exec:?}")), |b| {
            b.iter(|| bias_from_weights_with(exec, black_box(&z), 4096, s).unwrap())
        });
    }
    group.finish();
}

fn correlogram(c: &mut Criterion) {
    let config = SchemeConfig::super_nyquist(4, 3, 1).unwrap();
    let spec = SignalSpec::unit_tones(&[0.1, 0.3, 0.6, 0.9], 7);
    let mut group = c.benchmark_group("correlogram_psd");
    for k in [10u64, 100] {
        for exec in POLICIES {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), k), &k, |b, &k| {
                b.iter(|| correlogram_psd_with(exec, &config, black_box(&spec), k, 1024).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration, bias, correlogram);
criterion_main!(benches);
