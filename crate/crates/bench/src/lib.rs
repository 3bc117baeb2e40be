use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use qfock::gates::{displacement, squeeze};
use qfock::quad::{gram, Measure, MeasureSpec, QuadratureGrid};
use qfock::{build_ladder, op_exp, QOperator, Quaternion, SliceAxis, SqueezeParams};

/// Dense operator with every plane populated.
pub fn dense(dim: usize) -> QOperator {
    QOperator::from_fn(dim, |j, k| {
        let t = (j * 31 + k * 17) as f64;
        Quaternion::new(t.sin(), t.cos(), (0.5 * t).sin(), (0.25 * t).cos()) * (1.0 / dim as f64)
    })
}

pub fn benchmarks(c: &mut Criterion) {
    let mut g = c.benchmark_group("compose");
    for dim in [32, 64, 128] {
        let a = dense(dim);
        g.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| black_box(a.compose(a).unwrap()))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("op_exp");
    g.sample_size(10);
    for dim in [32, 64, 128] {
        let a = dense(dim);
        g.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| black_box(op_exp(a, 1e-16).unwrap()))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("gates");
    g.sample_size(10);
    let l = build_ladder(128, SliceAxis::I).unwrap();
    let q = Quaternion::new(0.3, -0.4, 0.5, 0.2);
    g.bench_function("displacement/128", |b| {
        b.iter(|| black_box(displacement(q, &l).unwrap()))
    });
    let sp = SqueezeParams::from_polar(0.7, 1.8, SliceAxis::J);
    g.bench_function("squeeze/128", |b| {
        b.iter(|| black_box(squeeze(&sp, &l).unwrap()))
    });
    g.finish();

    let m = MeasureSpec::new(Measure::Corrected);
    let grid = QuadratureGrid::default();
    c.bench_function("gram/8", |b| {
        b.iter(|| black_box(gram(8, &m, &grid).unwrap()))
    });
}
