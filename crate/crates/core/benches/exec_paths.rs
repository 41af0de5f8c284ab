use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kdl_core::distortion::{distortion_certified_with, distortion_sampled_with};
use kdl_core::plat::{build_plat, make_alternating_jm_spec};
use kdl_core::{CertifyOptions, Exec, PolyCurve};

fn plat(b: usize) -> PolyCurve {
    let spec = make_alternating_jm_spec(b, 4 * b * (b - 2) + 1, 3).unwrap();
    build_plat(&spec, 16).unwrap()
}

const PATHS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sampled(c: &mut Criterion) {
    let curve = plat(3);
    let mut group = c.benchmark_group("sampled_distortion");
    group.sample_size(10);
    for (name, exec) in PATHS {
        group.bench_with_input(BenchmarkId::new(name, curve.num_vertices()), &curve, |bch, curve| {
            bch.iter(|| distortion_sampled_with(black_box(curve), 2048, exec).unwrap())
        });
    }
    group.finish();
}

fn clearance(c: &mut Criterion) {
    let mut group = c.benchmark_group("clearance");
    for b in [3, 4] {
        let curve = plat(b);
        for (name, exec) in PATHS {
            group.bench_with_input(BenchmarkId::new(name, curve.num_vertices()), &curve, |bch, curve| {
                bch.iter(|| black_box(curve).clearance_with(exec))
            });
        }
    }
    group.finish();
}

fn certified(c: &mut Criterion) {
    let curve = plat(3);
    let mut group = c.benchmark_group("certified_distortion");
    group.sample_size(10);
    for (name, exec) in PATHS {
        let opts = CertifyOptions::new(0.05).exec(exec);
        group.bench_with_input(BenchmarkId::new(name, curve.num_vertices()), &curve, |bch, curve| {
            bch.iter(|| distortion_certified_with(black_box(curve), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sampled, clearance, certified);
criterion_main!(benches);
