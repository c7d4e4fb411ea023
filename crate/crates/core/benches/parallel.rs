use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use wpsbir_core::cy::{self, CySetup};
use wpsbir_core::fflab;
use wpsbir_core::par::Exec;
use wpsbir_core::verify::{self, Suite, VerifyConfig};
use wpsbir_core::wps::WeightVector;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn point_sampling(c: &mut Criterion) {
    let w = WeightVector::new(vec![1, 1, 2, 3]).unwrap();
    let h = fflab::sample_hypersurface(997, 3, 6, &w, 1).unwrap();
    let mut g = c.benchmark_group("sample_points");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, 2000), |b| {
            b.iter(|| fflab::sample_points(black_box(&h), 2000, 7, exec))
        });
    }
    g.finish();
}

fn rank_stats(c: &mut Criterion) {
    let w = WeightVector::new(vec![1, 1, 1, 2]).unwrap();
    let h = fflab::sample_hypersurface(101, 3, 2, &w, 2).unwrap();
    let pts = fflab::sample_points(&h, 2000, 3, Exec::Parallel);
    let mut g = c.benchmark_group("rank_statistics");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, pts.len()), |b| {
            b.iter(|| fflab::rank_statistics(black_box(&h), &pts, exec))
        });
    }
    g.finish();
}

fn chambers(c: &mut Criterion) {
    let s = CySetup::new("P1,P1,P1,P2".parse().unwrap()).unwrap();
    let mut g = c.benchmark_group("orbit_chambers");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, 7), |b| b.iter(|| cy::orbit_chambers(black_box(&s), 7, exec).unwrap()));
    }
    g.finish();
}

fn det_suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_det");
    g.sample_size(10);
    for (name, exec) in MODES {
        let cfg = VerifyConfig {
            seed: 1,
            prime: None,
            dmax: Some(5),
            points: None,
            exec,
        };
        g.bench_function(name, |b| b.iter(|| verify::run(Suite::Det, black_box(&cfg)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, point_sampling, rank_stats, chambers, det_suite);
criterion_main!(benches);
