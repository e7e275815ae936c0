use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hyperaccel::catalog::IdentityCatalog;
use hyperaccel::par::Exec;
use hyperaccel::recurrence::{sweep_terminating, RecurrenceCatalog};
use hyperaccel::series::{partial_sum_exact_par, partial_sum_exact_seq};

fn binary_splitting(c: &mut Criterion) {
    let ids = IdentityCatalog::builtin().unwrap();
    let term = ids.get("catalan-t1").unwrap().term().unwrap();
    let mut g = c.benchmark_group("partial_sum_exact");
    g.sample_size(10);
    for n in [500u64, 2000] {
        g.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| partial_sum_exact_seq(black_box(&term), n).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| partial_sum_exact_par(black_box(&term), n).unwrap())
        });
    }
    g.finish();
}

fn terminating_sweep(c: &mut Criterion) {
    let recs = RecurrenceCatalog::builtin().unwrap();
    let rec = recs.get("T31_X").unwrap();
    let mut g = c.benchmark_group("sweep_terminating");
    g.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        g.bench_function(name, |b| b.iter(|| sweep_terminating(&recs, rec, 12, 5, 7, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, binary_splitting, terminating_sweep);
criterion_main!(benches);
