use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pogline::catalog::{self, screen_catalog, ScreenOptions};
use pogline::combinatorics::non_pog_screen;
use pogline::syzygy::generator_degrees;
use pogline::{classify_with, defining_polynomial, ClassifyOptions, WeakCombinatorics};
use pogline_bench::{braid_like, pencil};

fn lattice(c: &mut Criterion) {
    let klein = catalog::klein();
    c.bench_function("lattice/klein_delete_line", |b| b.iter(|| black_box(&klein).delete_line(0).unwrap()));
}

fn classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    let hesse = catalog::dual_hesse();
    group.bench_function("dual_hesse/exact", |b| b.iter(|| classify_with(&hesse, &ClassifyOptions::exact()).unwrap()));
    let klein = catalog::klein();
    group.bench_function("klein/modular", |b| {
        b.iter(|| classify_with(&klein, &ClassifyOptions::modular(None)).unwrap())
    });
    group.bench_function("klein/exact", |b| b.iter(|| classify_with(&klein, &ClassifyOptions::exact()).unwrap()));
    for n in [2, 3, 4] {
        let arr = braid_like(n);
        group.bench_with_input(BenchmarkId::new("braid_like/exact", arr.degree()), &arr, |b, arr| {
            b.iter(|| classify_with(arr, &ClassifyOptions::exact()).unwrap())
        });
    }
    group.finish();
}

fn literal_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("literal_sweep");
    group.sample_size(10);
    for d in [4, 6, 8] {
        let f = defining_polynomial(&pencil(d));
        group.bench_with_input(BenchmarkId::new("pencil", d), &f, |b, f| b.iter(|| generator_degrees(f).unwrap()));
    }
    let f = defining_polynomial(&braid_like(2));
    group.bench_function("braid_like/9", |b| b.iter(|| generator_degrees(&f).unwrap()));
    group.finish();
}

fn screens(c: &mut Criterion) {
    let w: WeakCombinatorics = "d=17;t2=16,t3=24,t4=8".parse().unwrap();
    c.bench_function("screen/non_pog", |b| b.iter(|| non_pog_screen(black_box(&w))));
    let entries = catalog::simplicial_entries();
    c.bench_function("screen/catalog", |b| {
        b.iter(|| screen_catalog(black_box(&entries), &ScreenOptions::default()).unwrap())
    });
}

criterion_group!(benches, lattice, classify, literal_sweep, screens);
criterion_main!(benches);
