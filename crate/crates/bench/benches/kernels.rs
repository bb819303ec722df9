use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maclab_core::baker::{c_n_closed, c_n_recursive};
use maclab_core::global::{euler_char_series, sector_schedule};
use maclab_core::laumon::{j_alpha_series, j_series};
use maclab_core::macdonald::{macdonald_p, macdonald_p_oracle};
use maclab_core::{CompositionAlpha, GLWeight, Partition, ThetaMatrix};

fn macdonald(c: &mut Criterion) {
    let mut g = c.benchmark_group("macdonald_p");
    g.sample_size(10);
    for parts in [vec![2, 1], vec![3, 1], vec![2, 2, 1]] {
        let lam = Partition::new(parts).unwrap();
        g.bench_with_input(BenchmarkId::new("tableau", &lam), &lam, |b, lam| {
            b.iter(|| macdonald_p(black_box(lam), 3).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("oracle", &lam), &lam, |b, lam| {
            b.iter(|| macdonald_p_oracle(black_box(lam), 3).unwrap())
        });
    }
    g.finish();
}

fn c_n(c: &mut Criterion) {
    let thetas = ThetaMatrix::bounded(3, 2);
    c.bench_function("c_n_closed/N=3,entries<=2", |b| {
        b.iter(|| {
            thetas.iter().for_each(|t| {
                black_box(c_n_closed(black_box(t)).unwrap());
            })
        })
    });
    c.bench_function("c_n_recursive/N=3,entries<=2", |b| {
        b.iter(|| {
            thetas.iter().for_each(|t| {
                black_box(c_n_recursive(black_box(t)).unwrap());
            })
        })
    });
}

fn laumon(c: &mut Criterion) {
    let mut g = c.benchmark_group("laumon");
    g.sample_size(10);
    g.bench_function("j_series/N=3,D=2", |b| {
        b.iter(|| j_series(3, black_box(2)).unwrap())
    });
    let alpha = CompositionAlpha(vec![2, 1]);
    g.bench_function("j_alpha_series/N=3,(2,1),M=2", |b| {
        b.iter(|| j_alpha_series(3, black_box(&alpha), 2).unwrap())
    });
    g.finish();
}

fn global(c: &mut Criterion) {
    let mut g = c.benchmark_group("global");
    g.sample_size(10);
    let w = GLWeight::new(vec![1, 0]);
    let alpha = sector_schedule(3, 3).pop().unwrap();
    g.bench_function("euler_char_series/(1,0),M=2", |b| {
        b.iter(|| euler_char_series(black_box(&alpha), &w, 2).unwrap())
    });
    g.finish();
}

criterion_group!(benches, macdonald, c_n, laumon, global);
criterion_main!(benches);
