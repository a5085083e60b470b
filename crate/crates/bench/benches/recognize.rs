use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use klsparse::{check_sparsity, pebble_game_check, SparsityParams};
use klsparse_bench::{laman, random, SIZES};

fn mid_range(c: &mut Criterion) {
    let p = SparsityParams::new(2, 3).unwrap();
    let mut group = c.benchmark_group("laman");
    group.sample_size(10);
    for n in SIZES {
        let g = laman(n, 7);
        group.bench_with_input(BenchmarkId::new("main", n), &g, |b, g| {
            b.iter(|| check_sparsity(black_box(g), 2, 3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pebble", n), &g, |b, g| {
            b.iter(|| pebble_game_check(black_box(g), p).unwrap())
        });
    }
    group.finish();
}

fn other_ranges(c: &mut Criterion) {
    let mut group = c.benchmark_group("ranges");
    group.sample_size(10);
    for (k, l) in [(2, 2), (3, 4), (2, 4)] {
        let n = 300;
        let g = random(n, (k * n).saturating_sub(l) / 2, k, l, 3);
        group.bench_with_input(BenchmarkId::new(format!("k{k}_l{l}"), n), &g, |b, g| {
            b.iter(|| check_sparsity(black_box(g), k, l).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, mid_range, other_ranges);
criterion_main!(benches);
