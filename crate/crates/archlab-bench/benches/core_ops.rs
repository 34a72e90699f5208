//! Benchmarks for the hot paths: cycle enumeration, measures, unfolding
//! and the oracle DP.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use archlab::fixtures::{self, random_valid_graph, FixtureSpec, RandomGraphParams};
use archlab::measures::measure;
use archlab::oracle;
use archlab::unfold::unfold;

fn dense_random_graph() -> archlab::CyclicGraph {
    let params = RandomGraphParams {
        max_hidden: 6,
        edge_density: 0.6,
        allow_negative: false,
        ..RandomGraphParams::default()
    };
    random_valid_graph(3, &params)
}

fn bench_simple_cycles(c: &mut Criterion) {
    let td = fixtures::generate(&FixtureSpec::Td).unwrap();
    let dense = dense_random_graph();
    c.bench_function("simple_cycles/td", |b| {
        b.iter(|| black_box(&td).simple_cycles().unwrap())
    });
    c.bench_function("simple_cycles/dense_random", |b| {
        b.iter(|| black_box(&dense).simple_cycles().unwrap())
    });
}

fn bench_measures(c: &mut Criterion) {
    let stack = fixtures::generate(&FixtureSpec::StackSkip { variant: 3, k: 21 }).unwrap();
    let dense = dense_random_graph();
    c.bench_function("measure/stack_skip_3_21", |b| {
        b.iter(|| measure(black_box(&stack)).unwrap())
    });
    c.bench_function("measure/dense_random", |b| {
        b.iter(|| measure(black_box(&dense)).unwrap())
    });
}

fn bench_unfold(c: &mut Criterion) {
    let td = fixtures::generate(&FixtureSpec::Td).unwrap();
    c.bench_function("unfold/td_256_steps", |b| {
        b.iter(|| unfold(black_box(&td), 0, 256).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let skip = fixtures::generate(&FixtureSpec::Skip { k: 5 }).unwrap();
    c.bench_function("oracle/path_table_skip5_n320", |b| {
        b.iter(|| oracle::path_table(black_box(&skip), 0, 320).unwrap())
    });
}

criterion_group!(
    benches,
    bench_simple_cycles,
    bench_measures,
    bench_unfold,
    bench_oracle
);
criterion_main!(benches);
