use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sgo_bench::midgame;
use sgo_core::oracle::{check_case, oracle_apply_turn};
use sgo_core::sim::{play_game, SelfPlayConfig};
use sgo_core::apply_turn;

fn turns(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_turn");
    for size in [9, 19] {
        let (board, input) = midgame(size, size * size / 2, 7);
        group.bench_with_input(BenchmarkId::new("engine", size), &size, |b, _| {
            b.iter(|| apply_turn(black_box(&board), black_box(input)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oracle", size), &size, |b, _| {
            b.iter(|| oracle_apply_turn(black_box(&board), black_box(input)).unwrap())
        });
    }
    group.finish();
}

fn groups(c: &mut Criterion) {
    let (board, _) = midgame(19, 180, 3);
    c.bench_function("groups/19", |b| b.iter(|| black_box(&board).groups()));
}

fn differential(c: &mut Criterion) {
    let (board, input) = midgame(9, 40, 5);
    c.bench_function("check_case/9", |b| b.iter(|| check_case(black_box(&board), black_box(input))));
}

fn selfplay(c: &mut Criterion) {
    let cfg = SelfPlayConfig::new(9, 1, 1);
    c.bench_function("selfplay_game/9", |b| b.iter(|| play_game(black_box(&cfg), 0)));
}

criterion_group!(benches, turns, groups, differential, selfplay);
criterion_main!(benches);
