use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rainbow_bench::{random_instance, random_tuple, small_sweep};
use rainbow_core::collision::{build_collision_graph, count_proper_colorings_with, m2_closed_form_for, CountMethod, CountingGuard};
use rainbow_core::experiments::{run_sweep, verify_odd_question, OddOptions};
use rainbow_core::stacking::{count_rainbow_stackings, find_rainbow_stacking_with, SearchOptions};
use rainbow_core::SearchBudget;

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("find");
    for (n, r) in [(8usize, 3u32), (10, 4), (12, 4)] {
        let instances: Vec<_> = (0..16).map(|s| random_instance(n, 2, r, s).unwrap()).collect();
        for (label, most_constrained) in [("static", false), ("mrv", true)] {
            let options = SearchOptions { most_constrained };
            group.bench_with_input(BenchmarkId::new(label, format!("n{n}_r{r}")), &instances, |b, insts| {
                b.iter(|| {
                    for inst in insts {
                        black_box(find_rainbow_stacking_with(inst, SearchBudget::unlimited(), options));
                    }
                })
            });
        }
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let inst = random_instance(6, 2, 5, 3).unwrap();
    c.bench_function("count_stackings_n6_m2", |b| b.iter(|| count_rainbow_stackings(black_box(&inst)).unwrap()));

    let mut group = c.benchmark_group("proper_colorings");
    let pi = random_tuple(5, 2, 9);
    let g = build_collision_graph(&pi).unwrap();
    group.bench_function("closed_form_n5", |b| b.iter(|| m2_closed_form_for(black_box(&pi), 5).unwrap()));
    for (label, method) in [("auto", CountMethod::Auto), ("deletion_contraction", CountMethod::DeletionContraction)] {
        let guard = CountingGuard::with_method(method);
        group.bench_function(format!("{label}_n5_m2"), |b| {
            b.iter(|| count_proper_colorings_with(black_box(&g), 5, guard).unwrap())
        });
    }
    let pi3 = random_tuple(4, 3, 2);
    let g3 = build_collision_graph(&pi3).unwrap();
    group.bench_function("auto_n4_m3", |b| {
        b.iter(|| count_proper_colorings_with(black_box(&g3), 4, CountingGuard::default()).unwrap())
    });
    group.finish();
}

fn experiments(c: &mut Criterion) {
    let mut group = c.benchmark_group("experiments");
    group.sample_size(10);
    let config = small_sweep(50);
    group.bench_function("sweep_n10_200_trials", |b| b.iter(|| run_sweep(black_box(&config)).unwrap()));
    group.bench_function("odd_n5", |b| b.iter(|| verify_odd_question(5, &OddOptions::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, search, counting, experiments);
criterion_main!(benches);
