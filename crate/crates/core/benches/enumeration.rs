use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use closest_substring::exact::{solve_exact_patterns, solve_exact_tuples};
use closest_substring::gen_io::gen_random;
use closest_substring::model::{Alphabet, Instance};
use closest_substring::ptas::ptas_solve;
use closest_substring::reduction::{build_graph, min_weight_clique};
use closest_substring::reopt::{reopt_ptas, ModifiedInstance, ReoptInput};
use closest_substring::{parallel_enabled, SolverOptions};

fn instance(t: usize, n: usize, l: usize, seed: u64) -> Instance {
    let dna = Alphabet::new("ACGT").unwrap();
    gen_random(t, n, l, &dna, seed).unwrap()
}

/// One worker, plus every core (at least two) when rayon is compiled in.
fn job_counts() -> Vec<usize> {
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    if parallel_enabled() {
        vec![1, cores.max(2)]
    } else {
        vec![1]
    }
}

fn exact(c: &mut Criterion) {
    let inst = instance(6, 12, 5, 7);
    let mut group = c.benchmark_group("exact");
    group.sample_size(10);
    for jobs in job_counts() {
        let opts = SolverOptions::default().with_jobs(jobs);
        group.bench_with_input(BenchmarkId::new("tuples", jobs), &opts, |b, o| {
            b.iter(|| solve_exact_tuples(black_box(&inst), o).unwrap().cost())
        });
        group.bench_with_input(BenchmarkId::new("patterns", jobs), &opts, |b, o| {
            b.iter(|| solve_exact_patterns(black_box(&inst), o).unwrap().cost())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let inst = instance(6, 14, 5, 11);
    let merged = instance(6, 14, 5, 13);
    let modified = ModifiedInstance::split(&merged, 4).unwrap();
    let base_opt = solve_exact_tuples(modified.base(), &SolverOptions::default())
        .unwrap()
        .costed;
    let input = ReoptInput::new(modified, base_opt).unwrap();

    let mut group = c.benchmark_group("sampling");
    group.sample_size(10);
    for jobs in job_counts() {
        let opts = SolverOptions::default().with_jobs(jobs);
        group.bench_with_input(BenchmarkId::new("ptas_r3", jobs), &opts, |b, o| {
            b.iter(|| ptas_solve(black_box(&inst), 3, o).unwrap().cost())
        });
        group.bench_with_input(BenchmarkId::new("reopt_ptas_r4", jobs), &opts, |b, o| {
            b.iter(|| reopt_ptas(black_box(&input), o).unwrap().cost)
        });
    }
    group.finish();
}

fn clique(c: &mut Criterion) {
    let g = build_graph(&instance(5, 12, 4, 17));
    let mut group = c.benchmark_group("clique");
    group.sample_size(10);
    for jobs in job_counts() {
        let opts = SolverOptions::default().with_jobs(jobs);
        group.bench_with_input(BenchmarkId::new("min_weight", jobs), &opts, |b, o| {
            b.iter(|| min_weight_clique(black_box(&g), o).unwrap().1)
        });
    }
    group.finish();
}

criterion_group!(benches, exact, sampling, clique);
criterion_main!(benches);
