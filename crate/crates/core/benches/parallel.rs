//! Parallel vs sequential execution of the Monte Carlo and search kernels.
//!
//! Both modes produce identical results; only wall time differs. Built
//! without the `parallel` feature, the two variants run the same code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use crsim_core::allocation::{optimize_time_on, surface, AllocationProblem, SearchOptions};
use crsim_core::capacity::EigenBatch;
use crsim_core::channel_model::SystemConfig;
use crsim_core::exec::Execution;
use crsim_core::experiments::it_vs_learning;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn problem() -> AllocationProblem {
    AllocationProblem::from_config(&SystemConfig::default(), None, 500, 1).unwrap()
}

fn eigen_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigen_batch");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 2000), |b| {
            b.iter(|| EigenBatch::draw_with(exec, 2, 4, black_box(2000), 7).unwrap())
        });
    }
    group.finish();
}

fn time_search(c: &mut Criterion) {
    let prob = problem();
    let batch = prob.eigen_batch(Execution::Parallel).unwrap();
    let mut group = c.benchmark_group("time_search");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("optimize", name), |b| {
            b.iter(|| optimize_time_on(&prob, &batch, SearchOptions { exhaustive: false, exec }).unwrap())
        });
        group.bench_function(BenchmarkId::new("surface", name), |b| {
            b.iter(|| surface(&prob, &batch, 20, 10, exec).unwrap())
        });
    }
    group.finish();
}

fn learning_mc(c: &mut Criterion) {
    let sys = SystemConfig::default();
    let mut group = c.benchmark_group("it_vs_learning");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, 500), |b| {
            b.iter(|| it_vs_learning(&sys, &[100, 400], black_box(500), 3, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, eigen_batch, time_search, learning_mc);
criterion_main!(benches);
