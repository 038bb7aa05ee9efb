use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ndgraph::batch::Exec;
use ndgraph::engine::{normalise_batch, Strategy, STEP_LIMIT};
use ndgraph::gen::{random_proof, rng, ProofConfig};
use ndgraph::graph::PortGraph;
use ndgraph::rules::{Catalogue, Mode};
use ndgraph::translate::{attach_delta, attach_eps, translate};

fn graphs(n: usize) -> Vec<PortGraph> {
    let mut r = rng(1);
    (0..n).map(|_| translate(&random_proof(&mut r, &ProofConfig::default())).unwrap()).collect()
}

fn bench_batch(c: &mut Criterion) {
    let base = graphs(256);
    let suites = [
        ("eps", base.iter().map(attach_eps).collect::<Vec<_>>(), Catalogue::eps()),
        ("delta", base.iter().map(attach_delta).collect(), Catalogue::delta()),
        ("global", base.clone(), Catalogue::for_mode(Mode::Global)),
        ("small_step", base.clone(), Catalogue::for_mode(Mode::SmallStep)),
    ];
    let mut group = c.benchmark_group("normalise_batch");
    group.sample_size(10);
    for (name, gs, cat) in &suites {
        for exec in [Exec::Sequential, Exec::Parallel] {
            group.bench_with_input(BenchmarkId::new(*name, format!("{exec:?}")), gs, |b, gs| {
                b.iter(|| black_box(normalise_batch(exec, gs, cat, &Strategy::Outermost, STEP_LIMIT)));
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
