//! Sequential against rayon execution on the three batch workloads: the
//! HJ sweep, the cycle certificates and classification of many documents.
//! Build with `--no-default-features` to see the fallback path alone.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use csing_core::batch::{classify_batch, Execution};
use csing_core::classify::{AdmissibleDataDocument, ClassifyOptions};
use csing_core::graph::DualGraph;
use csing_core::verify::{check_cycle_exclusion, check_hj_roundtrip, SuiteConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn documents() -> Vec<AdmissibleDataDocument> {
    (2..=65)
        .map(|n| {
            let selfs: Vec<i64> = (0..n).map(|i| -2 - (i % 3)).collect();
            AdmissibleDataDocument::from_graph(DualGraph::chain(&selfs))
        })
        .collect()
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweeps");
    for (name, exec) in MODES {
        let cfg = SuiteConfig { execution: exec, ..Default::default() };
        g.bench_with_input(BenchmarkId::new("hj_roundtrip_m120", name), &cfg, |b, cfg| {
            b.iter(|| assert!(check_hj_roundtrip(cfg, 120).passed()))
        });
        g.bench_with_input(BenchmarkId::new("cycle_exclusion_1000", name), &cfg, |b, cfg| {
            b.iter(|| assert!(check_cycle_exclusion(cfg, 1000).passed()))
        });
        let docs = documents();
        let opts = ClassifyOptions::default();
        g.bench_with_input(BenchmarkId::new("classify_64_chains", name), &exec, |b, &exec| {
            b.iter(|| black_box(classify_batch(&docs, &opts, exec)))
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10).measurement_time(Duration::from_secs(3));
    targets = sweeps
}
criterion_main!(benches);
