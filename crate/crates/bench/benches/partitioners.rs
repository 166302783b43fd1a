use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use freight::{fennel_partition, naive_fennel, partition_stream, Algorithm, Objective, PartitionConfig};
use freight_bench::{grid, power_law};

fn streaming(c: &mut Criterion) {
    let inst = power_law(100_000, 1);
    let mut group = c.benchmark_group("stream-powerlaw-100k");
    group.sample_size(10);
    group.throughput(Throughput::Elements(inst.hypergraph.num_pins() as u64));
    let algorithms = [
        Algorithm::Freight(Objective::Connectivity),
        Algorithm::Freight(Objective::CutNet),
        Algorithm::Hashing,
        Algorithm::MinMaxN2P,
    ];
    for algorithm in algorithms {
        for k in [64u32, 1024] {
            let cfg = PartitionConfig::new(algorithm, k);
            group.bench_with_input(BenchmarkId::new(algorithm.name(), k), &cfg, |b, cfg| {
                b.iter(|| partition_stream(inst.stream.stream(), cfg).unwrap().assignment.len());
            });
        }
    }
    group.finish();
}

fn graph_mode(c: &mut Criterion) {
    let g = grid(150);
    let mut group = c.benchmark_group("fennel-grid-150");
    group.sample_size(10);
    group.throughput(Throughput::Elements(g.num_edges() as u64));
    for k in [256u32, 2048] {
        let cfg = PartitionConfig::new(Algorithm::Freight(Objective::Connectivity), k);
        group.bench_with_input(BenchmarkId::new("fast", k), &cfg, |b, cfg| {
            b.iter(|| fennel_partition(&g, cfg).unwrap().assignment.len());
        });
        group.bench_with_input(BenchmarkId::new("naive", k), &cfg, |b, cfg| {
            b.iter(|| naive_fennel(&g, cfg).unwrap().assignment.len());
        });
    }
    group.finish();
}

criterion_group!(benches, streaming, graph_mode);
criterion_main!(benches);
