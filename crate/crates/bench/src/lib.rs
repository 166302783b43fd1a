//! Fixed inputs shared by the benchmarks.

use freight::harness::{generate_instance, Instance, InstanceKind};
use freight::io::GraphFile;

/// Power-law hypergraph with `m = n`, net sizes in `[2, 100]` and pins
/// drawn from windows of 500 consecutive ids.
pub fn power_law(n: u32, seed: u64) -> Instance {
    let kind = InstanceKind::PowerLawHgr {
        n,
        m: n,
        exponent: 2.5,
        min_size: 2,
        max_size: 100,
        locality: 500,
    };
    let h = generate_instance(kind, seed)
        .expect("valid generator parameters")
        .into_hypergraph()
        .expect("hypergraph generator");
    Instance::from_hgr(format!("powerlaw-{n}"), h)
}

/// Square grid with radius-2 Manhattan neighborhoods, about `6 * side^2` edges.
pub fn grid(side: u32) -> GraphFile {
    generate_instance(
        InstanceKind::GridGraph {
            rows: side,
            cols: side,
            radius: 2,
        },
        0,
    )
    .expect("valid grid")
    .into_graph()
    .expect("graph generator")
}

/// Deterministic block sequence for registry increments, skewed towards low
/// ids so buckets split and merge.
pub fn increment_sequence(k: u32, len: usize) -> Vec<u32> {
    let mut x = 0x2545_F491_4F6C_DD1Du64;
    (0..len)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let a = (x % k as u64) as u32;
            let b = ((x >> 32) % k as u64) as u32;
            a.min(b)
        })
        .collect()
}
