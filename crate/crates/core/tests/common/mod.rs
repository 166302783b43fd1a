//! Brute-force references used by the integration tests. None of them
//! touches the fast data structures of the library.

#![allow(dead_code)]

use std::collections::HashSet;

use freight::io::{HgrFile, VertexStreamFile};
use freight::{BlockId, Objective};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Blocks ordered by cardinality with the same swap-to-bucket-end rule as
/// the registry, simulated with linear scans.
pub struct NaiveOrder {
    pub order: Vec<BlockId>,
    pub card: Vec<u64>,
}

impl NaiveOrder {
    pub fn new(k: u32) -> Self {
        Self {
            order: (0..k).collect(),
            card: vec![0; k as usize],
        }
    }

    pub fn position(&self, b: BlockId) -> usize {
        self.order.iter().position(|&x| x == b).unwrap()
    }

    pub fn increment(&mut self, b: BlockId) {
        let p = self.position(b);
        let c = self.card[b as usize];
        let mut r = p;
        while r + 1 < self.order.len() && self.card[self.order[r + 1] as usize] == c {
            r += 1;
        }
        self.order.swap(p, r);
        self.card[b as usize] += 1;
    }
}

pub struct OracleParams {
    pub k: u32,
    pub alpha: f64,
    pub gamma: f64,
    pub l_max: u64,
    pub objective: Objective,
}

fn penalty(p: &OracleParams, w: u64, load: u64) -> f64 {
    -(w as f64 * p.alpha * p.gamma * (load as f64).powf(p.gamma - 1.0))
}

/// Scores all `k` blocks for every vertex. Net state is kept as the full set
/// of blocks touched so far plus the block of the latest pin.
pub fn naive_freight(f: &VertexStreamFile, p: &OracleParams) -> Vec<BlockId> {
    let k = p.k as usize;
    let weighted = f.vertex_weights().is_some();
    let mut order = NaiveOrder::new(p.k);
    let mut loads = vec![0u64; k];
    let mut last: Vec<Option<BlockId>> = vec![None; f.num_nets()];
    let mut touched: Vec<HashSet<BlockId>> = vec![HashSet::new(); f.num_nets()];
    let mut out = Vec::with_capacity(f.num_vertices());
    for v in 0..f.num_vertices() {
        let w = f.vertex_weight(v);
        let nets = f.nets_of(v);
        let mut pos = vec![0usize; k];
        for (i, &b) in order.order.iter().enumerate() {
            pos[b as usize] = i;
        }
        let rank = |b: BlockId| if weighted { b as usize } else { pos[b as usize] };
        let mut best: Option<(f64, u64, usize, BlockId)> = None;
        for b in 0..p.k {
            let load = loads[b as usize];
            if load + w > p.l_max {
                continue;
            }
            let mut gain = 0u64;
            for &e in nets {
                let cut = touched[e as usize].len() > 1;
                if last[e as usize] == Some(b) && !(p.objective == Objective::CutNet && cut) {
                    gain += f.net_weights().map_or(1, |nw| nw[e as usize]);
                }
            }
            let s = gain as f64 + penalty(p, w, load);
            let key = (s, load, rank(b), b);
            let better = match best {
                None => true,
                Some((bs, bl, br, _)) => s > bs || (s == bs && (load, key.2) < (bl, br)),
            };
            if better {
                best = Some(key);
            }
        }
        let block = match best {
            Some((.., b)) => b,
            None => (0..p.k)
                .min_by_key(|&b| (loads[b as usize], rank(b)))
                .unwrap(),
        };
        loads[block as usize] += w;
        if !weighted {
            order.increment(block);
        }
        for &e in nets {
            last[e as usize] = Some(block);
            touched[e as usize].insert(block);
        }
        out.push(block);
    }
    out
}

/// Min-Max by counting, for every block, the nets of `v` touching it.
pub fn naive_minmax(f: &VertexStreamFile, k: u32, l_max: u64) -> Option<Vec<BlockId>> {
    let mut touched: Vec<HashSet<BlockId>> = vec![HashSet::new(); f.num_nets()];
    let mut loads = vec![0u64; k as usize];
    let mut out = Vec::new();
    for v in 0..f.num_vertices() {
        let w = f.vertex_weight(v);
        let nets = f.nets_of(v);
        let block = (0..k)
            .filter(|&b| loads[b as usize] + w <= l_max)
            .max_by_key(|&b| {
                let count = nets.iter().filter(|&&e| touched[e as usize].contains(&b)).count();
                (count, std::cmp::Reverse(loads[b as usize]), std::cmp::Reverse(b))
            })?;
        loads[block as usize] += w;
        for &e in nets {
            touched[e as usize].insert(block);
        }
        out.push(block);
    }
    Some(out)
}

/// (cut-net, connectivity) by collecting every net's block set.
pub fn naive_metrics(h: &HgrFile, assignment: &[BlockId]) -> (u64, u64) {
    let mut cut = 0;
    let mut con = 0;
    for e in 0..h.num_nets() {
        let blocks: HashSet<BlockId> = h.net(e).iter().map(|&v| assignment[v as usize]).collect();
        let w = h.net_weight(e);
        if blocks.len() > 1 {
            cut += w;
        }
        con += (blocks.len() as u64 - 1) * w;
    }
    (cut, con)
}

pub fn random_hypergraph(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
    max_size: usize,
    vertex_weights: bool,
    net_weights: bool,
) -> HgrFile {
    let nets: Vec<Vec<u32>> = (0..m)
        .map(|_| {
            let s = rng.random_range(1..=max_size.min(n));
            (0..s).map(|_| rng.random_range(0..n as u32)).collect()
        })
        .collect();
    let nw = net_weights.then(|| (0..m).map(|_| rng.random_range(1..=5)).collect());
    let vw = vertex_weights.then(|| (0..n).map(|_| rng.random_range(1..=4)).collect());
    HgrFile::new(n, nets, nw, vw).unwrap()
}

/// Proptest strategy over seeds for `random_hypergraph`.
pub fn hypergraph_strategy(
    max_n: usize,
    max_m: usize,
    vertex_weights: bool,
    net_weights: bool,
) -> impl Strategy<Value = HgrFile> {
    (1..=max_n, 0..=max_m, any::<u64>()).prop_map(move |(n, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_hypergraph(&mut rng, n, m, 8, vertex_weights, net_weights)
    })
}
