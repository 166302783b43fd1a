//! Streaming baselines: hashing and Min-Max with a net-to-blocks index.

use std::collections::BTreeSet;

use crate::io::VertexRecord;
use crate::partition::{PartitionError, StreamingPartitioner};
use crate::BlockId;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const SEED_STEP: u64 = 0xD1B5_4A32_D192_ED03;

/// Multiplicative (Fibonacci) hash `(id + seed * SEED_STEP) * GOLDEN mod 2^64`.
#[inline]
pub fn mix64(id: u64, seed: u64) -> u64 {
    id.wrapping_add(seed.wrapping_mul(SEED_STEP)).wrapping_mul(GOLDEN)
}

/// Stateless block of a vertex: the high bits of `mix64(id, seed) * k`,
/// 0-based. `id` is the 0-based position of the vertex in the stream.
#[inline]
pub fn hashing_assign(id: u32, k: u32, seed: u64) -> BlockId {
    ((mix64(id as u64, seed) as u128 * k as u128) >> 64) as BlockId
}

/// Hashing partitioner.
///
/// A vertex goes to its hashed block. If that block cannot take it within
/// `l_max`, the following blocks (cyclically) are tried in order, so emitted
/// partitions respect the balance bound whenever any block has room.
#[derive(Debug, Clone)]
pub struct Hashing {
    k: u32,
    l_max: u64,
    seed: u64,
    loads: Vec<u64>,
    cardinalities: Vec<u64>,
    overloaded: u64,
    probed: u64,
}

impl Hashing {
    pub fn new(k: u32, l_max: u64, seed: u64) -> Self {
        Self {
            k,
            l_max,
            seed,
            loads: vec![0; k as usize],
            cardinalities: vec![0; k as usize],
            overloaded: 0,
            probed: 0,
        }
    }

    /// Vertices that did not land in their hashed block.
    pub fn probed(&self) -> u64 {
        self.probed
    }

    pub fn assign_vertex(&mut self, id: u32, weight: u64) -> BlockId {
        let home = hashing_assign(id, self.k, self.seed);
        let mut block = home;
        while self.loads[block as usize] + weight > self.l_max {
            block = if block + 1 == self.k { 0 } else { block + 1 };
            if block == home {
                self.overloaded += 1;
                break;
            }
        }
        if block != home {
            self.probed += 1;
        }
        self.loads[block as usize] += weight;
        self.cardinalities[block as usize] += 1;
        block
    }
}

impl StreamingPartitioner for Hashing {
    fn name(&self) -> String {
        "hashing".into()
    }

    fn assign(&mut self, record: VertexRecord<'_>) -> Result<BlockId, PartitionError> {
        Ok(self.assign_vertex(record.id, record.weight))
    }

    fn loads(&self) -> &[u64] {
        &self.loads
    }

    fn cardinalities(&self) -> &[u64] {
        &self.cardinalities
    }

    fn overloaded(&self) -> u64 {
        self.overloaded
    }
}

/// For every net, the blocks holding at least one of its streamed pins.
#[derive(Debug, Clone, Default)]
pub struct NetToBlocksIndex {
    blocks: Vec<Vec<BlockId>>,
}

impl NetToBlocksIndex {
    pub fn new(num_nets: usize) -> Self {
        Self {
            blocks: vec![Vec::new(); num_nets],
        }
    }

    pub fn blocks_of(&self, net: u32) -> &[BlockId] {
        &self.blocks[net as usize]
    }

    #[inline]
    pub fn insert(&mut self, net: u32, block: BlockId) {
        let set = &mut self.blocks[net as usize];
        if !set.contains(&block) {
            set.push(block);
        }
    }

    /// `sum_e lambda(e)` over streamed nets.
    pub fn total_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Min-Max streaming assignment: the feasible block sharing the most nets
/// with the vertex wins; ties go to the lighter block, then the smaller id.
#[derive(Debug, Clone)]
pub struct MinMaxN2P {
    l_max: u64,
    index: NetToBlocksIndex,
    loads: Vec<u64>,
    cardinalities: Vec<u64>,
    by_load: BTreeSet<(u64, BlockId)>,
    // (stamp, count); a stale stamp means count zero
    counter: Vec<(u32, u32)>,
    stamp: u32,
    touched: Vec<BlockId>,
}

impl MinMaxN2P {
    pub fn new(k: u32, l_max: u64, num_nets: usize) -> Self {
        Self {
            l_max,
            index: NetToBlocksIndex::new(num_nets),
            loads: vec![0; k as usize],
            cardinalities: vec![0; k as usize],
            by_load: (0..k).map(|b| (0, b)).collect(),
            counter: vec![(0, 0); k as usize],
            stamp: 0,
            touched: Vec::new(),
        }
    }

    pub fn index(&self) -> &NetToBlocksIndex {
        &self.index
    }

    pub fn select_block(&mut self, vertex: u32, nets: &[u32], weight: u64) -> Result<BlockId, PartitionError> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.counter.iter_mut().for_each(|c| *c = (0, 0));
            self.stamp = 1;
        }
        self.touched.clear();
        for &e in nets {
            for &b in self.index.blocks_of(e) {
                let c = &mut self.counter[b as usize];
                if c.0 != self.stamp {
                    *c = (self.stamp, 0);
                    self.touched.push(b);
                }
                c.1 += 1;
            }
        }

        let mut best: Option<(u32, u64, BlockId)> = None;
        for &b in &self.touched {
            let load = self.loads[b as usize];
            if load + weight > self.l_max {
                continue;
            }
            let count = self.counter[b as usize].1;
            let better = match best {
                None => true,
                Some((bc, bl, bb)) => count > bc || (count == bc && (load, b) < (bl, bb)),
            };
            if better {
                best = Some((count, load, b));
            }
        }
        if let Some((_, _, b)) = best {
            return Ok(b);
        }
        let &(load, b) = self.by_load.first().expect("k >= 1");
        if load + weight > self.l_max {
            return Err(PartitionError::NoFeasibleBlock {
                vertex,
                weight,
                l_max: self.l_max,
            });
        }
        Ok(b)
    }

    pub fn assign_vertex(&mut self, vertex: u32, nets: &[u32], weight: u64) -> Result<BlockId, PartitionError> {
        let d = self.select_block(vertex, nets, weight)?;
        let slot = d as usize;
        if weight != 0 {
            self.by_load.remove(&(self.loads[slot], d));
            self.by_load.insert((self.loads[slot] + weight, d));
        }
        self.loads[slot] += weight;
        self.cardinalities[slot] += 1;
        for &e in nets {
            self.index.insert(e, d);
        }
        Ok(d)
    }
}

impl StreamingPartitioner for MinMaxN2P {
    fn name(&self) -> String {
        "minmax-n2p".into()
    }

    fn assign(&mut self, record: VertexRecord<'_>) -> Result<BlockId, PartitionError> {
        self.assign_vertex(record.id, record.nets, record.weight)
    }

    fn loads(&self) -> &[u64] {
        &self.loads
    }

    fn cardinalities(&self) -> &[u64] {
        &self.cardinalities
    }
}
