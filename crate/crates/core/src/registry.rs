//! Blocks kept sorted by cardinality under unit increments.
//!
//! The registry stores the `k` blocks in an array ordered by ascending
//! cardinality. Runs of equal cardinality are described by buckets holding
//! the leftmost and rightmost position of the run. Incrementing a block swaps
//! it with the rightmost member of its run and then either joins the next
//! run (if its cardinality is exactly one higher) or opens a fresh
//! single-position bucket. No step loops, so every increment is `O(1)`, and
//! the minimum-cardinality block always sits at position 0.
//!
//! Block ids and positions are 0-based here; [`BlockRegistry::dump`] prints
//! them 1-based to match the external file conventions.

use std::fmt::Write as _;

use crate::BlockId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slot {
    block: BlockId,
    bucket: u32,
}

/// A maximal run of positions in the order array sharing one cardinality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bucket {
    pub cardinality: u64,
    pub left: u32,
    pub right: u32,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("a block registry needs at least one block")]
    NoBlocks,
    #[error("unknown block id {block} (k = {k})")]
    UnknownBlock { block: BlockId, k: u32 },
}

#[derive(Debug, Clone)]
pub struct BlockRegistry {
    /// Blocks in ascending cardinality order, each tagged with its bucket.
    order: Vec<Slot>,
    /// Inverse of `order`: block id -> position.
    position: Vec<u32>,
    /// Bucket pool; dead entries are recycled through `free`.
    buckets: Vec<Bucket>,
    free: Vec<u32>,
    live: usize,
}

impl BlockRegistry {
    /// Fresh registry with every block at cardinality zero, in id order.
    pub fn new(k: u32) -> Result<Self, RegistryError> {
        if k == 0 {
            return Err(RegistryError::NoBlocks);
        }
        let order = (0..k).map(|block| Slot { block, bucket: 0 }).collect();
        let position = (0..k).collect();
        let mut buckets = Vec::with_capacity(k.min(1 << 16) as usize);
        buckets.push(Bucket {
            cardinality: 0,
            left: 0,
            right: k - 1,
        });
        Ok(Self {
            order,
            position,
            buckets,
            free: Vec::new(),
            live: 1,
        })
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.order.len() as u32
    }

    /// Adds one to the cardinality of `block`.
    pub fn increment(&mut self, block: BlockId) -> Result<(), RegistryError> {
        if block >= self.k() {
            return Err(RegistryError::UnknownBlock { block, k: self.k() });
        }
        self.increment_unchecked(block);
        Ok(())
    }

    /// Same as [`increment`](Self::increment) but the caller guarantees
    /// `block < k`. Indexing still panics on a bad id.
    #[inline]
    pub fn increment_unchecked(&mut self, block: BlockId) {
        let p = self.position[block as usize] as usize;
        let current = self.order[p].bucket;
        let Bucket {
            cardinality,
            left,
            right,
        } = self.buckets[current as usize];

        // Move the block to the right end of its run.
        let q = right as usize;
        let other = self.order[q].block;
        self.order.swap(p, q);
        self.position.swap(other as usize, block as usize);

        let run_empty = left == right;
        self.buckets[current as usize].right = right.wrapping_sub(1);

        // Past the last position there is no successor run; treat it as
        // having infinite cardinality so a new bucket is opened.
        let next = self.order.get(q + 1).map(|s| s.bucket);
        match next {
            Some(next) if self.buckets[next as usize].cardinality == cardinality + 1 => {
                self.order[q].bucket = next;
                self.buckets[next as usize].left -= 1;
            }
            _ => {
                let fresh = self.alloc(Bucket {
                    cardinality: cardinality + 1,
                    left: q as u32,
                    right: q as u32,
                });
                self.order[q].bucket = fresh;
            }
        }

        if run_empty {
            self.release(current);
        }
    }

    /// The block at position 0, which has the globally minimal cardinality.
    #[inline]
    pub fn min_cardinality_block(&self) -> BlockId {
        self.order[0].block
    }

    #[inline]
    pub fn cardinality_of(&self, block: BlockId) -> u64 {
        let slot = self.order[self.position[block as usize] as usize];
        self.buckets[slot.bucket as usize].cardinality
    }

    /// Position of `block` in the cardinality order. Position breaks ties
    /// between blocks of equal cardinality during scoring.
    #[inline]
    pub fn position_of(&self, block: BlockId) -> u32 {
        self.position[block as usize]
    }

    #[inline]
    pub fn block_at(&self, position: u32) -> BlockId {
        self.order[position as usize].block
    }

    /// Block ids in registry order.
    pub fn blocks_in_order(&self) -> impl Iterator<Item = BlockId> + '_ {
        self.order.iter().map(|s| s.block)
    }

    /// Live buckets, sorted left to right.
    pub fn buckets(&self) -> Vec<Bucket> {
        let mut out = Vec::with_capacity(self.live);
        let mut p = 0usize;
        while p < self.order.len() {
            let b = self.buckets[self.order[p].bucket as usize];
            out.push(b);
            p = b.right as usize + 1;
        }
        out
    }

    pub fn live_buckets(&self) -> usize {
        self.live
    }

    /// One `pos:id:card` line per position, 1-based.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (p, slot) in self.order.iter().enumerate() {
            let card = self.buckets[slot.bucket as usize].cardinality;
            let _ = writeln!(out, "{}:{}:{}", p + 1, slot.block + 1, card);
        }
        out
    }

    /// Full structural check, `O(k)`. Returns a description of the first
    /// violated invariant.
    pub fn check_invariants(&self) -> Result<(), String> {
        let k = self.order.len();
        for (p, slot) in self.order.iter().enumerate() {
            if self.position[slot.block as usize] as usize != p {
                return Err(format!("position map broken at position {p}"));
            }
            let b = self.buckets[slot.bucket as usize];
            if !(b.left as usize <= p && p <= b.right as usize) {
                return Err(format!(
                    "position {p} outside its bucket [{}, {}]",
                    b.left, b.right
                ));
            }
        }
        let mut expected_left = 0usize;
        let mut prev_card: Option<u64> = None;
        let mut count = 0usize;
        for b in self.buckets() {
            if b.left as usize != expected_left || b.left > b.right {
                return Err(format!("bucket ranges do not tile at position {expected_left}"));
            }
            if let Some(c) = prev_card {
                if b.cardinality <= c {
                    return Err(format!("bucket cardinalities not increasing at {}", b.left));
                }
            }
            for p in b.left..=b.right {
                let slot = self.order[p as usize];
                if self.buckets[slot.bucket as usize] != b {
                    return Err(format!("position {p} tagged with a foreign bucket"));
                }
            }
            prev_card = Some(b.cardinality);
            expected_left = b.right as usize + 1;
            count += 1;
        }
        if expected_left != k {
            return Err("bucket ranges do not cover every position".into());
        }
        if count != self.live {
            return Err(format!("{} live buckets recorded, {count} reachable", self.live));
        }
        Ok(())
    }

    fn alloc(&mut self, bucket: Bucket) -> u32 {
        self.live += 1;
        match self.free.pop() {
            Some(idx) => {
                self.buckets[idx as usize] = bucket;
                idx
            }
            None => {
                self.buckets.push(bucket);
                (self.buckets.len() - 1) as u32
            }
        }
    }

    fn release(&mut self, idx: u32) {
        self.live -= 1;
        self.free.push(idx);
    }
}
