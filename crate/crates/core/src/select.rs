//! Block selection shared by the hypergraph and graph fast paths.
//!
//! Candidate blocks split into those with a positive gain for the incoming
//! vertex (scored one by one) and all others. Every block in the second group
//! has the same zero gain, so the best of them is simply the least loaded
//! one, which the block order hands out in `O(1)` (unit weights) or
//! `O(log k)` (weighted vertices).
//!
//! Ties on score go to the lighter block, then to the block with the smaller
//! tie rank. The rank is the block's position in the registry for unit
//! weights and the block id for weighted streams.

use std::collections::BTreeSet;

use crate::params::{load_power, penalty_from_power, ScoreParams};
use crate::registry::BlockRegistry;
use crate::BlockId;

/// Sparse per-block gain accumulator with `O(touched)` reset.
#[derive(Debug, Clone)]
pub struct GainScratch {
    gain: Vec<u64>,
    touched: Vec<BlockId>,
    s1: Vec<(BlockId, u64)>,
}

impl GainScratch {
    pub fn new(k: u32) -> Self {
        Self {
            gain: vec![0; k as usize],
            touched: Vec::new(),
            s1: Vec::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, block: BlockId, amount: u64) {
        let slot = &mut self.gain[block as usize];
        if *slot == 0 {
            self.touched.push(block);
        }
        *slot += amount;
    }

    #[inline]
    pub fn gain(&self, block: BlockId) -> u64 {
        self.gain[block as usize]
    }

    /// Blocks with a positive gain, in first-touch order.
    pub fn touched(&self) -> &[BlockId] {
        &self.touched
    }

    pub fn clear(&mut self) {
        for &b in &self.touched {
            self.gain[b as usize] = 0;
        }
        self.touched.clear();
    }
}

/// The two candidate groups for one incoming vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoreDecomposition<'a> {
    /// Feasible blocks with positive gain and that gain.
    pub s1: &'a [(BlockId, u64)],
    /// Least loaded block overall.
    pub s2_champion: BlockId,
    /// The champion has positive gain, so some block of `s1` beats every
    /// zero-gain block and the zero-gain group needs no scoring.
    pub champion_in_s1: bool,
}

#[derive(Debug, Clone)]
enum Order {
    Registry(BlockRegistry),
    ByLoad(BTreeSet<(u64, BlockId)>),
}

/// Loads of all blocks plus a structure yielding the least loaded one.
#[derive(Debug, Clone)]
pub struct BlockState {
    loads: Vec<u64>,
    /// `load^(gamma - 1)` per block, refreshed whenever a load changes.
    powers: Vec<f64>,
    gamma: f64,
    cardinalities: Vec<u64>,
    order: Order,
}

/// Outcome of a selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Choice {
    pub block: BlockId,
    /// No block could take the vertex within `l_max`; `block` is the least
    /// loaded one.
    pub overloaded: bool,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    block: BlockId,
    score: f64,
    load: u64,
    rank: u32,
}

impl Candidate {
    #[inline]
    fn beats(&self, other: &Candidate) -> bool {
        if self.score != other.score {
            return self.score > other.score;
        }
        (self.load, self.rank) < (other.load, other.rank)
    }
}

impl BlockState {
    /// `weighted` selects the load-ordered set instead of the registry.
    /// `gamma` is the penalty exponent the block powers are cached for.
    pub fn new(k: u32, weighted: bool, gamma: f64) -> Self {
        let order = if weighted {
            Order::ByLoad((0..k).map(|b| (0, b)).collect())
        } else {
            Order::Registry(BlockRegistry::new(k).expect("k >= 1 checked by ScoreParams"))
        };
        Self {
            loads: vec![0; k as usize],
            powers: vec![load_power(0, gamma); k as usize],
            gamma,
            cardinalities: vec![0; k as usize],
            order,
        }
    }

    #[inline]
    pub fn load(&self, block: BlockId) -> u64 {
        self.loads[block as usize]
    }

    pub fn loads(&self) -> &[u64] {
        &self.loads
    }

    pub fn cardinalities(&self) -> &[u64] {
        &self.cardinalities
    }

    pub fn registry(&self) -> Option<&BlockRegistry> {
        match &self.order {
            Order::Registry(r) => Some(r),
            Order::ByLoad(_) => None,
        }
    }

    /// The least loaded block (registry front for unit weights).
    #[inline]
    pub fn champion(&self) -> BlockId {
        match &self.order {
            Order::Registry(r) => r.min_cardinality_block(),
            Order::ByLoad(set) => set.first().expect("k >= 1").1,
        }
    }

    #[inline]
    pub fn tie_rank(&self, block: BlockId) -> u32 {
        match &self.order {
            Order::Registry(r) => r.position_of(block),
            Order::ByLoad(_) => block,
        }
    }

    /// Same value as [`ScoreParams::score`] for this block's load.
    #[inline]
    pub fn score(&self, params: &ScoreParams, block: BlockId, gain: u64, weight: u64) -> f64 {
        debug_assert_eq!(params.gamma, self.gamma);
        gain as f64 + penalty_from_power(weight, self.powers[block as usize], params.alpha, params.gamma)
    }

    #[inline]
    pub fn fits(&self, block: BlockId, weight: u64, l_max: u64) -> bool {
        self.loads[block as usize] + weight <= l_max
    }

    /// Records `weight` more load on `block`.
    ///
    /// # Panics
    /// In unit mode, if `weight != 1`.
    #[inline]
    pub fn add(&mut self, block: BlockId, weight: u64) {
        let b = block as usize;
        match &mut self.order {
            Order::Registry(r) => {
                assert_eq!(weight, 1, "the registry only supports unit weights");
                r.increment_unchecked(block);
            }
            Order::ByLoad(set) => {
                if weight != 0 {
                    set.remove(&(self.loads[b], block));
                    set.insert((self.loads[b] + weight, block));
                }
            }
        }
        self.loads[b] += weight;
        self.powers[b] = load_power(self.loads[b], self.gamma);
        self.cardinalities[b] += 1;
    }

    /// Splits candidates after gains for the vertex were accumulated in
    /// `scratch`. Blocks that cannot take `weight` more are left out of `s1`.
    pub fn decompose<'a>(
        &self,
        scratch: &'a mut GainScratch,
        weight: u64,
        l_max: u64,
    ) -> ScoreDecomposition<'a> {
        let champion = self.champion();
        let GainScratch {
            gain, touched, s1, ..
        } = scratch;
        s1.clear();
        for &b in touched.iter() {
            if self.fits(b, weight, l_max) {
                s1.push((b, gain[b as usize]));
            }
        }
        ScoreDecomposition {
            s1: s1.as_slice(),
            s2_champion: champion,
            champion_in_s1: gain[champion as usize] > 0,
        }
    }

    /// Scores the decomposition and picks the best feasible block. Also
    /// reports how many candidates were scored.
    pub fn select(
        &self,
        dec: &ScoreDecomposition<'_>,
        params: &ScoreParams,
        weight: u64,
    ) -> (Choice, usize) {
        let mut best: Option<Candidate> = None;
        let mut scored = 0;
        for &(block, gain) in dec.s1 {
            let load = self.load(block);
            let cand = Candidate {
                block,
                score: self.score(params, block, gain, weight),
                load,
                rank: self.tie_rank(block),
            };
            scored += 1;
            if best.map_or(true, |b| cand.beats(&b)) {
                best = Some(cand);
            }
        }

        let champion = dec.s2_champion;
        if !self.fits(champion, weight, params.l_max) {
            // The least loaded block is full, so every block is.
            return (
                Choice {
                    block: champion,
                    overloaded: true,
                },
                scored,
            );
        }
        if !dec.champion_in_s1 {
            let load = self.load(champion);
            let cand = Candidate {
                block: champion,
                score: self.score(params, champion, 0, weight),
                load,
                rank: self.tie_rank(champion),
            };
            scored += 1;
            if best.map_or(true, |b| cand.beats(&b)) {
                best = Some(cand);
            }
        }
        let best = best.expect("champion fits, so some candidate exists");
        (
            Choice {
                block: best.block,
                overloaded: false,
            },
            scored,
        )
    }
}
