//! One-pass greedy hypergraph partitioning with per-net state only.
//!
//! For every incoming vertex the gain of block `i` is the weight of the
//! vertex's nets whose most recent pin landed in `i` (connectivity), or the
//! same restricted to nets not cut yet (cut-net). The score subtracts the
//! usual `alpha * gamma * |V_i|^(gamma - 1)` penalty. Only blocks with a
//! positive gain are scored explicitly; the rest are represented by the
//! least loaded block. Total work is linear in the pin count.

use crate::io::VertexRecord;
use crate::params::{Objective, ScoreParams};
use crate::partition::{PartitionError, StreamingPartitioner};
use crate::select::{BlockState, Choice, GainScratch, ScoreDecomposition};
use crate::BlockId;

const CUT: u32 = 1 << 31;

/// Largest usable `k`; block ids share a word with the cut flag.
pub const MAX_BLOCKS: u32 = CUT - 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetStatus {
    Unassigned,
    /// Uncut, every streamed pin sits in this block.
    Assigned(BlockId),
    /// Cut; the block of the most recently streamed pin.
    Cut(BlockId),
}

impl NetStatus {
    pub fn last_block(self) -> Option<BlockId> {
        match self {
            NetStatus::Unassigned => None,
            NetStatus::Assigned(b) | NetStatus::Cut(b) => Some(b),
        }
    }
}

/// One word per net: zero while unassigned, otherwise `block + 1` with the
/// top bit flagging a cut net.
#[derive(Debug, Clone)]
pub struct NetTracker {
    state: Vec<u32>,
}

impl NetTracker {
    pub fn new(num_nets: usize) -> Self {
        Self {
            state: vec![0; num_nets],
        }
    }

    pub fn len(&self) -> usize {
        self.state.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state.is_empty()
    }

    #[inline]
    pub fn status(&self, net: u32) -> NetStatus {
        match self.state[net as usize] {
            0 => NetStatus::Unassigned,
            s if s & CUT != 0 => NetStatus::Cut((s & !CUT) - 1),
            s => NetStatus::Assigned(s - 1),
        }
    }

    /// Notes that a pin of `net` went to `block`.
    #[inline]
    pub fn record(&mut self, net: u32, block: BlockId) {
        let slot = &mut self.state[net as usize];
        let tag = block + 1;
        let cut = *slot & CUT != 0 || (*slot != 0 && *slot != tag);
        *slot = if cut { tag | CUT } else { tag };
    }

    pub fn cut_count(&self) -> usize {
        self.state.iter().filter(|&&s| s & CUT != 0).count()
    }

    /// Bytes held by the tracker.
    pub fn memory_bytes(&self) -> usize {
        self.state.capacity() * std::mem::size_of::<u32>()
    }
}

/// Work counters, used to check the per-vertex cost bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkStats {
    pub vertices: u64,
    pub net_visits: u64,
    pub candidates_scored: u64,
    /// Vertices that scored more than `|I(v)| + 1` candidates. Always zero.
    pub over_budget: u64,
}

#[derive(Debug, Clone)]
pub struct Freight {
    params: ScoreParams,
    tracker: NetTracker,
    blocks: BlockState,
    scratch: GainScratch,
    net_weights: Option<Vec<u64>>,
    weighted: bool,
    stats: WorkStats,
    overloaded: u64,
}

impl Freight {
    /// `weighted` must be set whenever some vertex weight differs from 1.
    pub fn new(
        params: ScoreParams,
        num_nets: usize,
        weighted: bool,
        net_weights: Option<Vec<u64>>,
    ) -> Result<Self, PartitionError> {
        if params.k > MAX_BLOCKS {
            return Err(PartitionError::TooManyBlocks(params.k));
        }
        if let Some(w) = &net_weights {
            if w.len() != num_nets {
                return Err(PartitionError::NetWeights {
                    expected: num_nets,
                    found: w.len(),
                });
            }
        }
        Ok(Self {
            params,
            tracker: NetTracker::new(num_nets),
            blocks: BlockState::new(params.k, weighted, params.gamma),
            scratch: GainScratch::new(params.k),
            net_weights,
            weighted,
            stats: WorkStats::default(),
            overloaded: 0,
        })
    }

    pub fn params(&self) -> &ScoreParams {
        &self.params
    }

    pub fn tracker(&self) -> &NetTracker {
        &self.tracker
    }

    pub fn blocks(&self) -> &BlockState {
        &self.blocks
    }

    pub fn stats(&self) -> WorkStats {
        self.stats
    }

    /// Accumulates the gains of `nets` and splits the candidate blocks.
    pub fn gather_gains(&mut self, nets: &[u32], weight: u64) -> ScoreDecomposition<'_> {
        self.accumulate(nets);
        self.blocks
            .decompose(&mut self.scratch, weight, self.params.l_max)
    }

    fn accumulate(&mut self, nets: &[u32]) {
        self.scratch.clear();
        let cutnet = self.params.objective == Objective::CutNet;
        for &e in nets {
            let block = match self.tracker.status(e) {
                NetStatus::Unassigned => continue,
                NetStatus::Cut(_) if cutnet => continue,
                NetStatus::Assigned(b) | NetStatus::Cut(b) => b,
            };
            let w = self.net_weights.as_ref().map_or(1, |w| w[e as usize]);
            self.scratch.add(block, w);
        }
        self.stats.net_visits += nets.len() as u64;
    }

    /// Picks the block for a vertex of `weight` with incident `nets`,
    /// without assigning it.
    pub fn select_block(&mut self, nets: &[u32], weight: u64) -> Choice {
        self.accumulate(nets);
        let dec = self
            .blocks
            .decompose(&mut self.scratch, weight, self.params.l_max);
        let (choice, scored) = self.blocks.select(&dec, &self.params, weight);
        self.stats.candidates_scored += scored as u64;
        if scored > nets.len() + 1 {
            self.stats.over_budget += 1;
        }
        choice
    }

    /// Assigns the vertex, updating loads, the block order and every
    /// incident net.
    pub fn assign_vertex(&mut self, nets: &[u32], weight: u64) -> Result<BlockId, PartitionError> {
        if !self.weighted && weight != 1 {
            return Err(PartitionError::UnexpectedWeight(weight));
        }
        let choice = self.select_block(nets, weight);
        if choice.overloaded {
            self.overloaded += 1;
        }
        let d = choice.block;
        self.blocks.add(d, weight);
        for &e in nets {
            self.tracker.record(e, d);
        }
        self.stats.vertices += 1;
        Ok(d)
    }
}

impl StreamingPartitioner for Freight {
    fn name(&self) -> String {
        match self.params.objective {
            Objective::CutNet => "freight-cut".into(),
            Objective::Connectivity => "freight-con".into(),
        }
    }

    fn assign(&mut self, record: VertexRecord<'_>) -> Result<BlockId, PartitionError> {
        self.assign_vertex(record.nets, record.weight)
    }

    fn loads(&self) -> &[u64] {
        self.blocks.loads()
    }

    fn cardinalities(&self) -> &[u64] {
        self.blocks.cardinalities()
    }

    fn overloaded(&self) -> u64 {
        self.overloaded
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: u32, objective: Objective, alpha: f64, l_max: u64) -> ScoreParams {
        ScoreParams {
            k,
            epsilon: 0.03,
            gamma: 1.5,
            alpha,
            l_max,
            objective,
        }
    }

    #[test]
    fn tracker_transitions() {
        let mut t = NetTracker::new(2);
        assert_eq!(t.status(0), NetStatus::Unassigned);
        t.record(0, 4);
        assert_eq!(t.status(0), NetStatus::Assigned(4));
        t.record(0, 4);
        assert_eq!(t.status(0), NetStatus::Assigned(4));
        t.record(0, 1);
        assert_eq!(t.status(0), NetStatus::Cut(1));
        t.record(0, 1);
        assert_eq!(t.status(0), NetStatus::Cut(1));
        t.record(0, 0);
        assert_eq!(t.status(0), NetStatus::Cut(0));
        assert_eq!(t.cut_count(), 1);
        t.record(1, 0);
        assert_eq!(t.status(1), NetStatus::Assigned(0));
    }

    #[test]
    fn three_pin_net_cut_on_third_pin() {
        let mut t = NetTracker::new(1);
        t.record(0, 0);
        t.record(0, 0);
        assert_eq!(t.status(0), NetStatus::Assigned(0));
        t.record(0, 1);
        assert_eq!(t.status(0), NetStatus::Cut(1));
    }

    #[test]
    fn fresh_nets_give_empty_s1() {
        let mut f = Freight::new(params(4, Objective::Connectivity, 1.0, 10), 3, false, None).unwrap();
        let dec = f.gather_gains(&[0, 1, 2], 1);
        assert!(dec.s1.is_empty());
    }

    #[test]
    fn shared_block_gain() {
        let mut f = Freight::new(params(4, Objective::CutNet, 0.0, 10), 2, false, None).unwrap();
        f.tracker.record(0, 2);
        f.tracker.record(1, 2);
        f.blocks.add(2, 1);
        for objective in [Objective::CutNet, Objective::Connectivity] {
            f.params.objective = objective;
            let dec = f.gather_gains(&[0, 1], 1);
            assert_eq!(dec.s1, &[(2, 2)]);
        }
    }

    #[test]
    fn cut_net_only_counts_for_connectivity() {
        let mut f = Freight::new(params(4, Objective::Connectivity, 0.0, 10), 1, false, None).unwrap();
        f.tracker.record(0, 0);
        f.tracker.record(0, 2);
        assert_eq!(f.tracker.status(0), NetStatus::Cut(2));
        assert_eq!(f.gather_gains(&[0], 1).s1, &[(2, 1)]);
        f.params.objective = Objective::CutNet;
        assert!(f.gather_gains(&[0], 1).s1.is_empty());
    }

    #[test]
    fn net_weights_scale_gains() {
        let mut f = Freight::new(
            params(3, Objective::Connectivity, 0.0, 10),
            2,
            false,
            Some(vec![5, 2]),
        )
        .unwrap();
        f.tracker.record(0, 1);
        f.tracker.record(1, 1);
        assert_eq!(f.gather_gains(&[0, 1], 1).s1, &[(1, 7)]);
    }

    #[test]
    fn pins_follow_each_other() {
        let mut f = Freight::new(params(2, Objective::CutNet, 0.1, 10), 1, false, None).unwrap();
        let a = f.assign_vertex(&[0], 1).unwrap();
        let b = f.assign_vertex(&[0], 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(f.tracker.status(0), NetStatus::Assigned(a));
    }

    #[test]
    fn unit_mode_rejects_weights() {
        let mut f = Freight::new(params(2, Objective::CutNet, 0.1, 10), 1, false, None).unwrap();
        assert!(matches!(
            f.assign_vertex(&[0], 3),
            Err(PartitionError::UnexpectedWeight(3))
        ));
    }

    #[test]
    fn k_one_takes_everything() {
        let mut f = Freight::new(params(1, Objective::Connectivity, 1.0, 3), 2, false, None).unwrap();
        for nets in [&[0u32][..], &[0, 1], &[1]] {
            assert_eq!(f.assign_vertex(nets, 1).unwrap(), 0);
        }
        assert_eq!(f.tracker.cut_count(), 0);
    }
}
