//! Offline evaluation of a finished partition.

use serde::Serialize;

use crate::io::{GraphFile, HgrFile};
use crate::params::compute_lmax;
use crate::BlockId;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("assignment covers {found} vertices, the input has {expected}")]
    Unassigned { expected: usize, found: usize },
    #[error("vertex {vertex} is assigned to block {block}, outside [1,{k}]")]
    BlockOutOfRange { vertex: usize, block: u64, k: u32 },
    #[error("k must be at least 1")]
    ZeroBlocks,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub k: u32,
    pub cutnet: u64,
    pub connectivity: u64,
    /// `max_i c(V_i) * k / c(V) - 1`.
    pub imbalance: f64,
    pub max_load: u64,
    pub loads: Vec<u64>,
    /// `lambda_histogram[l]` counts nets spanning `l` blocks.
    pub lambda_histogram: Vec<u64>,
}

impl EvaluationReport {
    pub fn total_weight(&self) -> u64 {
        self.loads.iter().sum()
    }

    /// Whether every block respects `ceil((1 + epsilon) * c(V) / k)`.
    pub fn satisfies_lmax(&self, epsilon: f64) -> bool {
        self.max_load <= compute_lmax(self.total_weight(), self.k, epsilon)
    }

    pub const CSV_HEADER: &'static str = "k,cutnet,connectivity,imbalance,max_load,balanced";

    pub fn csv_row(&self, epsilon: f64) -> String {
        format!(
            "{},{},{},{:.6},{},{}",
            self.k,
            self.cutnet,
            self.connectivity,
            self.imbalance,
            self.max_load,
            self.satisfies_lmax(epsilon)
        )
    }
}

fn check_assignment(n: usize, assignment: &[BlockId], k: u32) -> Result<(), EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroBlocks);
    }
    if assignment.len() != n {
        return Err(EvalError::Unassigned {
            expected: n,
            found: assignment.len(),
        });
    }
    if let Some((v, &b)) = assignment.iter().enumerate().find(|(_, &b)| b >= k) {
        return Err(EvalError::BlockOutOfRange {
            vertex: v + 1,
            block: b as u64 + 1,
            k,
        });
    }
    Ok(())
}

fn loads_of(n: usize, assignment: &[BlockId], k: u32, weight: impl Fn(usize) -> u64) -> Vec<u64> {
    let mut loads = vec![0u64; k as usize];
    for v in 0..n {
        loads[assignment[v] as usize] += weight(v);
    }
    loads
}

fn imbalance(loads: &[u64]) -> f64 {
    let total: u64 = loads.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let max = loads.iter().copied().max().unwrap_or(0);
    max as f64 * loads.len() as f64 / total as f64 - 1.0
}

/// Cut-net and connectivity of `assignment` (0-based blocks) on `h`.
pub fn evaluate(h: &HgrFile, assignment: &[BlockId], k: u32) -> Result<EvaluationReport, EvalError> {
    check_assignment(h.num_vertices(), assignment, k)?;
    let mut cutnet = 0u64;
    let mut connectivity = 0u64;
    let mut histogram = vec![0u64; 2];
    let mut seen: Vec<BlockId> = Vec::new();
    for (e, net) in h.nets().enumerate() {
        seen.clear();
        seen.extend(net.iter().map(|&p| assignment[p as usize]));
        seen.sort_unstable();
        seen.dedup();
        let lambda = seen.len();
        if histogram.len() <= lambda {
            histogram.resize(lambda + 1, 0);
        }
        histogram[lambda] += 1;
        if lambda >= 2 {
            let w = h.net_weight(e);
            cutnet += w;
            connectivity += (lambda as u64 - 1) * w;
        }
    }
    let loads = loads_of(h.num_vertices(), assignment, k, |v| h.vertex_weight(v));
    Ok(EvaluationReport {
        k,
        cutnet,
        connectivity,
        imbalance: imbalance(&loads),
        max_load: loads.iter().copied().max().unwrap_or(0),
        loads,
        lambda_histogram: histogram,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub k: u32,
    pub edge_cut: u64,
    pub imbalance: f64,
    pub max_load: u64,
    pub loads: Vec<u64>,
}

impl GraphReport {
    pub const CSV_HEADER: &'static str = "k,edge_cut,imbalance,max_load,balanced";

    pub fn satisfies_lmax(&self, epsilon: f64) -> bool {
        self.max_load <= compute_lmax(self.loads.iter().sum(), self.k, epsilon)
    }

    pub fn csv_row(&self, epsilon: f64) -> String {
        format!(
            "{},{},{:.6},{},{}",
            self.k,
            self.edge_cut,
            self.imbalance,
            self.max_load,
            self.satisfies_lmax(epsilon)
        )
    }
}

/// Total weight of edges whose endpoints sit in different blocks.
pub fn evaluate_graph(g: &GraphFile, assignment: &[BlockId], k: u32) -> Result<GraphReport, EvalError> {
    check_assignment(g.num_vertices(), assignment, k)?;
    let mut cut = 0u64;
    for v in 0..g.num_vertices() {
        let weights = g.neighbor_weights(v);
        for (i, &u) in g.neighbors(v).iter().enumerate() {
            if (u as usize) > v && assignment[u as usize] != assignment[v] {
                cut += weights.map_or(1, |w| w[i]);
            }
        }
    }
    let loads = loads_of(g.num_vertices(), assignment, k, |v| g.vertex_weight(v));
    Ok(GraphReport {
        k,
        edge_cut: cut,
        imbalance: imbalance(&loads),
        max_load: loads.iter().copied().max().unwrap_or(0),
        loads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{read_hgr, read_metis_graph};

    #[test]
    fn single_block() {
        let h = read_hgr("2 4\n1 2 3\n3 4\n".as_bytes()).unwrap();
        let r = evaluate(&h, &[0, 0, 0, 0], 4).unwrap();
        assert_eq!((r.cutnet, r.connectivity), (0, 0));
        assert!((r.imbalance - 3.0).abs() < 1e-12);
        assert!(!r.satisfies_lmax(0.03));
    }

    #[test]
    fn three_pins_three_blocks() {
        let h = read_hgr("1 3 1\n2 1 2 3\n".as_bytes()).unwrap();
        let r = evaluate(&h, &[0, 1, 2], 3).unwrap();
        assert_eq!((r.cutnet, r.connectivity), (2, 4));
        assert_eq!(r.lambda_histogram, vec![0, 0, 0, 1]);
        assert_eq!(r.imbalance, 0.0);
        assert!(r.satisfies_lmax(0.0));
    }

    #[test]
    fn errors() {
        let h = read_hgr("1 2\n1 2\n".as_bytes()).unwrap();
        assert_eq!(
            evaluate(&h, &[0], 2).unwrap_err(),
            EvalError::Unassigned { expected: 2, found: 1 }
        );
        assert_eq!(
            evaluate(&h, &[0, 2], 2).unwrap_err(),
            EvalError::BlockOutOfRange { vertex: 2, block: 3, k: 2 }
        );
        assert_eq!(evaluate(&h, &[0, 0], 0).unwrap_err(), EvalError::ZeroBlocks);
    }

    #[test]
    fn path_edge_cut() {
        let g = read_metis_graph("3 2\n2\n1 3\n2\n".as_bytes()).unwrap();
        assert_eq!(evaluate_graph(&g, &[0, 0, 1], 2).unwrap().edge_cut, 1);
        assert_eq!(evaluate_graph(&g, &[1, 1, 1], 2).unwrap().edge_cut, 0);
    }

    #[test]
    fn csv_rows() {
        let h = read_hgr("1 3 1\n2 1 2 3\n".as_bytes()).unwrap();
        let r = evaluate(&h, &[0, 1, 2], 3).unwrap();
        assert_eq!(r.csv_row(0.03), "3,2,4,0.000000,1,true");
        assert_eq!(EvaluationReport::CSV_HEADER.split(',').count(), 6);
    }
}
