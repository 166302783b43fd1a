//! Driving a partitioner over a vertex stream and packaging the result.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{Hashing, MinMaxN2P};
use crate::engine::Freight;
use crate::io::{FormatError, VertexRecord, VertexSource};
use crate::params::{Objective, ParamError, ScoreParams, DEFAULT_EPSILON};
use crate::BlockId;

#[derive(Debug, thiserror::Error)]
pub enum PartitionError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("no block can take vertex {vertex} (weight {weight}) within l_max = {l_max}")]
    NoFeasibleBlock { vertex: u32, weight: u64, l_max: u64 },
    #[error("k = {0} exceeds the supported block count")]
    TooManyBlocks(u32),
    #[error("expected {expected} net weights, got {found}")]
    NetWeights { expected: usize, found: usize },
    #[error("vertex weight {0} in a stream declared unweighted")]
    UnexpectedWeight(u64),
    #[error("the total vertex weight of a weighted file stream must be known up front")]
    UnknownTotalWeight,
    #[error("stream delivered {found} vertices, header declared {declared}")]
    VertexCount { declared: usize, found: usize },
    #[error("{0}")]
    Unsupported(String),
}

/// One-pass assignment of streamed vertices.
pub trait StreamingPartitioner {
    fn name(&self) -> String;
    fn assign(&mut self, record: VertexRecord<'_>) -> Result<BlockId, PartitionError>;
    fn loads(&self) -> &[u64];
    fn cardinalities(&self) -> &[u64];
    /// Vertices that had to be placed beyond `l_max`.
    fn overloaded(&self) -> u64 {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Freight(Objective),
    Hashing,
    MinMaxN2P,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Freight(Objective::CutNet) => "freight-cut",
            Algorithm::Freight(Objective::Connectivity) => "freight-con",
            Algorithm::Hashing => "hashing",
            Algorithm::MinMaxN2P => "minmax-n2p",
        }
    }

    /// Parses an algorithm name; plain `freight` takes `default_objective`.
    pub fn parse(name: &str, default_objective: Objective) -> Result<Self, String> {
        match name {
            "freight" => Ok(Algorithm::Freight(default_objective)),
            "freight-con" | "freight-connectivity" => Ok(Algorithm::Freight(Objective::Connectivity)),
            "freight-cut" | "freight-cutnet" => Ok(Algorithm::Freight(Objective::CutNet)),
            "hashing" | "hash" => Ok(Algorithm::Hashing),
            "minmax-n2p" | "min-max-n2p" | "mm-n2p" => Ok(Algorithm::MinMaxN2P),
            other => Err(format!(
                "unknown algorithm {other:?} (expected freight, freight-con, freight-cut, hashing or minmax-n2p)"
            )),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs for one partitioning run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionConfig {
    pub algorithm: Algorithm,
    pub k: u32,
    pub epsilon: f64,
    pub seed: u64,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
}

impl PartitionConfig {
    pub fn new(algorithm: Algorithm, k: u32) -> Self {
        Self {
            algorithm,
            k,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
            gamma: None,
            alpha: None,
        }
    }

    pub fn objective(&self) -> Objective {
        match self.algorithm {
            Algorithm::Freight(o) => o,
            _ => Objective::Connectivity,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    /// Set-up of the partitioner state (allocation only).
    pub setup_ns: u64,
    /// Consuming the stream and assigning every vertex.
    pub stream_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub algorithm: String,
    pub params: ScoreParams,
    pub seed: u64,
    /// Block of every vertex in stream order, 0-based.
    #[serde(skip)]
    pub assignment: Vec<BlockId>,
    pub loads: Vec<u64>,
    pub cardinalities: Vec<u64>,
    pub num_vertices: usize,
    pub num_pins: u64,
    /// Vertices placed beyond `l_max` because no block could take them.
    pub balance_violations: u64,
    pub timings: Timings,
}

impl PartitionResult {
    pub fn max_load(&self) -> u64 {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    pub fn is_balanced(&self) -> bool {
        self.loads.iter().all(|&l| l <= self.params.l_max)
    }

    pub fn ns_per_pin(&self) -> f64 {
        self.timings.stream_ns as f64 / self.num_pins.max(1) as f64
    }

    /// One 1-based block id per line, in vertex order.
    pub fn write_assignment(&self, out: impl Write) -> std::io::Result<()> {
        write_assignment(&self.assignment, out)
    }

    /// Run metadata (everything except the assignment) as JSON.
    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}

pub fn write_assignment(assignment: &[BlockId], mut out: impl Write) -> std::io::Result<()> {
    for &b in assignment {
        writeln!(out, "{}", b + 1)?;
    }
    Ok(())
}

/// Reads a 1-based assignment file into 0-based block ids.
pub fn read_assignment(reader: impl std::io::BufRead) -> Result<Vec<BlockId>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let id: u64 = t.parse().map_err(|_| FormatError::NotANumber {
            line: i + 1,
            token: t.to_owned(),
        })?;
        if id == 0 || id > u32::MAX as u64 {
            return Err(FormatError::malformed(i + 1, format!("block id {id} out of range")));
        }
        out.push((id - 1) as BlockId);
    }
    Ok(out)
}

/// Score parameters derived from a stream header and run configuration.
pub fn params_for(
    source: &impl VertexSource,
    config: &PartitionConfig,
) -> Result<ScoreParams, PartitionError> {
    let header = source.header();
    let total = source
        .total_vertex_weight()
        .ok_or(PartitionError::UnknownTotalWeight)?;
    params_with_total(header.num_vertices, header.num_nets, total, config)
}

pub fn params_with_total(
    num_vertices: usize,
    num_nets: usize,
    total_weight: u64,
    config: &PartitionConfig,
) -> Result<ScoreParams, PartitionError> {
    let mut params = ScoreParams::new(
        config.k,
        config.epsilon,
        config.objective(),
        num_vertices,
        num_nets,
        total_weight,
    )?;
    if let Some(g) = config.gamma {
        params = params.with_gamma(g)?;
    }
    if let Some(a) = config.alpha {
        params = params.with_alpha(a)?;
    }
    Ok(params)
}

/// Runs the configured algorithm over `source`. The source is consumed.
///
/// ```compile_fail
/// # use freight::io::{read_hgr, transpose_to_stream};
/// # use freight::partition::{partition_stream, Algorithm, PartitionConfig};
/// # let h = read_hgr("1 2\n1 2\n".as_bytes()).unwrap();
/// # let file = transpose_to_stream(&h);
/// let stream = file.stream();
/// let cfg = PartitionConfig::new(Algorithm::Hashing, 2);
/// partition_stream(stream, &cfg).unwrap();
/// partition_stream(stream, &cfg).unwrap(); // a stream is consumed once
/// ```
pub fn partition_stream<S: VertexSource>(
    source: S,
    config: &PartitionConfig,
) -> Result<PartitionResult, PartitionError> {
    let params = params_for(&source, config)?;
    partition_stream_with(source, params, config)
}

/// Like [`partition_stream`] with explicit score parameters.
pub fn partition_stream_with<S: VertexSource>(
    source: S,
    params: ScoreParams,
    config: &PartitionConfig,
) -> Result<PartitionResult, PartitionError> {
    let header = source.header();
    let start = Instant::now();
    match config.algorithm {
        Algorithm::Freight(_) => {
            let net_weights = source.net_weights().map(<[u64]>::to_vec);
            let p = Freight::new(params, header.num_nets, header.vertex_weighted, net_weights)?;
            drive(source, p, params, config.seed, start)
        }
        Algorithm::Hashing => {
            let p = Hashing::new(params.k, params.l_max, config.seed);
            drive(source, p, params, config.seed, start)
        }
        Algorithm::MinMaxN2P => {
            let p = MinMaxN2P::new(params.k, params.l_max, header.num_nets);
            drive(source, p, params, config.seed, start)
        }
    }
}

/// Streams every record of `source` through `partitioner`.
pub fn drive<S: VertexSource, P: StreamingPartitioner>(
    mut source: S,
    mut partitioner: P,
    params: ScoreParams,
    seed: u64,
    setup_start: Instant,
) -> Result<PartitionResult, PartitionError> {
    let header = source.header();
    let setup_ns = setup_start.elapsed().as_nanos() as u64;
    let start = Instant::now();
    let mut assignment = Vec::with_capacity(header.num_vertices);
    let mut pins = 0u64;
    while let Some(record) = source.next_record()? {
        pins += record.nets.len() as u64;
        assignment.push(partitioner.assign(record)?);
    }
    let stream_ns = start.elapsed().as_nanos() as u64;
    if assignment.len() != header.num_vertices {
        return Err(PartitionError::VertexCount {
            declared: header.num_vertices,
            found: assignment.len(),
        });
    }
    Ok(PartitionResult {
        algorithm: partitioner.name(),
        params,
        seed,
        num_vertices: assignment.len(),
        assignment,
        loads: partitioner.loads().to_vec(),
        cardinalities: partitioner.cardinalities().to_vec(),
        num_pins: pins,
        balance_violations: partitioner.overloaded(),
        timings: Timings {
            setup_ns,
            stream_ns,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{read_hgr, transpose_to_stream, VertexStreamReader};

    #[test]
    fn single_vertex() {
        let h = read_hgr("1 1\n1\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        for k in [1, 2, 7] {
            let cfg = PartitionConfig::new(Algorithm::Freight(Objective::CutNet), k);
            let r = partition_stream(f.stream(), &cfg).unwrap();
            assert_eq!(r.assignment, vec![0]);
        }
    }

    #[test]
    fn k_one_everything_in_block_one() {
        let h = read_hgr("3 4\n1 2\n2 3 4\n1 4\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        for algorithm in [
            Algorithm::Freight(Objective::CutNet),
            Algorithm::Freight(Objective::Connectivity),
            Algorithm::Hashing,
            Algorithm::MinMaxN2P,
        ] {
            let r = partition_stream(f.stream(), &PartitionConfig::new(algorithm, 1)).unwrap();
            assert!(r.assignment.iter().all(|&b| b == 0), "{algorithm}");
            assert_eq!(r.loads, vec![4]);
            assert_eq!(r.num_pins, 7);
        }
    }

    #[test]
    fn weighted_file_stream_needs_total() {
        let r = VertexStreamReader::new("2 1 10\n3 1\n4 1\n".as_bytes()).unwrap();
        let cfg = PartitionConfig::new(Algorithm::Freight(Objective::CutNet), 2);
        assert!(matches!(
            partition_stream(r, &cfg),
            Err(PartitionError::UnknownTotalWeight)
        ));
    }

    #[test]
    fn weighted_memory_stream() {
        let h = read_hgr("2 3 10\n1 2\n2 3\n3\n1\n2\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        let cfg = PartitionConfig::new(Algorithm::Freight(Objective::Connectivity), 2);
        let r = partition_stream(f.stream(), &cfg).unwrap();
        assert_eq!(r.params.l_max, 4);
        assert_eq!(r.loads.iter().sum::<u64>(), 6);
        assert!(r.is_balanced());
        assert_eq!(r.balance_violations, 0);
    }

    #[test]
    fn assignment_file_round_trip() {
        let mut out = Vec::new();
        write_assignment(&[0, 3, 1], &mut out).unwrap();
        assert_eq!(out, b"1\n4\n2\n");
        assert_eq!(read_assignment(out.as_slice()).unwrap(), vec![0, 3, 1]);
        assert!(read_assignment("0\n".as_bytes()).is_err());
        assert!(read_assignment("x\n".as_bytes()).is_err());
    }

    #[test]
    fn metadata_has_no_assignment() {
        let h = read_hgr("1 2\n1 2\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        let r = partition_stream(f.stream(), &PartitionConfig::new(Algorithm::Hashing, 2)).unwrap();
        let json: serde_json::Value = serde_json::from_str(&r.metadata_json()).unwrap();
        assert_eq!(json["algorithm"], "hashing");
        assert!(json.get("assignment").is_none());
        assert_eq!(json["params"]["k"], 2);
    }

    #[test]
    fn algorithm_names() {
        for name in ["freight-con", "freight-cut", "hashing", "minmax-n2p"] {
            assert_eq!(Algorithm::parse(name, Objective::CutNet).unwrap().name(), name);
        }
        assert_eq!(
            Algorithm::parse("freight", Objective::CutNet).unwrap(),
            Algorithm::Freight(Objective::CutNet)
        );
        assert!(Algorithm::parse("kahypar", Objective::CutNet).is_err());
    }
}
