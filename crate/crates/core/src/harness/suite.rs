use std::path::Path;

use super::table::{ResultRow, ResultTable, SuiteFailure};
use super::RunConfig;
use crate::io::{
    parse_hgr, parse_metis_graph, parse_vstream, transpose_to_hgr, transpose_to_stream, HgrFile,
    VertexStreamFile,
};
use crate::metrics::evaluate;
use crate::partition::{partition_stream, PartitionConfig};

/// A hypergraph held in memory both net-major (for evaluation) and
/// vertex-major (for streaming).
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub hypergraph: HgrFile,
    pub stream: VertexStreamFile,
}

impl Instance {
    pub fn from_hgr(name: impl Into<String>, hypergraph: HgrFile) -> Self {
        let stream = transpose_to_stream(&hypergraph);
        Self {
            name: name.into(),
            hypergraph,
            stream,
        }
    }
}

/// Loads `.hgr`, `.vstream` or `.graph` by extension.
pub fn load_instance(path: &Path) -> Result<Instance, String> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    match path.extension().and_then(|e| e.to_str()) {
        Some("hgr") => parse_hgr(path)
            .map(|h| Instance::from_hgr(name, h))
            .map_err(|e| e.to_string()),
        Some("vstream") => {
            let stream = parse_vstream(path).map_err(|e| e.to_string())?;
            let hypergraph = transpose_to_hgr(&stream);
            Ok(Instance {
                name,
                hypergraph,
                stream,
            })
        }
        Some("graph") => {
            let g = parse_metis_graph(path).map_err(|e| e.to_string())?;
            Ok(Instance::from_hgr(name, g.to_hypergraph()))
        }
        _ => Err(format!("{}: unknown extension", path.display())),
    }
}

/// Loads every instance of `cfg` and runs the grid. Unreadable instances
/// and failing runs are recorded in [`ResultTable::failures`].
pub fn run_suite(cfg: &RunConfig) -> ResultTable {
    let mut instances = Vec::new();
    let mut failures = Vec::new();
    for path in &cfg.instances {
        match load_instance(path) {
            Ok(inst) => instances.push(inst),
            Err(message) => failures.push(SuiteFailure {
                instance: path.display().to_string(),
                algorithm: None,
                k: None,
                message,
            }),
        }
    }
    let mut table = run_instances(&instances, cfg);
    failures.append(&mut table.failures);
    table.failures = failures;
    table
}

/// Runs every (instance, algorithm, k, repetition) cell in that order.
/// Only the streaming loop is timed.
pub fn run_instances(instances: &[Instance], cfg: &RunConfig) -> ResultTable {
    let mut table = ResultTable::default();
    for inst in instances {
        for &algorithm in &cfg.algorithms {
            for &k in &cfg.ks {
                for rep in 0..cfg.repetitions {
                    let seed = cfg.seed_for(rep);
                    let pcfg = PartitionConfig {
                        epsilon: cfg.epsilon,
                        seed,
                        ..PartitionConfig::new(algorithm, k)
                    };
                    let outcome = partition_stream(inst.stream.stream(), &pcfg)
                        .map_err(|e| e.to_string())
                        .and_then(|r| {
                            evaluate(&inst.hypergraph, &r.assignment, k)
                                .map(|report| (r, report))
                                .map_err(|e| e.to_string())
                        });
                    match outcome {
                        Ok((r, report)) => table.rows.push(ResultRow {
                            instance: inst.name.clone(),
                            algorithm: algorithm.name().to_owned(),
                            k,
                            repetition: rep,
                            seed,
                            cutnet: report.cutnet,
                            connectivity: report.connectivity,
                            imbalance: report.imbalance,
                            balanced: report.satisfies_lmax(cfg.epsilon),
                            runtime_ns: r.timings.stream_ns,
                            ns_per_pin: r.ns_per_pin(),
                        }),
                        Err(message) => table.failures.push(SuiteFailure {
                            instance: inst.name.clone(),
                            algorithm: Some(algorithm.name().to_owned()),
                            k: Some(k),
                            message,
                        }),
                    }
                }
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::read_hgr;
    use crate::params::Objective;
    use crate::partition::Algorithm;

    fn tiny() -> Instance {
        let h = read_hgr("4 6\n1 2\n2 3 4\n4 5\n5 6 1\n".as_bytes()).unwrap();
        Instance::from_hgr("tiny", h)
    }

    #[test]
    fn row_count() {
        let mut cfg = RunConfig::new(vec![], vec![Algorithm::Freight(Objective::Connectivity)]);
        cfg.ks = vec![2, 3];
        let t = run_instances(&[tiny()], &cfg);
        assert_eq!(t.rows.len(), 10);
        assert!(t.failures.is_empty());
        assert!(t.rows.iter().all(|r| r.balanced));
    }

    #[test]
    fn deterministic_objectives_across_repetitions() {
        let mut cfg = RunConfig::new(
            vec![],
            vec![Algorithm::Freight(Objective::CutNet), Algorithm::MinMaxN2P],
        );
        cfg.ks = vec![2];
        let t = run_instances(&[tiny()], &cfg);
        for alg in ["freight-cut", "minmax-n2p"] {
            let values: Vec<_> = t
                .rows
                .iter()
                .filter(|r| r.algorithm == alg)
                .map(|r| (r.cutnet, r.connectivity))
                .collect();
            assert_eq!(values.len(), 5);
            assert!(values.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn missing_file_is_recorded() {
        let mut cfg = RunConfig::new(vec!["/nonexistent/x.hgr".into()], vec![Algorithm::Hashing]);
        cfg.ks = vec![2];
        let t = run_suite(&cfg);
        assert!(t.rows.is_empty());
        assert_eq!(t.failures.len(), 1);
    }
}
