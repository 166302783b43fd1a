use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use freight::harness::{
    generate_instance, improvement_over, performance_profile, run_suite, write_improvement_csv,
    write_profile_csv, Generated, InstanceKind, Metric, ResultTable, RunConfig,
};
use freight::io::{
    parse_hgr, parse_metis_graph, parse_vstream, transpose_to_hgr, transpose_to_stream, write_hgr,
    write_metis_graph, write_vstream, VertexSource, VertexStreamReader,
};
use freight::partition::params_with_total;
use freight::{
    evaluate, evaluate_graph, fennel_partition, partition_stream, partition_stream_with,
    read_assignment, Algorithm, EvaluationReport, GraphReport, Objective, PartitionConfig,
    PartitionResult,
};

#[derive(Parser)]
#[command(name = "freight", version, about = "One-pass streaming hypergraph partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition a .hgr, .vstream or .graph file.
    Partition(PartitionArgs),
    /// Print cut-net, connectivity and balance of an assignment as one CSV row.
    Evaluate(EvaluateArgs),
    /// Convert between hypergraph formats.
    Convert(ConvertArgs),
    /// Run a suite described by a TOML config and write one CSV row per run.
    Bench(BenchArgs),
    /// Performance profile of a results CSV.
    Profile(ProfileArgs),
    /// Improvement of every algorithm over a baseline.
    Improvement(ImprovementArgs),
    /// Write a synthetic instance.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct PartitionArgs {
    input: PathBuf,
    #[arg(short, long, default_value = "freight")]
    algorithm: String,
    #[arg(short, long)]
    k: u32,
    #[arg(short, long, default_value_t = 0.03)]
    epsilon: f64,
    /// Objective of plain `freight`.
    #[arg(long, default_value = "connectivity")]
    objective: Objective,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Assignment file, one 1-based block per line; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Run metadata as JSON.
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct EvaluateArgs {
    input: PathBuf,
    assignment: PathBuf,
    #[arg(short, long)]
    k: u32,
    #[arg(short, long, default_value_t = 0.03)]
    epsilon: f64,
    /// Print the column names first.
    #[arg(long)]
    header: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Hgr,
    Vstream,
    Graph,
}

#[derive(Args)]
struct ConvertArgs {
    /// Taken from the input extension when absent.
    #[arg(long)]
    from: Option<Format>,
    /// Taken from the output extension when absent.
    #[arg(long)]
    to: Option<Format>,
    input: PathBuf,
    output: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(short, long)]
    config: PathBuf,
    /// Overrides `output` of the config; stdout when neither is set.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileArgs {
    results: PathBuf,
    #[arg(short, long, default_value = "connectivity")]
    metric: Metric,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ImprovementArgs {
    results: PathBuf,
    #[arg(short, long, default_value = "hashing")]
    baseline: String,
    #[arg(short, long, default_value = "connectivity")]
    metric: Metric,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateKind {
    RandomHgr {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        avg_pins: u32,
    },
    PowerlawHgr {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 2.5)]
        exponent: f64,
        #[arg(long, default_value_t = 2)]
        min_size: u32,
        #[arg(long, default_value_t = 100)]
        max_size: u32,
        /// Window of consecutive vertex ids each net draws from; 0 for none.
        #[arg(long, default_value_t = 0)]
        locality: u32,
    },
    GridGraph {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        #[arg(long, default_value_t = 1)]
        radius: u32,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Partition(a) => partition(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Convert(a) => convert(a),
        Command::Bench(a) => bench(a),
        Command::Profile(a) => profile(a),
        Command::Improvement(a) => improvement(a),
        Command::Generate(a) => generate(a),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn format_of(path: &Path) -> Result<Format> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("hgr") => Ok(Format::Hgr),
        Some("vstream") => Ok(Format::Vstream),
        Some("graph") | Some("metis") => Ok(Format::Graph),
        _ => bail!("cannot tell the format of {} from its extension", path.display()),
    }
}

fn partition(a: PartitionArgs) -> Result<()> {
    let algorithm = Algorithm::parse(&a.algorithm, a.objective).map_err(anyhow::Error::msg)?;
    let cfg = PartitionConfig {
        epsilon: a.epsilon,
        seed: a.seed,
        gamma: a.gamma,
        alpha: a.alpha,
        ..PartitionConfig::new(algorithm, a.k)
    };
    let path = &a.input;
    let ctx = || format!("partitioning {}", path.display());
    let result = match format_of(path)? {
        Format::Hgr => {
            let h = parse_hgr(path).with_context(ctx)?;
            partition_stream(transpose_to_stream(&h).stream(), &cfg).with_context(ctx)?
        }
        Format::Vstream => {
            let reader = VertexStreamReader::open(path).with_context(ctx)?;
            let header = reader.header();
            if header.vertex_weighted {
                // one extra pass for the total weight that l_max needs
                let mut scan = VertexStreamReader::open(path).with_context(ctx)?;
                let mut total = 0u64;
                while let Some(rec) = scan.next_record().with_context(ctx)? {
                    total += rec.weight;
                }
                let params = params_with_total(header.num_vertices, header.num_nets, total, &cfg)?;
                partition_stream_with(reader, params, &cfg).with_context(ctx)?
            } else {
                partition_stream(reader, &cfg).with_context(ctx)?
            }
        }
        Format::Graph => {
            let g = parse_metis_graph(path).with_context(ctx)?;
            match algorithm {
                Algorithm::Freight(_) => fennel_partition(&g, &cfg).with_context(ctx)?,
                _ => partition_stream(transpose_to_stream(&g.to_hypergraph()).stream(), &cfg)
                    .with_context(ctx)?,
            }
        }
    };
    let mut out = sink(a.output.as_deref())?;
    result.write_assignment(&mut out)?;
    out.flush()?;
    if let Some(meta) = &a.meta {
        std::fs::write(meta, result.metadata_json() + "\n")
            .with_context(|| format!("writing {}", meta.display()))?;
    }
    summarize(&result);
    Ok(())
}

fn summarize(r: &PartitionResult) {
    eprintln!(
        "{}: k={} max_load={} l_max={} overloaded={} stream={:.3}ms ({:.1} ns/pin)",
        r.algorithm,
        r.params.k,
        r.max_load(),
        r.params.l_max,
        r.balance_violations,
        r.timings.stream_ns as f64 / 1e6,
        r.ns_per_pin()
    );
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let file = File::open(&a.assignment).with_context(|| format!("opening {}", a.assignment.display()))?;
    let assignment = read_assignment(io::BufReader::new(file))?;
    let (header, row) = match format_of(&a.input)? {
        Format::Graph => {
            let g = parse_metis_graph(&a.input)?;
            let r = evaluate_graph(&g, &assignment, a.k)?;
            (GraphReport::CSV_HEADER, r.csv_row(a.epsilon))
        }
        f => {
            let h = if f == Format::Hgr {
                parse_hgr(&a.input)?
            } else {
                transpose_to_hgr(&parse_vstream(&a.input)?)
            };
            let r = evaluate(&h, &assignment, a.k)?;
            (EvaluationReport::CSV_HEADER, r.csv_row(a.epsilon))
        }
    };
    if a.header {
        println!("{header}");
    }
    println!("{row}");
    Ok(())
}

fn convert(a: ConvertArgs) -> Result<()> {
    let from = match a.from {
        Some(f) => f,
        None => format_of(&a.input)?,
    };
    let to = match a.to {
        Some(f) => f,
        None => format_of(&a.output)?,
    };
    let h = match from {
        Format::Hgr => parse_hgr(&a.input)?,
        Format::Vstream => transpose_to_hgr(&parse_vstream(&a.input)?),
        Format::Graph => {
            let g = parse_metis_graph(&a.input)?;
            if to == Format::Graph {
                let mut out = sink(Some(&a.output))?;
                write_metis_graph(&g, &mut out)?;
                return Ok(out.flush()?);
            }
            g.to_hypergraph()
        }
    };
    let mut out = sink(Some(&a.output))?;
    match to {
        Format::Hgr => write_hgr(&h, &mut out)?,
        Format::Vstream => {
            if h.net_weights().is_some() {
                eprintln!("warning: net weights have no place in a vertex stream and are dropped");
            }
            write_vstream(&transpose_to_stream(&h), &mut out)?
        }
        Format::Graph => bail!("hypergraphs cannot be written as METIS graphs"),
    }
    out.flush()?;
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let cfg = RunConfig::load(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let table = run_suite(&cfg);
    for f in &table.failures {
        eprintln!("failed: {f}");
    }
    let out_path = a.out.or(cfg.output.clone());
    let mut out = sink(out_path.as_deref())?;
    table.write_csv(&mut out)?;
    out.flush()?;
    eprintln!("{} runs, {} failures", table.rows.len(), table.failures.len());
    Ok(())
}

fn read_table(path: &Path) -> Result<ResultTable> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(ResultTable::read_csv(file)?)
}

fn profile(a: ProfileArgs) -> Result<()> {
    let table = read_table(&a.results)?;
    let points = performance_profile(&table, a.metric);
    let mut out = sink(a.out.as_deref())?;
    write_profile_csv(&points, &mut out)?;
    out.flush()?;
    Ok(())
}

fn improvement(a: ImprovementArgs) -> Result<()> {
    let table = read_table(&a.results)?;
    let rows = improvement_over(&table, &a.baseline, a.metric)?;
    let mut out = sink(a.out.as_deref())?;
    write_improvement_csv(&rows, a.metric, &mut out)?;
    out.flush()?;
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let kind = match a.kind {
        GenerateKind::RandomHgr { n, m, avg_pins } => InstanceKind::RandomHgr { n, m, avg_pins },
        GenerateKind::PowerlawHgr {
            n,
            m,
            exponent,
            min_size,
            max_size,
            locality,
        } => InstanceKind::PowerLawHgr {
            n,
            m,
            exponent,
            min_size,
            max_size,
            locality,
        },
        GenerateKind::GridGraph { rows, cols, radius } => InstanceKind::GridGraph { rows, cols, radius },
    };
    let mut out = sink(a.out.as_deref())?;
    match generate_instance(kind, a.seed)? {
        Generated::Hypergraph(h) => write_hgr(&h, &mut out)?,
        Generated::Graph(g) => write_metis_graph(&g, &mut out)?,
    }
    out.flush()?;
    Ok(())
}
