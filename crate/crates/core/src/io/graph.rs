use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{parse_header, parse_num, FormatError, HgrFile, Lines, WeightFlags};

/// An undirected graph in METIS adjacency form, 0-indexed.
///
/// Adjacency lists are sorted, free of self-loops and duplicate entries, and
/// symmetric including edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
    edge_weights: Option<Vec<u64>>,
    vertex_weights: Option<Vec<u64>>,
}

impl GraphFile {
    /// Builds a graph from weighted adjacency lists, cleaning and then
    /// checking symmetry.
    pub fn from_adjacency(
        lists: Vec<Vec<(u32, u64)>>,
        vertex_weights: Option<Vec<u64>>,
        edge_weighted: bool,
    ) -> Result<Self, FormatError> {
        let n = lists.len();
        if let Some(w) = &vertex_weights {
            if w.len() != n {
                return Err(FormatError::CountMismatch {
                    what: "vertex weights",
                    declared: n as u64,
                    found: w.len() as u64,
                });
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut adjacency = Vec::new();
        let mut weights = Vec::new();
        for (u, mut list) in lists.into_iter().enumerate() {
            list.retain(|&(v, _)| v as usize != u);
            list.sort_unstable_by_key(|&(v, _)| v);
            let start = adjacency.len();
            for (v, w) in list {
                if let Some(&last) = adjacency[start..].last() {
                    if last == v {
                        *weights.last_mut().unwrap() += w;
                        continue;
                    }
                }
                if v as usize >= n {
                    return Err(FormatError::NeighborOutOfRange {
                        line: u + 2,
                        id: v as u64 + 1,
                        max: n as u64,
                    });
                }
                adjacency.push(v);
                weights.push(w);
            }
            offsets.push(adjacency.len());
        }
        let g = Self {
            offsets,
            adjacency,
            edge_weights: edge_weighted.then_some(weights),
            vertex_weights,
        };
        g.check_symmetry()?;
        Ok(g)
    }

    fn check_symmetry(&self) -> Result<(), FormatError> {
        for u in 0..self.num_vertices() {
            for (i, &v) in self.neighbors(u).iter().enumerate() {
                let w = self.edge_weight_at(u, i);
                let back = self.neighbors(v as usize).binary_search(&(u as u32));
                match back {
                    Ok(j) if self.edge_weight_at(v as usize, j) == w => {}
                    _ => {
                        return Err(FormatError::Asymmetric {
                            from: u as u64 + 1,
                            to: v as u64 + 1,
                        })
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge weights parallel to [`neighbors`](Self::neighbors), if weighted.
    #[inline]
    pub fn neighbor_weights(&self, v: usize) -> Option<&[u64]> {
        self.edge_weights
            .as_ref()
            .map(|w| &w[self.offsets[v]..self.offsets[v + 1]])
    }

    #[inline]
    fn edge_weight_at(&self, v: usize, i: usize) -> u64 {
        self.edge_weights
            .as_ref()
            .map_or(1, |w| w[self.offsets[v] + i])
    }

    #[inline]
    pub fn vertex_weight(&self, v: usize) -> u64 {
        self.vertex_weights.as_ref().map_or(1, |w| w[v])
    }

    pub fn vertex_weights(&self) -> Option<&[u64]> {
        self.vertex_weights.as_deref()
    }

    pub fn is_edge_weighted(&self) -> bool {
        self.edge_weights.is_some()
    }

    pub fn total_vertex_weight(&self) -> u64 {
        self.vertex_weights
            .as_ref()
            .map_or(self.num_vertices() as u64, |w| w.iter().sum())
    }

    /// Every edge as a two-pin net carrying the edge weight.
    pub fn to_hypergraph(&self) -> HgrFile {
        let mut nets = Vec::with_capacity(self.num_edges());
        let mut weights = Vec::with_capacity(self.num_edges());
        for v in 0..self.num_vertices() {
            let w = self.neighbor_weights(v);
            for (i, &u) in self.neighbors(v).iter().enumerate() {
                if u as usize > v {
                    nets.push(vec![v as u32, u]);
                    weights.push(w.map_or(1, |w| w[i]));
                }
            }
        }
        let net_weights = self.is_edge_weighted().then_some(weights);
        HgrFile::new(self.num_vertices(), nets, net_weights, self.vertex_weights.clone())
            .expect("a cleaned graph has valid pins and no parallel edges")
    }
}

pub fn parse_metis_graph(path: impl AsRef<Path>) -> Result<GraphFile, FormatError> {
    read_metis_graph(BufReader::new(File::open(path)?))
}

pub fn read_metis_graph(reader: impl BufRead) -> Result<GraphFile, FormatError> {
    let mut lines = Lines::new(reader);
    let (_, n, m, flags) = parse_header(&mut lines)?;
    let n = n as usize;
    let mut lists = Vec::with_capacity(n);
    let mut vertex_weights = flags.vertices.then(|| Vec::with_capacity(n));
    let mut raw_entries = 0u64;
    for found in 0..n {
        let Some((line, text)) = lines.next_line()? else {
            return Err(FormatError::Truncated {
                what: "adjacency lines",
                expected: n,
                found,
            });
        };
        let mut tokens = text.split_ascii_whitespace();
        if let Some(w) = vertex_weights.as_mut() {
            match tokens.next() {
                Some(t) => w.push(parse_num(t, line)?),
                None => return Err(FormatError::malformed(line, "missing vertex weight")),
            }
        }
        let mut list = Vec::new();
        while let Some(t) = tokens.next() {
            let id = parse_num(t, line)?;
            if id == 0 || id > n as u64 {
                return Err(FormatError::NeighborOutOfRange {
                    line,
                    id,
                    max: n as u64,
                });
            }
            let w = if flags.edges {
                let w = match tokens.next() {
                    Some(t) => parse_num(t, line)?,
                    None => return Err(FormatError::malformed(line, "missing edge weight")),
                };
                if w == 0 {
                    return Err(FormatError::malformed(line, "edge weight must be positive"));
                }
                w
            } else {
                1
            };
            list.push(((id - 1) as u32, w));
        }
        raw_entries += list.len() as u64;
        lists.push(list);
    }
    lines.expect_end()?;

    let g = GraphFile::from_adjacency(lists, vertex_weights, flags.edges)?;
    // Headers written before cleaning may still count self-loops or repeats.
    if g.num_edges() as u64 != m && raw_entries != 2 * m {
        return Err(FormatError::CountMismatch {
            what: "edges",
            declared: m,
            found: g.num_edges() as u64,
        });
    }
    Ok(g)
}

pub fn write_metis_graph(g: &GraphFile, mut out: impl Write) -> std::io::Result<()> {
    write!(out, "{} {}", g.num_vertices(), g.num_edges())?;
    let flags = WeightFlags {
        edges: g.edge_weights.is_some(),
        vertices: g.vertex_weights.is_some(),
    };
    if let Some(code) = flags.code() {
        write!(out, " {code}")?;
    }
    writeln!(out)?;
    for v in 0..g.num_vertices() {
        let mut first = true;
        if flags.vertices {
            write!(out, "{}", g.vertex_weight(v))?;
            first = false;
        }
        for (i, &u) in g.neighbors(v).iter().enumerate() {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{}", u + 1)?;
            if flags.edges {
                write!(out, " {}", g.edge_weight_at(v, i))?;
            }
            first = false;
        }
        writeln!(out)?;
    }
    Ok(())
}
