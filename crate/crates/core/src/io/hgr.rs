use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{parse_header, parse_num, FormatError, Lines, WeightFlags};

/// A cleaned hypergraph in compressed net-major form.
///
/// Construction sorts every pin list, drops duplicate pins, removes empty
/// nets and merges parallel nets (identical pin sets) into their first
/// occurrence, summing their weights.
#[derive(Debug, Clone)]
pub struct HgrFile {
    num_vertices: usize,
    net_offsets: Vec<usize>,
    pins: Vec<u32>,
    net_weights: Option<Vec<u64>>,
    vertex_weights: Option<Vec<u64>>,
    cleaning: CleaningStats,
}

/// Equality is structural; how a hypergraph was cleaned does not matter.
impl PartialEq for HgrFile {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices
            && self.net_offsets == other.net_offsets
            && self.pins == other.pins
            && self.net_weights == other.net_weights
            && self.vertex_weights == other.vertex_weights
    }
}

impl Eq for HgrFile {}

/// What cleaning removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CleaningStats {
    pub duplicate_pins: usize,
    pub empty_nets: usize,
    pub parallel_nets: usize,
}

impl HgrFile {
    /// Builds and cleans a hypergraph from 0-indexed pin lists.
    pub fn new(
        num_vertices: usize,
        nets: Vec<Vec<u32>>,
        net_weights: Option<Vec<u64>>,
        vertex_weights: Option<Vec<u64>>,
    ) -> Result<Self, FormatError> {
        if let Some(w) = &net_weights {
            if w.len() != nets.len() {
                return Err(FormatError::CountMismatch {
                    what: "net weights",
                    declared: nets.len() as u64,
                    found: w.len() as u64,
                });
            }
        }
        if let Some(w) = &vertex_weights {
            if w.len() != num_vertices {
                return Err(FormatError::CountMismatch {
                    what: "vertex weights",
                    declared: num_vertices as u64,
                    found: w.len() as u64,
                });
            }
        }
        for (e, net) in nets.iter().enumerate() {
            if let Some(&bad) = net.iter().find(|&&p| p as usize >= num_vertices) {
                return Err(FormatError::PinOutOfRange {
                    line: e + 2,
                    id: bad as u64 + 1,
                    max: num_vertices as u64,
                });
            }
        }
        Ok(Self::clean(num_vertices, nets, net_weights, vertex_weights))
    }

    fn clean(
        num_vertices: usize,
        mut nets: Vec<Vec<u32>>,
        net_weights: Option<Vec<u64>>,
        vertex_weights: Option<Vec<u64>>,
    ) -> Self {
        let mut stats = CleaningStats::default();
        for net in &mut nets {
            let before = net.len();
            net.sort_unstable();
            net.dedup();
            stats.duplicate_pins += before - net.len();
        }
        let explicit_weights = net_weights.is_some();
        let mut weights = net_weights.unwrap_or_else(|| vec![1; nets.len()]);

        // Group identical pin sets; the first occurrence absorbs the rest.
        let mut keep = vec![true; nets.len()];
        let mut idx: Vec<usize> = (0..nets.len()).filter(|&e| !nets[e].is_empty()).collect();
        stats.empty_nets = nets.len() - idx.len();
        for (e, net) in nets.iter().enumerate() {
            if net.is_empty() {
                keep[e] = false;
            }
        }
        idx.sort_by(|&a, &b| nets[a].cmp(&nets[b]).then(a.cmp(&b)));
        let mut i = 0;
        while i < idx.len() {
            let head = idx[i];
            let mut j = i + 1;
            while j < idx.len() && nets[idx[j]] == nets[head] {
                weights[head] += weights[idx[j]];
                keep[idx[j]] = false;
                stats.parallel_nets += 1;
                j += 1;
            }
            i = j;
        }

        let had_net_weights = explicit_weights || stats.parallel_nets > 0;
        let mut net_offsets = Vec::with_capacity(nets.len() + 1);
        net_offsets.push(0);
        let mut pins = Vec::with_capacity(nets.iter().map(Vec::len).sum());
        let mut kept_weights = Vec::new();
        for (e, net) in nets.into_iter().enumerate() {
            if keep[e] {
                pins.extend_from_slice(&net);
                net_offsets.push(pins.len());
                kept_weights.push(weights[e]);
            }
        }
        Self {
            num_vertices,
            net_offsets,
            pins,
            net_weights: had_net_weights.then_some(kept_weights),
            vertex_weights,
            cleaning: stats,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_nets(&self) -> usize {
        self.net_offsets.len() - 1
    }

    pub fn num_pins(&self) -> usize {
        self.pins.len()
    }

    #[inline]
    pub fn net(&self, e: usize) -> &[u32] {
        &self.pins[self.net_offsets[e]..self.net_offsets[e + 1]]
    }

    pub fn nets(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.num_nets()).map(move |e| self.net(e))
    }

    #[inline]
    pub fn net_weight(&self, e: usize) -> u64 {
        self.net_weights.as_ref().map_or(1, |w| w[e])
    }

    #[inline]
    pub fn vertex_weight(&self, v: usize) -> u64 {
        self.vertex_weights.as_ref().map_or(1, |w| w[v])
    }

    pub fn net_weights(&self) -> Option<&[u64]> {
        self.net_weights.as_deref()
    }

    pub fn vertex_weights(&self) -> Option<&[u64]> {
        self.vertex_weights.as_deref()
    }

    pub fn total_vertex_weight(&self) -> u64 {
        self.vertex_weights
            .as_ref()
            .map_or(self.num_vertices as u64, |w| w.iter().sum())
    }

    /// hMetis format code implied by the weights present, if any.
    pub fn fmt_code(&self) -> Option<&'static str> {
        WeightFlags {
            edges: self.net_weights.is_some(),
            vertices: self.vertex_weights.is_some(),
        }
        .code()
    }

    pub fn cleaning(&self) -> CleaningStats {
        self.cleaning
    }
}

pub fn parse_hgr(path: impl AsRef<Path>) -> Result<HgrFile, FormatError> {
    read_hgr(BufReader::new(File::open(path)?))
}

pub fn read_hgr(reader: impl BufRead) -> Result<HgrFile, FormatError> {
    let mut lines = Lines::new(reader);
    let (_, m, n, flags) = parse_header(&mut lines)?;
    let (m, n) = (m as usize, n as usize);

    let mut nets = Vec::with_capacity(m);
    let mut net_weights = flags.edges.then(|| Vec::with_capacity(m));
    for found in 0..m {
        let Some((line, text)) = lines.next_line()? else {
            return Err(FormatError::Truncated {
                what: "net lines",
                expected: m,
                found,
            });
        };
        let mut tokens = text.split_ascii_whitespace();
        if let Some(weights) = net_weights.as_mut() {
            let w = match tokens.next() {
                Some(t) => parse_num(t, line)?,
                None => return Err(FormatError::malformed(line, "missing net weight")),
            };
            if w == 0 {
                return Err(FormatError::malformed(line, "net weight must be positive"));
            }
            weights.push(w);
        }
        let mut net = Vec::new();
        for token in tokens {
            let id = parse_num(token, line)?;
            if id == 0 || id > n as u64 {
                return Err(FormatError::PinOutOfRange {
                    line,
                    id,
                    max: n as u64,
                });
            }
            net.push((id - 1) as u32);
        }
        nets.push(net);
    }

    let vertex_weights = if flags.vertices {
        let mut weights = Vec::with_capacity(n);
        while weights.len() < n {
            let Some((line, text)) = lines.next_line()? else {
                return Err(FormatError::Truncated {
                    what: "vertex weight lines",
                    expected: n,
                    found: weights.len(),
                });
            };
            let mut tokens = text.split_ascii_whitespace();
            let w = match tokens.next() {
                Some(t) => parse_num(t, line)?,
                None => return Err(FormatError::malformed(line, "missing vertex weight")),
            };
            if tokens.next().is_some() {
                return Err(FormatError::malformed(line, "expected a single vertex weight"));
            }
            weights.push(w);
        }
        Some(weights)
    } else {
        None
    };
    lines.expect_end()?;

    Ok(HgrFile::clean(n, nets, net_weights, vertex_weights))
}

pub fn write_hgr(h: &HgrFile, mut out: impl Write) -> std::io::Result<()> {
    write!(out, "{} {}", h.num_nets(), h.num_vertices())?;
    if let Some(code) = h.fmt_code() {
        write!(out, " {code}")?;
    }
    writeln!(out)?;
    for (e, net) in h.nets().enumerate() {
        let mut first = true;
        if h.net_weights.is_some() {
            write!(out, "{}", h.net_weight(e))?;
            first = false;
        }
        for &p in net {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{}", p + 1)?;
            first = false;
        }
        writeln!(out)?;
    }
    if let Some(weights) = &h.vertex_weights {
        for w in weights {
            writeln!(out, "{w}")?;
        }
    }
    Ok(())
}
