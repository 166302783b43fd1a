use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{parse_header, parse_num, FormatError, HgrFile, Lines};

/// Counts known before the first record arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamHeader {
    pub num_vertices: usize,
    pub num_nets: usize,
    /// Records carry an explicit vertex weight.
    pub vertex_weighted: bool,
}

/// One streamed vertex with its incident nets, 0-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexRecord<'a> {
    pub id: u32,
    pub weight: u64,
    pub nets: &'a [u32],
}

impl VertexRecord<'_> {
    pub fn to_owned(&self) -> OwnedRecord {
        OwnedRecord {
            id: self.id,
            weight: self.weight,
            nets: self.nets.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnedRecord {
    pub id: u32,
    pub weight: u64,
    pub nets: Vec<u32>,
}

/// A one-pass source of vertex records.
///
/// Each record is lent out until the next call, so a source holds at most
/// one record at a time. Sources are consumed by value by the partitioning
/// drivers; running a second algorithm needs a second source.
pub trait VertexSource {
    fn header(&self) -> StreamHeader;

    fn next_record(&mut self) -> Result<Option<VertexRecord<'_>>, FormatError>;

    /// Net weights when the source knows them. File streams do not.
    fn net_weights(&self) -> Option<&[u64]> {
        None
    }

    /// Sum of vertex weights, if known without consuming the stream.
    fn total_vertex_weight(&self) -> Option<u64> {
        let h = self.header();
        (!h.vertex_weighted).then_some(h.num_vertices as u64)
    }
}

/// A vertex-major hypergraph: record `v` lists the nets incident to `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStreamFile {
    num_nets: usize,
    offsets: Vec<usize>,
    incidences: Vec<u32>,
    vertex_weights: Option<Vec<u64>>,
    /// Not part of the text format; carried when transposed from an hgr.
    net_weights: Option<Vec<u64>>,
}

impl VertexStreamFile {
    pub fn header(&self) -> StreamHeader {
        StreamHeader {
            num_vertices: self.num_vertices(),
            num_nets: self.num_nets,
            vertex_weighted: self.vertex_weights.is_some(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_nets(&self) -> usize {
        self.num_nets
    }

    pub fn num_pins(&self) -> usize {
        self.incidences.len()
    }

    #[inline]
    pub fn nets_of(&self, v: usize) -> &[u32] {
        &self.incidences[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn vertex_weight(&self, v: usize) -> u64 {
        self.vertex_weights.as_ref().map_or(1, |w| w[v])
    }

    pub fn vertex_weights(&self) -> Option<&[u64]> {
        self.vertex_weights.as_deref()
    }

    pub fn net_weights(&self) -> Option<&[u64]> {
        self.net_weights.as_deref()
    }

    pub fn total_vertex_weight(&self) -> u64 {
        self.vertex_weights
            .as_ref()
            .map_or(self.num_vertices() as u64, |w| w.iter().sum())
    }

    pub fn record(&self, v: usize) -> VertexRecord<'_> {
        VertexRecord {
            id: v as u32,
            weight: self.vertex_weight(v),
            nets: self.nets_of(v),
        }
    }

    pub fn stream(&self) -> MemoryStream<'_> {
        MemoryStream { file: self, next: 0 }
    }
}

/// Streams records out of an in-memory [`VertexStreamFile`].
#[derive(Debug)]
pub struct MemoryStream<'a> {
    file: &'a VertexStreamFile,
    next: usize,
}

impl VertexSource for MemoryStream<'_> {
    fn header(&self) -> StreamHeader {
        self.file.header()
    }

    fn next_record(&mut self) -> Result<Option<VertexRecord<'_>>, FormatError> {
        if self.next == self.file.num_vertices() {
            return Ok(None);
        }
        self.next += 1;
        Ok(Some(self.file.record(self.next - 1)))
    }

    fn net_weights(&self) -> Option<&[u64]> {
        self.file.net_weights()
    }

    fn total_vertex_weight(&self) -> Option<u64> {
        Some(self.file.total_vertex_weight())
    }
}

/// Transposes net-major pins into per-vertex incident-net lists, each in
/// ascending net order.
pub fn transpose_to_stream(h: &HgrFile) -> VertexStreamFile {
    let n = h.num_vertices();
    let mut offsets = vec![0usize; n + 1];
    for net in h.nets() {
        for &p in net {
            offsets[p as usize + 1] += 1;
        }
    }
    for v in 0..n {
        offsets[v + 1] += offsets[v];
    }
    let mut cursor = offsets.clone();
    let mut incidences = vec![0u32; h.num_pins()];
    for (e, net) in h.nets().enumerate() {
        for &p in net {
            incidences[cursor[p as usize]] = e as u32;
            cursor[p as usize] += 1;
        }
    }
    VertexStreamFile {
        num_nets: h.num_nets(),
        offsets,
        incidences,
        vertex_weights: h.vertex_weights().map(<[u64]>::to_vec),
        net_weights: h.net_weights().map(<[u64]>::to_vec),
    }
}

/// Inverse of [`transpose_to_stream`]. The result goes through the usual
/// hypergraph cleaning, so nets without pins disappear.
pub fn transpose_to_hgr(f: &VertexStreamFile) -> HgrFile {
    let mut nets = vec![Vec::new(); f.num_nets()];
    for v in 0..f.num_vertices() {
        for &e in f.nets_of(v) {
            nets[e as usize].push(v as u32);
        }
    }
    HgrFile::new(
        f.num_vertices(),
        nets,
        f.net_weights.clone(),
        f.vertex_weights.clone(),
    )
    .expect("vertex stream ids are validated on construction")
}

/// Streams records from a `.vstream` text source, one line at a time.
pub struct VertexStreamReader<R> {
    lines: Lines<R>,
    header: StreamHeader,
    next: usize,
    nets: Vec<u32>,
    finished: bool,
}

impl VertexStreamReader<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, FormatError> {
        Self::new(BufReader::new(File::open(path)?))
    }
}

impl<R: BufRead> VertexStreamReader<R> {
    pub fn new(reader: R) -> Result<Self, FormatError> {
        let mut lines = Lines::new(reader);
        let (line, n, m, flags) = parse_header(&mut lines)?;
        if flags.edges {
            return Err(FormatError::malformed(
                line,
                "vertex streams carry no net weights (format code 0 or 10)",
            ));
        }
        Ok(Self {
            lines,
            header: StreamHeader {
                num_vertices: n as usize,
                num_nets: m as usize,
                vertex_weighted: flags.vertices,
            },
            next: 0,
            nets: Vec::new(),
            finished: false,
        })
    }
}

impl<R: BufRead> VertexSource for VertexStreamReader<R> {
    fn header(&self) -> StreamHeader {
        self.header
    }

    fn next_record(&mut self) -> Result<Option<VertexRecord<'_>>, FormatError> {
        if self.next == self.header.num_vertices {
            if !self.finished {
                self.lines.expect_end()?;
                self.finished = true;
            }
            return Ok(None);
        }
        let Some((line, text)) = self.lines.next_line()? else {
            return Err(FormatError::Truncated {
                what: "vertex records",
                expected: self.header.num_vertices,
                found: self.next,
            });
        };
        let mut tokens = text.split_ascii_whitespace();
        let weight = if self.header.vertex_weighted {
            match tokens.next() {
                Some(t) => parse_num(t, line)?,
                None => return Err(FormatError::malformed(line, "missing vertex weight")),
            }
        } else {
            1
        };
        let m = self.header.num_nets as u64;
        self.nets.clear();
        for token in tokens {
            let id = parse_num(token, line)?;
            if id == 0 || id > m {
                return Err(FormatError::NetOutOfRange { line, id, max: m });
            }
            self.nets.push((id - 1) as u32);
        }
        self.next += 1;
        Ok(Some(VertexRecord {
            id: (self.next - 1) as u32,
            weight,
            nets: &self.nets,
        }))
    }
}

pub fn parse_vstream(path: impl AsRef<Path>) -> Result<VertexStreamFile, FormatError> {
    read_vstream(BufReader::new(File::open(path)?))
}

/// Reads a whole vertex stream into memory.
pub fn read_vstream(reader: impl BufRead) -> Result<VertexStreamFile, FormatError> {
    let mut source = VertexStreamReader::new(reader)?;
    let header = source.header();
    let mut offsets = Vec::with_capacity(header.num_vertices + 1);
    offsets.push(0);
    let mut incidences = Vec::new();
    let mut weights = header
        .vertex_weighted
        .then(|| Vec::with_capacity(header.num_vertices));
    while let Some(rec) = source.next_record()? {
        incidences.extend_from_slice(rec.nets);
        offsets.push(incidences.len());
        if let Some(w) = weights.as_mut() {
            w.push(rec.weight);
        }
    }
    Ok(VertexStreamFile {
        num_nets: header.num_nets,
        offsets,
        incidences,
        vertex_weights: weights,
        net_weights: None,
    })
}

/// Writes the text form. Net weights have no place in the format and are
/// dropped.
pub fn write_vstream(f: &VertexStreamFile, mut out: impl Write) -> std::io::Result<()> {
    write!(out, "{} {}", f.num_vertices(), f.num_nets())?;
    if f.vertex_weights.is_some() {
        write!(out, " 10")?;
    }
    writeln!(out)?;
    for v in 0..f.num_vertices() {
        let mut first = true;
        if f.vertex_weights.is_some() {
            write!(out, "{}", f.vertex_weight(v))?;
            first = false;
        }
        for &e in f.nets_of(v) {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{}", e + 1)?;
            first = false;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::read_hgr;

    fn records(f: &VertexStreamFile) -> Vec<Vec<u32>> {
        (0..f.num_vertices())
            .map(|v| f.nets_of(v).iter().map(|e| e + 1).collect())
            .collect()
    }

    #[test]
    fn transpose_small() {
        let h = read_hgr("2 3\n1 2\n2 3\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        assert_eq!(records(&f), vec![vec![1], vec![1, 2], vec![2]]);
        assert_eq!(f.num_pins(), h.num_pins());

        let h = read_hgr("1 1\n1\n".as_bytes()).unwrap();
        assert_eq!(records(&transpose_to_stream(&h)), vec![vec![1]]);
    }

    #[test]
    fn weights_carried_through() {
        let h = read_hgr("2 3 11\n4 1 2\n1 2 3\n7\n8\n9\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        assert_eq!(f.vertex_weights(), Some(&[7, 8, 9][..]));
        assert_eq!(f.net_weights(), Some(&[4, 1][..]));
        assert_eq!(transpose_to_hgr(&f), h);
    }

    #[test]
    fn reader_yields_in_order() {
        let text = "3 2\n1\n1 2\n2\n";
        let mut r = VertexStreamReader::new(text.as_bytes()).unwrap();
        let mut seen = Vec::new();
        while let Some(rec) = r.next_record().unwrap() {
            seen.push(rec.to_owned());
        }
        assert_eq!(
            seen.iter().map(|r| (r.id, r.nets.clone())).collect::<Vec<_>>(),
            vec![(0, vec![0]), (1, vec![0, 1]), (2, vec![1])]
        );
        assert!(r.next_record().unwrap().is_none());
    }

    #[test]
    fn isolated_vertex_record() {
        let mut r = VertexStreamReader::new("2 1\n\n1\n".as_bytes()).unwrap();
        let rec = r.next_record().unwrap().unwrap().to_owned();
        assert_eq!((rec.id, rec.weight, rec.nets), (0, 1, vec![]));
    }

    #[test]
    fn weighted_records() {
        let f = read_vstream("2 1 10\n5 1\n0\n".as_bytes()).unwrap();
        assert_eq!(f.vertex_weights(), Some(&[5, 0][..]));
        assert_eq!(records(&f), vec![vec![1], vec![]]);
        assert!(read_vstream("1 1 10\n\n".as_bytes()).is_err());
        assert!(read_vstream("1 1 1\n1\n".as_bytes()).is_err());
    }

    #[test]
    fn truncated_stream() {
        let err = read_vstream("3 2\n1\n1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            FormatError::Truncated {
                expected: 3,
                found: 2,
                ..
            }
        ));
    }

    #[test]
    fn net_id_range() {
        let err = read_vstream("1 2\n3\n".as_bytes()).unwrap_err();
        assert_eq!(err.to_string(), "line 2: net id 3 out of range [1,2]");
        assert!(read_vstream("1 2\n1\n2\n".as_bytes()).is_err());
    }

    #[test]
    fn unsorted_input_accepted() {
        let f = read_vstream("1 3\n3 1 2\n".as_bytes()).unwrap();
        assert_eq!(records(&f), vec![vec![3, 1, 2]]);
        // three single-pin nets with equal pin sets merge into one
        let h = transpose_to_hgr(&f);
        assert_eq!((h.num_nets(), h.net_weight(0)), (1, 3));
    }

    #[test]
    fn write_matches_text() {
        let text = "3 2\n1\n1 2\n2\n";
        let f = read_vstream(text.as_bytes()).unwrap();
        let mut out = Vec::new();
        write_vstream(&f, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), text);
    }

    #[test]
    fn memory_stream_matches_file() {
        let h = read_hgr("3 4\n1 2\n2 3 4\n1 4\n".as_bytes()).unwrap();
        let f = transpose_to_stream(&h);
        let mut text = Vec::new();
        write_vstream(&f, &mut text).unwrap();
        let mut a = f.stream();
        let mut b = VertexStreamReader::new(text.as_slice()).unwrap();
        assert_eq!(a.header(), b.header());
        loop {
            let x = a.next_record().unwrap().map(|r| r.to_owned());
            let y = b.next_record().unwrap().map(|r| r.to_owned());
            assert_eq!(x, y);
            if x.is_none() {
                break;
            }
        }
    }
}
