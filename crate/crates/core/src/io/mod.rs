//! Text formats: hMetis `.hgr`, the vertex-stream `.vstream`, and METIS
//! `.graph`.
//!
//! All formats are ASCII, whitespace separated and 1-indexed on disk. In
//! memory every id is 0-indexed. Lines starting with `%` are comments.
//! Unweighted files imply unit weights.

mod graph;
mod hgr;
mod vstream;

pub use graph::{parse_metis_graph, read_metis_graph, write_metis_graph, GraphFile};
pub use hgr::{parse_hgr, read_hgr, write_hgr, CleaningStats, HgrFile};
pub use vstream::{
    parse_vstream, read_vstream, transpose_to_hgr, transpose_to_stream, write_vstream,
    MemoryStream, OwnedRecord, StreamHeader, VertexRecord, VertexSource, VertexStreamFile,
    VertexStreamReader,
};

use std::io::BufRead;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: pin id {id} out of range [1,{max}]")]
    PinOutOfRange { line: usize, id: u64, max: u64 },
    #[error("line {line}: net id {id} out of range [1,{max}]")]
    NetOutOfRange { line: usize, id: u64, max: u64 },
    #[error("line {line}: neighbor id {id} out of range [1,{max}]")]
    NeighborOutOfRange { line: usize, id: u64, max: u64 },
    #[error("line {line}: non-numeric token {token:?}")]
    NotANumber { line: usize, token: String },
    #[error("truncated input: expected {expected} {what}, found {found}")]
    Truncated {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("asymmetric adjacency: vertex {from} lists {to} but {to} does not list {from}")]
    Asymmetric { from: u64, to: u64 },
    #[error("header declares {declared} {what} but the body has {found}")]
    CountMismatch {
        what: &'static str,
        declared: u64,
        found: u64,
    },
}

impl FormatError {
    pub(crate) fn malformed(line: usize, message: impl Into<String>) -> Self {
        Self::Malformed {
            line,
            message: message.into(),
        }
    }
}

/// Weight-flag token of a header line (`fmt` in hMetis/METIS terms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct WeightFlags {
    /// Net weights (hgr) or edge weights (graph).
    pub edges: bool,
    pub vertices: bool,
}

impl WeightFlags {
    pub(crate) fn parse(token: Option<&str>, line: usize) -> Result<Self, FormatError> {
        match token {
            None | Some("0") | Some("00") => Ok(Self::default()),
            Some("1") | Some("01") => Ok(Self {
                edges: true,
                vertices: false,
            }),
            Some("10") => Ok(Self {
                edges: false,
                vertices: true,
            }),
            Some("11") => Ok(Self {
                edges: true,
                vertices: true,
            }),
            Some(other) => Err(FormatError::malformed(
                line,
                format!("unsupported format code {other:?}"),
            )),
        }
    }

    pub(crate) fn code(self) -> Option<&'static str> {
        match (self.vertices, self.edges) {
            (false, false) => None,
            (false, true) => Some("1"),
            (true, false) => Some("10"),
            (true, true) => Some("11"),
        }
    }
}

/// Line reader that skips `%` comments and tracks 1-based line numbers.
pub(crate) struct Lines<R> {
    inner: R,
    buf: String,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    pub(crate) fn new(inner: R) -> Self {
        Self {
            inner,
            buf: String::new(),
            line: 0,
        }
    }

    /// Next non-comment line with its number, or `None` at EOF.
    pub(crate) fn next_line(&mut self) -> Result<Option<(usize, &str)>, FormatError> {
        loop {
            self.buf.clear();
            if self.inner.read_line(&mut self.buf)? == 0 {
                return Ok(None);
            }
            self.line += 1;
            if !self.buf.trim_start().starts_with('%') {
                let trimmed = self.buf.trim_end_matches(['\n', '\r']);
                return Ok(Some((self.line, trimmed)));
            }
        }
    }

    /// Fails if anything but blank lines remains.
    pub(crate) fn expect_end(&mut self) -> Result<(), FormatError> {
        while let Some((line, text)) = self.next_line()? {
            if !text.trim().is_empty() {
                return Err(FormatError::malformed(line, "unexpected trailing data"));
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_num(token: &str, line: usize) -> Result<u64, FormatError> {
    token.parse::<u64>().map_err(|_| FormatError::NotANumber {
        line,
        token: token.to_owned(),
    })
}

/// Parses a header line of two counts plus an optional format code.
pub(crate) fn parse_header(
    lines: &mut Lines<impl BufRead>,
) -> Result<(usize, u64, u64, WeightFlags), FormatError> {
    let (line, text) = loop {
        match lines.next_line()? {
            None => return Err(FormatError::malformed(0, "missing header line")),
            Some((_, t)) if t.trim().is_empty() => continue,
            Some((l, t)) => break (l, t.to_owned()),
        }
    };
    let mut tokens = text.split_ascii_whitespace();
    let first = tokens
        .next()
        .ok_or_else(|| FormatError::malformed(line, "malformed header"))?;
    let second = tokens
        .next()
        .ok_or_else(|| FormatError::malformed(line, "malformed header: expected two counts"))?;
    let a = parse_num(first, line)?;
    let b = parse_num(second, line)?;
    let flags = WeightFlags::parse(tokens.next(), line)?;
    if tokens.next().is_some() {
        return Err(FormatError::malformed(line, "malformed header: too many fields"));
    }
    Ok((line, a, b, flags))
}
