use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::io::{GraphFile, HgrFile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InstanceKind {
    /// `m` nets with sizes uniform in `[1, 2 * avg_pins - 1]`, pins uniform.
    RandomHgr { n: u32, m: u32, avg_pins: u32 },
    /// Net sizes follow a discrete power law on `[min_size, max_size]`.
    /// With `locality > 0` each net draws its pins from a window of
    /// `locality` consecutive vertex ids around a uniform center.
    PowerLawHgr {
        n: u32,
        m: u32,
        exponent: f64,
        min_size: u32,
        max_size: u32,
        locality: u32,
    },
    /// Vertices on a `rows x cols` grid, joined when their Manhattan
    /// distance is at most `radius`.
    GridGraph { rows: u32, cols: u32, radius: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generated {
    Hypergraph(HgrFile),
    Graph(GraphFile),
}

impl Generated {
    pub fn into_hypergraph(self) -> Option<HgrFile> {
        match self {
            Generated::Hypergraph(h) => Some(h),
            Generated::Graph(_) => None,
        }
    }

    pub fn into_graph(self) -> Option<GraphFile> {
        match self {
            Generated::Graph(g) => Some(g),
            Generated::Hypergraph(_) => None,
        }
    }
}

/// `P(s) ~ s^-exponent` for `s` in `[min, max]`, sampled by inverse CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawSizes {
    min: u32,
    cdf: Vec<f64>,
}

impl PowerLawSizes {
    pub fn new(exponent: f64, min: u32, max: u32) -> Result<Self, HarnessError> {
        if min == 0 || min > max {
            return Err(HarnessError::InvalidParams(format!("size range [{min}, {max}]")));
        }
        if !(exponent > 0.0) {
            return Err(HarnessError::InvalidParams(format!("exponent {exponent}")));
        }
        let mut cdf = Vec::with_capacity((max - min + 1) as usize);
        let mut acc = 0.0;
        for s in min..=max {
            acc += (s as f64).powf(-exponent);
            cdf.push(acc);
        }
        for c in &mut cdf {
            *c /= acc;
        }
        *cdf.last_mut().expect("non-empty") = 1.0;
        Ok(Self { min, cdf })
    }

    /// `P(S <= s)`.
    pub fn cdf(&self, s: u32) -> f64 {
        if s < self.min {
            0.0
        } else {
            self.cdf
                .get((s - self.min) as usize)
                .copied()
                .unwrap_or(1.0)
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> u32 {
        let u: f64 = rng.random();
        self.min + self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1) as u32
    }
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::InvalidParams(msg.into())
}

/// Deterministic for a given `(kind, seed)`. Hypergraphs come out cleaned,
/// so merged parallel nets show up as net weights.
pub fn generate_instance(kind: InstanceKind, seed: u64) -> Result<Generated, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        InstanceKind::RandomHgr { n, m, avg_pins } => {
            if n == 0 || m == 0 || avg_pins == 0 {
                return Err(invalid("n, m and avg_pins must be positive"));
            }
            if avg_pins > n {
                return Err(invalid(format!("avg_pins {avg_pins} exceeds n = {n}")));
            }
            let hi = (2 * avg_pins - 1).min(n);
            let nets = (0..m)
                .map(|_| {
                    let size = rng.random_range(1..=hi);
                    pins(&mut rng, 0, n, size)
                })
                .collect();
            hypergraph(n, nets)
        }
        InstanceKind::PowerLawHgr {
            n,
            m,
            exponent,
            min_size,
            max_size,
            locality,
        } => {
            if n == 0 || m == 0 {
                return Err(invalid("n and m must be positive"));
            }
            if max_size > n {
                return Err(invalid(format!("max_size {max_size} exceeds n = {n}")));
            }
            if locality != 0 && locality < max_size {
                return Err(invalid(format!("locality {locality} below max_size {max_size}")));
            }
            let sizes = PowerLawSizes::new(exponent, min_size, max_size)?;
            let window = if locality == 0 { n } else { locality.min(n) };
            let nets = (0..m)
                .map(|_| {
                    let size = sizes.sample(&mut rng);
                    let center = rng.random_range(0..n);
                    let start = center.saturating_sub(window / 2).min(n - window);
                    pins(&mut rng, start, window, size)
                })
                .collect();
            hypergraph(n, nets)
        }
        InstanceKind::GridGraph { rows, cols, radius } => {
            if rows == 0 || cols == 0 || radius == 0 {
                return Err(invalid("rows, cols and radius must be positive"));
            }
            let (rows, cols, r) = (rows as i64, cols as i64, radius as i64);
            if rows * cols > u32::MAX as i64 {
                return Err(invalid("grid too large"));
            }
            let mut lists = Vec::with_capacity((rows * cols) as usize);
            for i in 0..rows {
                for j in 0..cols {
                    let mut adj = Vec::new();
                    for di in -r..=r {
                        let rest = r - di.abs();
                        for dj in -rest..=rest {
                            let (a, b) = (i + di, j + dj);
                            if (di, dj) != (0, 0) && (0..rows).contains(&a) && (0..cols).contains(&b) {
                                adj.push(((a * cols + b) as u32, 1));
                            }
                        }
                    }
                    lists.push(adj);
                }
            }
            GraphFile::from_adjacency(lists, None, false)
                .map(Generated::Graph)
                .map_err(|e| invalid(e.to_string()))
        }
    }
}

fn pins(rng: &mut ChaCha8Rng, start: u32, window: u32, size: u32) -> Vec<u32> {
    sample(rng, window as usize, size as usize)
        .into_iter()
        .map(|i| start + i as u32)
        .collect()
}

fn hypergraph(n: u32, nets: Vec<Vec<u32>>) -> Result<Generated, HarnessError> {
    HgrFile::new(n as usize, nets, None, None)
        .map(Generated::Hypergraph)
        .map_err(|e| invalid(e.to_string()))
}
