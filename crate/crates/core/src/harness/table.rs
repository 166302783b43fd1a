use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// One (instance, algorithm, k, repetition) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub algorithm: String,
    pub k: u32,
    pub repetition: u32,
    pub seed: u64,
    pub cutnet: u64,
    pub connectivity: u64,
    pub imbalance: f64,
    pub balanced: bool,
    pub runtime_ns: u64,
    pub ns_per_pin: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteFailure {
    pub instance: String,
    pub algorithm: Option<String>,
    pub k: Option<u32>,
    pub message: String,
}

impl std::fmt::Display for SuiteFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.instance)?;
        if let Some(a) = &self.algorithm {
            write!(f, " {a}")?;
        }
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
    pub failures: Vec<SuiteFailure>,
}

impl ResultTable {
    pub fn write_csv(&self, out: impl Write) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(CSV_COLUMNS)?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads rows written by [`ResultTable::write_csv`]; `#` lines are skipped.
    pub fn read_csv(input: impl Read) -> Result<Self, HarnessError> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
        let rows = r.deserialize().collect::<Result<Vec<ResultRow>, _>>()?;
        Ok(Self {
            rows,
            failures: Vec::new(),
        })
    }

    pub fn algorithms(&self) -> BTreeSet<&str> {
        self.rows.iter().map(|r| r.algorithm.as_str()).collect()
    }

    /// Arithmetic mean over repetitions, keyed by (instance, k) and algorithm.
    pub fn cell_means(&self, metric: Metric) -> BTreeMap<(String, u32), BTreeMap<String, f64>> {
        let mut sums: BTreeMap<(String, u32), BTreeMap<String, (f64, u32)>> = BTreeMap::new();
        for row in &self.rows {
            let e = sums
                .entry((row.instance.clone(), row.k))
                .or_default()
                .entry(row.algorithm.clone())
                .or_insert((0.0, 0));
            e.0 += metric.value(row);
            e.1 += 1;
        }
        sums.into_iter()
            .map(|(cell, algs)| {
                let means = algs.into_iter().map(|(a, (s, c))| (a, s / c as f64)).collect();
                (cell, means)
            })
            .collect()
    }
}

const CSV_COLUMNS: [&str; 11] = [
    "instance",
    "algorithm",
    "k",
    "repetition",
    "seed",
    "cutnet",
    "connectivity",
    "imbalance",
    "balanced",
    "runtime_ns",
    "ns_per_pin",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Streaming time in nanoseconds.
    Time,
    CutNet,
    Connectivity,
}

impl Metric {
    pub fn value(self, row: &ResultRow) -> f64 {
        match self {
            Metric::Time => row.runtime_ns as f64,
            Metric::CutNet => row.cutnet as f64,
            Metric::Connectivity => row.connectivity as f64,
        }
    }

    /// Added before geometric averaging and subtracted afterwards, so that
    /// instances with objective 0 do not collapse the mean.
    pub fn offset(self) -> f64 {
        match self {
            Metric::Time => 0.0,
            Metric::CutNet | Metric::Connectivity => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Time => "time",
            Metric::CutNet => "cutnet",
            Metric::Connectivity => "connectivity",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "time" | "runtime" => Ok(Metric::Time),
            "cutnet" | "cut" => Ok(Metric::CutNet),
            "connectivity" | "con" | "km1" => Ok(Metric::Connectivity),
            other => Err(format!("unknown metric {other:?} (expected time, cutnet or connectivity)")),
        }
    }
}

pub fn geometric_mean(values: &[f64]) -> f64 {
    shifted_geometric_mean(values, 0.0)
}

/// `exp(mean(ln(x + offset))) - offset`.
pub fn shifted_geometric_mean(values: &[f64], offset: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let log_sum: f64 = values.iter().map(|&x| (x + offset).ln()).sum();
    (log_sum / values.len() as f64).exp() - offset
}

/// Improvement of `algorithm` over the baseline, `(baseline / algorithm - 1) * 100`.
/// `k` is `None` for the aggregate over every k.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Improvement {
    pub algorithm: String,
    pub k: Option<u32>,
    pub instances: usize,
    pub percent: f64,
}

fn percent(baseline: f64, algorithm: f64) -> f64 {
    if baseline == algorithm {
        0.0
    } else {
        (baseline / algorithm - 1.0) * 100.0
    }
}

/// Per-k and overall improvement of every other algorithm over `baseline`.
/// Both sides are geometric means (with the metric offset) over the cells
/// the algorithm has results for; each of those cells needs a baseline result.
pub fn improvement_over(
    table: &ResultTable,
    baseline: &str,
    metric: Metric,
) -> Result<Vec<Improvement>, HarnessError> {
    let cells = table.cell_means(metric);
    let offset = metric.offset();
    let mut out = Vec::new();
    for alg in table.algorithms() {
        if alg == baseline {
            continue;
        }
        // k -> (algorithm values, baseline values)
        let mut by_k: BTreeMap<u32, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for ((instance, k), algs) in &cells {
            let Some(&a) = algs.get(alg) else { continue };
            let &b = algs.get(baseline).ok_or_else(|| HarnessError::MissingBaseline {
                baseline: baseline.to_owned(),
                instance: instance.clone(),
                k: *k,
            })?;
            let e = by_k.entry(*k).or_default();
            e.0.push(a);
            e.1.push(b);
        }
        let mut all_a = Vec::new();
        let mut all_b = Vec::new();
        for (k, (a, b)) in by_k {
            out.push(Improvement {
                algorithm: alg.to_owned(),
                k: Some(k),
                instances: a.len(),
                percent: percent(shifted_geometric_mean(&b, offset), shifted_geometric_mean(&a, offset)),
            });
            all_a.extend(a);
            all_b.extend(b);
        }
        if !all_a.is_empty() {
            out.push(Improvement {
                algorithm: alg.to_owned(),
                k: None,
                instances: all_a.len(),
                percent: percent(
                    shifted_geometric_mean(&all_b, offset),
                    shifted_geometric_mean(&all_a, offset),
                ),
            });
        }
    }
    Ok(out)
}

pub fn write_improvement_csv(rows: &[Improvement], metric: Metric, mut out: impl Write) -> Result<(), HarnessError> {
    writeln!(
        out,
        "# {} improvement in percent, geometric means over value + {}",
        metric.as_str(),
        metric.offset()
    )?;
    writeln!(out, "algorithm,k,instances,percent")?;
    for r in rows {
        let k = r.k.map_or_else(|| "all".to_owned(), |k| k.to_string());
        writeln!(out, "{},{},{},{:.4}", r.algorithm, k, r.instances, r.percent)?;
    }
    Ok(())
}

/// `fraction` of (instance, k) cells on which `algorithm` is within factor
/// `tau` of the best algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub algorithm: String,
    pub tau: f64,
    pub fraction: f64,
}

/// Performance profile over (instance, k) cells, repetitions averaged.
///
/// Every algorithm matching the best value of a cell counts as best. When
/// the best value is 0, ratios are taken on `value + 1`. A missing result
/// never counts as within any factor. Each curve is emitted as its step
/// points, starting at `tau = 1`.
pub fn performance_profile(table: &ResultTable, metric: Metric) -> Vec<ProfilePoint> {
    let cells = table.cell_means(metric);
    let algorithms = table.algorithms();
    let n = cells.len();
    let mut ratios: BTreeMap<&str, Vec<f64>> = algorithms.iter().map(|&a| (a, Vec::new())).collect();
    for algs in cells.values() {
        let best = algs.values().copied().fold(f64::INFINITY, f64::min);
        for &a in &algorithms {
            let r = match algs.get(a) {
                None => f64::INFINITY,
                Some(&v) if best > 0.0 => v / best,
                Some(&v) => (v + 1.0) / (best + 1.0),
            };
            ratios.get_mut(a).expect("known algorithm").push(r);
        }
    }
    let mut out = Vec::new();
    for (alg, mut rs) in ratios {
        rs.sort_by(f64::total_cmp);
        let mut taus: Vec<f64> = vec![1.0];
        taus.extend(rs.iter().copied().filter(|r| r.is_finite() && *r > 1.0));
        taus.dedup();
        for tau in taus {
            let within = rs.partition_point(|&r| r <= tau);
            out.push(ProfilePoint {
                algorithm: alg.to_owned(),
                tau,
                fraction: within as f64 / n.max(1) as f64,
            });
        }
    }
    out
}

pub fn write_profile_csv(points: &[ProfilePoint], mut out: impl Write) -> Result<(), HarnessError> {
    writeln!(out, "algorithm,tau,fraction")?;
    for p in points {
        writeln!(out, "{},{},{:.6}", p.algorithm, p.tau, p.fraction)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(instance: &str, algorithm: &str, k: u32, cut: u64, time: u64) -> ResultRow {
        ResultRow {
            instance: instance.into(),
            algorithm: algorithm.into(),
            k,
            repetition: 0,
            seed: 0,
            cutnet: cut,
            connectivity: cut,
            imbalance: 0.0,
            balanced: true,
            runtime_ns: time,
            ns_per_pin: 1.0,
        }
    }

    #[test]
    fn geomean() {
        assert!((geometric_mean(&[2.0, 8.0]) - 4.0).abs() < 1e-12);
        assert!((shifted_geometric_mean(&[0.0, 3.0], 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn improvement_examples() {
        assert_eq!(percent(100.0, 50.0), 100.0);
        assert_eq!(percent(70.0, 70.0), 0.0);
        let t = ResultTable {
            rows: vec![row("a", "x", 2, 50, 1), row("a", "base", 2, 100, 1)],
            failures: vec![],
        };
        let imp = improvement_over(&t, "base", Metric::CutNet).unwrap();
        assert_eq!(imp.len(), 2);
        assert!((imp[0].percent - 100.0).abs() < 1e-9);
        assert_eq!(imp[0].k, Some(2));
        assert_eq!(imp[1].k, None);
    }

    #[test]
    fn missing_baseline() {
        let t = ResultTable {
            rows: vec![row("a", "x", 2, 1, 1)],
            failures: vec![],
        };
        assert!(matches!(
            improvement_over(&t, "base", Metric::CutNet),
            Err(HarnessError::MissingBaseline { k: 2, .. })
        ));
    }

    #[test]
    fn profile_single_algorithm() {
        let t = ResultTable {
            rows: vec![row("a", "x", 2, 5, 10), row("b", "x", 2, 0, 10)],
            failures: vec![],
        };
        let p = performance_profile(&t, Metric::CutNet);
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].tau, p[0].fraction), (1.0, 1.0));
    }

    #[test]
    fn profile_two_to_one() {
        let mut rows = Vec::new();
        for inst in ["a", "b", "c"] {
            rows.push(row(inst, "fast", 4, 1, 100));
            rows.push(row(inst, "slow", 4, 1, 200));
        }
        let t = ResultTable { rows, failures: vec![] };
        let p = performance_profile(&t, Metric::Time);
        let slow: Vec<_> = p.iter().filter(|p| p.algorithm == "slow").map(|p| (p.tau, p.fraction)).collect();
        assert_eq!(slow, vec![(1.0, 0.0), (2.0, 1.0)]);
        // equal quality counts as best for both
        let q = performance_profile(&t, Metric::CutNet);
        assert!(q.iter().all(|p| p.tau == 1.0 && p.fraction == 1.0));
    }

    #[test]
    fn csv_round_trip() {
        let t = ResultTable {
            rows: vec![row("a", "x", 2, 5, 10), row("b,c", "y", 3, 0, 11)],
            failures: vec![],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(&CSV_COLUMNS.join(",")));
        assert_eq!(ResultTable::read_csv(buf.as_slice()).unwrap(), t);
    }
}
