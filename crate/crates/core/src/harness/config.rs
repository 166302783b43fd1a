use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::HarnessError;
use crate::params::{Objective, DEFAULT_EPSILON};
use crate::partition::Algorithm;

pub const DEFAULT_KS: [u32; 5] = [512, 1024, 1536, 2048, 2560];

/// What a suite runs.
///
/// ```toml
/// instances = ["a.hgr", "b.vstream"]
/// algorithms = ["freight-con", "hashing"]
/// k = [512, 1024]
/// repetitions = 5
/// seeds = [1, 2, 3, 4, 5]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub instances: Vec<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    pub ks: Vec<u32>,
    pub epsilon: f64,
    pub repetitions: u32,
    /// Seed of repetition `r` is `seeds[r]`, or `r` when the list is short.
    pub seeds: Vec<u64>,
    pub objective: Objective,
    pub output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    instances: Vec<PathBuf>,
    algorithms: Vec<String>,
    #[serde(default)]
    k: Option<Vec<u32>>,
    #[serde(default)]
    epsilon: Option<f64>,
    #[serde(default)]
    repetitions: Option<u32>,
    #[serde(default)]
    seeds: Vec<u64>,
    #[serde(default)]
    objective: Option<String>,
    #[serde(default)]
    output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(instances: Vec<PathBuf>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            instances,
            algorithms,
            ks: DEFAULT_KS.to_vec(),
            epsilon: DEFAULT_EPSILON,
            repetitions: 5,
            seeds: Vec::new(),
            objective: Objective::Connectivity,
            output: None,
        }
    }

    pub fn seed_for(&self, repetition: u32) -> u64 {
        self.seeds
            .get(repetition as usize)
            .copied()
            .unwrap_or(repetition as u64)
    }

    /// Parses a TOML config. Relative instance paths stay relative.
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let objective = match raw.objective {
            Some(o) => o.parse().map_err(HarnessError::Config)?,
            None => Objective::Connectivity,
        };
        let algorithms = raw
            .algorithms
            .iter()
            .map(|a| Algorithm::parse(a, objective))
            .collect::<Result<Vec<_>, _>>()
            .map_err(HarnessError::Config)?;
        let cfg = Self {
            instances: raw.instances,
            algorithms,
            ks: raw.k.unwrap_or_else(|| DEFAULT_KS.to_vec()),
            epsilon: raw.epsilon.unwrap_or(DEFAULT_EPSILON),
            repetitions: raw.repetitions.unwrap_or(5),
            seeds: raw.seeds,
            objective,
            output: raw.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a TOML config and resolves instance paths against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let mut cfg = Self::from_toml(&std::fs::read_to_string(path)?)?;
        if let Some(dir) = path.parent() {
            for p in &mut cfg.instances {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config("no algorithms".into()));
        }
        if self.repetitions == 0 {
            return Err(HarnessError::Config("repetitions must be at least 1".into()));
        }
        if self.ks.is_empty() || self.ks.iter().any(|&k| k < 2) {
            return Err(HarnessError::Config("every k must be at least 2".into()));
        }
        if !(self.epsilon >= 0.0) {
            return Err(HarnessError::Config(format!("bad epsilon {}", self.epsilon)));
        }
        Ok(())
    }
}
