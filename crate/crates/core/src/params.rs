//! Constants of the greedy streaming objective.

use serde::{Deserialize, Serialize};

/// Which hypergraph metric the net-gain term targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Already cut nets contribute nothing.
    CutNet,
    /// Every net credits the block of its most recently assigned pin.
    Connectivity,
}

impl Objective {
    pub fn as_str(self) -> &'static str {
        match self {
            Objective::CutNet => "cutnet",
            Objective::Connectivity => "connectivity",
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cutnet" | "cut" | "cut-net" => Ok(Objective::CutNet),
            "connectivity" | "con" | "km1" => Ok(Objective::Connectivity),
            other => Err(format!("unknown objective {other:?} (expected cutnet or connectivity)")),
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_GAMMA: f64 = 1.5;
pub const DEFAULT_EPSILON: f64 = 0.03;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParamError {
    #[error("k must be at least 1")]
    ZeroBlocks,
    #[error("gamma must exceed 1 (got {0})")]
    Gamma(f64),
    #[error("alpha must be non-negative (got {0})")]
    Alpha(f64),
    #[error("epsilon must be non-negative (got {0})")]
    Epsilon(f64),
    #[error("block count {0} does not fit a 32-bit block id")]
    TooManyBlocks(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreParams {
    pub k: u32,
    pub epsilon: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub l_max: u64,
    pub objective: Objective,
}

impl ScoreParams {
    /// Parameters with the default `gamma = 3/2` and
    /// `alpha = sqrt(k) * m / n^{3/2}`.
    pub fn new(
        k: u32,
        epsilon: f64,
        objective: Objective,
        num_vertices: usize,
        num_nets: usize,
        total_weight: u64,
    ) -> Result<Self, ParamError> {
        if k == 0 {
            return Err(ParamError::ZeroBlocks);
        }
        if !(epsilon >= 0.0) {
            return Err(ParamError::Epsilon(epsilon));
        }
        Ok(Self {
            k,
            epsilon,
            gamma: DEFAULT_GAMMA,
            alpha: compute_alpha(num_vertices.max(1) as u64, num_nets as u64, k),
            l_max: compute_lmax(total_weight, k, epsilon),
            objective,
        })
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self, ParamError> {
        if !(gamma > 1.0) {
            return Err(ParamError::Gamma(gamma));
        }
        self.gamma = gamma;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self, ParamError> {
        if !(alpha >= 0.0) {
            return Err(ParamError::Alpha(alpha));
        }
        self.alpha = alpha;
        Ok(self)
    }

    /// Penalty of placing a vertex of weight `vertex_weight` into a block
    /// currently holding `block_load`. Always `<= 0`.
    #[inline]
    pub fn penalty(&self, vertex_weight: u64, block_load: u64) -> f64 {
        weighted_penalty(vertex_weight, block_load, self.alpha, self.gamma)
    }

    /// Full score of a block: net gain plus penalty.
    #[inline]
    pub fn score(&self, gain: u64, vertex_weight: u64, block_load: u64) -> f64 {
        gain as f64 + self.penalty(vertex_weight, block_load)
    }
}

/// `ceil((1 + epsilon) * total / k)`.
pub fn compute_lmax(total_weight: u64, k: u32, epsilon: f64) -> u64 {
    ((1.0 + epsilon) * total_weight as f64 / k as f64).ceil() as u64
}

/// `sqrt(k) * m / n^{3/2}`.
pub fn compute_alpha(n: u64, m: u64, k: u32) -> f64 {
    (k as f64).sqrt() * m as f64 / (n as f64).powf(1.5)
}

/// `-c(v) * alpha * gamma * c(V_i)^(gamma - 1)`. With unit weights this is
/// the plain cardinality penalty, since the factor 1 is exact.
#[inline]
pub fn weighted_penalty(vertex_weight: u64, block_load: u64, alpha: f64, gamma: f64) -> f64 {
    penalty_from_power(vertex_weight, load_power(block_load, gamma), alpha, gamma)
}

/// `c(V_i)^(gamma - 1)`, the load-dependent factor of the penalty.
#[inline]
pub fn load_power(block_load: u64, gamma: f64) -> f64 {
    (block_load as f64).powf(gamma - 1.0)
}

/// The penalty given a precomputed [`load_power`].
#[inline]
pub fn penalty_from_power(vertex_weight: u64, power: f64, alpha: f64, gamma: f64) -> f64 {
    -(vertex_weight as f64 * alpha * gamma * power)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lmax_examples() {
        assert_eq!(compute_lmax(100, 4, 0.03), 26);
        assert_eq!(compute_lmax(16, 4, 0.0), 4);
        assert_eq!(compute_lmax(1000, 7, 0.03), 148);
        assert_eq!(compute_lmax(0, 3, 0.03), 0);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(compute_alpha(16, 8, 4), 0.25);
        assert_eq!(compute_alpha(10, 0, 7), 0.0);
    }

    #[test]
    fn alpha_high_precision() {
        // sqrt(512) * 10^6 / (10^5)^{3/2} evaluated with 50-digit arithmetic.
        let reference = 0.715_541_752_799_932_7_f64;
        let got = compute_alpha(100_000, 1_000_000, 512);
        assert!(((got - reference) / reference).abs() < 1e-14, "{got}");
    }

    #[test]
    fn penalty_examples() {
        assert_eq!(weighted_penalty(1, 0, 0.7, 1.5), 0.0);
        assert_eq!(weighted_penalty(2, 4, 1.0, 1.5), -6.0);
    }

    #[test]
    fn param_validation() {
        assert_eq!(
            ScoreParams::new(0, 0.03, Objective::CutNet, 1, 1, 1).unwrap_err(),
            ParamError::ZeroBlocks
        );
        let p = ScoreParams::new(4, 0.03, Objective::Connectivity, 16, 8, 16).unwrap();
        assert_eq!(p.alpha, 0.25);
        assert_eq!(p.gamma, 1.5);
        assert_eq!(p.l_max, 5);
        assert!(p.with_gamma(1.0).is_err());
        assert!(p.with_alpha(-1.0).is_err());
        assert!(ScoreParams::new(2, -0.1, Objective::CutNet, 1, 1, 1).is_err());
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("cutnet".parse::<Objective>().unwrap(), Objective::CutNet);
        assert_eq!("connectivity".parse::<Objective>().unwrap(), Objective::Connectivity);
        assert!("edge".parse::<Objective>().is_err());
    }
}
