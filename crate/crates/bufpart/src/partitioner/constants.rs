use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How filtering treats refined tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// Discard tuples with φ above (C″/ε)·λ_k·ln k.
    Theory,
    /// Keep every nonempty tuple; the would-be discards are only counted.
    KeepBest,
}

/// Tunable constants of the partial partitioning algorithm. The unset
/// multipliers default to C′ = 192/δ and C″ = 10/δ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgoConstants {
    pub c_prime: Option<f64>,
    pub c_double_prime: Option<f64>,
    pub max_restarts: usize,
    pub filter: FilterMode,
    /// Ball radius of the separator; unset means √(δ/6).
    pub radius: Option<f64>,
    /// Upper limit for the separator threshold t. When the exact
    /// calibration needs more, t is clamped and the run is flagged.
    pub max_threshold: f64,
    /// Upper limit on separator rounds; the round count is reported as
    /// truncated when ⌈(2/α) ln(1/δ)⌉ exceeds it.
    pub max_rounds: u64,
    pub source: String,
}

impl Default for AlgoConstants {
    fn default() -> Self {
        AlgoConstants {
            c_prime: None,
            c_double_prime: None,
            max_restarts: 8,
            filter: FilterMode::Theory,
            radius: None,
            max_threshold: 40.0,
            max_rounds: 1_000_000,
            source: "theory-free practical defaults".into(),
        }
    }
}

impl AlgoConstants {
    pub fn c_prime(&self, delta: f64) -> f64 {
        self.c_prime.unwrap_or(192.0 / delta)
    }

    pub fn c_double_prime(&self, delta: f64) -> f64 {
        self.c_double_prime.unwrap_or(10.0 / delta)
    }

    pub fn radius(&self, delta: f64) -> f64 {
        self.radius.unwrap_or((delta / 6.0).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |x: Option<f64>| x.map_or(true, |v| v > 0.0 && v.is_finite());
        if !pos(self.c_prime) || !pos(self.c_double_prime) {
            return Err(Error::InvalidParameter("constant multipliers must be positive".into()));
        }
        if self.max_restarts == 0 || self.max_rounds == 0 {
            return Err(Error::InvalidParameter("max_restarts and max_rounds must be positive".into()));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r < 2.0) {
                return Err(Error::InvalidParameter(format!("radius {r} outside (0, 2)")));
            }
        }
        if !(self.max_threshold > 0.0) {
            return Err(Error::InvalidParameter("max_threshold must be positive".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: AlgoConstants = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }
}
