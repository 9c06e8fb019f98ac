use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds used by the classification pipeline.
///
/// Defaults leave two orders of magnitude between consecutive stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub tol_unitary: f64,
    pub tol_rank: f64,
    pub tol_commute: f64,
    pub tol_reconstruct: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { tol_unitary: 1e-10, tol_rank: 1e-7, tol_commute: 1e-8, tol_reconstruct: 1e-8 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_unitary", self.tol_unitary),
            ("tol_rank", self.tol_rank),
            ("tol_commute", self.tol_commute),
            ("tol_reconstruct", self.tol_reconstruct),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} is outside (0, 1)")));
            }
        }
        Ok(())
    }

    /// Defaults with a different reconstruction threshold.
    pub fn with_reconstruct(tol: f64) -> Result<Self> {
        let cfg = Self { tol_reconstruct: tol, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }
}
