//! Run configuration: finite-difference steps, tolerance tiers, sampling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance tier a quantity is judged by, chosen by its derivative depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Purely algebraic, no finite differences.
    Alg,
    /// One finite-difference layer.
    D1,
    /// Two nested finite-difference layers.
    D2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Quaternionic dimension parameter of the ambient spaces (dim 4n+3).
    pub n: usize,
    pub seed: u64,
    /// Sample points per catalog example and check.
    pub points: usize,
    /// Sample points for algebraic axiom sweeps.
    pub axiom_points: usize,
    pub fd_step1: f64,
    pub fd_step2: f64,
    pub tol_alg: f64,
    pub tol_d1: f64,
    pub tol_d2: f64,
    /// Halves every tolerance tier.
    pub strict: bool,
    /// Use the rayon pool when the `parallel` feature is compiled in.
    pub parallel: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            n: 1,
            seed: 42,
            points: 5,
            axiom_points: 100,
            fd_step1: 1e-5,
            fd_step2: 1e-4,
            tol_alg: 1e-9,
            tol_d1: 1e-6,
            tol_d2: 5e-4,
            strict: false,
            parallel: true,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.fd_step1 > 0.0 && self.fd_step2 > 0.0) {
            return Err(Error::InvalidArgument("finite-difference steps must be positive".into()));
        }
        if !(self.tol_alg > 0.0 && self.tol_alg <= self.tol_d1 && self.tol_d1 <= self.tol_d2) {
            return Err(Error::InvalidArgument(
                "tolerances must satisfy 0 < tol_alg <= tol_d1 <= tol_d2".into(),
            ));
        }
        if self.points == 0 || self.axiom_points == 0 {
            return Err(Error::InvalidArgument("point counts must be positive".into()));
        }
        Ok(())
    }

    /// Effective tolerance for a tier, after the strict-mode halving.
    pub fn tol(&self, tier: Tier) -> f64 {
        let base = match tier {
            Tier::Alg => self.tol_alg,
            Tier::D1 => self.tol_d1,
            Tier::D2 => self.tol_d2,
        };
        if self.strict {
            base * 0.5
        } else {
            base
        }
    }

    pub fn tol_alg(&self) -> f64 {
        self.tol(Tier::Alg)
    }

    pub fn tol_d1(&self) -> f64 {
        self.tol(Tier::D1)
    }

    pub fn tol_d2(&self) -> f64 {
        self.tol(Tier::D2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Config::default().validate().unwrap();
    }

    #[test]
    fn strict_halves() {
        let c = Config { strict: true, ..Config::default() };
        assert_eq!(c.tol(Tier::D2), 2.5e-4);
        assert_eq!(c.tol(Tier::Alg), 5e-10);
    }

    #[test]
    fn ordering_enforced() {
        let c = Config { tol_d1: 1e-3, ..Config::default() };
        assert!(c.validate().is_err());
        let c = Config { fd_step1: 0.0, ..Config::default() };
        assert!(c.validate().is_err());
    }
}
