//! Run configuration: a `key = value` file (TOML syntax), overridden by command-line flags.

use std::path::{Path, PathBuf};

use kappa_double::kappa::{ConventionProfile, IndexMode, SignPolicy};
use kappa_double::scalars::Truncation;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable naming a config file to load when `--config` is not given.
pub const CONFIG_ENV: &str = "KAPPA_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Syntax(PathBuf, toml::de::Error),
    #[error("invalid {key}: {reason}")]
    Invalid { key: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Highest power of `lam` kept.
    pub truncation_order: i32,
    /// Intermediate results may carry `lam` powers down to `-lambda_floor`.
    pub lambda_floor: i32,
    pub index_mode: IndexMode,
    pub sign_policy: SignPolicy,
    pub kappa_hbar: Vec<f64>,
    pub n_levels: usize,
    pub space_modes: usize,
    pub states: usize,
    pub seed: u64,
    /// Degree of the dual-basis solve.
    pub dual_degree: u32,
    /// Random pairs for the differentiation check.
    pub pairing_samples: usize,
    pub report_path: Option<PathBuf>,
    pub csv_path: Option<PathBuf>,
    /// Record wall-clock times in reports (breaks byte-identical output).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            truncation_order: 6,
            lambda_floor: 1,
            index_mode: IndexMode::Lowered,
            sign_policy: SignPolicy::Derive,
            kappa_hbar: vec![0.5, 1.0, 10.0],
            n_levels: 40,
            space_modes: 1,
            states: 100,
            seed: 20240611,
            dual_degree: 3,
            pairing_samples: 20,
            report_path: None,
            csv_path: None,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn from_str(text: &str, origin: &Path) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(origin.to_path_buf(), e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e))?;
        RunConfig::from_str(&text, path)
    }

    /// `explicit`, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        match explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from)) {
            Some(p) => RunConfig::load(&p),
            None => Ok(RunConfig::default()),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key, reason: &str| Err(ConfigError::Invalid { key, reason: reason.to_string() });
        Truncation::new(self.truncation_order, self.lambda_floor)
            .map_err(|e| ConfigError::Invalid { key: "truncation_order", reason: e.to_string() })?;
        if self.kappa_hbar.is_empty() || self.kappa_hbar.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return bad("kappa_hbar", "need at least one finite positive value");
        }
        if self.n_levels < 4 {
            return bad("n_levels", "must be at least 4");
        }
        if !(1..=3).contains(&self.space_modes) {
            return bad("space_modes", "must be 1, 2 or 3");
        }
        if self.states == 0 {
            return bad("states", "must be positive");
        }
        if self.dual_degree == 0 {
            return bad("dual_degree", "must be positive");
        }
        Ok(())
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::new(self.truncation_order, self.lambda_floor).expect("validated")
    }

    pub fn profile(&self) -> ConventionProfile {
        ConventionProfile { index_mode: self.index_mode, sign_policy: self.sign_policy }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_override_defaults() {
        let cfg = RunConfig::from_str("truncation_order = 4\nsign_policy = \"paper-literal\"\nkappa_hbar = [2.0]\n", Path::new("t")).unwrap();
        assert_eq!(cfg.truncation_order, 4);
        assert_eq!(cfg.sign_policy, SignPolicy::PaperLiteral);
        assert_eq!(cfg.kappa_hbar, vec![2.0]);
        assert_eq!(cfg.n_levels, 40);
    }

    #[test]
    fn validation_rejects_bad_values() {
        for text in ["kappa_hbar = [-1.0]", "n_levels = 2", "truncation_order = -1", "bogus = 1", "space_modes = 4"] {
            assert!(RunConfig::from_str(text, Path::new("t")).is_err(), "{text}");
        }
    }
}
