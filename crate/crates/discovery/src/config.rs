use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::database::DEFAULT_ISLAND_CAPACITY;
use crate::error::{DiscoveryError, Result};
use crate::mutator::HttpConfig;
use crate::sandbox::TrainingSpec;

/// When the weaker half of the islands is reset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ResetPolicy {
    /// Loop wall-clock seconds between resets.
    EverySeconds(u64),
    /// Iterations between resets.
    EveryIterations(u64),
    Never,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscoveryConfig {
    pub islands: usize,
    /// Programs per prompt.
    pub sample_k: usize,
    pub island_capacity: usize,
    pub reset: ResetPolicy,
    pub max_iterations: u64,
    pub wall_clock_limit_secs: u64,
    pub max_depth: usize,
    /// Program every island starts from.
    pub initial_program: String,
    pub seed: u64,
    pub training: TrainingSpec,
    pub http: HttpConfig,
}

impl Default for DiscoveryConfig {
    /// Desk scale: 100 training instances, 200 iterations, a reset every
    /// 50 iterations.
    fn default() -> Self {
        Self {
            islands: 10,
            sample_k: 2,
            island_capacity: DEFAULT_ISLAND_CAPACITY,
            reset: ResetPolicy::EveryIterations(50),
            max_iterations: 200,
            wall_clock_limit_secs: 259_200,
            max_depth: 10,
            initial_program: "max(P + T, D)".into(),
            seed: 42,
            training: TrainingSpec::default(),
            http: HttpConfig::default(),
        }
    }
}

impl DiscoveryConfig {
    /// 10,000 training instances, 10,000 iterations, 72 hours, a reset
    /// every 4 hours.
    pub fn full_scale() -> Self {
        Self {
            reset: ResetPolicy::EverySeconds(14_400),
            max_iterations: 10_000,
            training: TrainingSpec {
                per_class: 400,
                ..TrainingSpec::default()
            },
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| DiscoveryError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("islands", self.islands),
            ("sample_k", self.sample_k),
            ("island_capacity", self.island_capacity),
            ("max_depth", self.max_depth),
            ("training.n", self.training.n),
            ("training.per_class", self.training.per_class),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(DiscoveryError::Config(format!("{name} must be positive")));
        }
        match self.reset {
            ResetPolicy::EverySeconds(0) | ResetPolicy::EveryIterations(0) => {
                return Err(DiscoveryError::Config("reset period must be positive".into()))
            }
            _ => {}
        }
        let initial: crate::expr::PriorityExpr = self.initial_program.parse()?;
        if initial.depth() > self.max_depth {
            return Err(DiscoveryError::TooDeep {
                depth: initial.depth(),
                max: self.max_depth,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_desk_defaults() {
        assert_eq!(DiscoveryConfig::from_toml("").unwrap(), DiscoveryConfig::default());
    }

    #[test]
    fn full_scale_numbers() {
        let c = DiscoveryConfig::full_scale();
        assert_eq!(c.training.len(), 10_000);
        assert_eq!(c.max_iterations, 10_000);
        assert_eq!(c.wall_clock_limit_secs, 72 * 3600);
        assert_eq!(c.reset, ResetPolicy::EverySeconds(4 * 3600));
        assert_eq!((c.islands, c.sample_k), (10, 2));
    }

    #[test]
    fn parses_a_config_file() {
        let c = DiscoveryConfig::from_toml(
            r#"
            islands = 4
            max_iterations = 30
            reset = { every_seconds = 600 }
            initial_program = "D"

            [training]
            per_class = 2
            seed = 9

            [http]
            endpoint = "http://localhost:9/x"
            "#,
        )
        .unwrap();
        assert_eq!(c.islands, 4);
        assert_eq!(c.reset, ResetPolicy::EverySeconds(600));
        assert_eq!(c.training.len(), 50);
        assert_eq!(c.training.n, 25);
        assert_eq!(c.http.token_env, "SMTT_MUTATOR_TOKEN");
    }

    #[test]
    fn rejects_bad_values() {
        assert!(DiscoveryConfig::from_toml("islands = 0").is_err());
        assert!(DiscoveryConfig::from_toml("initial_program = \"P +\"").is_err());
        assert!(DiscoveryConfig::from_toml("typo_field = 1").is_err());
        assert!(DiscoveryConfig::from_toml("reset = { every_iterations = 0 }").is_err());
    }
}
