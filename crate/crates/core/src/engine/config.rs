use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which problem the engine solves: trucks only, or trucks with drones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vrp,
    Vrpdi,
}

impl Mode {
    pub fn uses_drones(self) -> bool {
        self == Mode::Vrpdi
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Vrp => "vrp",
            Mode::Vrpdi => "vrpdi",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "vrp" => Ok(Mode::Vrp),
            "vrpdi" => Ok(Mode::Vrpdi),
            other => Err(ConfigError::Invalid(format!("unknown mode `{other}`"))),
        }
    }
}

/// Evolutionary algorithm parameters. Defaults: population 150, 15%
/// elitism, 30% per-gene mutation, 1000 generations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EaConfig {
    pub population_size: usize,
    pub elitism_rate: f64,
    pub mutation_rate: f64,
    pub generations: usize,
    pub seed: u64,
    pub pair_count_override: Option<usize>,
}

impl Default for EaConfig {
    fn default() -> Self {
        EaConfig {
            population_size: 150,
            elitism_rate: 0.15,
            mutation_rate: 0.30,
            generations: 1000,
            seed: 0,
            pair_count_override: None,
        }
    }
}

impl EaConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        if self.population_size < 2 {
            return invalid(format!(
                "population_size must be >= 2, got {}",
                self.population_size
            ));
        }
        if !(self.elitism_rate > 0.0 && self.elitism_rate < 1.0) {
            return invalid(format!(
                "elitism_rate must be in (0, 1), got {}",
                self.elitism_rate
            ));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return invalid(format!(
                "mutation_rate must be in [0, 1], got {}",
                self.mutation_rate
            ));
        }
        if self.pair_count_override == Some(0) {
            return invalid("pair_count_override must be positive".into());
        }
        let elites = self.elite_count();
        if elites < 2 || elites > self.population_size {
            return invalid(format!("elite count {elites} must lie in [2, population_size]"));
        }
        Ok(())
    }

    /// Number of elites: the elitism rate times the population, rounded up.
    pub fn elite_count(&self) -> usize {
        // Guard against 0.15 * 100 = 15.000000000000002 rounding up to 16.
        let raw = self.elitism_rate * self.population_size as f64;
        let rounded = raw.round();
        if (raw - rounded).abs() < 1e-9 {
            rounded as usize
        } else {
            raw.ceil() as usize
        }
    }

    /// Parses either a JSON object or `key = value` lines (`#` comments).
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config: EaConfig = if text.trim_start().starts_with('{') {
            serde_json::from_str(text)?
        } else {
            let mut config = EaConfig::default();
            for (idx, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or_default().trim();
                if line.is_empty() {
                    continue;
                }
                let syntax = |message: String| ConfigError::Syntax {
                    line: idx + 1,
                    message,
                };
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| syntax(format!("expected key = value, got `{line}`")))?;
                let (key, value) = (key.trim(), value.trim());
                let message = format!("bad value `{value}` for `{key}`");
                let bad = |_: std::num::ParseIntError| syntax(message.clone());
                let bad_rate = || syntax(message.clone());
                match key {
                    "population_size" => config.population_size = value.parse().map_err(bad)?,
                    "elitism_rate" => config.elitism_rate = parse_rate(value).ok_or_else(bad_rate)?,
                    "mutation_rate" => config.mutation_rate = parse_rate(value).ok_or_else(bad_rate)?,
                    "generations" => config.generations = value.parse().map_err(bad)?,
                    "seed" => config.seed = value.parse().map_err(bad)?,
                    "pair_count_override" | "pairs" => {
                        config.pair_count_override = if value.is_empty() || value == "none" {
                            None
                        } else {
                            Some(value.parse().map_err(bad)?)
                        }
                    }
                    _ => return Err(syntax(format!("unknown key `{key}`"))),
                }
            }
            config
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        EaConfig::parse(&std::fs::read_to_string(path)?)
    }
}

/// Accepts `0.15` or `15%`.
fn parse_rate(value: &str) -> Option<f64> {
    match value.strip_suffix('%') {
        Some(pct) => pct.trim().parse::<f64>().ok().map(|v| v / 100.0),
        None => value.parse().ok(),
    }
}
