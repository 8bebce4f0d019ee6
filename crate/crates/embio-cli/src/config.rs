//! Run configuration: a flat key-value TOML document with defaults, plus
//! `EMBIO_*` environment overrides for every key. Unknown keys are
//! rejected; every value is range-checked.

use std::path::Path;

use serde::Deserialize;

use crate::error::FormatError;

/// Prefix for environment overrides, e.g. `EMBIO_GLOBAL_SEED=7`.
pub const ENV_PREFIX: &str = "EMBIO_";

pub const CONFIG_KEYS: [&str; 9] = [
    "global_seed",
    "images_per_id",
    "alpha",
    "beta",
    "sources_per_id",
    "shift_strength",
    "top_k_identities",
    "far_target",
    "folds",
];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub global_seed: u64,
    pub images_per_id: usize,
    pub alpha: f64,
    pub beta: f64,
    pub sources_per_id: usize,
    pub shift_strength: f64,
    pub top_k_identities: Option<usize>,
    pub far_target: f64,
    pub folds: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            global_seed: 0,
            images_per_id: embio_core::sampler::DEFAULT_IMAGES_PER_ID,
            alpha: embio_core::sampler::DEFAULT_ALPHA,
            beta: embio_core::sampler::DEFAULT_BETA,
            sources_per_id: embio_core::sampler::DEFAULT_MAX_SOURCES,
            shift_strength: 1.0,
            top_k_identities: None,
            far_target: 1e-4,
            folds: 10,
        }
    }
}

impl RunConfig {
    /// Load the effective configuration: defaults, then the optional file,
    /// then `EMBIO_*` process environment overrides, then validation.
    pub fn load(path: Option<&Path>) -> Result<Self, FormatError> {
        Self::load_with_env(path, std::env::vars())
    }

    /// Same as [`RunConfig::load`] but with an explicit environment, so the
    /// override logic is testable without touching process state.
    pub fn load_with_env<I>(path: Option<&Path>, env: I) -> Result<Self, FormatError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        let mut config = match path {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
                Self::from_toml(&path.display().to_string(), &text)?
            }
            None => RunConfig::default(),
        };
        config.apply_env(env)?;
        config.validate()?;
        Ok(config)
    }

    /// Parse a TOML document; unknown keys are rejected.
    pub fn from_toml(source_name: &str, text: &str) -> Result<Self, FormatError> {
        toml::from_str(text).map_err(|e| FormatError::BadConfig {
            source_name: source_name.to_string(),
            what: e.to_string(),
        })
    }

    fn apply_env<I>(&mut self, env: I) -> Result<(), FormatError>
    where
        I: IntoIterator<Item = (String, String)>,
    {
        for (name, value) in env {
            let Some(key) = name.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let key = key.to_ascii_lowercase();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                continue;
            }
            let bad = |what: String| FormatError::BadConfig {
                source_name: name.clone(),
                what,
            };
            match key.as_str() {
                "global_seed" => self.global_seed = parse(&value).map_err(bad)?,
                "images_per_id" => self.images_per_id = parse(&value).map_err(bad)?,
                "alpha" => self.alpha = parse(&value).map_err(bad)?,
                "beta" => self.beta = parse(&value).map_err(bad)?,
                "sources_per_id" => self.sources_per_id = parse(&value).map_err(bad)?,
                "shift_strength" => self.shift_strength = parse(&value).map_err(bad)?,
                "top_k_identities" => self.top_k_identities = Some(parse(&value).map_err(bad)?),
                "far_target" => self.far_target = parse(&value).map_err(bad)?,
                "folds" => self.folds = parse(&value).map_err(bad)?,
                _ => unreachable!("key membership checked above"),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        let bad = |what: String| FormatError::BadConfig {
            source_name: "run config".to_string(),
            what,
        };
        if self.images_per_id == 0 {
            return Err(bad("images_per_id must be >= 1".into()));
        }
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(bad(format!("alpha must be positive and finite, got {}", self.alpha)));
        }
        if !self.beta.is_finite() || self.beta <= 0.0 {
            return Err(bad(format!("beta must be positive and finite, got {}", self.beta)));
        }
        if self.sources_per_id == 0 {
            return Err(bad("sources_per_id must be >= 1".into()));
        }
        if !self.shift_strength.is_finite() {
            return Err(bad(format!("shift_strength must be finite, got {}", self.shift_strength)));
        }
        if self.top_k_identities == Some(0) {
            return Err(bad("top_k_identities must be >= 1".into()));
        }
        if !(self.far_target > 0.0 && self.far_target < 1.0) {
            return Err(bad(format!("far_target must lie in (0, 1), got {}", self.far_target)));
        }
        if self.folds < 2 {
            return Err(bad(format!("folds must be >= 2, got {}", self.folds)));
        }
        Ok(())
    }
}

fn parse<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e| format!("cannot parse {value:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn defaults_match_the_documented_values() {
        let config = RunConfig::default();
        assert_eq!(config.global_seed, 0);
        assert_eq!(config.images_per_id, 20);
        assert_eq!(config.alpha, 2.0);
        assert_eq!(config.beta, 2.0);
        assert_eq!(config.sources_per_id, 5);
        assert_eq!(config.shift_strength, 1.0);
        assert_eq!(config.top_k_identities, None);
        assert_eq!(config.far_target, 1e-4);
        assert_eq!(config.folds, 10);
    }

    #[test]
    fn toml_overrides_and_integer_floats() {
        let config =
            RunConfig::from_toml("test", "global_seed = 42\nalpha = 3\nimages_per_id = 10\n")
                .unwrap();
        assert_eq!(config.global_seed, 42);
        assert_eq!(config.alpha, 3.0);
        assert_eq!(config.images_per_id, 10);
        assert_eq!(config.folds, 10); // untouched default
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_toml("test", "sigma = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("BadConfig"));
    }

    #[test]
    fn env_overrides_beat_the_file() {
        let mut config = RunConfig::from_toml("test", "global_seed = 1\n").unwrap();
        config
            .apply_env(env(&[
                ("EMBIO_GLOBAL_SEED", "9"),
                ("EMBIO_TOP_K_IDENTITIES", "12"),
                ("UNRELATED", "x"),
            ]))
            .unwrap();
        assert_eq!(config.global_seed, 9);
        assert_eq!(config.top_k_identities, Some(12));
    }

    #[test]
    fn bad_env_value_is_an_error() {
        let mut config = RunConfig::default();
        let err = config
            .apply_env(env(&[("EMBIO_FOLDS", "many")]))
            .unwrap_err();
        assert!(err.to_string().contains("EMBIO_FOLDS"));
    }

    #[test]
    fn validation_catches_out_of_range_values() {
        for text in [
            "alpha = 0",
            "beta = -1",
            "images_per_id = 0",
            "far_target = 1.5",
            "folds = 1",
            "top_k_identities = 0",
        ] {
            let config = RunConfig::from_toml("test", text).unwrap();
            assert!(config.validate().is_err(), "{text} should fail validation");
        }
        assert!(RunConfig::default().validate().is_ok());
    }
}
