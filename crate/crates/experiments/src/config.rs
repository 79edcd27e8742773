//! Scenario configuration: one TOML file per scenario, a `seed` at the top
//! level, numeric parameters under `[params]` and pass thresholds under
//! `[tolerances]`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub params: toml::Table,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("parsing scenario config")?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// The config shipped with the binary for a scenario.
    pub fn default_for(scenario: &str) -> Result<Self> {
        let text = match scenario {
            "power-sweep" => include_str!("../configs/power-sweep.toml"),
            "sparse-scaling" => include_str!("../configs/sparse-scaling.toml"),
            "commutator-bound" => include_str!("../configs/commutator-bound.toml"),
            "endpoint" => include_str!("../configs/endpoint.toml"),
            "counterexample" => include_str!("../configs/counterexample.toml"),
            "bmo-equivalence" => include_str!("../configs/bmo-equivalence.toml"),
            other => bail!("no scenario named {other:?}"),
        };
        Self::parse(text)
    }

    pub fn expect_name(&self, scenario: &str) -> Result<()> {
        if self.name != scenario {
            bail!("config is for scenario {:?}, not {scenario:?}", self.name);
        }
        Ok(())
    }

    fn param(&self, key: &str) -> Result<&toml::Value> {
        self.params.get(key).ok_or_else(|| anyhow!("[params] is missing {key:?}"))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        as_f64(self.param(key)?).ok_or_else(|| anyhow!("[params] {key:?} must be a number"))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.param(key)?
            .as_integer()
            .and_then(|i| usize::try_from(i).ok())
            .ok_or_else(|| anyhow!("[params] {key:?} must be a non-negative integer"))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let arr = self.param(key)?.as_array().ok_or_else(|| anyhow!("[params] {key:?} must be an array"))?;
        arr.iter()
            .map(|v| as_f64(v).ok_or_else(|| anyhow!("[params] {key:?} must hold numbers")))
            .collect()
    }

    /// An array of equal-length numeric arrays, e.g. `[[2, 1], [1.5, 0.5]]`.
    pub fn f64_rows(&self, key: &str, width: usize) -> Result<Vec<Vec<f64>>> {
        let arr = self.param(key)?.as_array().ok_or_else(|| anyhow!("[params] {key:?} must be an array"))?;
        arr.iter()
            .map(|row| {
                let row = row.as_array().ok_or_else(|| anyhow!("[params] {key:?} must hold arrays"))?;
                if row.len() != width {
                    bail!("[params] {key:?}: rows must have {width} entries");
                }
                row.iter().map(|v| as_f64(v).ok_or_else(|| anyhow!("[params] {key:?} must hold numbers"))).collect()
            })
            .collect()
    }

    pub fn tol(&self, key: &str) -> Result<f64> {
        self.tolerances.get(key).copied().ok_or_else(|| anyhow!("[tolerances] is missing {key:?}"))
    }
}

fn as_f64(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_configs_parse() {
        for s in crate::SCENARIOS {
            let cfg = ScenarioConfig::default_for(s.name).unwrap();
            cfg.expect_name(s.name).unwrap();
        }
    }

    #[test]
    fn seed_is_mandatory() {
        assert!(ScenarioConfig::parse("name = \"endpoint\"\n").is_err());
    }

    #[test]
    fn missing_keys_are_errors() {
        let cfg = ScenarioConfig::parse("name = \"x\"\nseed = 3\n[params]\nlambda = 1\n").unwrap();
        assert_eq!(cfg.f64("lambda").unwrap(), 1.0);
        assert!(cfg.f64("p").is_err());
        assert!(cfg.tol("slope").is_err());
    }
}
