//! Scenario runner for the Bessel-setting estimates.
//!
//! Each scenario reads a [`ScenarioConfig`], computes its sweep, writes CSV
//! tables and returns a [`Verdict`] listing every check with its measured
//! value and threshold.

use std::path::Path;

use anyhow::Result;

pub mod config;
pub mod scenarios;
pub mod table;
pub mod verdict;

pub use config::ScenarioConfig;
pub use verdict::{Check, Relation, Verdict};

pub struct Scenario {
    pub name: &'static str,
    pub anchor: &'static str,
    pub run: fn(&ScenarioConfig, &Path) -> Result<Verdict>,
}

pub const SCENARIOS: &[Scenario] = &[
    Scenario { name: "power-sweep", anchor: scenarios::power_sweep::ANCHOR, run: scenarios::power_sweep::run },
    Scenario { name: "sparse-scaling", anchor: scenarios::sparse_scaling::ANCHOR, run: scenarios::sparse_scaling::run },
    Scenario {
        name: "commutator-bound",
        anchor: scenarios::commutator_bound::ANCHOR,
        run: scenarios::commutator_bound::run,
    },
    Scenario { name: "endpoint", anchor: scenarios::endpoint::ANCHOR, run: scenarios::endpoint::run },
    Scenario { name: "counterexample", anchor: scenarios::counterexample::ANCHOR, run: scenarios::counterexample::run },
    Scenario { name: "bmo-equivalence", anchor: scenarios::bmo_equivalence::ANCHOR, run: scenarios::bmo_equivalence::run },
];

pub fn scenario(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

/// Runs a scenario; `out` receives its CSV files.
pub fn run_scenario(name: &str, cfg: &ScenarioConfig, out: &Path) -> Result<Verdict> {
    let s = scenario(name).ok_or_else(|| anyhow::anyhow!("no scenario named {name:?}"))?;
    cfg.expect_name(name)?;
    (s.run)(cfg, out)
}
