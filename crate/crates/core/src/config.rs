//! Hypothesis config files: candidate lists, the observed tomb, the rule
//! ledger and the trial count, in TOML.

use crate::error::{Error, Result};
use crate::hypothesis::{build_spec, CandidateDescriptor, HypothesisSpec};
use crate::onomasticon::{Gender, Onomasticon};
use crate::rr_engine::{ObservedTomb, RuleLedger};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const BUNDLED_BASELINE: &str = include_str!("../data/baseline.toml");

fn default_n2() -> u64 {
    1100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisConfig {
    pub name: String,
    #[serde(default = "default_n2")]
    pub n2: u64,
    #[serde(default)]
    pub women: Vec<CandidateDescriptor>,
    #[serde(default)]
    pub men: Vec<CandidateDescriptor>,
    pub observed: ObservedTomb,
    #[serde(default)]
    pub rules: RuleLedger,
}

/// Reads a file, mapping I/O failures to config errors.
pub fn read_source(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Config(format!("{path}: {e}")))
}

impl HypothesisConfig {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_BASELINE).expect("bundled baseline is valid")
    }

    /// `"bundled"` selects the built-in baseline; anything else is a path.
    pub fn load(source: &str) -> Result<Self> {
        if source == "bundled" {
            return Ok(Self::bundled());
        }
        Self::parse(&read_source(source)?).map_err(|e| Error::Config(format!("{source}: {e}")))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: HypothesisConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        for (list, g) in [(&cfg.women, Gender::Female), (&cfg.men, Gender::Male)] {
            if let Some(c) = list.iter().find(|c| c.gender.is_some_and(|x| x != g)) {
                return Err(Error::Config(format!(
                    "candidate `{}` listed under the wrong gender",
                    c.person
                )));
            }
        }
        cfg.rules.validate()?;
        Ok(cfg)
    }

    /// All descriptors with their section's gender filled in.
    pub fn candidates(&self) -> Vec<CandidateDescriptor> {
        let tag = |g: Gender| {
            move |c: &CandidateDescriptor| CandidateDescriptor {
                gender: Some(g),
                ..c.clone()
            }
        };
        self.women
            .iter()
            .map(tag(Gender::Female))
            .chain(self.men.iter().map(tag(Gender::Male)))
            .collect()
    }

    pub fn build(&self, onom: &Onomasticon) -> Result<HypothesisSpec> {
        build_spec(&self.name, onom, &self.candidates())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
